"""Sparse integer polynomials over a weighted-graded generator signature.

Grading is by codimension: each generator carries a positive degree and a
monomial's degree is the weighted sum of its exponents.  The name ``t`` is
reserved for the equivariant parameter of ``A^*_{G_m}(X) = A^*(X)[t]``; it
has degree 1 and, when present, is the last generator.

Stored term order is graded lexicographic in signature order.  The printed
form writes the polynomial "in t": terms by descending degree, then
descending power of ``t``, then lex on the remaining generators, and ``t``
is written first inside each monomial (``24*t^2 + 24*y^2``, ``t*y``).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Mapping

from .errors import InputError

T = "t"


class SignatureMismatch(InputError):
    pass


class NotDivisible(InputError):
    pass


class MissingImage(InputError):
    pass


class PolySyntaxError(InputError):
    def __init__(self, message, pos=None):
        super().__init__(message if pos is None else f"column {pos + 1}: {message}")
        self.pos = pos
        self.detail = message


@dataclass(frozen=True)
class GenSignature:
    names: tuple[str, ...]
    degrees: tuple[int, ...]

    def __post_init__(self):
        if len(self.names) != len(self.degrees):
            raise InputError("signature names and degrees differ in length")
        if len(set(self.names)) != len(self.names):
            raise InputError(f"duplicate generator names in {self.names}")
        for name, deg in zip(self.names, self.degrees):
            if not re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*", name):
                raise InputError(f"invalid generator name {name!r}")
            if deg < 1:
                raise InputError(f"generator {name} has degree {deg}; degrees must be >= 1")
        if T in self.names:
            if self.names[-1] != T:
                raise InputError("the equivariant parameter t must be the last generator")
            if self.degrees[-1] != 1:
                raise InputError("the equivariant parameter t must have degree 1")

    @classmethod
    def of(cls, *pairs) -> GenSignature:
        """``GenSignature.of(("y", 1), ("t", 1))``"""
        return cls(tuple(n for n, _ in pairs), tuple(int(d) for _, d in pairs))

    @property
    def nvars(self) -> int:
        return len(self.names)

    @property
    def has_t(self) -> bool:
        return bool(self.names) and self.names[-1] == T

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise InputError(f"unknown generator {name!r}") from None

    def with_t(self) -> GenSignature:
        if self.has_t:
            return self
        return GenSignature(self.names + (T,), self.degrees + (1,))

    def without_t(self) -> GenSignature:
        if not self.has_t:
            return self
        return GenSignature(self.names[:-1], self.degrees[:-1])

    def mono_degree(self, mono) -> int:
        return sum(e * d for e, d in zip(mono, self.degrees))

    def monomials(self, degree: int) -> tuple[tuple[int, ...], ...]:
        """All exponent tuples of the given weighted degree, descending lex order."""
        out = []
        n = self.nvars

        def rec(i, left, acc):
            if i == n:
                if left == 0:
                    out.append(tuple(acc))
                return
            d = self.degrees[i]
            for e in range(left // d, -1, -1):
                acc.append(e)
                rec(i + 1, left - e * d, acc)
                acc.pop()

        if degree >= 0:
            rec(0, degree, [])
        return tuple(out)

    def __str__(self):
        return ",".join(self.names)


class IntPolynomial:
    """Immutable sparse polynomial with integer coefficients."""

    __slots__ = ("sig", "terms", "_hash")

    def __init__(self, sig: GenSignature, terms: Mapping[tuple, int] = ()):
        clean = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for mono, c in items:
            if c:
                mono = tuple(mono)
                if len(mono) != sig.nvars:
                    raise SignatureMismatch(
                        f"exponent tuple {mono} does not match signature ({sig})")
                clean[mono] = clean.get(mono, 0) + c
        self.sig = sig
        self.terms = {m: c for m, c in clean.items() if c}
        self._hash = None

    # construction helpers
    @classmethod
    def zero(cls, sig):
        return cls(sig)

    @classmethod
    def const(cls, sig, c):
        return cls(sig, {(0,) * sig.nvars: c})

    @classmethod
    def gen(cls, sig, name):
        i = sig.index(name)
        mono = [0] * sig.nvars
        mono[i] = 1
        return cls(sig, {tuple(mono): 1})

    @classmethod
    def monomial(cls, sig, mono, c=1):
        return cls(sig, {tuple(mono): c})

    # basic queries
    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def degrees(self):
        return {self.sig.mono_degree(m) for m in self.terms}

    def is_homogeneous(self):
        return len(self.degrees()) <= 1

    def degree(self):
        """Weighted degree of a homogeneous polynomial (``None`` for zero)."""
        degs = self.degrees()
        if not degs:
            return None
        if len(degs) > 1:
            raise InputError(f"{self} is not homogeneous")
        return next(iter(degs))

    def max_degree(self):
        return max(self.degrees(), default=None)

    def constant_term(self):
        return self.terms.get((0,) * self.sig.nvars, 0)

    def components(self):
        """Homogeneous components keyed by degree, ascending."""
        buckets = {}
        for m, c in self.terms.items():
            buckets.setdefault(self.sig.mono_degree(m), {})[m] = c
        return {d: IntPolynomial(self.sig, buckets[d]) for d in sorted(buckets)}

    def component(self, degree):
        return IntPolynomial(self.sig, {m: c for m, c in self.terms.items()
                                        if self.sig.mono_degree(m) == degree})

    def truncate(self, max_degree):
        return IntPolynomial(self.sig, {m: c for m, c in self.terms.items()
                                        if self.sig.mono_degree(m) <= max_degree})

    def sorted_terms(self):
        deg = self.sig.mono_degree
        return sorted(self.terms.items(), key=lambda mc: (deg(mc[0]), mc[0]), reverse=True)

    # arithmetic
    def _check(self, other):
        if isinstance(other, int):
            return IntPolynomial.const(self.sig, other)
        if not isinstance(other, IntPolynomial):
            return NotImplemented
        if other.sig != self.sig:
            raise SignatureMismatch(f"signatures ({self.sig}) and ({other.sig}) differ")
        return other

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        terms = dict(self.terms)
        for m, c in other.terms.items():
            terms[m] = terms.get(m, 0) + c
        return IntPolynomial(self.sig, terms)

    __radd__ = __add__

    def __neg__(self):
        return IntPolynomial(self.sig, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return IntPolynomial(self.sig, {m: c * other for m, c in self.terms.items()})
        other = self._check(other)
        if other is NotImplemented:
            return other
        terms = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                terms[m] = terms.get(m, 0) + c1 * c2
        return IntPolynomial(self.sig, terms)

    __rmul__ = __mul__

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise InputError("polynomial powers must be non-negative integers")
        result = IntPolynomial.const(self.sig, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            other = IntPolynomial.const(self.sig, other)
        if not isinstance(other, IntPolynomial):
            return NotImplemented
        return self.sig == other.sig and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.sig, frozenset(self.terms.items())))
        return self._hash

    # signature changes
    def embed(self, target: GenSignature) -> IntPolynomial:
        """Re-express over a signature containing all generators used here."""
        if target == self.sig:
            return self
        idx = []
        for i, name in enumerate(self.sig.names):
            if name in target.names:
                j = target.names.index(name)
                if target.degrees[j] != self.sig.degrees[i]:
                    raise SignatureMismatch(f"generator {name} changes degree")
                idx.append(j)
            else:
                idx.append(None)
        terms = {}
        for m, c in self.terms.items():
            new = [0] * target.nvars
            for i, e in enumerate(m):
                if e:
                    if idx[i] is None:
                        raise SignatureMismatch(
                            f"generator {self.sig.names[i]} missing from ({target})")
                    new[idx[i]] = e
            terms[tuple(new)] = c
        return IntPolynomial(target, terms)

    # t-handling
    def t_degree_split(self):
        """``{j: coefficient of t^j}`` with coefficients kept in this signature."""
        if not self.sig.has_t:
            return {0: self} if self else {}
        out = {}
        for m, c in self.terms.items():
            out.setdefault(m[-1], {})[m[:-1] + (0,)] = c
        return {j: IntPolynomial(self.sig, out[j]) for j in sorted(out)}

    def __repr__(self):
        return f"IntPolynomial({self})"

    def __str__(self):
        return format_poly(self)


def _print_key(sig):
    has_t = sig.has_t

    def key(mc):
        m = mc[0]
        rest = m[:-1] if has_t else m
        return (sig.mono_degree(m), m[-1] if has_t else 0, rest)
    return key


def format_monomial(sig, mono):
    order = list(range(sig.nvars))
    if sig.has_t:
        order = [sig.nvars - 1] + order[:-1]
    parts = []
    for i in order:
        e = mono[i]
        if e == 1:
            parts.append(sig.names[i])
        elif e > 1:
            parts.append(f"{sig.names[i]}^{e}")
    return "*".join(parts)


def format_poly(f: IntPolynomial) -> str:
    if not f.terms:
        return "0"
    out = []
    for k, (m, c) in enumerate(sorted(f.terms.items(), key=_print_key(f.sig), reverse=True)):
        mono = format_monomial(f.sig, m)
        a = abs(c)
        body = str(a) if not mono else (mono if a == 1 else f"{a}*{mono}")
        if k == 0:
            out.append(("-" if c < 0 else "") + body)
        else:
            out.append((" - " if c < 0 else " + ") + body)
    return "".join(out)


# -- functional forms --------------------------------------------------------

def multiply(f: IntPolynomial, g: IntPolynomial) -> IntPolynomial:
    return f * g


def substitute(f: IntPolynomial, images: Mapping[str, IntPolynomial],
               target: GenSignature) -> IntPolynomial:
    """Evaluate ``f`` at ``name -> images[name]``, landing in ``target``."""
    gens = []
    for name in f.sig.names:
        if name not in images:
            raise MissingImage(f"no image given for generator {name!r}")
        img = images[name]
        if img.sig != target:
            img = img.embed(target)
        gens.append(img)
    powers = [dict() for _ in gens]

    def power(i, e):
        p = powers[i].get(e)
        if p is None:
            p = gens[i] ** e
            powers[i][e] = p
        return p

    result = {}
    one = (0,) * target.nvars
    for m, c in f.terms.items():
        term = {one: c}
        for i, e in enumerate(m):
            if e:
                p = power(i, e)
                nxt = {}
                for m1, c1 in term.items():
                    for m2, c2 in p.terms.items():
                        mm = tuple(a + b for a, b in zip(m1, m2))
                        nxt[mm] = nxt.get(mm, 0) + c1 * c2
                term = nxt
        for mm, cc in term.items():
            result[mm] = result.get(mm, 0) + cc
    return IntPolynomial(target, result)


def exact_div_t(f: IntPolynomial) -> IntPolynomial:
    """``g`` with ``f == t * g``; raises ``NotDivisible`` if some term lacks ``t``."""
    if not f.sig.has_t:
        if f.terms:
            raise NotDivisible(f"{f} is not divisible by t (no t in signature)")
        return f
    terms = {}
    for m, c in f.terms.items():
        if m[-1] == 0:
            raise NotDivisible(f"{f} is not divisible by t")
        terms[m[:-1] + (m[-1] - 1,)] = c
    return IntPolynomial(f.sig, terms)


def eval_t_zero(f: IntPolynomial) -> IntPolynomial:
    if not f.sig.has_t:
        return f
    return IntPolynomial(f.sig, {m: c for m, c in f.terms.items() if m[-1] == 0})


def gens_of(sig: GenSignature) -> dict[str, IntPolynomial]:
    return {name: IntPolynomial.gen(sig, name) for name in sig.names}


# -- textual syntax -----------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*^()]))")


def _tokenize(text):
    pos = 0
    toks = []
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise PolySyntaxError(f"unexpected character {text[pos]!r}", pos)
        start = m.start(m.lastindex)
        if m.group(1):
            toks.append(("int", int(m.group(1)), start))
        elif m.group(2):
            toks.append(("name", m.group(2), start))
        else:
            op = "^" if m.group(3) == "**" else m.group(3)
            toks.append(("op", op, start))
        pos = m.end()
    toks.append(("end", None, len(text)))
    return toks


class _Parser:
    def __init__(self, text, sig):
        self.toks = _tokenize(text)
        self.i = 0
        self.sig = sig

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect_op(self, op):
        kind, val, pos = self.take()
        if kind != "op" or val != op:
            raise PolySyntaxError(f"expected {op!r}", pos)

    def parse(self):
        if self.peek()[0] == "end":
            raise PolySyntaxError("empty polynomial", self.peek()[2])
        f = self.expr()
        kind, val, pos = self.peek()
        if kind != "end":
            raise PolySyntaxError(f"unexpected {val!r}", pos)
        return f

    def expr(self):
        f = self.term()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                g = self.term()
                f = f + g if val == "+" else f - g
            else:
                return f

    def term(self):
        f = self.factor()
        while self.peek()[:2] == ("op", "*"):
            self.take()
            f = f * self.factor()
        return f

    def factor(self):
        kind, val, pos = self.peek()
        if kind == "op" and val in "+-":
            self.take()
            f = self.factor()
            return -f if val == "-" else f
        base = self.atom()
        if self.peek()[:2] == ("op", "^"):
            self.take()
            kind, val, pos = self.take()
            if kind != "int":
                raise PolySyntaxError("exponent must be a non-negative integer", pos)
            base = base ** val
        return base

    def atom(self):
        kind, val, pos = self.take()
        if kind == "int":
            return IntPolynomial.const(self.sig, val)
        if kind == "name":
            if val not in self.sig.names:
                raise PolySyntaxError(f"unknown generator {val!r}", pos)
            return IntPolynomial.gen(self.sig, val)
        if kind == "op" and val == "(":
            f = self.expr()
            self.expect_op(")")
            return f
        if kind == "end":
            raise PolySyntaxError("unexpected end of input", pos)
        raise PolySyntaxError(f"unexpected {val!r}", pos)


def parse_poly(text: str, sig: GenSignature) -> IntPolynomial:
    """Parse ``24*t^2 + 24*y^2``-style text over ``sig`` (``**`` accepted for ``^``)."""
    return _Parser(text, sig).parse()
