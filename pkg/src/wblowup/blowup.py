"""Chow rings of weighted blow-ups.

Notation: ``X`` (center) sits in ``Y`` with codimension ``d``; the weighted
normal bundle ``N`` has rank ``n = d``; ``P(t)`` and ``Q(t)`` are its top and
total G_m-equivariant Chern classes; ``delta = (P(t) - P(0)) / t``.

Elements of A*(Ytilde) are modelled as pairs ``(y, exc)`` with ``y`` in
A*(Y) and ``exc`` in ``t * A*(X)[t]``.  A pair stands for ``f^*(y) + exc``
where ``t = -[Xtilde]`` (so ``j_*`` is multiplication by ``-t``).  In each
degree the pairs form ``Z^cols`` modulo the lattice spanned by

* the relations of A*(Y) in the ``y`` block,
* ``t * (relations of A*(X)[t]/P(t))`` in the ``exc`` block,
* ``(i_*(alpha), (P(t) - P(0)) * alpha)`` for ``alpha`` in A*(X),

the last family being ``f^* i_* = j_* f^!``.  Everything else (Keel-style
and general presentations, the key sequence check, Chern classes) is
computed from that lattice.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from functools import cached_property

from . import intlat
from .chern import (WeightedBundle, difference_quotient, equivariant_top_chern,
                    equivariant_total_chern)
from .errors import InputError, InvariantViolation
from .gring import (GradedRing, Pushforward, PushforwardData, RingMap, remove_redundant)
from .intlat import SmithForm
from .polyring import GenSignature, IntPolynomial, eval_t_zero


class SetupError(InputError):
    def __init__(self, report):
        self.report = report
        super().__init__("; ".join(c.describe() for c in report.failures))


class TruncationExceeded(InputError):
    pass


class NotSurjective(InputError):
    def __init__(self, degree, witness):
        super().__init__(f"i* not surjective in degree {degree}: {witness} is not in the image")
        self.degree = degree
        self.witness = witness


# -- setup and validation ----------------------------------------------------

@dataclass
class CheckResult:
    name: str
    ok: bool
    section: str
    degree: int | None = None
    witness: object = None
    message: str = ""

    def describe(self):
        if self.ok:
            return f"{self.name}: ok"
        where = f" in degree {self.degree}" if self.degree is not None else ""
        wit = f" (witness: {self.witness})" if self.witness is not None else ""
        return f"{self.name} failed{where}: {self.message}{wit}"


@dataclass
class ValidationReport:
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def ok(self):
        return all(c.ok for c in self.checks)

    @property
    def failures(self):
        return [c for c in self.checks if not c.ok]

    def raise_if_failed(self):
        if not self.ok:
            raise SetupError(self)


class BlowupSetup:
    """Blow-up datum.  Construct through :func:`make_setup` to get validation."""

    def __init__(self, ring_y: GradedRing, ring_x: GradedRing, pullback: RingMap,
                 pushforward: PushforwardData, bundle: WeightedBundle, truncation: int):
        self.ring_y = ring_y
        self.ring_x = ring_x
        self.pullback = pullback
        self.pushforward = pushforward
        self.bundle = bundle
        self.truncation = int(truncation)
        self._pair_pieces = {}
        self._lock = threading.Lock()

    @property
    def codim(self):
        return self.pushforward.shift

    @property
    def n(self):
        return self.bundle.rank

    @cached_property
    def ext_x(self) -> GradedRing:
        """A*(X)[t]."""
        return self.ring_x.with_t()

    @cached_property
    def P(self) -> IntPolynomial:
        return equivariant_top_chern(self.bundle)

    @cached_property
    def P0(self) -> IntPolynomial:
        return eval_t_zero(self.P)

    @cached_property
    def delta(self) -> IntPolynomial:
        return difference_quotient(self.P)

    @cached_property
    def Q(self) -> IntPolynomial:
        return equivariant_total_chern(self.bundle)

    @cached_property
    def exceptional(self) -> GradedRing:
        return self.ext_x.adjoin([self.P])

    @cached_property
    def push(self) -> Pushforward:
        return Pushforward(self.pushforward, self.pullback)

    @property
    def fundamental_class(self) -> IntPolynomial:
        return self.ring_y.normal_form(self.pushforward.fundamental_class.embed(self.ring_y.sig))

    def pull(self, beta: IntPolynomial) -> IntPolynomial:
        """``i^*`` landing in A*(X)[t]."""
        return self.pullback(beta).embed(self.ext_x.sig)

    def check_degree(self, k):
        if k > self.truncation:
            raise TruncationExceeded(
                f"degree {k} exceeds the truncation degree {self.truncation}")

    def with_truncation(self, D) -> BlowupSetup:
        return BlowupSetup(self.ring_y, self.ring_x, self.pullback, self.pushforward,
                           self.bundle, D)

    # pair model, cached per degree
    def pair_piece(self, k) -> PairPiece:
        self.check_degree(k)
        with self._lock:
            p = self._pair_pieces.get(k)
        if p is None:
            p = PairPiece(self, k)
            with self._lock:
                p = self._pair_pieces.setdefault(k, p)
        return p


def validate_setup(s: BlowupSetup) -> ValidationReport:
    rep = ValidationReport()
    add = rep.checks.append
    D = s.truncation

    bad = next((r for r in s.ring_y.relations
                if not s.ring_x.is_zero(s.pullback._sub(r))), None)
    add(CheckResult("pullback well-defined", bad is None, "pullback",
                    None if bad is None else bad.degree(), bad,
                    "a relation of A*(Y) does not map to zero"))

    d = s.codim
    add(CheckResult("codimension positive", d >= 1, "codim",
                    message=f"codimension {d} must be at least 1"))
    add(CheckResult("bundle rank equals codimension", s.n == d, "bundle",
                    message=f"bundle has total rank {s.n} but codim is {d}"))
    add(CheckResult("bundle over A*(X)", s.bundle.base.sig == s.ring_x.sig, "bundle",
                    message="bundle base ring differs from ring X"))
    add(CheckResult("truncation covers rank", D >= s.n, "truncate",
                    message=f"truncation degree {D} is below the rank {s.n}"))

    deg_ok = None
    for mu, img in zip(s.pushforward.generators, s.pushforward.images):
        if img and img.degree() != mu.degree() + d:
            deg_ok = img
            break
    add(CheckResult("pushforward degrees", deg_ok is None, "pushforward", None, deg_ok,
                    f"pushforward images must have degree deg(mu) + {d}"))
    if not rep.ok:
        return rep

    lhs = s.pullback(s.fundamental_class)
    rhs = s.ring_x.normal_form(s.P0.embed(s.ring_x.sig))
    add(CheckResult("self-intersection i*(i_*(1)) = P(0)", s.ring_x.equal(lhs, rhs),
                    "pushforward", d, f"i*[X] = {lhs}, P(0) = {rhs}",
                    "the class of the center does not restrict to the top Chern class"))

    for e in range(D + 1):
        w = s.push.check_decomposable(e)
        if w is not None:
            add(CheckResult("A*(X) generated by module generators", False, "module_gens",
                            e, w, "monomial outside the A*(Y)-span of the module generators"))
            break
    else:
        add(CheckResult("A*(X) generated by module generators", True, "module_gens"))

    if rep.ok:
        for e in range(D - d + 1):
            w = s.push.check_well_defined(e)
            if w is not None:
                add(CheckResult("pushforward well-defined", False, "pushforward", e, w,
                                "a relation among module generators has nonzero pushforward"))
                break
        else:
            add(CheckResult("pushforward well-defined", True, "pushforward"))
    return rep


def make_setup(ring_y, ring_x, pullback, pushforward, bundle, truncation=None) -> BlowupSetup:
    if not isinstance(pullback, RingMap):
        pullback = RingMap(ring_y, ring_x, pullback)
    if truncation is None:
        truncation = pushforward.shift + 4
    s = BlowupSetup(ring_y, ring_x, pullback, pushforward, bundle, truncation)
    validate_setup(s).raise_if_failed()
    return s


# -- exceptional divisor and Gysin map ----------------------------------------

def exceptional_ring(s: BlowupSetup) -> GradedRing:
    """A*(Xtilde) = A*(X)[t] / P(t)."""
    return s.exceptional


def gysin_pullback(s: BlowupSetup, alpha: IntPolynomial) -> IntPolynomial:
    """``f^!(alpha) = delta * alpha`` in A*(Xtilde)."""
    alpha = alpha.embed(s.ring_x.sig)
    if alpha.is_zero():
        return s.exceptional.zero()
    top = alpha.max_degree() + s.n - 1
    s.check_degree(top)
    return s.exceptional.normal_form(s.delta * alpha.embed(s.ext_x.sig))


# -- pair model ----------------------------------------------------------------

class BlowupElement:
    """``f^*(y) + exc`` with ``exc`` in ``t * A*(X)[t]``.  Equality is :func:`be_eq`."""

    __slots__ = ("y", "exc")

    def __init__(self, y: IntPolynomial, exc: IntPolynomial):
        if eval_t_zero(exc):
            raise InputError(f"exceptional part {exc} has a t-free term")
        self.y = y
        self.exc = exc

    @classmethod
    def zero(cls, s):
        return cls(s.ring_y.zero(), s.ext_x.zero())

    @classmethod
    def one(cls, s):
        return cls(s.ring_y.one(), s.ext_x.zero())

    @classmethod
    def from_y(cls, s, beta):
        return cls(beta.embed(s.ring_y.sig), s.ext_x.zero())

    @classmethod
    def from_exc(cls, s, q):
        return cls(s.ring_y.zero(), q.embed(s.ext_x.sig))

    @classmethod
    def exceptional_divisor(cls, s):
        return cls.from_exc(s, -s.ext_x.gen("t"))

    def __add__(self, other):
        return BlowupElement(self.y + other.y, self.exc + other.exc)

    def __sub__(self, other):
        return BlowupElement(self.y - other.y, self.exc - other.exc)

    def __neg__(self):
        return BlowupElement(-self.y, -self.exc)

    def scale(self, c):
        return BlowupElement(self.y * c, self.exc * c)

    def degrees(self):
        return sorted(self.y.degrees() | self.exc.degrees())

    def component(self, k):
        return BlowupElement(self.y.component(k), self.exc.component(k))

    def is_structurally_zero(self):
        return self.y.is_zero() and self.exc.is_zero()

    def __eq__(self, other):
        # structural; mathematical equality is be_eq
        return isinstance(other, BlowupElement) and self.y == other.y and self.exc == other.exc

    def __hash__(self):
        return hash((self.y, self.exc))

    def __repr__(self):
        return f"BlowupElement(y={self.y}, exc={self.exc})"


class PairPiece:
    """Degree-``k`` piece of A*(Ytilde) in the pair model."""

    def __init__(self, s: BlowupSetup, k: int):
        self.degree = k
        ypiece = s.ring_y.piece(k)
        self.ymonos = ypiece.monomials
        esig = s.ext_x.sig
        self.emonos = tuple(m for m in esig.monomials(k) if m[-1] >= 1)
        self.ny = len(self.ymonos)
        self.ncols = self.ny + len(self.emonos)
        self.yindex = ypiece.index
        self.eindex = {m: self.ny + i for i, m in enumerate(self.emonos)}
        self.ysig, self.esig = s.ring_y.sig, esig

        rows = [tuple(r) + (0,) * len(self.emonos) for r in ypiece.lattice.rows]
        if k >= 1:
            xt = s.exceptional.piece(k - 1)
            for r in xt.lattice.rows:
                v = [0] * self.ncols
                for m, c in zip(xt.monomials, r):
                    if c:
                        v[self.eindex[m[:-1] + (m[-1] + 1,)]] += c
                rows.append(tuple(v))
        if k >= s.n:
            diff = s.P - s.P0
            for m in s.ring_x.sig.monomials(k - s.n):
                alpha = IntPolynomial.monomial(s.ring_x.sig, m)
                rows.append(self.coords(BlowupElement(s.push(alpha), diff * alpha.embed(esig))))
        self.lattice = intlat.hermite_normal_form(intlat.IntMatrix.from_rows(rows, self.ncols))

    @cached_property
    def smith(self) -> SmithForm:
        return intlat.smith_invariants(self.lattice.as_matrix())

    def coords(self, u: BlowupElement):
        v = [0] * self.ncols
        try:
            for m, c in u.y.terms.items():
                v[self.yindex[m]] += c
            for m, c in u.exc.terms.items():
                v[self.eindex[m]] += c
        except KeyError:
            raise InputError(f"element {u} is not homogeneous of degree {self.degree}") from None
        return tuple(v)

    def element(self, v) -> BlowupElement:
        y = IntPolynomial(self.ysig, {m: c for m, c in zip(self.ymonos, v[:self.ny]) if c})
        e = IntPolynomial(self.esig, {m: c for m, c in zip(self.emonos, v[self.ny:]) if c})
        return BlowupElement(y, e)

    def reduce(self, u: BlowupElement) -> BlowupElement:
        return self.element(intlat.reduce_mod_lattice(self.coords(u), self.lattice))


def be_normal_form(s: BlowupSetup, u: BlowupElement) -> BlowupElement:
    out = BlowupElement.zero(s)
    for k in u.degrees():
        out = out + s.pair_piece(k).reduce(u.component(k))
    return out


def be_eq(s: BlowupSetup, u: BlowupElement, v: BlowupElement) -> bool:
    diff = u - v
    return all(s.pair_piece(k).reduce(diff.component(k)).is_structurally_zero()
               for k in diff.degrees())


def be_mul(s: BlowupSetup, u: BlowupElement, v: BlowupElement,
           truncate: bool = False) -> BlowupElement:
    """``(b1, q1)(b2, q2) = (b1 b2, i*(b1) q2 + i*(b2) q1 + q1 q2)``.

    Components are reduced in A*(Y) and coefficientwise in A*(X)[t].  A
    product reaching past the truncation degree raises unless ``truncate``
    is set, in which case those components are dropped.
    """
    y = u.y * v.y
    exc = s.pull(u.y) * v.exc + s.pull(v.y) * u.exc + u.exc * v.exc
    D = s.truncation
    top = max(y.degrees() | exc.degrees(), default=0)
    if top > D:
        if not truncate:
            raise TruncationExceeded(f"product reaches degree {top} > truncation {D}")
        y, exc = y.truncate(D), exc.truncate(D)
    return BlowupElement(s.ring_y.normal_form(y), s.ext_x.normal_form(exc))


def blowup_graded_piece(s: BlowupSetup, k: int) -> SmithForm:
    return s.pair_piece(k).smith


# -- presentations --------------------------------------------------------------

@dataclass(frozen=True)
class Presentation:
    """A graded ring presentation plus the degree through which it is certified.

    ``valid_through is None`` means the presentation is exact in all degrees.
    """
    ring: GradedRing
    kind: str
    valid_through: int | None = None


def pullback_surjective(s: BlowupSetup):
    """``None`` if i* is onto through the truncation degree, else ``(degree, witness)``."""
    for e in range(s.truncation + 1):
        w = s.pullback.surjective_in(e)
        if w is not None:
            return e, w
    return None


def lift_to_y(s: BlowupSetup, q: IntPolynomial, target: GenSignature) -> IntPolynomial:
    """Replace each A*(X)-coefficient of ``q(t)`` by its canonical i*-preimage."""
    out = IntPolynomial.zero(target)
    t = IntPolynomial.gen(target, "t")
    xsig = s.ring_x.sig
    for j, coeff in q.t_degree_split().items():
        for deg, comp in coeff.embed(xsig).components().items():
            pre = s.pullback.preimage(comp)
            if pre is None:
                raise NotSurjective(deg, comp)
            out = out + pre.embed(target) * t ** j
    return out


def keel_presentation(s: BlowupSetup) -> Presentation:
    """``A*(Y)[t] / (t * ker(i*), P~(t) - P~(0) + [X])`` for surjective ``i*``."""
    bad = pullback_surjective(s)
    if bad is not None:
        raise NotSurjective(*bad)
    D = s.truncation
    sig = s.ring_y.sig.with_t()
    t = IntPolynomial.gen(sig, "t")
    rels = [r.embed(sig) for r in s.ring_y.relations]
    for e in range(1, D):
        for kappa in s.pullback.kernel(e):
            cand = t * kappa.embed(sig)
            if not GradedRing(sig, rels).is_zero(cand):
                rels.append(cand)
    lifted = lift_to_y(s, s.P - s.P0, sig)
    qk = lifted + s.fundamental_class.embed(sig)
    rels.append(qk)
    ring = remove_redundant(GradedRing(sig, rels))
    return Presentation(ring, "keel", D)


def keel_image(s: BlowupSetup, u: BlowupElement, sig: GenSignature | None = None) -> IntPolynomial:
    """Image of a pair-model element in ``A*(Y)[t]`` (surjective ``i*`` only)."""
    sig = sig or s.ring_y.sig.with_t()
    return u.y.embed(sig) + lift_to_y(s, u.exc, sig)


def general_signature(s: BlowupSetup) -> GenSignature:
    ynames = s.ring_y.sig.names
    extra = [("T", 1)]
    for l, mu in enumerate(s.pushforward.generators[1:], start=2):
        extra.append((f"E{l}", mu.degree() + 1))
    for name, _ in extra:
        if name in ynames:
            raise InputError(f"generator name {name!r} of ring Y clashes with a blow-up generator")
    return GenSignature(ynames + tuple(n for n, _ in extra),
                        s.ring_y.sig.degrees + tuple(d for _, d in extra))


def general_image(s: BlowupSetup, sig: GenSignature, mono) -> BlowupElement:
    """Pair-model image of a monomial in ``Z[gens(Y), T, E2, ...]``."""
    ny = s.ring_y.sig.nvars
    beta = IntPolynomial.monomial(s.ring_y.sig, mono[:ny])
    a = mono[ny]
    bs = mono[ny + 1:]
    p = a + sum(bs)
    if p == 0:
        return BlowupElement(beta, s.ext_x.zero())
    exc = s.pull(beta) * s.ext_x.gen("t") ** p
    for mu, b in zip(s.pushforward.generators[1:], bs):
        if b:
            exc = exc * mu.embed(s.ext_x.sig) ** b
    return BlowupElement(s.ring_y.zero(), exc)


def general_presentation(s: BlowupSetup) -> Presentation:
    """Presentation valid through the truncation degree, for any ``i*``.

    Generators: those of A*(Y), ``T = t`` and ``E_l = t * mu_l`` for the
    module generators beyond ``mu_1 = 1``.  Relations: those of A*(Y), the
    product rules ``E_l E_m = sum_p beta_p T E_p``, then, degree by degree,
    whatever remains of the kernel of the map to the pair model.
    """
    D = s.truncation
    sig = general_signature(s)
    ny = s.ring_y.sig.nvars
    T = IntPolynomial.gen(sig, "T")
    E = [T] + [IntPolynomial.gen(sig, name) for name in sig.names[ny + 1:]]
    rels = [r.embed(sig) for r in s.ring_y.relations]
    mus = s.pushforward.generators
    for l in range(1, len(mus)):
        for m in range(l, len(mus)):
            if mus[l].degree() + mus[m].degree() + 2 > D:
                continue
            betas = s.push.decompose(s.ring_x.normal_form(mus[l] * mus[m]))
            rhs = sum((b.embed(sig) * T * E[p] for p, b in enumerate(betas) if b),
                      IntPolynomial.zero(sig))
            rels.append(E[l] * E[m] - rhs)

    for k in range(1, D + 1):
        pres = GradedRing(sig, rels).piece(k)
        pair = s.pair_piece(k)
        images = [pair.coords(general_image(s, sig, m)) for m in pres.monomials]
        onto = intlat.hermite_normal_form(intlat.stack(images, pair.lattice, ncols=pair.ncols))
        if onto.rank != pair.ncols or any(onto.rows[i][i] != 1 for i in range(onto.rank)):
            raise InvariantViolation(f"generators do not span A^{k} of the blow-up")
        ker = intlat.integer_kernel(intlat.stack(images, pair.lattice, ncols=pair.ncols))
        nm = len(pres.monomials)
        cur = pres.lattice
        for row in intlat.hermite_normal_form(
                intlat.IntMatrix.from_rows([r[:nm] for r in ker.rows], nm)).rows:
            red = intlat.reduce_mod_lattice(row, cur)
            if any(red):
                rels.append(pres.poly(red))
                cur = intlat.hermite_normal_form(intlat.stack(cur, [red], ncols=nm))
    ring = remove_redundant(GradedRing(sig, rels))
    return Presentation(ring, "general", D)


def auto_presentation(s: BlowupSetup) -> Presentation:
    if pullback_surjective(s) is None:
        return keel_presentation(s)
    return general_presentation(s)


def presentation_smith(p: Presentation, max_degree: int) -> list[SmithForm]:
    if p.valid_through is not None and max_degree > p.valid_through:
        raise TruncationExceeded(
            f"presentation is only certified through degree {p.valid_through}")
    return [p.ring.smith(k) for k in range(max_degree + 1)]


# -- key sequence ------------------------------------------------------------------

@dataclass
class ExactnessReport:
    degree: int
    well_defined: bool
    surjective: bool
    image_in_kernel: bool
    kernel_in_image: bool

    @property
    def exact(self):
        return (self.well_defined and self.surjective
                and self.image_in_kernel and self.kernel_in_image)

    def describe(self):
        if self.exact:
            return f"degree {self.degree}: exact"
        bad = [name for name in ("well_defined", "surjective", "image_in_kernel",
                                 "kernel_in_image") if not getattr(self, name)]
        return (f"degree {self.degree}: NOT exact ({', '.join(bad)} failed); "
                "the sequence is exact for valid input, so this is an implementation bug")


def verify_key_sequence(s: BlowupSetup, k: int) -> ExactnessReport:
    """Check ``A^{k-n}(X) -> A^{k-1}(Xtilde) + A^k(Y) -> A^k(Ytilde) -> 0`` in degree ``k``.

    The maps are ``alpha -> (f^!(alpha), -i_*(alpha))`` and
    ``(gamma, beta) -> j_*(gamma) + f^*(beta)`` with ``j_* = -t``.  Kernel and
    image are compared as lattices after adding the relation lattice of the
    middle group.
    """
    s.check_degree(k)
    pair = s.pair_piece(k)
    ypiece = s.ring_y.piece(k)
    if k >= 1:
        xt = s.exceptional.piece(k - 1)
        xmonos, xlat = xt.monomials, xt.lattice.rows
    else:
        xt, xmonos, xlat = None, (), ()
    nx, ny = len(xmonos), ypiece.rank
    mid = nx + ny
    t = s.ext_x.gen("t")

    psi = [pair.coords(BlowupElement.from_exc(s, -t * IntPolynomial.monomial(s.ext_x.sig, m)))
           for m in xmonos]
    psi += [pair.coords(BlowupElement.from_y(s, IntPolynomial.monomial(s.ring_y.sig, m)))
            for m in ypiece.monomials]
    ambient = [tuple(r) + (0,) * ny for r in xlat]
    ambient += [(0,) * nx + tuple(r) for r in ypiece.lattice.rows]

    def apply_psi(c):
        v = [0] * pair.ncols
        for ci, row in zip(c, psi):
            if ci:
                for j, x in enumerate(row):
                    v[j] += ci * x
        return v

    well_defined = all(intlat.in_lattice(apply_psi(r), pair.lattice) for r in ambient)
    onto = intlat.hermite_normal_form(intlat.stack(psi, pair.lattice, ncols=pair.ncols))
    surjective = onto.rank == pair.ncols and all(onto.rows[i][i] == 1 for i in range(onto.rank))

    ker = intlat.integer_kernel(intlat.stack(psi, pair.lattice, ncols=pair.ncols))
    kernel = intlat.hermite_normal_form(
        intlat.IntMatrix.from_rows([r[:mid] for r in ker.rows] + ambient, mid))

    image_rows = list(ambient)
    if k >= s.n:
        for m in s.ring_x.sig.monomials(k - s.n):
            alpha = IntPolynomial.monomial(s.ring_x.sig, m)
            gys = s.delta * alpha.embed(s.ext_x.sig)
            push = s.push(alpha)
            image_rows.append(xt.coords(gys) + ypiece.coords(-push))
    image = intlat.hermite_normal_form(intlat.IntMatrix.from_rows(image_rows, mid))

    return ExactnessReport(k, well_defined, surjective,
                           intlat.lattice_contains(kernel, image),
                           intlat.lattice_contains(image, kernel))


# -- Chern classes -----------------------------------------------------------------

def correction_factor(Q: IntPolynomial, base: GradedRing, D: int) -> IntPolynomial:
    """``S = (1 - t) Q(t) / Q(0)`` truncated at degree ``D``, reduced over ``base = A*(X)[t]``.

    ``1 / Q(0)`` is the geometric series in ``Q(0) - 1``, which terminates
    below degree ``D + 1`` because ``Q(0)`` has constant term 1.
    """
    Q = Q.embed(base.sig)
    Q0 = eval_t_zero(Q)
    if Q0.constant_term() != 1 or Q0.component(0) != 1:
        raise InputError(f"Q(0) = {Q0} must have constant term 1")
    u = Q0 - 1
    inv = base.one()
    power = base.one()
    for _ in range(D):
        power = (power * -u).truncate(D)
        if power.is_zero():
            break
        inv = inv + power
    t = base.gen("t")
    S = base.normal_form(((1 - t) * (Q * inv).truncate(D)).truncate(D))
    if not base.is_zero(eval_t_zero(S) - 1):
        raise InvariantViolation(f"correction factor {S} does not restrict to 1 at t = 0")
    return S


@dataclass(frozen=True)
class ChernResult:
    element: BlowupElement
    correction: IntPolynomial


def total_chern_blowup(s: BlowupSetup, cY: IntPolynomial) -> ChernResult:
    """``c(Ytilde) = f^*c(Y) * q(S)`` with ``S = (1 - t) Q(t) / Q(0)``, truncated at D."""
    D = s.truncation
    cY = s.ring_y.normal_form(cY.embed(s.ring_y.sig).truncate(D))
    if cY.component(0) != 1:
        raise InputError(f"total Chern class {cY} must have degree-0 component 1")
    S = correction_factor(s.Q, s.ext_x, D)
    exc = s.ext_x.normal_form((s.pull(cY) * (S - 1)).truncate(D))
    return ChernResult(BlowupElement(cY, exc), S)
