"""Finitely presented graded rings over Z, handled one degree at a time.

The degree-``d`` piece of ``Z[gens]/(relations)`` is ``Z^monomials`` modulo
the span of ``m * r`` over relations ``r`` and monomials ``m`` of the
complementary degree.  That lattice is put in Hermite normal form, which
gives canonical normal forms, membership tests and Smith invariants without
any Groebner machinery (relations such as ``24*t^2 + 24*y^2`` are not
monic, so rewriting-based reduction does not work over Z).

Every caller supplies the degrees it needs; nothing here is unbounded.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from functools import cached_property
from typing import Mapping, Sequence

from . import intlat
from .errors import InputError
from .intlat import HnfBasis, SmithForm
from .polyring import GenSignature, IntPolynomial, substitute


class DegreeMismatch(InputError):
    pass


class NotWellDefined(InputError):
    def __init__(self, message, relation=None):
        super().__init__(message)
        self.relation = relation


class NotDecomposable(InputError):
    def __init__(self, message, degree=None, witness=None):
        super().__init__(message)
        self.degree = degree
        self.witness = witness


class GradedPiece:
    """Degree-``d`` piece: monomial basis, relation lattice, Smith data."""

    def __init__(self, sig: GenSignature, degree: int, monomials, lattice: HnfBasis):
        self.sig = sig
        self.degree = degree
        self.monomials = monomials
        self.lattice = lattice
        self.index = {m: i for i, m in enumerate(monomials)}

    @property
    def rank(self):
        return len(self.monomials)

    @cached_property
    def smith(self) -> SmithForm:
        return intlat.smith_invariants(self.lattice.as_matrix())

    def coords(self, f: IntPolynomial) -> tuple[int, ...]:
        v = [0] * len(self.monomials)
        for m, c in f.terms.items():
            try:
                v[self.index[m]] += c
            except KeyError:
                raise DegreeMismatch(
                    f"term of degree {self.sig.mono_degree(m)} in degree-{self.degree} "
                    "coordinates") from None
        return tuple(v)

    def poly(self, v) -> IntPolynomial:
        return IntPolynomial(self.sig, {m: c for m, c in zip(self.monomials, v) if c})

    def reduce(self, v) -> tuple[int, ...]:
        return intlat.reduce_mod_lattice(v, self.lattice)

    def contains(self, f: IntPolynomial) -> bool:
        """Whether the homogeneous ``f`` of this degree lies in the ideal."""
        return not any(self.reduce(self.coords(f)))


class GradedRing:
    """``Z[signature] / (relations)`` with homogeneous relations of degree >= 1.

    Immutable after construction.  Graded pieces are cached per degree; the
    cache is guarded by a lock so concurrent readers are safe.
    """

    def __init__(self, sig: GenSignature, relations: Sequence[IntPolynomial] = ()):
        rels = []
        for r in relations:
            if r.sig != sig:
                r = r.embed(sig)
            if r.is_zero():
                continue
            if not r.is_homogeneous():
                raise InputError(f"relation {r} is not homogeneous")
            if r.degree() < 1:
                raise InputError(f"relation {r} has degree 0")
            rels.append(r)
        self.sig = sig
        self.relations = tuple(rels)
        self._pieces = {}
        self._lock = threading.Lock()

    @classmethod
    def point(cls):
        return cls(GenSignature((), ()))

    def __repr__(self):
        return f"GradedRing({self})"

    def __str__(self):
        if not self.sig.names:
            return "Z"
        base = f"Z[{self.sig}]"
        if not self.relations:
            return base
        return base + "/(" + ", ".join(str(r) for r in self.relations) + ")"

    def one(self):
        return IntPolynomial.const(self.sig, 1)

    def zero(self):
        return IntPolynomial.zero(self.sig)

    def gen(self, name):
        return IntPolynomial.gen(self.sig, name)

    def with_t(self) -> GradedRing:
        """The coefficientwise extension ``R[t]`` (same relations, ``t`` adjoined)."""
        sig = self.sig.with_t()
        return GradedRing(sig, [r.embed(sig) for r in self.relations])

    def adjoin(self, extra: Sequence[IntPolynomial]) -> GradedRing:
        return GradedRing(self.sig, list(self.relations) + list(extra))

    def piece(self, d: int) -> GradedPiece:
        with self._lock:
            p = self._pieces.get(d)
        if p is not None:
            return p
        p = self._build_piece(d)
        with self._lock:
            return self._pieces.setdefault(d, p)

    def _build_piece(self, d):
        if d < 0:
            raise InputError("negative degree")
        monos = self.sig.monomials(d)
        index = {m: i for i, m in enumerate(monos)}
        rows = []
        for r in self.relations:
            e = d - r.degree()
            if e < 0:
                continue
            for m in self.sig.monomials(e):
                v = [0] * len(monos)
                for rm, c in r.terms.items():
                    v[index[tuple(a + b for a, b in zip(m, rm))]] += c
                rows.append(v)
        lattice = intlat.hermite_normal_form(intlat.IntMatrix.from_rows(rows, len(monos)))
        return GradedPiece(self.sig, d, monos, lattice)

    def normal_form(self, f: IntPolynomial) -> IntPolynomial:
        if f.sig != self.sig:
            f = f.embed(self.sig)
        out = IntPolynomial.zero(self.sig)
        for d, comp in f.components().items():
            p = self.piece(d)
            out = out + p.poly(p.reduce(p.coords(comp)))
        return out

    def is_zero(self, f: IntPolynomial) -> bool:
        return self.normal_form(f).is_zero()

    def equal(self, f, g) -> bool:
        return self.is_zero(f - g)

    def smith(self, d: int) -> SmithForm:
        return self.piece(d).smith

    def in_ideal(self, f: IntPolynomial, relations: Sequence[IntPolynomial] | None = None) -> bool:
        """Membership of ``f`` in the ideal of this ring (or of ``relations``)."""
        ring = self if relations is None else GradedRing(self.sig, relations)
        return ring.is_zero(f)


# alternative names
GradedRingPresentation = GradedRing


def graded_piece(R: GradedRing, d: int) -> GradedPiece:
    return R.piece(d)


def normal_form(R: GradedRing, f: IntPolynomial) -> IntPolynomial:
    return R.normal_form(f)


def smith_table(R: GradedRing, max_degree: int) -> list[SmithForm]:
    return [R.smith(d) for d in range(max_degree + 1)]


def remove_redundant(R: GradedRing) -> GradedRing:
    """Drop, in order, every relation lying in the ideal of the remaining ones.

    Membership is decided in the relation's own degree, which is exact, so the
    ideal (in every degree) is unchanged.
    """
    kept = list(R.relations)
    i = 0
    seen = set()
    while i < len(kept):
        r = kept[i]
        others = kept[:i] + kept[i + 1:]
        if r in seen or GradedRing(R.sig, others).is_zero(r):
            kept.pop(i)
        else:
            seen.add(r)
            i += 1
    return GradedRing(R.sig, kept)


class RingMap:
    """Graded ring homomorphism given by generator images.

    Construction checks degrees and that each source relation maps into the
    target ideal.
    """

    def __init__(self, source: GradedRing, target: GradedRing,
                 images: Mapping[str, IntPolynomial]):
        imgs = {}
        for name, deg in zip(source.sig.names, source.sig.degrees):
            if name not in images:
                raise NotWellDefined(f"no image for generator {name!r}")
            img = images[name]
            if img.sig != target.sig:
                img = img.embed(target.sig)
            if not img.is_homogeneous() or (img and img.degree() != deg):
                raise DegreeMismatch(
                    f"degree mismatch: {name} has degree {deg} but its image {img} "
                    f"has degree {img.degree() if img.is_homogeneous() else 'mixed'}")
            imgs[name] = img
        extra = set(images) - set(source.sig.names)
        if extra:
            raise NotWellDefined(f"images given for unknown generators {sorted(extra)}")
        self.source = source
        self.target = target
        self.images = imgs
        for r in source.relations:
            if not target.is_zero(self._sub(r)):
                raise NotWellDefined(f"not well-defined on relation {r}", relation=r)
        self._matrices = {}
        self._lock = threading.Lock()

    def _sub(self, f):
        return substitute(f, self.images, self.target.sig)

    def __call__(self, f: IntPolynomial) -> IntPolynomial:
        if f.sig != self.source.sig:
            f = f.embed(self.source.sig)
        return self.target.normal_form(self._sub(f))

    def matrix(self, d: int):
        """Rows: images of the source degree-``d`` monomials in target coordinates."""
        with self._lock:
            mat = self._matrices.get(d)
        if mat is None:
            src = self.source.piece(d)
            tgt = self.target.piece(d)
            rows = [tgt.coords(self._sub(IntPolynomial.monomial(self.source.sig, m)))
                    for m in src.monomials]
            mat = intlat.IntMatrix.from_rows(rows, tgt.rank)
            with self._lock:
                self._matrices[d] = mat
        return mat

    def kernel_lattice(self, d: int) -> HnfBasis:
        """Lattice of source coordinate vectors mapping into the target ideal."""
        mat = self.matrix(d)
        tgt = self.target.piece(d)
        stacked = intlat.stack(mat, tgt.lattice, ncols=tgt.rank)
        ker = intlat.integer_kernel(stacked)
        n = mat.nrows
        return intlat.hermite_normal_form(
            intlat.IntMatrix.from_rows([r[:n] for r in ker.rows], n))

    def kernel(self, d: int) -> list[IntPolynomial]:
        """Z-module generators of the kernel in degree ``d``, in normal form, nonzero."""
        src = self.source.piece(d)
        out = []
        for row in self.kernel_lattice(d).rows:
            red = src.reduce(row)
            if any(red):
                out.append(src.poly(red))
        return out

    def image_lattice(self, d: int) -> HnfBasis:
        tgt = self.target.piece(d)
        return intlat.hermite_normal_form(intlat.stack(self.matrix(d), tgt.lattice, ncols=tgt.rank))

    def surjective_in(self, d: int):
        """``None`` if surjective in degree ``d``, else a target monomial not in the image."""
        tgt = self.target.piece(d)
        img = self.image_lattice(d)
        for i, m in enumerate(tgt.monomials):
            e = [0] * tgt.rank
            e[i] = 1
            if not intlat.in_lattice(e, img):
                return IntPolynomial.monomial(self.target.sig, m)
        return None

    def preimage(self, f: IntPolynomial):
        """Canonical preimage of a homogeneous ``f``, or ``None`` if not in the image.

        Among all solutions the one reduced modulo the kernel lattice is
        returned, so the choice is deterministic.
        """
        if f.sig != self.target.sig:
            f = f.embed(self.target.sig)
        if f.is_zero():
            return IntPolynomial.zero(self.source.sig)
        d = f.degree()
        src = self.source.piece(d)
        tgt = self.target.piece(d)
        mat = self.matrix(d)
        sol = intlat.lattice_solve(tgt.coords(f),
                                   intlat.stack(mat, tgt.lattice, ncols=tgt.rank))
        if sol is None:
            return None
        c = intlat.reduce_mod_lattice(sol[:mat.nrows], self.kernel_lattice(d))
        return src.poly(c)


def ring_map_new(source, target, images) -> RingMap:
    return RingMap(source, target, images)


def map_apply(phi: RingMap, f: IntPolynomial) -> IntPolynomial:
    return phi(f)


def kernel_in_degree(phi: RingMap, d: int) -> list[IntPolynomial]:
    return phi.kernel(d)


@dataclass(frozen=True)
class PushforwardData:
    """Module generators ``mu_1 = 1, mu_2, ...`` of A*(X) over A*(Y) and their pushforwards."""
    shift: int
    generators: tuple[IntPolynomial, ...]
    images: tuple[IntPolynomial, ...]
    names: tuple[str, ...] = ()

    def __post_init__(self):
        if self.shift < 1:
            raise InputError(f"codimension must be >= 1, got {self.shift}")
        if len(self.generators) != len(self.images) or not self.generators:
            raise InputError("pushforward needs one image per module generator")
        if self.generators[0] != 1:
            raise InputError("the first module generator must be 1")
        for mu, img in zip(self.generators, self.images):
            if not mu.is_homogeneous() or mu.is_zero():
                raise InputError(f"module generator {mu} must be nonzero and homogeneous")
            if img and (not img.is_homogeneous() or img.degree() != mu.degree() + self.shift):
                got = img.degree() if img.is_homogeneous() else "mixed"
                raise DegreeMismatch(
                    f"degree mismatch: pushforward of {mu} must have degree "
                    f"{mu.degree() + self.shift}, got {img} of degree {got}")

    @property
    def fundamental_class(self) -> IntPolynomial:
        return self.images[0]


class Pushforward:
    """``i_*`` extended from module generators by the projection formula."""

    def __init__(self, data: PushforwardData, pullback: RingMap):
        self.data = data
        self.pullback = pullback
        self.ring_x = pullback.target
        self.ring_y = pullback.source
        self._cache = {}
        self._lock = threading.Lock()

    def _spanning(self, e):
        """Spanning rows ``i*(beta) * mu_l`` of A^e(X) with their labels ``(l, beta)``."""
        with self._lock:
            hit = self._cache.get(e)
        if hit is not None:
            return hit
        px = self.ring_x.piece(e)
        labels, rows = [], []
        for l, mu in enumerate(self.data.generators):
            k = e - mu.degree()
            if k < 0:
                continue
            for m in self.ring_y.sig.monomials(k):
                beta = IntPolynomial.monomial(self.ring_y.sig, m)
                img = self.pullback._sub(beta) * mu
                labels.append((l, beta))
                rows.append(px.coords(img))
        mat = intlat.IntMatrix.from_rows(rows, px.rank)
        hit = (labels, mat, intlat.stack(mat, px.lattice, ncols=px.rank))
        with self._lock:
            self._cache[e] = hit
        return hit

    def decompose(self, alpha: IntPolynomial) -> tuple[IntPolynomial, ...]:
        """``beta_l`` with ``alpha = sum i*(beta_l) * mu_l`` in A*(X)."""
        ysig = self.ring_y.sig
        out = [IntPolynomial.zero(ysig) for _ in self.data.generators]
        if alpha.sig != self.ring_x.sig:
            alpha = alpha.embed(self.ring_x.sig)
        for e, comp in alpha.components().items():
            labels, mat, stacked = self._spanning(e)
            sol = intlat.lattice_solve(self.ring_x.piece(e).coords(comp), stacked)
            if sol is None:
                raise NotDecomposable(
                    f"not decomposable: {comp} is not in the A*(Y)-span of the module "
                    f"generators in degree {e}", degree=e, witness=comp)
            for (l, beta), c in zip(labels, sol):
                if c:
                    out[l] = out[l] + beta * c
        return tuple(out)

    def __call__(self, alpha: IntPolynomial) -> IntPolynomial:
        betas = self.decompose(alpha)
        total = IntPolynomial.zero(self.ring_y.sig)
        for beta, img in zip(betas, self.data.images):
            if beta:
                total = total + beta * img.embed(self.ring_y.sig)
        return self.ring_y.normal_form(total)

    def check_decomposable(self, e):
        """``None`` if A^e(X) is spanned, else an undecomposable monomial."""
        px = self.ring_x.piece(e)
        _, _, stacked = self._spanning(e)
        span = intlat.hermite_normal_form(stacked)
        for i, m in enumerate(px.monomials):
            v = [0] * px.rank
            v[i] = 1
            if not intlat.in_lattice(v, span):
                return IntPolynomial.monomial(self.ring_x.sig, m)
        return None

    def check_well_defined(self, e):
        """``None`` if every relation among the spanning rows pushes forward to 0.

        Otherwise returns the offending combination ``sum beta_l * mu_l``.
        """
        px = self.ring_x.piece(e)
        labels, mat, stacked = self._spanning(e)
        n = mat.nrows
        for row in intlat.integer_kernel(stacked).rows:
            total = IntPolynomial.zero(self.ring_y.sig)
            for (l, beta), c in zip(labels, row[:n]):
                if c:
                    total = total + beta * self.data.images[l].embed(self.ring_y.sig) * c
            if not self.ring_y.is_zero(total):
                witness = IntPolynomial.zero(self.ring_x.sig)
                for (l, beta), c in zip(labels, row[:n]):
                    if c:
                        witness = witness + self.pullback._sub(beta) * self.data.generators[l] * c
                return witness
        return None


def module_decompose(alpha, pullback: RingMap, data: PushforwardData):
    return Pushforward(data, pullback).decompose(alpha)


def pushforward_apply(data: PushforwardData, pullback: RingMap, alpha) -> IntPolynomial:
    return Pushforward(data, pullback)(alpha)
