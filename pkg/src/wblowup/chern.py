"""G_m-equivariant Chern classes of weighted affine bundles.

A weighted bundle is given already split into homogeneous pieces
``E_i`` of weight ``a_i`` and rank ``n_i``, each with ordinary Chern classes
``c_1(E_i), ..., c_{n_i}(E_i)`` in A*(X).  Results live in A*(X)[t].
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import InputError
from .gring import GradedRing
from .polyring import IntPolynomial, eval_t_zero, exact_div_t


@dataclass(frozen=True)
class BundleComponent:
    weight: int
    rank: int
    chern: tuple[IntPolynomial, ...]


class WeightedBundle:
    """Split weighted bundle over ``base``; missing Chern classes default to 0."""

    def __init__(self, base: GradedRing, components: Sequence):
        comps = []
        for comp in components:
            if not isinstance(comp, BundleComponent):
                comp = BundleComponent(*comp)
            w, n = int(comp.weight), int(comp.rank)
            if w <= 0:
                raise InputError(f"bundle weights must be positive, got {w}")
            if n <= 0:
                raise InputError(f"bundle ranks must be positive, got {n}")
            chern = list(comp.chern)
            if len(chern) > n:
                raise InputError(f"rank-{n} component given {len(chern)} Chern classes")
            chern += [IntPolynomial.zero(base.sig)] * (n - len(chern))
            for k, c in enumerate(chern, start=1):
                c = c.embed(base.sig)
                if c and (not c.is_homogeneous() or c.degree() != k):
                    raise InputError(f"c_{k} of the weight-{w} component must have degree {k}, got {c}")
                chern[k - 1] = c
            comps.append(BundleComponent(w, n, tuple(chern)))
        self.base = base
        self.components = tuple(comps)

    @property
    def rank(self):
        return sum(c.rank for c in self.components)

    @property
    def weights(self):
        return tuple(c.weight for c in self.components for _ in range(c.rank))

    def __add__(self, other):
        # Whitney sum of split data
        return WeightedBundle(self.base, self.components + other.components)


# alternative name
WeightedBundleData = WeightedBundle


def _chern_list(comp, sig):
    one = IntPolynomial.const(sig, 1)
    return [one] + [c.embed(sig) for c in comp.chern]


def equivariant_top_chern(N: WeightedBundle) -> IntPolynomial:
    """``P(t) = prod_i sum_k c_{n_i - k}(E_i) a_i^k t^k``, in normal form over the base."""
    ring = N.base.with_t()
    t = ring.gen("t")
    P = ring.one()
    for comp in N.components:
        cs = _chern_list(comp, ring.sig)
        n, a = comp.rank, comp.weight
        P = P * sum((cs[n - k] * (a ** k) * t ** k for k in range(n + 1)), ring.zero())
    return ring.normal_form(P)


def equivariant_total_chern(N: WeightedBundle) -> IntPolynomial:
    """``Q(t) = prod_i sum_k c_k(E_i) (1 + a_i t)^(n_i - k)`` (Chern roots shifted by ``a_i t``)."""
    ring = N.base.with_t()
    t = ring.gen("t")
    Q = ring.one()
    for comp in N.components:
        cs = _chern_list(comp, ring.sig)
        n, a = comp.rank, comp.weight
        shift = ring.one() + t * a
        Q = Q * sum((cs[k] * shift ** (n - k) for k in range(n + 1)), ring.zero())
    return ring.normal_form(Q)


def total_chern(N: WeightedBundle) -> IntPolynomial:
    """Ordinary total Chern class ``c(N)`` in A*(X)."""
    out = N.base.one()
    for comp in N.components:
        out = out * sum(_chern_list(comp, N.base.sig), N.base.zero())
    return N.base.normal_form(out)


def difference_quotient(P: IntPolynomial) -> IntPolynomial:
    """``(P(t) - P(0)) / t``."""
    if not P.sig.has_t:
        raise InputError("difference quotient needs t in the signature")
    return exact_div_t(P - eval_t_zero(P))
