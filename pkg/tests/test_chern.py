import random

import pytest
from hypothesis import given, settings, strategies as st

from conftest import random_element
from wblowup.chern import (BundleComponent, WeightedBundle, difference_quotient,
                           equivariant_top_chern, equivariant_total_chern, total_chern)
from wblowup.errors import InputError
from wblowup.gring import GradedRing
from wblowup.polyring import GenSignature, IntPolynomial, eval_t_zero, parse_poly

POINT = GradedRing.point()
TORIC_X = GradedRing(GenSignature.of(("x", 1)), [parse_poly("x^2", GenSignature.of(("x", 1)))])
BT = GradedRing(GenSignature.of(("x1", 1), ("x2", 1)))


def in_t(R, text):
    return parse_poly(text, R.sig.with_t())


def line(R, weight, c1=None):
    chern = () if c1 is None else (parse_poly(c1, R.sig),)
    return BundleComponent(weight, 1, chern)


def test_top_chern_examples():
    m12 = WeightedBundle(POINT, [line(POINT, 4), line(POINT, 6)])
    assert equivariant_top_chern(m12) == in_t(POINT, "24*t^2")
    toric = WeightedBundle(TORIC_X, [line(TORIC_X, 2, "x"), line(TORIC_X, 3, "x")])
    assert equivariant_top_chern(toric) == in_t(TORIC_X, "5*x*t + 6*t^2")
    single = WeightedBundle(TORIC_X, [line(TORIC_X, 1, "x")])
    assert equivariant_top_chern(single) == in_t(TORIC_X, "x + t")


def test_total_chern_examples():
    for a, b in ((2, 3), (1, 5)):
        ptad = WeightedBundle(BT, [line(BT, a, "x1"), line(BT, b, "x2")])
        assert equivariant_total_chern(ptad) == in_t(BT, f"(1+x1+{a}*t)*(1+x2+{b}*t)")
    m12 = WeightedBundle(POINT, [line(POINT, 4), line(POINT, 6)])
    assert equivariant_total_chern(m12) == in_t(POINT, "1 + 10*t + 24*t^2")


def test_difference_quotient_examples():
    T = POINT.sig.with_t()
    assert difference_quotient(parse_poly("24*t^2", T)) == parse_poly("24*t", T)
    P = in_t(BT, "(x1+2*t)*(x2+3*t)")
    assert difference_quotient(P) == in_t(BT, "3*x1 + 2*x2 + 6*t")
    assert difference_quotient(in_t(BT, "x1*x2")).is_zero()


def test_rank_two_component():
    # rank-2 piece of weight 5 with c1 = x1, c2 = x1*x2
    comp = BundleComponent(5, 2, (parse_poly("x1", BT.sig), parse_poly("x1*x2", BT.sig)))
    N = WeightedBundle(BT, [comp])
    assert equivariant_top_chern(N) == in_t(BT, "x1*x2 + 5*t*x1 + 25*t^2")
    assert equivariant_total_chern(N) == in_t(BT, "(1+5*t)^2 + x1*(1+5*t) + x1*x2")


def test_bundle_validation():
    with pytest.raises(InputError):
        WeightedBundle(POINT, [BundleComponent(0, 1, ())])
    with pytest.raises(InputError):
        WeightedBundle(POINT, [BundleComponent(2, 0, ())])
    with pytest.raises(InputError):
        WeightedBundle(BT, [BundleComponent(2, 1, (parse_poly("x1*x2", BT.sig),))])
    with pytest.raises(InputError):
        WeightedBundle(BT, [BundleComponent(2, 1, (parse_poly("x1", BT.sig),) * 2)])


# -- properties ------------------------------------------------------------------

@st.composite
def bundles(draw):
    comps = []
    seed = draw(st.integers(0, 10 ** 6))
    rng = random.Random(seed)
    for _ in range(draw(st.integers(1, 3))):
        n = draw(st.integers(1, 2))
        a = draw(st.integers(1, 6))
        comps.append(BundleComponent(a, n, tuple(random_element(rng, BT.sig, k, 3)
                                                 for k in range(1, n + 1))))
    return WeightedBundle(BT, comps)


@settings(max_examples=100, deadline=None)
@given(bundles())
def test_top_component_of_total_is_top_chern(N):
    P, Q = equivariant_top_chern(N), equivariant_total_chern(N)
    assert P.is_homogeneous() and P.degree() == N.rank
    assert Q.component(N.rank) == P
    assert Q.component(0) == 1
    assert eval_t_zero(Q) == total_chern(N).embed(Q.sig)


@settings(max_examples=100, deadline=None)
@given(bundles())
def test_difference_quotient_identity(N):
    P = equivariant_top_chern(N)
    t = IntPolynomial.gen(P.sig, "t")
    assert difference_quotient(P) * t + eval_t_zero(P) == P


@settings(max_examples=100, deadline=None)
@given(bundles(), bundles())
def test_whitney_multiplicativity(A, B):
    S = A + B
    assert equivariant_top_chern(S) == equivariant_top_chern(A) * equivariant_top_chern(B)
    assert equivariant_total_chern(S) == equivariant_total_chern(A) * equivariant_total_chern(B)


@settings(max_examples=100, deadline=None)
@given(bundles())
def test_unit_weights_give_classical_polynomial(N):
    ones = WeightedBundle(BT, [BundleComponent(1, c.rank, c.chern) for c in N.components])
    c = total_chern(ones)
    n = ones.rank
    expected = sum((c.component(n - k).embed(BT.sig.with_t()) * in_t(BT, "t") ** k
                    for k in range(n + 1)), IntPolynomial.zero(BT.sig.with_t()))
    assert equivariant_top_chern(ones) == expected
