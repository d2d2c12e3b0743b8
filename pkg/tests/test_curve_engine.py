import math
import random
from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from curveimage.algebra import T, UPoly
from curveimage.curve_engine import (
    ParamCurveSet,
    classify,
    closure_deficiency,
    implicitize,
    infinity_analysis,
    make_proper,
    properness_degree,
    transfer_interval,
)
from curveimage.errors import DomainViolation, WrongArity, WrongDimension
from curveimage.interval_engine import IntervalDesc, classify_interval, image_of
from curveimage.ratmap import AffineRatMap, RatFunc, to_projective
from helpers import _DENOMINATORS, planted, random_interval, random_map, random_upoly

INF = math.inf
P = IntervalDesc.parse
DEN = (T * T + 1) ** 2
CIRCLE = AffineRatMap([RatFunc((T * T - 1) ** 2 - T * T * 4, DEN), RatFunc(T * 4 * (T * T - 1), DEN)])
CUSP = AffineRatMap([T * T, T ** 3])


def classify_pr(f, I):
    c = classify(ParamCurveSet(f, P(I)))
    return c.p, c.r


@pytest.mark.parametrize("f, I, expected", [
    (CUSP, "(-inf, inf)", (1, 1)),
    (CUSP, "(0, inf)", (2, 2)),
    (CUSP, "[1, 2]", (INF, 1)),
    (CUSP, "(1, 2)", (INF, 2)),
    (CUSP, "[0, inf)", (1, 1)),
    (AffineRatMap([T, T * T]), "[0, 1)", (INF, 1)),
    (CIRCLE, "(-inf, inf)", (INF, 1)),
    (CIRCLE, "(0, 1)", (INF, 2)),
    (AffineRatMap([T * T, T ** 4]), "(-inf, inf)", (1, 1)),
    (AffineRatMap([T * T - 1, T ** 3 - T]), "(-1, 1]", (INF, 1)),
    (AffineRatMap([T * T - 1, T ** 3 - T]), "(-inf, inf)", (1, 1)),
    (AffineRatMap([T * T - 1, T ** 3 - T]), "(-1, inf)", (1, 1)),
    (AffineRatMap([T * T - 1, T ** 3 - T]), "(-2, inf)", (2, 2)),
])
def test_curated_classifications(f, I, expected):
    assert classify_pr(f, I) == expected


def test_circle_evidence():
    c = classify(ParamCurveSet(CIRCLE, IntervalDesc.real_line()))
    assert (c.p, c.r) == (INF, 1)
    assert c.deficiency.missing == []
    assert not c.unbounded and c.closed_in_Rm
    assert c.transfer.full
    (place,) = c.places.places
    assert place.kind == "complex_pair" and c.places.distinct_points == 2
    assert not c.places.germ_irreducible
    assert c.properness_degree == 2


def test_cusp_on_open_half_line_evidence():
    c = classify(ParamCurveSet(CUSP, P("(0, inf)")))
    affine = [m for m in c.deficiency.missing if not m.point.at_infinity]
    at_inf = [m for m in c.deficiency.missing if m.point.at_infinity]
    assert [m.point.coords for m in affine] == [(Fraction(1), Fraction(0), Fraction(0))]
    assert len(at_inf) == 1 and at_inf[0].fiber_in_closure == [INF]
    assert c.unbounded and not c.closed_in_Rm and c.places.germ_irreducible


def test_node_loop_is_not_missing():
    # the node (0, 0) is hit at t = 1 while t = -1 is an open end
    c = classify(ParamCurveSet(AffineRatMap([T * T - 1, T ** 3 - T]), P("(-1, inf)")))
    assert all(m.point.at_infinity for m in c.deficiency.missing)


def test_domain_and_dimension_errors():
    with pytest.raises(DomainViolation):
        ParamCurveSet(AffineRatMap([RatFunc(UPoly([1]), T), T]), P("(1, 2)"))
    with pytest.raises(WrongDimension):
        ParamCurveSet(AffineRatMap([UPoly([1]), UPoly([2])]), P("(1, 2)"))
    with pytest.raises(WrongDimension):
        ParamCurveSet(CUSP, P("[1, 1]"))


# --------------------------------------------------------------------------
# proper reparametrization on planted composites

def test_planted_properness_degree_and_recomposition():
    rng = random.Random(11)
    for _ in range(10):
        base, inner, f = planted(rng)
        F = to_projective(f)
        assert properness_degree(to_projective(base)) == 1
        assert properness_degree(F) == inner.degree
        Pp = make_proper(F)
        assert Pp.F.compose_ratfunc(Pp.inner) == F
        assert properness_degree(Pp.F) == 1
        assert Pp.inner.degree == inner.degree


def test_implicit_equation_vanishes_exactly():
    rng = random.Random(5)
    for _ in range(8):
        f = random_map(rng, m=2, max_degree=4)
        if any(c.is_constant() for c in f.components):
            continue
        (eq,) = implicitize(f)
        for _ in range(4):
            t0 = Fraction(rng.randint(-9, 9), rng.randint(1, 5))
            pt = f(t0)
            assert eq.eval({s: sp.Rational(v.numerator, v.denominator)
                            for s, v in zip(eq.gens, pt)}) == 0


def test_implicitize_cusp_and_arity():
    (eq,) = implicitize(CUSP)
    assert sp.expand(eq.as_expr() - (sp.Symbol("x1") ** 3 - sp.Symbol("x2") ** 2)) == 0
    with pytest.raises(WrongArity):
        implicitize(AffineRatMap([T]))


# --------------------------------------------------------------------------
# properties


@settings(max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(st.integers(0, 10 ** 6))
def test_invariants_on_random_curves(seed):
    rng = random.Random(seed)
    f = random_map(rng, m=rng.choice([1, 2, 3]), max_degree=5)
    I = random_interval(rng)
    c = classify(ParamCurveSet(f, I))
    assert c.r <= c.p
    assert (c.r, c.p) != (1, 2)
    assert c.p in (1, 2, INF) and c.r in (1, 2)
    if f.m == 1:
        assert (c.p, c.r) == classify_interval(image_of(f, I))


@settings(max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(st.integers(0, 10 ** 6))
def test_graph_over_interval_oracle(seed):
    # the graph of a polynomial P over g(I) is polynomially isomorphic to g(I)
    rng = random.Random(seed)
    g = RatFunc(random_upoly(rng, rng.randint(1, 3)), rng.choice(_DENOMINATORS[:4]))
    Pp = random_upoly(rng, rng.randint(1, 2))
    if g.is_constant() or Pp.degree < 1:
        return
    I = random_interval(rng)
    other = RatFunc(Pp).compose(g)
    f = AffineRatMap([g, other] if rng.random() < 0.5 else [other, g])
    c = classify(ParamCurveSet(f, I))
    assert (c.p, c.r) == classify_interval(image_of(g, I))


@settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(st.integers(0, 10 ** 6))
def test_affine_reparametrization_invariance(seed):
    rng = random.Random(seed)
    f = random_map(rng, m=2, max_degree=4)
    I = random_interval(rng)
    a = Fraction(rng.choice([-3, -2, -1, 1, 2, 3]), rng.randint(1, 2))
    b = Fraction(rng.randint(-3, 3))
    phi = RatFunc(UPoly([b, a]))                  # t = a s + b
    lo = INF if I.lo == -INF else (I.lo - b) / a
    hi = INF if I.hi == INF else (I.hi - b) / a
    if a > 0:
        J = IntervalDesc(-INF if lo == INF else lo, hi, I.lo_closed, I.hi_closed)
    else:
        J = IntervalDesc(-INF if hi == INF else hi, INF if lo == INF else lo, I.hi_closed, I.lo_closed)
    c1 = classify(ParamCurveSet(f, I))
    c2 = classify(ParamCurveSet(f.compose(phi), J))
    assert (c1.p, c1.r) == (c2.p, c2.r)


def test_transfer_and_infinity_on_cusp():
    Pp = make_proper(to_projective(CUSP))
    tr = transfer_interval(Pp, P("(0, inf)"))
    assert tr.polynomial_chart
    pl = infinity_analysis(tr.P)
    assert pl.germ_irreducible and pl.singleton_over_C
    assert len(closure_deficiency(tr.P, tr.J).missing) == 2
