import random
from fractions import Fraction

import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from curveimage.algebra import (
    AlgebraicNumber,
    T,
    UPoly,
    isolate_real_roots,
    rational_between,
    real_roots,
    resultant,
    squarefree_decomposition,
    upoly_gcd,
    xgcd,
)
from curveimage.mapexpr import MapExpr
from curveimage.symbolic import from_sympy
from helpers import sign_change_roots, sylvester_det

coeff_lists = st.lists(st.integers(-9, 9), min_size=1, max_size=7)


def up(cs):
    return UPoly(cs)


@settings(max_examples=150, deadline=None)
@given(coeff_lists, coeff_lists)
def test_resultant_matches_sylvester_oracle(a, b):
    A, B = up(a), up(b)
    if A.degree < 1 or B.degree < 1:
        return
    assert resultant(A, B) == sylvester_det(list(A.coeffs), list(B.coeffs))


@settings(max_examples=150, deadline=None)
@given(coeff_lists, coeff_lists)
def test_divmod_and_gcd(a, b):
    A, B = up(a), up(b)
    if B.is_zero():
        return
    q, r = divmod(A, B)
    assert q * B + r == A
    assert r.is_zero() or r.degree < B.degree
    g = upoly_gcd(A, B)
    assert (A % g).is_zero() and (B % g).is_zero()
    s, u, v = xgcd(A, B)
    assert u * A + v * B == s


@settings(max_examples=80, deadline=None)
@given(st.lists(st.integers(-12, 12), min_size=1, max_size=5), st.integers(0, 2))
def test_rational_roots_found_exactly(roots, extra):
    p = UPoly.from_roots([Fraction(r, 2) for r in roots]) * (T * T + extra + 1)
    got = real_roots(p)
    assert [g.exact for g in got] == sorted(set(Fraction(r, 2) for r in roots))


def test_root_count_matches_sign_change_oracle():
    rng = random.Random(7)
    for _ in range(40):
        p = UPoly([rng.randint(-20, 20) for _ in range(rng.randint(2, 7))])
        if p.degree < 1:
            continue
        sq = sp.Poly(list(reversed([sp.Rational(c.numerator, c.denominator) for c in p.coeffs])), sp.Symbol("t"))
        if sp.degree(sp.gcd(sq, sq.diff())) > 0:
            continue
        roots = real_roots(p)
        inside = [r for r in roots if -50 < r < 50]
        assert len(inside) == sign_change_roots(list(p.coeffs))
        assert len(roots) == len(sp.real_roots(sq))


def test_irrational_roots_and_refinement():
    (a, mult), (b, _) = isolate_real_roots(T * T - 2)
    assert mult == 1
    assert not a.is_rational and a < 0 < b
    b.refine_to(Fraction(1, 10 ** 12))
    assert abs(float(b) - 2 ** 0.5) < 1e-11
    assert b.decimal() == "1.414213562"
    assert b > Fraction(141, 100) and b < Fraction(142, 100)


def test_algebraic_comparison_between_fields():
    (_, s2), = [(r, r) for r in real_roots(T * T - 2) if r > 0]
    (s3,) = [r for r in real_roots(T * T - 3) if r > 0]
    assert s2 < s3
    assert s2 == [r for r in real_roots(T ** 4 - 4) if r > 0][0]


def test_multiplicities():
    p = (T - 1) ** 3 * (T + 2) * (T * T + 1)
    got = [(r.exact, m) for r, m in isolate_real_roots(p)]
    assert got == [(Fraction(-2), 1), (Fraction(1), 3)]
    parts = squarefree_decomposition(p)
    prod = UPoly([1])
    for f, k in parts:
        prod = prod * f ** k
    assert prod.monic() == p.monic()


def test_rational_between():
    r2 = [r for r in real_roots(T * T - 2) if r > 0][0]
    v = rational_between(Fraction(1), r2)
    assert 1 < v < r2
    assert rational_between(-float("inf"), Fraction(3)) < 3
    assert rational_between(r2, float("inf")) > r2


def test_rational_algebraic_number_json():
    a = AlgebraicNumber.rational(Fraction(-49, 48))
    assert a.to_json() == {"exact": "-49/48", "decimal": a.decimal()}


@settings(max_examples=100, deadline=None)
@given(st.lists(st.fractions(max_denominator=20).filter(lambda f: abs(f) < 100), min_size=1, max_size=6))
def test_format_reparses(cs):
    p = UPoly(cs)
    expr = MapExpr.parse(p.format()).exprs[0]
    assert from_sympy(expr, sp.Symbol("t")) == p


def test_format_sample():
    assert UPoly([0, 0, 1]).format() == "t^2"
