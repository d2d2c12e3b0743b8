"""Exact image ``g(R^n)`` of a polynomial in at most two essential variables.

The image is an interval whose finite endpoints are generalized critical
values of ``g``: critical values, or values where a fiber escapes to
infinity.  The latter show up as values ``c`` where the discriminant of
``g - c`` (in coordinates where ``g`` is monic in ``y``) drops degree.
Between consecutive candidates the fibration is trivial, so one rational
sample per cell decides the cell; an endpoint is attained iff it is the
value of a real critical point.
"""

from __future__ import annotations

import math
from fractions import Fraction

import mpmath
import sympy as sp

from .algebra import UPoly, rational_between, real_roots, simplify_real
from .errors import WrongDimension
from .interval_engine import IntervalDesc, image_of
from .ratmap import RatFunc
from .symbolic import from_sympy

INF = math.inf
_C = sp.Symbol("c")
_X, _Y = sp.symbols("x y")


def _q(v: Fraction) -> sp.Rational:
    return sp.Rational(v.numerator, v.denominator)


def _upoly(expr, sym) -> UPoly:
    return from_sympy(sp.expand(expr), sym)


def _has_real_root(p: UPoly) -> bool:
    return p.degree > 0 and bool(real_roots(p))


def level_nonempty(G: sp.Expr) -> bool:
    """Whether the plane curve ``G(x, y) = 0`` has a real point (exact except
    for isolated singular points, which are located numerically)."""
    poly = sp.Poly(G, _X, _Y, domain="QQ")
    if poly.is_zero:
        return True
    if poly.is_ground:
        return False
    content = sp.Poly(sp.gcd_list(sp.Poly(G, _Y).all_coeffs()), _X)
    if content.degree() > 0 and _has_real_root(_upoly(content.as_expr(), _X)):
        return True
    G = sp.cancel(G / content.as_expr())
    G = sp.sqf_part(sp.Poly(G, _X, _Y, domain="QQ")).as_expr()
    if sp.Poly(G, _Y).degree() <= 0:
        return _has_real_root(_upoly(G, _X))
    gy = sp.Poly(G, _Y)
    crit = sp.expand(sp.discriminant(G, _Y) * gy.LC()) if gy.degree() > 1 else gy.LC()
    crit_roots = real_roots(_upoly(crit, _X)) if sp.Poly(crit, _X).degree() > 0 else []
    bounds = [-INF] + list(crit_roots) + [INF]
    for lo, hi in zip(bounds, bounds[1:]):
        x0 = rational_between(lo, hi)
        if _has_real_root(_upoly(G.subs(_X, _q(x0)), _Y)):
            return True
    for r in crit_roots:
        r = simplify_real(r)
        if isinstance(r, Fraction):
            if _has_real_root(_upoly(G.subs(_X, _q(r)), _Y)):
                return True
        elif _isolated_point_near(G, r):
            return True
    return False


def _isolated_point_near(G: sp.Expr, alpha) -> bool:
    """Numerically: does ``G(alpha, y)`` have a real root?"""
    alpha.refine_to(Fraction(1, 10 ** 30))
    with mpmath.workdps(60):
        xv = mpmath.mpf(alpha.lo.numerator) / alpha.lo.denominator
        coeffs = [complex(sp.N(c.subs(_X, sp.Float(str(xv), 60)), 50))
                  for c in sp.Poly(G, _Y).all_coeffs()]
        if all(abs(c) < 1e-25 for c in coeffs):
            return True
        while coeffs and abs(coeffs[0]) < 1e-25:
            coeffs.pop(0)
        if len(coeffs) <= 1:
            return False
        roots = mpmath.polyroots(coeffs, maxsteps=200, extraprec=200)
    return any(abs(mpmath.im(z)) < 1e-12 for z in roots)


def _critical_value_polys(g: sp.Expr) -> list[sp.Poly]:
    gx, gy = sp.diff(g, _X), sp.diff(g, _Y)
    basis = sp.groebner([g - _C, gx, gy], _X, _Y, _C, order="lex")
    return [sp.Poly(p, _C) for p in basis.exprs if p.free_symbols <= {_C}]


def _asymptotic_polys(g: sp.Expr) -> list[sp.Poly]:
    out = []
    for a, b in ((2, 0), (0, 3), (-5, 0)):
        h = sp.expand(g.subs({_X: _X + a * _Y, _Y: _Y + b * _X}, simultaneous=True) - _C)
        hy = sp.Poly(h, _Y)
        if hy.degree() <= 0 or sp.Poly(hy.LC(), _X, _C).free_symbols:
            continue
        D = sp.Poly(sp.discriminant(h, _Y), _X)
        lc = sp.Poly(D.LC(), _C)
        if lc.degree() > 0:
            out.append(lc)
    return out


def _real_candidates(polys: list[sp.Poly]) -> list:
    vals: list = []
    for p in polys:
        if p.degree() <= 0:
            continue
        for r in real_roots(_upoly(p.as_expr(), _C)):
            r = simplify_real(r)
            if not any(r == v for v in vals):
                vals.append(r)
    vals.sort(key=_Key)
    return vals


class _Key:
    __slots__ = ("v",)

    def __init__(self, v):
        self.v = v

    def __lt__(self, other):
        return self.v < other.v


def _critical_value_attained(g: sp.Expr, e) -> bool:
    e = simplify_real(e)
    if isinstance(e, Fraction):
        G = sp.expand(g - _q(e))
        return level_nonempty(sp.expand(G ** 2 + sp.diff(g, _X) ** 2 + sp.diff(g, _Y) ** 2))
    # algebraic level: look for a real critical point numerically
    gx, gy = sp.diff(g, _X), sp.diff(g, _Y)
    res = sp.Poly(sp.resultant(gx, gy, _Y), _X)
    if res.is_zero:
        return True
    for r in real_roots(_upoly(res.as_expr(), _X)) if res.degree() > 0 else []:
        xv = float(r)
        ys = sp.Poly(gx.subs(_X, xv), _Y).nroots(n=30) if sp.Poly(gx.subs(_X, xv), _Y).degree() > 0 else []
        for yv in ys:
            if abs(sp.im(yv)) < 1e-9 and abs(float(sp.re(gy.subs({_X: xv, _Y: sp.re(yv)})))) < 1e-6:
                if abs(float(g.subs({_X: xv, _Y: sp.re(yv)})) - float(e)) < 1e-8:
                    return True
    return False


def polynomial_image(g_expr: sp.Expr, gens: tuple[sp.Symbol, ...]) -> tuple[IntervalDesc, list[str]]:
    """``g(R^n)`` for a nonconstant polynomial ``g`` in ``gens``."""
    used = [s for s in gens if s in g_expr.free_symbols]
    notes: list[str] = []
    if len(used) == 0:
        raise WrongDimension("constant generator")
    if len(used) == 1:
        r = RatFunc(from_sympy(g_expr, used[0]))
        return image_of(r, IntervalDesc.real_line()), notes
    if len(used) > 2:
        raise WrongDimension("exact images of polynomials in more than two variables are not supported")
    g = sp.expand(g_expr.subs({used[0]: _X, used[1]: _Y}, simultaneous=True))
    cands = _real_candidates(_critical_value_polys(g) + _asymptotic_polys(g))
    bounds = [-INF] + cands + [INF]
    hit = []
    for i, (lo, hi) in enumerate(zip(bounds, bounds[1:])):
        v = rational_between(lo, hi)
        if level_nonempty(sp.expand(g - _q(v))):
            hit.append(i)
    if not hit:
        raise WrongDimension("constant generator")
    if hit != list(range(hit[0], hit[-1] + 1)):
        raise ArithmeticError("image cells are not contiguous")
    lo, hi = bounds[hit[0]], bounds[hit[-1] + 1]
    lo_closed = not _is_inf(lo) and _critical_value_attained(g, lo)
    hi_closed = not _is_inf(hi) and _critical_value_attained(g, hi)
    if any(not _is_inf(e) and not isinstance(simplify_real(e), Fraction) for e in (lo, hi)):
        notes.append("attainment of an irrational endpoint decided numerically")
    return IntervalDesc(lo, hi, lo_closed, hi_closed), notes


def _is_inf(x) -> bool:
    return isinstance(x, float) and math.isinf(x)
