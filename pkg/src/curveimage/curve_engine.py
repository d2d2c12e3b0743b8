"""Parametrized curves S = f(I) in R^m: proper reparametrization, places at
infinity, closure deficiency in RP^m and the (p, r) classification.

The normalization of the Zariski closure is realized by a proper
parametrization ``Pi : P^1 -> P^m`` with ``F = Pi o inner``.  The input
interval is pushed through ``inner`` into a chart of the proper parameter
line chosen so that the transferred interval ``J`` avoids the point at
infinity (or, when ``Pi`` meets the hyperplane at infinity in a single real
branch, so that this branch sits at the parameter infinity and ``Pi`` is
polynomial in the chart).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Sequence

import numpy as np
import sympy as sp

from .algebra import (
    UPoly,
    factor_linear_power,
    invert_mod,
    poly_gcd_many,
    rational_between,
    real_roots,
    real_to_json,
    sign_at,
    simplify_real,
    squarefree_decomposition,
    squarefree_part,
    upoly_gcd,
)
from .errors import (
    DegenerateConstant,
    DomainViolation,
    InternalContradiction,
    NotOnCurve,
    NotSingleRealBranchAtInfinity,
    WrongArity,
    WrongDimension,
)
from .interval_engine import IntervalDesc, classify_interval, format_invariant, image_of
from .ratmap import AffineRatMap, Mobius, ProjMap, ProjPoint, RatFunc, side_limit, to_projective
from .symbolic import from_sympy, solve_linear, to_sympy

INF = math.inf
_S, _T = sp.symbols("s t")


def _is_inf(x) -> bool:
    return isinstance(x, float) and math.isinf(x)


# --------------------------------------------------------------------------
# Properness


def tracing_polynomial(F: ProjMap) -> sp.Poly:
    """gcd over i < j of ``F_i(s) F_j(t) - F_j(s) F_i(t)`` (affine chart)."""
    if F.is_constant():
        raise DegenerateConstant("constant parametrization")
    return _tracing_cached(F.dehomogenized)


@lru_cache(maxsize=256)
def _tracing_cached(polys: tuple[UPoly, ...]) -> sp.Poly:
    ps = [to_sympy(p, _S) for p in polys]
    pt = [to_sympy(p, _T) for p in polys]
    g = None
    for i, j in combinations(range(len(polys)), 2):
        c = sp.Poly(sp.expand(ps[i] * pt[j] - ps[j] * pt[i]), _S, _T, domain="QQ")
        if c.is_zero:
            continue
        g = c if g is None else sp.gcd(g, c)
        if g.degree(_S) == 1:
            break
    return g


def properness_degree(F: ProjMap) -> int:
    """Degree of the parametrization onto its image; 1 means proper."""
    return tracing_polynomial(F).degree(_S)


def solve_outer(targets: Sequence[UPoly], inner: RatFunc, degree: int) -> list[UPoly] | None:
    """Dehomogenized forms ``Pi_i`` of degree ``degree // deg(inner)`` with
    ``Pi_i(den, num) == targets[i]``, or None if there are none."""
    k = inner.degree
    if k == 0 or degree % k:
        return None
    e = degree // k
    n, d = inner.num, inner.den
    basis = [n ** j * d ** (e - j) for j in range(e + 1)]
    rows = [[b[r] for b in basis] for r in range(degree + 1)]
    out = []
    for p in targets:
        sol = solve_linear(rows, [p[r] for r in range(degree + 1)])
        if sol is None:
            return None
        out.append(UPoly(sol))
    return out


@dataclass
class ProperParam:
    """``original == F o inner`` with ``F`` proper."""

    F: ProjMap
    inner: RatFunc
    original: ProjMap
    properness_certified: bool = True

    def affine(self) -> AffineRatMap:
        return self.F.affine()

    def to_json(self) -> dict:
        return {
            "proper_map": self.F.format(),
            "proper_map_affine": self.F.affine().format("u") if not self.F.dehomogenized[0].is_zero() else None,
            "inner": self.inner.format("t"),
            "properness_certified": self.properness_certified,
        }


_SPECIALIZATIONS = [Fraction(v) for v in (0, 1, -1, 2, -2, 3, -3, 5, 7, -5)] + \
    [Fraction(1, 2), Fraction(-1, 2), Fraction(1, 3), Fraction(11), Fraction(-13)]


def make_proper(F: ProjMap) -> ProperParam:
    """Factor ``F = Pi o inner`` with ``Pi`` proper, certified by recomposition."""
    if F.m == 1:
        # degree one maps of P^1 are Mobius, so the identity is a proper model
        return ProperParam(ProjMap([UPoly([1]), UPoly([0, 1])]), F.affine().components[0], F, True)
    H = tracing_polynomial(F)
    k = H.degree(_S)
    if k == 1:
        return ProperParam(F, RatFunc.identity(), F, True)
    # coefficients of H in t and specializations of t all span the same pencil
    # {N(s) - c D(s)} of an inner map; any two independent members will do
    Hs = sp.Poly(H.as_expr(), _T)
    pencil = [from_sympy(c.as_expr(), _S) for c in Hs.all_coeffs()]
    for a in _SPECIALIZATIONS:
        pencil.append(from_sympy(H.eval(_T, sp.Rational(a.numerator, a.denominator)).as_expr(), _S))
    best = None
    tried = 0
    for ha, hb in combinations([p for p in pencil if not p.is_zero()], 2):
        inner = RatFunc(ha, hb)
        if inner.degree != k:
            continue
        comps = solve_outer(F.dehomogenized, inner, F.degree)
        if comps is None:
            continue
        Pi = ProjMap(comps)
        if Pi.compose_ratfunc(inner) != F:
            continue
        size = _height(Pi.dehomogenized) + _height((inner.num, inner.den))
        if best is None or size < best[0]:
            best = (size, Pi, inner)
        tried += 1
        if tried >= 6:
            break
    if best is not None and properness_degree(best[1]) == 1:
        return ProperParam(best[1], best[2], F, True)
    raise InternalContradiction(f"could not extract an inner function of degree {k} for {F}")


def _height(polys) -> int:
    return sum(abs(c.numerator).bit_length() + c.denominator.bit_length()
               for p in polys for c in p.coeffs)


def normalize_infinity(P: ProperParam) -> tuple[Mobius, ProperParam]:
    """Move the unique real root of ``Pi_0`` to the parameter infinity, making
    the affine map polynomial."""
    lin = factor_linear_power(P.F.components[0])
    if lin is None:
        raise NotSingleRealBranchAtInfinity(
            f"{P.F.components[0].format()} is not a power of one real linear form")
    a, b, _ = lin
    psi = Mobius.identity() if a == 0 else Mobius.sending_infinity_to(Fraction(b, a))
    P1 = _apply_chart(P, psi)
    inner = P1.inner
    if P1.F.m > 1 and inner.is_polynomial() and inner.degree > 0:
        # rescale so the inner polynomial is monic without constant term
        c0, ck = inner.num[0], inner.num.lc
        if (c0, ck) != (0, 1):
            psi2 = Mobius(ck, c0, Fraction(0), Fraction(1))
            psi = psi.then(psi2)
            P1 = _apply_chart(P1, psi2)
    return psi, P1


def _apply_chart(P: ProperParam, psi: Mobius) -> ProperParam:
    if psi.is_identity():
        return P
    F2 = P.F.compose_mobius(psi)
    inner2 = psi.inverse().as_ratfunc().compose(P.inner)
    if F2.compose_ratfunc(inner2) != P.original:
        raise InternalContradiction("chart change broke the recomposition identity")
    return ProperParam(F2, inner2, P.original, P.properness_certified)


# --------------------------------------------------------------------------
# Places at infinity


@dataclass
class Place:
    """A root of ``Pi_0`` on P^1 with its image on the hyperplane at infinity.

    ``kind`` is ``"real"``, ``"complex_pair"`` (stored once, counts as two
    points) or ``"infinity"`` for the parameter point ``(0:1)``.
    """

    kind: str
    parameter: object
    image: object
    multiplicity: int

    def to_json(self) -> dict:
        if self.kind == "real":
            param = real_to_json(self.parameter)
        elif self.kind == "infinity":
            param = "p_inf"
        else:
            param = {"conjugate_pair": _fmt_pair(self.parameter)}
        if isinstance(self.image, ProjPoint):
            image = self.image.to_json()
        else:
            image = {"conjugate_pair": [_fmt_pair(c) for c in self.image]}
        return {"kind": self.kind, "parameter": param, "image": image,
                "multiplicity": self.multiplicity}


def _clean(x: float) -> float:
    return 0.0 if abs(x) < 1e-12 else x


def _fmt_pair(z: complex) -> str:
    """``a±bi`` for the pair ``{z, conj(z)}``, to 10 significant digits."""
    re, im = _clean(z.real), abs(_clean(z.imag))
    if im == 0:
        return f"{re:.10g}"
    return (f"{re:.10g}" if re else "") + f"±{im:.10g}i"


@dataclass
class PlacesAtInfinity:
    places: list[Place]
    singleton_over_C: bool
    germ_irreducible: bool
    distinct_points: int

    def to_json(self) -> dict:
        return {
            "places": [p.to_json() for p in self.places],
            "singleton_over_C": self.singleton_over_C,
            "germ_irreducible": self.germ_irreducible,
            "distinct_parameters": self.distinct_points,
        }


def _complex_image(polys: Sequence[UPoly], z: complex) -> tuple[complex, ...]:
    vals = [complex(np.polyval(p.to_float_coeffs()[::-1], z)) if not p.is_zero() else 0j for p in polys]
    scale = max(abs(v) for v in vals)
    lead = next(v for v in vals if abs(v) > 1e-9 * scale)
    return tuple(v / lead for v in vals)


def infinity_analysis(P: ProperParam) -> PlacesAtInfinity:
    polys = P.F.dehomogenized
    p0 = polys[0]
    d = P.F.degree
    places: list[Place] = []
    finite_sqf = UPoly([1])
    if p0.degree > 0:
        for factor, mult in squarefree_decomposition(p0):
            finite_sqf = finite_sqf * factor
            reals = real_roots(factor)
            for r in reals:
                places.append(Place("real", simplify_real(r), P.F.evaluate(r), mult))
            n_complex = factor.degree - len(reals)
            if n_complex:
                zs = np.roots(factor.to_float_coeffs()[::-1])
                zs = sorted((z for z in zs if z.imag > 0), key=lambda z: (z.real, z.imag))
                for z in zs[: n_complex // 2]:
                    places.append(Place("complex_pair", complex(z), _complex_image(polys, z), mult))
    if p0.degree < d:
        places.append(Place("infinity", INF, P.F.evaluate(INF), d - max(p0.degree, 0)))

    distinct = finite_sqf.degree + (1 if p0.degree < d else 0)
    singleton = _images_coincide(polys, finite_sqf, P.F.evaluate(INF) if p0.degree < d else None)
    irreducible = singleton and distinct == 1
    return PlacesAtInfinity(places, singleton, irreducible, distinct)


def _images_coincide(polys: Sequence[UPoly], q: UPoly, inf_image: ProjPoint | None) -> bool:
    """Whether every root of ``q`` (and p_inf if given) has the same image.

    Works in Q[t]/(q): the images agree iff, after dividing by a coordinate
    that vanishes at no root, every coordinate is a constant residue.
    """
    if q.degree <= 0:
        return True
    rest = polys[1:]
    pivot = next((i for i, p in enumerate(rest) if upoly_gcd(p, q).degree == 0), None)
    if pivot is None:
        return False
    inv = invert_mod(rest[pivot], q)
    coords = []
    for p in rest:
        r = (p * inv) % q
        if r.degree > 0:
            return False
        coords.append(r[0])
    if inf_image is None:
        return True
    return ProjPoint([Fraction(0), *coords]) == inf_image


# --------------------------------------------------------------------------
# Fibers and closure deficiency


@dataclass(frozen=True)
class ComplexPair:
    approx: complex


def param_preimage(P: ProperParam, q: ProjPoint) -> list:
    """Parameters on P^1 mapping to the rational point ``q``.

    Real parameters come back as exact numbers (``math.inf`` for ``(0:1)``),
    increasing; nonreal ones as :class:`ComplexPair` markers.
    """
    polys = P.F.dehomogenized
    coords = q.coords
    if len(coords) != len(polys):
        raise NotOnCurve("dimension mismatch")
    if not all(isinstance(c, Fraction) for c in coords):
        raise TypeError("fiber computation needs a rational point")
    combos = [polys[i].scale(coords[j]) - polys[j].scale(coords[i])
              for i, j in combinations(range(len(polys)), 2)]
    g = poly_gcd_many(combos)
    if g.is_zero():
        raise DegenerateConstant("constant map")
    out: list = []
    if g.degree > 0:
        reals = real_roots(g)
        out.extend(simplify_real(r) for r in reals)
        sf = squarefree_part(g)
        n_complex = sf.degree - len(reals)
        if n_complex:
            zs = np.roots(sf.to_float_coeffs()[::-1])
            out.extend(ComplexPair(complex(z)) for z in zs if z.imag > 0)
    if P.F.evaluate(INF) == q:
        out.append(INF)
    if not out:
        raise NotOnCurve(f"{q!r} is not on the curve")
    return out


@dataclass
class MissingPoint:
    point: ProjPoint
    fiber_in_closure: list

    def to_json(self) -> dict:
        return {
            "point": self.point.to_json(),
            "fiber_in_closure": ["p_inf" if _is_inf(u) else real_to_json(u) for u in self.fiber_in_closure],
        }


@dataclass
class ClosureDeficiency:
    missing: list[MissingPoint] = field(default_factory=list)

    def points(self) -> list[ProjPoint]:
        return [m.point for m in self.missing]

    def to_json(self) -> list:
        return [m.to_json() for m in self.missing]


def _open_end_params(J: IntervalDesc) -> list:
    cands = []
    if not _is_inf(J.lo) and not J.lo_closed:
        cands.append(J.lo)
    if not _is_inf(J.hi) and not J.hi_closed:
        cands.append(J.hi)
    if not J.is_bounded:
        cands.append(INF)
    return cands


def _real_fiber(P: ProperParam, X: ProjPoint) -> list:
    return [u for u in param_preimage(P, X) if not isinstance(u, ComplexPair)]


def _in_p1_closure(J: IntervalDesc, u) -> bool:
    """Closure in RP^1, where both ends of the line meet at one point."""
    return not J.is_bounded if _is_inf(u) else J.in_closure(u)


def closure_deficiency(P: ProperParam, J: IntervalDesc | None) -> ClosureDeficiency:
    """Points of the closure of ``S = F(J)`` in RP^m that are not in S.

    ``J`` is an interval of the proper parameter in the chart of ``P``;
    ``None`` stands for the whole projective line.
    """
    if J is None:
        return ClosureDeficiency()
    out: list[MissingPoint] = []
    for c in _open_end_params(J):
        X = P.F.evaluate(c)
        if any(m.point == X for m in out):
            continue
        fiber = _real_fiber(P, X)
        if any(J.contains(u) for u in fiber):
            continue
        out.append(MissingPoint(X, [u for u in fiber if _in_p1_closure(J, u)]))
    return ClosureDeficiency(out)


# --------------------------------------------------------------------------
# Transferring the input interval to the proper parameter


def _avoids(inner: RatFunc, omega, I: IntervalDesc) -> bool:
    poly = inner.den if _is_inf(omega) else inner.num - inner.den.scale(omega)
    if poly.is_zero():
        return False
    if poly.degree <= 0:
        return True
    return not any(I.contains(r) for r in real_roots(poly))


def _special_values(inner: RatFunc, I: IntervalDesc) -> list:
    vals = []
    for end, side in ((I.lo, "right"), (I.hi, "left")):
        vals.append(side_limit(inner, end, side))
    for c in real_roots(inner.derivative_numerator()):
        if I.contains(c) and sign_at(inner.den, c) != 0:
            vals.append(inner(c))
    finite = []
    for v in vals:
        v = simplify_real(v)
        if _is_inf(v) or any(v == w for w in finite):
            continue
        finite.append(v)
    finite.sort(key=_Key)
    return finite


class _Key:
    __slots__ = ("v",)

    def __init__(self, v):
        self.v = v

    def __lt__(self, other):
        return self.v < other.v


def _omega_candidates(inner: RatFunc, I: IntervalDesc) -> list:
    finite = _special_values(inner, I)
    cands: list = [INF]
    if not finite:
        return cands + [Fraction(0)]
    cands.append(rational_between(-INF, finite[0]))
    for a, b in zip(finite, finite[1:]):
        cands.append(rational_between(a, b))
    cands.append(rational_between(finite[-1], INF))
    cands.extend(v for v in finite if isinstance(v, Fraction))
    return cands


@dataclass
class Transfer:
    """Proper parametrization in its working chart and the saturated
    parameter set ``J`` with ``S = F(J)``; ``J is None`` means all of RP^1."""

    P: ProperParam
    J: IntervalDesc | None
    chart: Mobius
    polynomial_chart: bool

    @property
    def full(self) -> bool:
        return self.J is None


def _saturate(P: ProperParam, J: IntervalDesc) -> tuple[IntervalDesc, bool]:
    """Close open ends of J whose image is already in F(J); report whether
    the parameter infinity must be added as well."""
    lo_closed, hi_closed = J.lo_closed, J.hi_closed
    if not _is_inf(J.lo) and not lo_closed:
        lo_closed = any(J.contains(u) for u in _real_fiber(P, P.F.evaluate(J.lo)))
    if not _is_inf(J.hi) and not hi_closed:
        hi_closed = any(J.contains(u) for u in _real_fiber(P, P.F.evaluate(J.hi)))
    needs_inf = False
    if not J.is_bounded:
        needs_inf = any(J.contains(u) for u in _real_fiber(P, P.F.evaluate(INF)))
    return IntervalDesc(J.lo, J.hi, lo_closed, hi_closed), needs_inf


def transfer_interval(P: ProperParam, I: IntervalDesc) -> Transfer:
    polynomial_chart = False
    try:
        psi, P1 = normalize_infinity(P)
        polynomial_chart = True
    except NotSingleRealBranchAtInfinity:
        psi = None
        for omega in _omega_candidates(P.inner, I):
            if _avoids(P.inner, omega, I):
                psi = Mobius.sending_infinity_to(omega)
                break
        if psi is None:
            if any(True for _ in real_roots(P.F.dehomogenized[0])) or \
                    P.F.dehomogenized[0].degree < P.F.degree:
                raise InternalContradiction("inner image covers RP^1 but the curve meets infinity")
            return Transfer(P, None, Mobius.identity(), False)
        P1 = _apply_chart(P, psi)
    J = image_of(P1.inner, I, allow_open_end_poles=True)
    J, needs_inf = _saturate(P1, J)
    if needs_inf:
        if J.is_real_line:
            return Transfer(P1, None, psi, False)
        omega2 = rational_between(-INF, J.lo) if J.hi == INF else rational_between(J.hi, INF)
        psi2 = Mobius.sending_infinity_to(omega2)
        P1 = _apply_chart(P1, psi2)
        psi = psi.then(psi2)
        J = image_of(P1.inner, I, allow_open_end_poles=True)
        J, needs_inf = _saturate(P1, J)
        if needs_inf:
            raise InternalContradiction("re-charting did not remove the parameter infinity")
        polynomial_chart = False
    return Transfer(P1, J, psi, polynomial_chart)


# --------------------------------------------------------------------------
# Input model and classification


@dataclass
class ParamCurveSet:
    f: AffineRatMap
    I: IntervalDesc

    def __post_init__(self):
        for c in self.f.components:
            if c.real_poles:
                raise DomainViolation(
                    f"denominator {c.den} has a real root near {c.real_poles[0].decimal()}")
        if self.f.is_constant() or self.I.is_singleton:
            raise WrongDimension("the image is a point (dimension 0)")

    def to_json(self) -> dict:
        return {"map": self.f.format(), "interval": self.I.format()}


@dataclass
class Classification:
    p: object
    r: object
    places: PlacesAtInfinity
    deficiency: ClosureDeficiency
    closed_in_Rm: bool
    unbounded: bool
    transfer: Transfer
    properness_degree: int
    cert_p: object = None
    cert_r: object = None
    notes: list[str] = field(default_factory=list)

    def check_invariants(self) -> None:
        if self.r > self.p:
            raise InternalContradiction(f"r={self.r} exceeds p={self.p}")
        if self.r == 1 and self.p == 2:
            raise InternalContradiction("(r, p) = (1, 2) is impossible")
        if self.p in (1, 2) and not (self.unbounded and self.places.germ_irreducible):
            raise InternalContradiction("finite p for a bounded set or reducible germ")
        if self.p == 1 and not self.closed_in_Rm:
            raise InternalContradiction("p = 1 for a set that is not closed")

    def to_json(self) -> dict:
        t = self.transfer
        return {
            "p": format_invariant(self.p),
            "r": format_invariant(self.r),
            "evidence": {
                "places_at_infinity": self.places.to_json(),
                "closure_deficiency": self.deficiency.to_json(),
                "closed_in_Rm": self.closed_in_Rm,
                "unbounded": self.unbounded,
                "properness_degree": self.properness_degree,
                "proper_parametrization": t.P.to_json(),
                "parameter_set": "RP^1" if t.full else t.J.to_json(),
                "polynomial_chart": t.polynomial_chart,
            },
            "notes": list(self.notes),
        }


def classify(curve: ParamCurveSet, certificates: bool = False) -> Classification:
    F = to_projective(curve.f)
    degree = properness_degree(F)
    P = make_proper(F)
    tr = transfer_interval(P, curve.I)
    places = infinity_analysis(tr.P)
    deficiency = closure_deficiency(tr.P, tr.J)
    at_inf = [m for m in deficiency.missing if m.point.at_infinity]
    unbounded = bool(at_inf)
    closed = len(at_inf) == len(deficiency.missing)

    miss = deficiency.missing
    r = 1 if not miss or (len(miss) == 1 and len(miss[0].fiber_in_closure) == 1) else 2
    if unbounded and places.germ_irreducible:
        p = 1 if closed else 2
    else:
        p = INF
    c = Classification(p, r, places, deficiency, closed, unbounded, tr, degree)
    c.check_invariants()
    if curve.f.m == 1:
        expected = classify_interval(image_of(curve.f, curve.I))
        if expected != (p, r):
            raise InternalContradiction(f"interval cross-check failed: {expected} vs {(p, r)}")
    if certificates:
        from .certify import synthesize
        c.cert_p, c.cert_r = synthesize(c, curve)
    return c


# --------------------------------------------------------------------------
# Implicit equations


def implicit_symbols(m: int) -> tuple[sp.Symbol, ...]:
    return tuple(sp.Symbol(f"x{i}") for i in range(1, m + 1))


def implicitize(f: AffineRatMap) -> list[sp.Poly]:
    """Polynomials vanishing on the affine Zariski closure of ``f(R)``.

    For m = 2 this is the reduced implicit equation; for m > 2 the pairwise
    eliminants cut out a set containing the curve.
    """
    if f.m < 2:
        raise WrongArity("implicitization needs at least two coordinates")
    xs = implicit_symbols(f.m)
    t = sp.Symbol("t")
    gens = [to_sympy(c.num, t) - xs[i] * to_sympy(c.den, t) for i, c in enumerate(f.components)]
    out = []
    for i, j in combinations(range(f.m), 2):
        if f.components[i].is_constant() or f.components[j].is_constant():
            continue
        res = sp.resultant(gens[i], gens[j], t)
        poly = sp.Poly(res, *xs, domain="QQ")
        if poly.is_zero:
            continue
        poly = sp.Poly(sp.sqf_part(poly.as_expr()), *xs, domain="QQ")
        _, poly = poly.primitive() if poly.domain.is_ZZ else poly.clear_denoms(convert=True)
        poly = poly.primitive()[1]
        if poly.LC() < 0:
            poly = -poly
        out.append(poly)
    for i, c in enumerate(f.components):
        if c.is_constant():
            out.append(sp.Poly(xs[i] - sp.Rational(c.num[0].numerator, c.num[0].denominator), *xs,
                               domain="QQ").clear_denoms(convert=True)[1])
    return out
