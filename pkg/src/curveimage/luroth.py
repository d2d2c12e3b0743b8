"""Factoring maps with one-dimensional image through the line.

A map ``f : R^n -> R^m`` whose image is a curve generates a field of
transcendence degree one, so by Luroth ``f = h o g`` with ``g`` a rational
function of ``x`` and ``h`` univariate.  For polynomial ``f`` both ``g`` and
``h`` can be taken polynomial; :func:`polynomialize_generator` and
:func:`adjust_h` carry out that refinement.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Sequence

import sympy as sp

from .algebra import factor_linear_power, HPoly, xgcd
from .curve_engine import make_proper, properness_degree, solve_outer
from .errors import (
    DegenerateInput,
    GenericityFailure,
    InternalContradiction,
    NotInSubfield,
    WrongDimension,
)
from .ratmap import AffineRatMap, ProjMap, RatFunc, to_projective
from .symbolic import from_sympy, to_sympy

_U = sp.Symbol("u")
_T = sp.Symbol("t")


def variables(n: int) -> tuple[sp.Symbol, ...]:
    if n == 1:
        return (_T,)
    return tuple(sp.Symbol(f"x{i}") for i in range(1, n + 1))


def _q(c: Fraction) -> sp.Rational:
    return sp.Rational(c.numerator, c.denominator)


def _frac(c) -> Fraction:
    c = sp.Rational(c)
    return Fraction(int(c.p), int(c.q))


# --------------------------------------------------------------------------
# Multivariate polynomials and rational functions


@dataclass(frozen=True)
class MPoly:
    """Polynomial over Q in ``variables(n)``, stored as a sympy ``Poly``."""

    poly: sp.Poly

    @classmethod
    def from_expr(cls, expr, n: int) -> "MPoly":
        return cls(sp.Poly(sp.expand(expr), *variables(n), domain="QQ"))

    @property
    def n(self) -> int:
        return len(self.poly.gens)

    @property
    def expr(self) -> sp.Expr:
        return self.poly.as_expr()

    def is_constant(self) -> bool:
        return self.poly.is_ground

    def total_degree(self) -> int:
        return self.poly.total_degree()

    def format(self) -> str:
        return sp.sstr(self.expr, order="lex").replace("**", "^")

    def __eq__(self, other):
        return isinstance(other, MPoly) and self.poly == other.poly

    def __hash__(self):
        return hash(self.poly)


@dataclass(frozen=True)
class MRatFunc:
    """``num/den`` in lowest terms; ``den`` has positive leading coefficient
    and integer content one is pushed into ``num``."""

    num: MPoly
    den: MPoly

    def __post_init__(self):
        if self.den.poly.is_zero:
            raise DegenerateInput("zero denominator")
        num, den = self.num.poly, self.den.poly
        g = sp.gcd(num, den)
        if not g.is_ground:
            num, den = sp.div(num, g)[0], sp.div(den, g)[0]
        lc = den.LC(order="lex")
        num, den = num.quo_ground(lc), den.quo_ground(lc)
        c, den_int = den.clear_denoms()
        num = num.mul_ground(c)
        object.__setattr__(self, "num", MPoly(num))
        object.__setattr__(self, "den", MPoly(den_int.set_domain("QQ")))

    @classmethod
    def from_expr(cls, expr, n: int) -> "MRatFunc":
        num, den = sp.fraction(sp.cancel(sp.together(sp.sympify(expr))))
        return cls(MPoly.from_expr(num, n), MPoly.from_expr(den, n))

    @property
    def n(self) -> int:
        return self.num.n

    @property
    def expr(self) -> sp.Expr:
        return self.num.expr / self.den.expr

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def as_mpoly(self) -> MPoly:
        if not self.is_polynomial():
            raise ValueError("not a polynomial")
        return MPoly(self.num.poly.quo_ground(self.den.poly.LC()))

    def restrict_to_line(self, a: Sequence[int], b: Sequence[int]) -> RatFunc:
        """``self(a + t b)`` as a univariate rational function."""
        subs = {x: ai + bi * _T for x, ai, bi in zip(variables(self.n), a, b)}
        num = from_sympy(sp.expand(self.num.expr.subs(subs, simultaneous=True)), _T)
        den = from_sympy(sp.expand(self.den.expr.subs(subs, simultaneous=True)), _T)
        if den.is_zero():
            raise DegenerateInput("denominator vanishes on the line")
        return RatFunc(num, den)

    def format(self) -> str:
        if self.is_polynomial():
            return self.as_mpoly().format()
        return f"({self.num.format()})/({self.den.format()})"

    def __eq__(self, other):
        return isinstance(other, MRatFunc) and sp.expand(
            self.num.expr * other.den.expr - other.num.expr * self.den.expr) == 0

    def __hash__(self):
        return hash((self.num, self.den))


def as_mratfuncs(f: Sequence, n: int) -> list[MRatFunc]:
    return [c if isinstance(c, MRatFunc) else MRatFunc.from_expr(c, n) for c in f]


def _compose_expr(h: RatFunc, g_expr) -> sp.Expr:
    return sp.cancel(to_sympy(h.num, _U).subs(_U, g_expr) / to_sympy(h.den, _U).subs(_U, g_expr))


def recompose(h: AffineRatMap, g: MRatFunc) -> list[MRatFunc]:
    return [MRatFunc.from_expr(_compose_expr(c, g.expr), g.n) for c in h.components]


# --------------------------------------------------------------------------
# Dimension of the image


def dim_image(f: Sequence, n: int | None = None, seed: int = 0) -> int:
    """Generic rank of the Jacobian, capped at 2 (2 stands for "at least 2")."""
    if not f:
        raise DegenerateInput("empty map")
    fs = as_mratfuncs(f, n) if n is not None else list(f)
    n = fs[0].n
    xs = variables(n)
    jac = [[sp.cancel(sp.diff(c.expr, x)) for x in xs] for c in fs]
    if all(e == 0 for row in jac for e in row):
        return 0
    rng = random.Random(seed)
    minors = [(i, j, k, l) for i, j in combinations(range(len(fs)), 2)
              for k, l in combinations(range(n), 2)]
    # a nonzero minor at one point certifies rank 2 at once
    for _ in range(3):
        pt = {x: sp.Rational(rng.randint(-97, 97), rng.randint(1, 13)) for x in xs}
        try:
            vals = [[e.subs(pt) for e in row] for row in jac]
        except ZeroDivisionError:  # pragma: no cover - sympy returns zoo instead
            continue
        for i, j, k, l in minors:
            m = vals[i][k] * vals[j][l] - vals[i][l] * vals[j][k]
            if m.is_finite and m != 0:
                return 2
    for i, j, k, l in minors:
        if sp.cancel(jac[i][k] * jac[j][l] - jac[i][l] * jac[j][k]) != 0:
            return 2
    return 1


# --------------------------------------------------------------------------
# Decomposition


@dataclass
class Decomposition:
    g: object
    h: AffineRatMap
    polynomial_certified: bool
    line: tuple = ()
    evidence: dict = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    def g_expr(self) -> sp.Expr:
        return self.g.expr

    def g_format(self) -> str:
        return self.g.format()

    def to_json(self) -> dict:
        return {
            "g": self.g_format(),
            "h": [c.format("u") for c in self.h.components],
            "polynomial_certified": self.polynomial_certified,
            "line": {"a": [str(v) for v in self.line[0]], "b": [str(v) for v in self.line[1]]}
            if self.line else None,
            "evidence": self.evidence,
            "notes": list(self.notes),
        }


def _line_candidates(n: int, rng: random.Random):
    while True:
        a = [rng.randint(-20, 20) for _ in range(n)]
        b = [rng.randint(-20, 20) for _ in range(n)]
        if any(b):
            yield a, b


def _generator_from_proper(fs: Sequence[MRatFunc], h: AffineRatMap) -> MRatFunc | None:
    """``g0`` with ``h(g0) = f`` read off the gcd of ``num_i(u) F_den - F_num den_i(u)``."""
    n = fs[0].n
    xs = variables(n)
    g = None
    for c, fi in zip(h.components, fs):
        if c.is_constant():
            continue
        expr = sp.expand(to_sympy(c.num, _U) * fi.den.expr - fi.num.expr * to_sympy(c.den, _U))
        p = sp.Poly(expr, _U, *xs, domain="QQ")
        g = p if g is None else sp.gcd(g, p)
        if g.degree(_U) <= 1:
            break
    if g is None or g.degree(_U) != 1:
        return None
    coeffs = sp.Poly(g.as_expr(), _U).all_coeffs()
    A, B = coeffs[0], coeffs[1]
    return MRatFunc.from_expr(-B / A, n)


def decompose(f: Sequence, n: int, seed: int = 0, max_tries: int = 50) -> Decomposition:
    """``f = h o g`` with ``h`` proper; polynomial when ``f`` is."""
    fs = as_mratfuncs(f, n)
    dim = dim_image(fs, seed=seed)
    if dim != 1:
        raise WrongDimension(f"image has dimension {'>= 2' if dim == 2 else dim}, expected 1")
    rng = random.Random(seed)
    failures = []
    for a, b in _line_candidates(n, rng):
        if len(failures) >= max_tries:
            break
        try:
            restricted = AffineRatMap(c.restrict_to_line(a, b) for c in fs)
        except DegenerateInput:
            failures.append((a, b, "denominator vanishes on the line"))
            continue
        if restricted.is_constant():
            failures.append((a, b, "map is constant on the line"))
            continue
        P = make_proper(to_projective(restricted))
        if P.F.dehomogenized[0].is_zero():
            failures.append((a, b, "degenerate proper parametrization"))
            continue
        h = P.F.affine()
        g0 = _generator_from_proper(fs, h)
        if g0 is None:
            failures.append((a, b, "gcd is not linear in u"))
            continue
        if recompose(h, g0) != fs:
            failures.append((a, b, "recomposition check failed"))
            continue
        line = (tuple(a), tuple(b))
        if not all(c.is_polynomial() for c in fs):
            return Decomposition(g0, h, False, line, {"properness_degree_on_line": P.F.degree},
                                 ["rational input: generator and h left rational"])
        g, ev = polynomialize_generator(g0, [c.as_mpoly() for c in fs], h)
        h_poly, ev_h = adjust_h(g, [c.as_mpoly() for c in fs])
        if recompose(h_poly, MRatFunc(g, MPoly.from_expr(1, n))) != fs:
            raise InternalContradiction("polynomial recomposition failed")
        return Decomposition(g, h_poly, True, line, {"generator": ev, "h": ev_h})
    raise GenericityFailure(
        "no generic line found; tried " + "; ".join(f"a={a} b={b}: {why}" for a, b, why in failures[:5])
        + (" ..." if len(failures) > 5 else ""))


# --------------------------------------------------------------------------
# Polynomial generator


def polynomialize_generator(g0: MRatFunc, f: Sequence[MPoly], h0: AffineRatMap) -> tuple[MPoly, dict]:
    """Replace the rational generator ``g0`` by a polynomial one.

    Writing a nonconstant ``f_i = R(g0)/S(g0)``, ``S`` has a single real root
    ``xi`` of multiplicity ``s``.  If ``s = 0`` the numerator of ``g0`` is a
    generator, otherwise its denominator is.
    """
    idx = next((i for i, fi in enumerate(f) if not fi.is_constant()), None)
    if idx is None:
        raise DegenerateInput("all components are constant")
    R, S = h0.components[idx].num, h0.components[idx].den
    r, s = R.degree, S.degree
    P, Q = g0.num, g0.den
    evidence = {"component": idx, "R": R.format("u"), "S": S.format("u"), "r": r, "s": s}
    if s == 0:
        if not Q.is_constant():
            raise InternalContradiction("S is constant but g0 has a nonconstant denominator")
        g = MPoly(P.poly.quo_ground(Q.poly.LC()))
        evidence["case"] = "s = 0: g is the numerator of g0"
        return _normalize(g), evidence
    lin = factor_linear_power(HPoly(S, s))
    if lin is None:
        raise InternalContradiction(f"S = {S.format('u')} is not a power of a real linear form")
    a, b, _ = lin
    xi = Fraction(b, a)
    if s < r:
        raise InternalContradiction(f"s = {s} < r = {r}")
    gamma = sp.expand(P.expr - _q(xi) * Q.expr)
    if sp.Poly(gamma, *P.poly.gens).total_degree() > 0:
        raise InternalContradiction("P - xi*Q is not constant")
    evidence.update({"case": "s > 0: g is the denominator of g0", "xi": str(xi),
                     "gamma": str(gamma)})
    return _normalize(Q), evidence


def _normalize(g: MPoly) -> MPoly:
    """No constant term, integer content one, positive leading coefficient
    (lex); any generator can be moved there by an affine change of ``u``."""
    p = g.poly - g.poly.coeff_monomial(1)
    _, p = p.clear_denoms()
    p = p.primitive()[1]
    if p.LC(order="lex") < 0:
        p = -p
    return MPoly(p.set_domain("QQ"))


def adjust_h(g: MPoly, f: Sequence[MPoly], seed: int = 0) -> tuple[AffineRatMap, list[dict]]:
    """Polynomials ``h_i`` with ``h_i(g) = f_i``.

    Each ``f_i = P_i(g)/Q_i(g)`` is found along a line where ``g`` is
    nonconstant; the Bezout identity ``A P_i + B Q_i = 1`` witnesses
    coprimality, and ``Q_i`` must then be constant.
    """
    if g.is_constant():
        raise DegenerateInput("constant generator")
    n = g.n
    gR = MRatFunc(g, MPoly.from_expr(1, n))
    rng = random.Random(seed)
    a, b = next((a, b) for a, b in _line_candidates(n, rng)
                if not gR.restrict_to_line(a, b).is_constant())
    G = gR.restrict_to_line(a, b)
    hs, evidence = [], []
    for fi in f:
        Fi = MRatFunc(fi, MPoly.from_expr(1, n)).restrict_to_line(a, b)
        if Fi.is_constant():
            hs.append(RatFunc(Fi.num))
            evidence.append({"P": Fi.num.format("u"), "Q": "1", "bezout": ["0", "1"]})
            continue
        target = ProjMap([Fi.den, Fi.num])
        comps = solve_outer(target.dehomogenized, G, target.degree)
        if comps is None:
            raise NotInSubfield(f"{fi.format()} is not a rational function of {g.format()}")
        Q_i, P_i = comps
        _, A, B = xgcd(P_i, Q_i)
        if Q_i.degree > 0:
            if (A * P_i + B * Q_i).degree > 0:
                raise NotInSubfield("P_i and Q_i are not coprime")
            raise InternalContradiction(f"Q_i = {Q_i.format('u')} is not constant")
        h_i = RatFunc(P_i, Q_i)
        if sp.expand(_compose_expr(h_i, g.expr) - fi.expr) != 0:
            raise NotInSubfield(f"{fi.format()} is not a polynomial in {g.format()}")
        hs.append(h_i)
        evidence.append({"P": P_i.format("u"), "Q": Q_i.format("u"),
                         "bezout": [A.format("u"), B.format("u")]})
    return AffineRatMap(hs), evidence


def generators_related(g1: MRatFunc, g2: MRatFunc) -> bool:
    """Whether ``g2 = (a g1 + b)/(c g1 + d)`` with ``ad - bc != 0``."""
    xs = variables(g1.n)
    a, b, c, d = sp.symbols("a b c d")
    expr = sp.expand(g2.num.expr * (c * g1.num.expr + d * g1.den.expr)
                     - g2.den.expr * (a * g1.num.expr + b * g1.den.expr))
    eqs = sp.Poly(expr, *xs).coeffs()
    for sol in sp.linsolve(eqs, [a, b, c, d]):
        det = sp.expand(sol[0] * sol[3] - sol[1] * sol[2])
        return det != 0
    return False


def proper_check(h: AffineRatMap) -> bool:
    if h.m == 1:
        return h.components[0].degree == 1
    return properness_degree(to_projective(h)) == 1
