"""Univariate rational functions, affine maps R -> R^m and their projective
extensions CP^1 -> CP^m.

Charts are fixed project-wide: a point ``(x0 : x1 : ... : xm)`` has affine
coordinates ``xi / x0``; a parameter point ``(t0 : t1)`` has affine
coordinate ``t = t1 / t0`` and the point at infinity is ``(0 : 1)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from .algebra import (
    ONE,
    AlgebraicNumber,
    HPoly,
    UPoly,
    isolate_real_roots,
    poly_gcd_many,
    real_to_json,
    sign_at,
    simplify_real,
    upoly_gcd,
    value_at,
)
from .errors import DegenerateInput

INF = math.inf


class RatFunc:
    """Reduced quotient ``num/den`` with ``den`` monic."""

    __slots__ = ("num", "den", "__dict__")

    def __init__(self, num: UPoly, den: UPoly = ONE):
        if den.is_zero():
            raise DegenerateInput("zero denominator")
        if num.is_zero():
            num, den = UPoly(), ONE
        else:
            g = upoly_gcd(num, den)
            if g.degree > 0:
                num, den = num.exact_div(g), den.exact_div(g)
            lc = den.lc
            num, den = num.scale(1 / lc), den.scale(1 / lc)
        self.num = num
        self.den = den

    @classmethod
    def const(cls, c) -> "RatFunc":
        return cls(UPoly([c]))

    @classmethod
    def identity(cls) -> "RatFunc":
        return cls(UPoly([0, 1]))

    @property
    def degree(self) -> int:
        return max(self.num.degree, self.den.degree, 0)

    def is_constant(self) -> bool:
        return self.num.degree <= 0 and self.den.degree == 0

    def is_polynomial(self) -> bool:
        return self.den.degree == 0

    @cached_property
    def real_poles(self) -> list[AlgebraicNumber]:
        if self.den.degree == 0:
            return []
        return [r for r, _ in isolate_real_roots(self.den)]

    @property
    def real_root_free(self) -> bool:
        return not self.real_poles

    def __call__(self, x):
        if isinstance(x, AlgebraicNumber):
            return value_at(self.num, self.den, x)
        d = self.den(x)
        if d == 0:
            raise ZeroDivisionError("pole")
        return self.num(x) / d

    def __eq__(self, other):
        if isinstance(other, RatFunc):
            return self.num == other.num and self.den == other.den
        return NotImplemented

    def __hash__(self):
        return hash((self.num, self.den))

    def _coerce(self, other) -> "RatFunc":
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, UPoly):
            return RatFunc(other)
        return RatFunc.const(other)

    def __add__(self, other):
        o = self._coerce(other)
        return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        return RatFunc(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o.num.is_zero():
            raise ZeroDivisionError("division by the zero function")
        return RatFunc(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, e: int):
        if e >= 0:
            return RatFunc(self.num ** e, self.den ** e)
        return RatFunc.const(1) / RatFunc(self.num ** (-e), self.den ** (-e))

    def derivative_numerator(self) -> UPoly:
        return self.num.derivative() * self.den - self.num * self.den.derivative()

    def compose(self, inner: "RatFunc") -> "RatFunc":
        d = self.degree
        a, b = inner.num, inner.den
        apow = [ONE]
        bpow = [ONE]
        for _ in range(d):
            apow.append(apow[-1] * a)
            bpow.append(bpow[-1] * b)
        num = UPoly()
        den = UPoly()
        for k in range(d + 1):
            term = apow[k] * bpow[d - k]
            num = num + term.scale(self.num[k])
            den = den + term.scale(self.den[k])
        if den.is_zero():
            raise DegenerateInput("denominator vanishes identically after composition")
        return RatFunc(num, den)

    def format(self, var: str = "t") -> str:
        if self.den.degree == 0:
            return self.num.format(var)
        return f"({self.num.format(var)})/({self.den.format(var)})"

    def __repr__(self):
        return f"RatFunc({self.format()})"


@dataclass(frozen=True)
class AffineRatMap:
    components: tuple[RatFunc, ...]

    def __init__(self, components: Iterable):
        comps = tuple(c if isinstance(c, RatFunc) else RatFunc.const(c) if not isinstance(c, UPoly)
                      else RatFunc(c) for c in components)
        if not comps:
            raise DegenerateInput("a map needs at least one component")
        object.__setattr__(self, "components", comps)

    @property
    def m(self) -> int:
        return len(self.components)

    def is_constant(self) -> bool:
        return all(c.is_constant() for c in self.components)

    def is_polynomial(self) -> bool:
        return all(c.is_polynomial() for c in self.components)

    @property
    def real_root_free(self) -> bool:
        return all(c.real_root_free for c in self.components)

    @property
    def degree(self) -> int:
        return max(c.degree for c in self.components)

    def __call__(self, x):
        return tuple(c(x) for c in self.components)

    def compose(self, inner: RatFunc) -> "AffineRatMap":
        return AffineRatMap(c.compose(inner) for c in self.components)

    def format(self, var: str = "t") -> str:
        parts = [c.format(var) for c in self.components]
        return parts[0] if len(parts) == 1 else "(" + ", ".join(parts) + ")"

    def __repr__(self):
        return f"AffineRatMap{self.format()}" if self.m > 1 else f"AffineRatMap({self.format()})"


def compose(f: AffineRatMap, g: RatFunc) -> AffineRatMap:
    return f.compose(g)


# --------------------------------------------------------------------------
# Projective points and maps


def _normalize_coords(coords: Sequence) -> tuple:
    coords = [simplify_real(c) for c in coords]
    for c in coords:
        if isinstance(c, AlgebraicNumber) or c != 0:
            lead = c
            break
    else:
        raise DegenerateInput("all-zero homogeneous coordinates")
    if isinstance(lead, Fraction) and lead == 1:
        return tuple(coords)
    if isinstance(lead, Fraction) and all(isinstance(c, Fraction) for c in coords):
        return tuple(c / lead for c in coords)
    raise TypeError("normalize algebraic coordinates via ProjMap.evaluate")


class ProjPoint:
    """Point of RP^m with the first nonzero coordinate equal to 1."""

    __slots__ = ("coords",)

    def __init__(self, coords: Sequence):
        self.coords = _normalize_coords(coords)

    @classmethod
    def affine(cls, values: Sequence) -> "ProjPoint":
        return cls([Fraction(1), *values])

    @classmethod
    def param(cls, t) -> "ProjPoint":
        """Parameter point of P^1: a finite value or +-inf for ``(0:1)``."""
        if isinstance(t, float) and math.isinf(t):
            return cls([Fraction(0), Fraction(1)])
        return cls([Fraction(1), t])

    @property
    def at_infinity(self) -> bool:
        c = self.coords[0]
        return not isinstance(c, AlgebraicNumber) and c == 0

    def affine_coords(self) -> tuple | None:
        if self.at_infinity:
            return None
        return self.coords[1:]

    def __eq__(self, other):
        if not isinstance(other, ProjPoint) or len(self.coords) != len(other.coords):
            return NotImplemented
        return all(a == b for a, b in zip(self.coords, other.coords))

    __hash__ = None  # type: ignore[assignment]

    def decimals(self, digits: int = 10) -> list[str]:
        return [f"{float(c):.{digits}g}" for c in self.coords]

    def to_json(self) -> dict:
        return {
            "homogeneous": [real_to_json(c) for c in self.coords],
            "at_infinity": self.at_infinity,
            "decimal": self.decimals(),
        }

    def __repr__(self):
        return "(" + " : ".join(str(c) if isinstance(c, Fraction) else repr(c)
                                for c in self.coords) + ")"


@dataclass(frozen=True)
class Mobius:
    """``t -> (a t + b) / (c t + d)``."""

    a: Fraction
    b: Fraction
    c: Fraction
    d: Fraction

    def __post_init__(self):
        for k in ("a", "b", "c", "d"):
            object.__setattr__(self, k, Fraction(getattr(self, k)))
        if self.a * self.d - self.b * self.c == 0:
            raise DegenerateInput("singular Mobius transformation")

    @classmethod
    def identity(cls) -> "Mobius":
        return cls(1, 0, 0, 1)

    @classmethod
    def sending_infinity_to(cls, omega) -> "Mobius":
        """``u -> omega + 1/u``; maps u = infinity to omega (identity for omega = inf)."""
        if isinstance(omega, float) and math.isinf(omega):
            return cls.identity()
        return cls(omega, 1, 1, 0)

    def is_identity(self) -> bool:
        return self.b == 0 and self.c == 0 and self.a == self.d

    def inverse(self) -> "Mobius":
        return Mobius(self.d, -self.b, -self.c, self.a)

    def then(self, other: "Mobius") -> "Mobius":
        """The map ``self o other`` (apply ``other`` first)."""
        return Mobius(self.a * other.a + self.b * other.c, self.a * other.b + self.b * other.d,
                      self.c * other.a + self.d * other.c, self.c * other.b + self.d * other.d)

    def as_ratfunc(self) -> RatFunc:
        return RatFunc(UPoly([self.b, self.a]), UPoly([self.d, self.c]))

    def __call__(self, t):
        """Image of an extended rational ``t`` (``math.inf`` is the point at infinity)."""
        if isinstance(t, float) and math.isinf(t):
            return self.a / self.c if self.c else INF
        den = self.c * t + self.d
        if den == 0:
            return INF
        return (self.a * t + self.b) / den

    def format(self, var: str = "t") -> str:
        return self.as_ratfunc().format(var)


class ProjMap:
    """``(F0 : F1 : ... : Fm)``, binary forms of a common degree without common factor."""

    def __init__(self, components: Sequence[UPoly]):
        polys = list(components)
        if all(p.is_zero() for p in polys):
            raise DegenerateInput("all components vanish")
        g = poly_gcd_many(polys)
        if g.degree > 0:
            polys = [p.exact_div(g) for p in polys]
        # the common degree is the largest one: this drops any common t0 power
        d = max(p.degree for p in polys)
        polys = _content_normalize(polys)
        self.degree = d
        self.components = tuple(HPoly(p, d) for p in polys)

    @property
    def dehomogenized(self) -> tuple[UPoly, ...]:
        return tuple(h.poly for h in self.components)

    @property
    def m(self) -> int:
        return len(self.components) - 1

    def __eq__(self, other):
        return isinstance(other, ProjMap) and self.components == other.components

    def __hash__(self):
        return hash(self.components)

    def is_constant(self) -> bool:
        return self.degree == 0

    def affine(self) -> AffineRatMap:
        p = self.dehomogenized
        if p[0].is_zero():
            raise DegenerateInput("curve lies in the hyperplane at infinity")
        return AffineRatMap(RatFunc(q, p[0]) for q in p[1:])

    def evaluate(self, q) -> ProjPoint:
        """Image of a parameter point given as a ProjPoint on P^1 or an extended real."""
        if isinstance(q, ProjPoint):
            t = INF if q.at_infinity else q.coords[1]
        else:
            t = simplify_real(q)
        p = self.dehomogenized
        if isinstance(t, float) and math.isinf(t):
            return ProjPoint([c[self.degree] for c in p])
        if isinstance(t, Fraction):
            return ProjPoint([c(t) for c in p])
        j = next(j for j, c in enumerate(p) if sign_at(c, t) != 0)
        coords = [Fraction(0)] * j + [Fraction(1)]
        coords += [value_at(c, p[j], t) for c in p[j + 1:]]
        pt = ProjPoint.__new__(ProjPoint)
        pt.coords = tuple(simplify_real(c) for c in coords)
        return pt

    def compose_mobius(self, psi: Mobius) -> "ProjMap":
        d = self.degree
        lin0 = UPoly([psi.d, psi.c])
        lin1 = UPoly([psi.b, psi.a])
        p0 = [ONE]
        p1 = [ONE]
        for _ in range(d):
            p0.append(p0[-1] * lin0)
            p1.append(p1[-1] * lin1)
        out = []
        for h in self.dehomogenized:
            acc = UPoly()
            for k, c in enumerate(h.coeffs):
                if c:
                    acc = acc + (p0[d - k] * p1[k]).scale(c)
            out.append(acc)
        return ProjMap(out)

    def compose_ratfunc(self, inner: RatFunc) -> "ProjMap":
        """``F o inner`` for an inner map of P^1 given affinely."""
        d = self.degree
        a, b = inner.num, inner.den
        apow, bpow = [ONE], [ONE]
        for _ in range(d):
            apow.append(apow[-1] * a)
            bpow.append(bpow[-1] * b)
        out = []
        for h in self.dehomogenized:
            acc = UPoly()
            for k, c in enumerate(h.coeffs):
                if c:
                    acc = acc + (bpow[d - k] * apow[k]).scale(c)
            out.append(acc)
        return ProjMap(out)

    def format(self) -> str:
        return "(" + " : ".join(h.format() for h in self.components) + ")"

    def __repr__(self):
        return f"ProjMap{self.format()}"


def _content_normalize(polys: list[UPoly]) -> list[UPoly]:
    den = 1
    for p in polys:
        for c in p.coeffs:
            den = den * c.denominator // math.gcd(den, c.denominator)
    g = 0
    for p in polys:
        for c in p.coeffs:
            g = math.gcd(g, int(c * den))
    lead = next(p for p in polys if not p.is_zero()).lc
    scale = Fraction(den, g) * (1 if lead > 0 else -1)
    return [p.scale(scale) for p in polys]


def to_projective(f: AffineRatMap) -> ProjMap:
    den = ONE
    for c in f.components:
        den = den * c.den.exact_div(upoly_gcd(den, c.den))
    comps = [den] + [c.num * den.exact_div(c.den) for c in f.components]
    return ProjMap(comps)


def evaluate(F: ProjMap, q) -> ProjPoint:
    return F.evaluate(q)


def compose_mobius(F: ProjMap, psi: Mobius) -> ProjMap:
    return F.compose_mobius(psi)


def limit_at(f: AffineRatMap, endpoint, side: str = "two-sided") -> ProjPoint:
    """Projective limit of ``f`` at a finite point or at +-infinity.

    Regular maps of P^1 have a limit at every point, so ``side`` only matters
    for the affine sign information exposed by :func:`side_limit`.
    """
    if side not in ("left", "right", "two-sided"):
        raise ValueError(f"unknown side {side!r}")
    return to_projective(f).evaluate(endpoint)


def side_limit(r: RatFunc, endpoint, side: str):
    """Extended-real one-sided limit of a univariate rational function.

    ``side`` is ``"left"`` or ``"right"``; at ``+inf`` use ``"left"`` and at
    ``-inf`` use ``"right"``.  Returns a Fraction, AlgebraicNumber or +-inf.
    """
    n, d = r.num, r.den
    endpoint = simplify_real(endpoint)
    if isinstance(endpoint, float) and math.isinf(endpoint):
        dn, dd = max(n.degree, 0), d.degree
        if n.is_zero() or dn < dd:
            return Fraction(0)
        if dn == dd:
            return n.lc / d.lc
        s = (1 if n.lc > 0 else -1) * (1 if d.lc > 0 else -1)
        if endpoint < 0 and (dn - dd) % 2:
            s = -s
        return INF if s > 0 else -INF
    if sign_at(d, endpoint) != 0:
        return r(endpoint)
    k, dk = 0, d
    while sign_at(dk, endpoint) == 0:
        dk = dk.derivative()
        k += 1
    s = sign_at(n, endpoint) * sign_at(dk, endpoint)
    if side == "left" and k % 2:
        s = -s
    return INF if s > 0 else -INF
