"""Exact arithmetic kernel.

Rationals are :class:`fractions.Fraction`.  Univariate polynomials are
immutable coefficient tuples (lowest degree first).  Real algebraic numbers
are a squarefree defining polynomial together with an isolating interval
that is refined by bisection whenever a comparison needs it.

The resultant follows the Sylvester-matrix convention with the rows of the
first argument on top, so ``resultant(a, b) == lc(a)**deg(b) * prod(b(r))``
over the roots ``r`` of ``a``.
"""

from __future__ import annotations

import math
import threading
from fractions import Fraction
from typing import Iterable, Sequence

import sympy as sp

from .errors import DegenerateInput

Rat = Fraction

#: degree reported for the zero polynomial; distinct from every real degree
ZERO_DEGREE = -1


def _frac(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, float):
        raise TypeError("floating point coefficients are not exact")
    return Fraction(c)


class UPoly:
    """Univariate polynomial over Q, coefficients indexed by degree."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [_frac(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    @classmethod
    def constant(cls, c) -> "UPoly":
        return cls([c])

    @classmethod
    def variable(cls) -> "UPoly":
        return cls([0, 1])

    @classmethod
    def from_roots(cls, roots: Iterable) -> "UPoly":
        p = cls([1])
        for r in roots:
            p = p * cls([-_frac(r), 1])
        return p

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1 if self.coeffs else ZERO_DEGREE

    @property
    def lc(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def __getitem__(self, k: int) -> Fraction:
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return Fraction(0)

    def __eq__(self, other) -> bool:
        if isinstance(other, UPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == UPoly([other]).coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def _coerce(self, other) -> "UPoly":
        if isinstance(other, UPoly):
            return other
        return UPoly([other])

    def __add__(self, other) -> "UPoly":
        other = self._coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return UPoly(self[k] + other[k] for k in range(n))

    __radd__ = __add__

    def __neg__(self) -> "UPoly":
        return UPoly(-c for c in self.coeffs)

    def __sub__(self, other) -> "UPoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "UPoly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "UPoly":
        other = self._coerce(other)
        if not self.coeffs or not other.coeffs:
            return UPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return UPoly(out)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "UPoly":
        if e < 0:
            raise ValueError("negative exponent")
        result, base = UPoly([1]), self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __divmod__(self, other) -> tuple["UPoly", "UPoly"]:
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        lc = other.lc
        quot = [Fraction(0)] * max(len(rem) - dq, 0)
        for k in range(len(rem) - 1, dq - 1, -1):
            c = rem[k]
            if c:
                c = c / lc
                quot[k - dq] = c
                for j in range(dq + 1):
                    rem[k - dq + j] -= c * other.coeffs[j]
        return UPoly(quot), UPoly(rem[:dq] if dq > 0 else [])

    def __floordiv__(self, other) -> "UPoly":
        return divmod(self, other)[0]

    def __mod__(self, other) -> "UPoly":
        return divmod(self, other)[1]

    def exact_div(self, other) -> "UPoly":
        q, r = divmod(self, other)
        if r:
            raise ArithmeticError(f"{other} does not divide {self}")
        return q

    def __call__(self, x):
        acc = 0 * x if not isinstance(x, int) else Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + (c if isinstance(x, (Fraction, int)) else type(x)(c))
        return acc

    def derivative(self) -> "UPoly":
        return UPoly(k * c for k, c in enumerate(self.coeffs) if k)

    def monic(self) -> "UPoly":
        if self.is_zero():
            return self
        lc = self.lc
        return UPoly(c / lc for c in self.coeffs)

    def scale(self, c) -> "UPoly":
        c = _frac(c)
        return UPoly(x * c for x in self.coeffs)

    def primitive(self) -> "UPoly":
        """Integer primitive part with positive leading coefficient."""
        if self.is_zero():
            return self
        den = 1
        for c in self.coeffs:
            den = den * c.denominator // math.gcd(den, c.denominator)
        ints = [int(c * den) for c in self.coeffs]
        g = 0
        for v in ints:
            g = math.gcd(g, v)
        sgn = 1 if ints[-1] > 0 else -1
        return UPoly(Fraction(sgn * v, g) for v in ints)

    def compose(self, inner: "UPoly") -> "UPoly":
        acc = UPoly()
        for c in reversed(self.coeffs):
            acc = acc * inner + UPoly([c])
        return acc

    def reverse(self, degree: int | None = None) -> "UPoly":
        """Coefficients of ``t**degree * p(1/t)``."""
        d = self.degree if degree is None else degree
        return UPoly(self[d - k] for k in range(d + 1))

    def to_float_coeffs(self) -> list[float]:
        return [float(c) for c in self.coeffs]

    def format(self, var: str = "t") -> str:
        if self.is_zero():
            return "0"
        parts = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if not c:
                continue
            sign = "-" if c < 0 else "+"
            a = -c if c < 0 else c
            if k == 0:
                body = str(a)
            else:
                mono = var if k == 1 else f"{var}^{k}"
                if a == 1:
                    body = mono
                elif a.denominator == 1:
                    body = f"{a}*{mono}"
                else:
                    body = f"({a})*{mono}"
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __str__(self) -> str:
        return self.format()

    def __repr__(self) -> str:
        return f"UPoly({self.format()})"


T = UPoly.variable()
ONE = UPoly([1])


def _require_nonzero(*polys: UPoly) -> None:
    for p in polys:
        if p.is_zero():
            raise DegenerateInput("zero polynomial is not allowed here")


def upoly_gcd(a: UPoly, b: UPoly) -> UPoly:
    """Monic gcd; the zero polynomial is rejected only if both inputs are zero."""
    if a.is_zero() and b.is_zero():
        raise DegenerateInput("gcd of two zero polynomials")
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def xgcd(a: UPoly, b: UPoly) -> tuple[UPoly, UPoly, UPoly]:
    """Return ``(g, s, t)`` with ``s*a + t*b == g`` and ``g`` monic."""
    if a.is_zero() and b.is_zero():
        raise DegenerateInput("gcd of two zero polynomials")
    r0, r1 = a, b
    s0, s1 = ONE, UPoly()
    t0, t1 = UPoly(), ONE
    while not r1.is_zero():
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    lc = r0.lc
    return r0.monic(), s0.scale(1 / lc), t0.scale(1 / lc)


def poly_gcd_many(polys: Iterable[UPoly]) -> UPoly:
    g = UPoly()
    for p in polys:
        if not p.is_zero():
            g = p.monic() if g.is_zero() else upoly_gcd(g, p)
    return g


def invert_mod(a: UPoly, m: UPoly) -> UPoly | None:
    """Inverse of ``a`` in Q[t]/(m), or None when not invertible."""
    g, s, _ = xgcd(a % m, m)
    if g.degree != 0:
        return None
    return s % m


def squarefree_part(p: UPoly) -> UPoly:
    _require_nonzero(p)
    if p.degree == 0:
        return ONE
    return p.exact_div(upoly_gcd(p, p.derivative())).monic()


def squarefree_decomposition(p: UPoly) -> list[tuple[UPoly, int]]:
    """Yun's algorithm: monic squarefree coprime factors with multiplicities."""
    _require_nonzero(p)
    if p.degree == 0:
        return []
    p = p.monic()
    out = []
    dp = p.derivative()
    a = upoly_gcd(p, dp)
    b = p.exact_div(a)
    c = dp.exact_div(a)
    d = c - b.derivative()
    k = 1
    while b.degree > 0:
        a = upoly_gcd(b, d)
        if a.degree > 0:
            out.append((a, k))
        b = b.exact_div(a)
        c = d.exact_div(a)
        d = c - b.derivative()
        k += 1
    return out


def count_distinct_complex_roots(p: UPoly) -> int:
    return squarefree_part(p).degree


def resultant(a: UPoly, b: UPoly) -> Fraction:
    _require_nonzero(a, b)
    m, n = a.degree, b.degree
    if n == 0:
        return b.lc ** m
    if m == 0:
        return a.lc ** n
    r = a % b
    if r.is_zero():
        return Fraction(0)
    sign = -1 if (m * n) % 2 else 1
    return sign * b.lc ** (m - r.degree) * resultant(b, r)


def sylvester_matrix(a: UPoly, b: UPoly) -> list[list[Fraction]]:
    m, n = a.degree, b.degree
    size = m + n
    rows = []
    for i in range(n):
        row = [Fraction(0)] * size
        for k in range(m + 1):
            row[i + k] = a.coeffs[m - k]
        rows.append(row)
    for i in range(m):
        row = [Fraction(0)] * size
        for k in range(n + 1):
            row[i + k] = b.coeffs[n - k]
        rows.append(row)
    return rows


def interpolate(xs: Sequence, ys: Sequence) -> UPoly:
    """Lagrange interpolation through ``(xs[i], ys[i])``."""
    result = UPoly()
    for i, (xi, yi) in enumerate(zip(xs, ys)):
        if not yi:
            continue
        term = UPoly([1])
        denom = Fraction(1)
        for j, xj in enumerate(xs):
            if j != i:
                term = term * UPoly([-_frac(xj), 1])
                denom *= _frac(xi) - _frac(xj)
        result = result + term.scale(_frac(yi) / denom)
    return result


# --------------------------------------------------------------------------
# Sturm sequences and root isolation


def sturm_sequence(p: UPoly) -> list[UPoly]:
    seq = [p, p.derivative()]
    while not seq[-1].is_zero():
        r = -(seq[-2] % seq[-1])
        if r.is_zero():
            break
        seq.append(r)
    return [s for s in seq if not s.is_zero()]


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def _variations(signs: Iterable[int]) -> int:
    count, last = 0, 0
    for s in signs:
        if s:
            if last and s != last:
                count += 1
            last = s
    return count


def _variations_at(seq: Sequence[UPoly], x) -> int:
    if x == math.inf:
        return _variations(_sign(s.lc) for s in seq)
    if x == -math.inf:
        return _variations(_sign(s.lc) * (-1 if s.degree % 2 else 1) for s in seq)
    return _variations(_sign(s(x)) for s in seq)


def sturm_count(seq: Sequence[UPoly], lo, hi) -> int:
    """Number of distinct roots in ``(lo, hi]`` of the squarefree head of ``seq``."""
    return _variations_at(seq, lo) - _variations_at(seq, hi)


def root_bound(p: UPoly) -> Fraction:
    """A power of two strictly exceeding every root modulus (Cauchy bound)."""
    lc = abs(p.lc)
    m = max((abs(c) / lc for c in p.coeffs[:-1]), default=Fraction(0))
    bound = 1 + m
    b = Fraction(1)
    while b <= bound:
        b *= 2
    return b


def _isolate_squarefree(p: UPoly) -> list["AlgebraicNumber"]:
    if p.degree <= 0:
        return []
    if p.degree == 1:
        return [AlgebraicNumber.rational(-p[0] / p[1])]
    seq = sturm_sequence(p)
    b = root_bound(p)
    out: list[AlgebraicNumber] = []
    stack = [(-b, b)]
    while stack:
        lo, hi = stack.pop()
        n = sturm_count(seq, lo, hi)
        if n == 0:
            continue
        if n == 1 and p(lo) != 0:
            if p(hi) == 0:
                out.append(AlgebraicNumber.rational(hi))
            else:
                out.append(AlgebraicNumber(p, lo, hi))
            continue
        mid = (lo + hi) / 2
        stack.append((mid, hi))
        stack.append((lo, mid))
    out.sort()
    return out


def _rational_factors(p: UPoly) -> list[UPoly]:
    """Irreducible factors over Q, so rational roots come out exact."""
    if p.degree <= 1:
        return [p]
    x = sp.Symbol("x")
    expr = sum((sp.Rational(c.numerator, c.denominator) * x ** k for k, c in enumerate(p.coeffs)),
               sp.Integer(0))
    out = []
    for fac, _ in sp.Poly(expr, x, domain="QQ").factor_list()[1]:
        out.append(UPoly([Fraction(int(c.p), int(c.q)) for c in reversed(fac.all_coeffs())]))
    return out


def isolate_real_roots(p: UPoly) -> list[tuple["AlgebraicNumber", int]]:
    """Distinct real roots with multiplicities, increasing."""
    _require_nonzero(p)
    out = []
    for factor, mult in squarefree_decomposition(p):
        for irred in _rational_factors(factor):
            out.extend((r, mult) for r in _isolate_squarefree(irred))
    out.sort(key=_SortKey)
    return out


def real_roots(p: UPoly) -> list["AlgebraicNumber"]:
    return [r for r, _ in isolate_real_roots(p)]


class _SortKey:
    __slots__ = ("item",)

    def __init__(self, item):
        self.item = item[0] if isinstance(item, tuple) else item

    def __lt__(self, other):
        return self.item < other.item


# --------------------------------------------------------------------------
# Real algebraic numbers


class AlgebraicNumber:
    """A real root of a squarefree rational polynomial.

    Either exact (``lo == hi`` is the value) or ``defining`` changes sign on
    the open isolating interval ``(lo, hi)`` and has exactly one root there.
    Refinement mutates the interval under a lock; the represented number
    never changes.
    """

    def __init__(self, defining: UPoly, lo, hi):
        self.defining = defining.primitive()
        self.lo = _frac(lo)
        self.hi = _frac(hi)
        self._lock = threading.Lock()
        if self.lo > self.hi:
            raise ValueError("empty isolating interval")
        if self.lo != self.hi:
            slo, shi = _sign(self.defining(self.lo)), _sign(self.defining(self.hi))
            if slo == 0 or shi == 0 or slo == shi:
                raise ValueError("interval does not isolate a sign change")

    @classmethod
    def rational(cls, value) -> "AlgebraicNumber":
        v = _frac(value)
        return cls(UPoly([-v, 1]), v, v)

    @property
    def is_rational(self) -> bool:
        return self.lo == self.hi

    @property
    def exact(self) -> Fraction | None:
        return self.lo if self.lo == self.hi else None

    def refine(self) -> None:
        with self._lock:
            if self.lo == self.hi:
                return
            mid = (self.lo + self.hi) / 2
            s = _sign(self.defining(mid))
            if s == 0:
                self.lo = self.hi = mid
                self.defining = UPoly([-mid, 1]).primitive()
            elif s == _sign(self.defining(self.lo)):
                self.lo = mid
            else:
                self.hi = mid

    def refine_to(self, width) -> None:
        while self.hi - self.lo > width:
            self.refine()

    def __float__(self) -> float:
        if self.is_rational:
            return float(self.lo)
        scale = max(abs(self.lo), abs(self.hi), Fraction(1))
        self.refine_to(scale * Fraction(1, 2**60))
        return float((self.lo + self.hi) / 2)

    def decimal(self, digits: int = 10) -> str:
        return f"{float(self):.{digits}g}"

    def _cmp_rational(self, c: Fraction) -> int:
        if self.lo == self.hi:
            return _sign(self.lo - c)
        if c <= self.lo:
            return 1
        if c >= self.hi:
            return -1
        s = _sign(self.defining(c))
        if s == 0:
            return 0
        return 1 if s == _sign(self.defining(self.lo)) else -1

    def _cmp(self, other) -> int:
        if isinstance(other, float):
            if math.isinf(other):
                return -1 if other > 0 else 1
            other = Fraction(other)
        if isinstance(other, (int, Fraction)):
            return self._cmp_rational(_frac(other))
        if not isinstance(other, AlgebraicNumber):
            return NotImplemented
        if other.is_rational:
            return self._cmp_rational(other.lo)
        if self.is_rational:
            return -other._cmp_rational(self.lo)
        lo, hi = max(self.lo, other.lo), min(self.hi, other.hi)
        if lo < hi:
            g = upoly_gcd(self.defining, other.defining)
            if g.degree > 0:
                seq = sturm_sequence(g)
                # lo/hi are endpoints of isolating intervals, never roots of g
                if sturm_count(seq, lo, hi) > 0:
                    return 0
        while True:
            if self.hi <= other.lo:
                return -1
            if other.hi <= self.lo:
                return 1
            self.refine()
            other.refine()
            if self.is_rational or other.is_rational:
                return self._cmp(other)

    def __eq__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is NotImplemented else c == 0

    def __lt__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is NotImplemented else c < 0

    def __le__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is NotImplemented else c <= 0

    def __gt__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is NotImplemented else c > 0

    def __ge__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is NotImplemented else c >= 0

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        if self.is_rational:
            return f"AlgebraicNumber({self.lo})"
        return (f"AlgebraicNumber({self.defining}, ({self.lo}, {self.hi}))"
                f" ~ {self.decimal()}")

    def to_json(self) -> dict:
        if self.is_rational:
            return {"exact": str(self.lo), "decimal": self.decimal()}
        return {
            "definer": self.defining.format("t"),
            "interval": [str(self.lo), str(self.hi)],
            "decimal": self.decimal(),
        }


def simplify_real(x):
    """Collapse rational algebraic numbers to Fractions; pass others through."""
    if isinstance(x, AlgebraicNumber) and x.is_rational:
        return x.lo
    if isinstance(x, int):
        return Fraction(x)
    return x


def real_to_float(x) -> float:
    return float(x)


def real_to_json(x):
    x = simplify_real(x)
    if isinstance(x, float):
        return "inf" if x > 0 else "-inf"
    if isinstance(x, Fraction):
        return {"exact": str(x), "decimal": f"{float(x):.10g}"}
    return x.to_json()


def sign_at(q: UPoly, alpha) -> int:
    """Exact sign of ``q`` at a rational or real algebraic point."""
    alpha = simplify_real(alpha)
    if isinstance(alpha, Fraction):
        return _sign(q(alpha))
    if q.is_zero():
        return 0
    g = upoly_gcd(q, alpha.defining)
    if g.degree > 0 and alpha.is_rational is False:
        seq = sturm_sequence(g)
        if sturm_count(seq, alpha.lo, alpha.hi) > 0:
            return 0
    seq = sturm_sequence(squarefree_part(q))
    while sturm_count(seq, alpha.lo, alpha.hi) > 0 or q(alpha.hi) == 0:
        alpha.refine()
        if alpha.is_rational:
            return _sign(q(alpha.lo))
    return _sign(q(alpha.hi))


def _interval_poly(p: UPoly, lo: Fraction, hi: Fraction) -> tuple[Fraction, Fraction]:
    a = b = Fraction(0)
    for c in reversed(p.coeffs):
        prods = (a * lo, a * hi, b * lo, b * hi)
        a, b = min(prods) + c, max(prods) + c
    return a, b


def value_at(num: UPoly, den: UPoly, alpha):
    """Exact value ``num(alpha)/den(alpha)`` as a Fraction or AlgebraicNumber.

    ``den(alpha)`` must be nonzero.
    """
    alpha = simplify_real(alpha)
    if isinstance(alpha, Fraction):
        d = den(alpha)
        if d == 0:
            raise ZeroDivisionError("denominator vanishes at the point")
        return num(alpha) / d
    p = alpha.defining
    num, den = num % p, den % p
    g = upoly_gcd(num, den) if not num.is_zero() else den.monic()
    num, den = num.exact_div(g), den.exact_div(g)
    if num.is_zero():
        return Fraction(0)
    if den.degree == 0 and num.degree == 0:
        return num.lc / den.lc
    # defining polynomial of y = num/den at the roots of p
    # with p monic the resultant is prod q(root) whatever the degree of q
    pm = p.monic()
    k = p.degree
    ys = list(range(k + 1))
    vals = [resultant(pm, num - den.scale(y)) for y in ys]
    res = interpolate(ys, vals)
    cands = real_roots(squarefree_part(res))
    for _ in range(10_000):
        dlo, dhi = _interval_poly(den, alpha.lo, alpha.hi)
        if dlo > 0 or dhi < 0:
            nlo, nhi = _interval_poly(num, alpha.lo, alpha.hi)
            qs = (nlo / dlo, nlo / dhi, nhi / dlo, nhi / dhi)
            vlo, vhi = min(qs), max(qs)
            hits = [c for c in cands if not (c.hi < vlo or c.lo > vhi)]
            if len(hits) == 1:
                return simplify_real(hits[0])
            for c in hits:
                c.refine()
        if alpha.is_rational:
            return value_at(num, den, alpha.lo)
        alpha.refine()
    raise ArithmeticError("value isolation did not converge")


def rational_between(a, b) -> Fraction:
    """A simple rational strictly between extended reals ``a < b``."""
    a, b = simplify_real(a), simplify_real(b)
    if a == -math.inf and b == math.inf:
        return Fraction(0)
    if a == -math.inf:
        return Fraction(math.floor(_upper(b)) - 1)
    if b == math.inf:
        return Fraction(math.ceil(_lower(a)) + 1)
    while True:
        lo, hi = _upper(a), _lower(b)
        if lo < hi:
            return _simplest_between(lo, hi)
        for x in (a, b):
            if isinstance(x, AlgebraicNumber):
                x.refine()


def _upper(x) -> Fraction:
    return x.hi if isinstance(x, AlgebraicNumber) else x


def _lower(x) -> Fraction:
    return x.lo if isinstance(x, AlgebraicNumber) else x


def _simplest_between(lo: Fraction, hi: Fraction) -> Fraction:
    """Rational of smallest denominator in the open interval (lo, hi)."""
    den = 1
    while True:
        n = math.floor(lo * den) + 1
        if Fraction(n, den) < hi:
            return Fraction(n, den)
        den *= 2


# --------------------------------------------------------------------------
# Homogeneous binary forms


class HPoly:
    """Binary form of total degree ``degree`` in (t0, t1), stored as its
    dehomogenization ``p(t) = H(1, t)``."""

    __slots__ = ("poly", "degree")

    def __init__(self, poly: UPoly, degree: int):
        if not poly.is_zero() and poly.degree > degree:
            raise ValueError("total degree below degree of dehomogenization")
        self.poly = poly
        self.degree = degree

    def t0_multiplicity(self) -> int:
        return self.degree - self.poly.degree

    def __call__(self, t0, t1):
        d = self.degree
        return sum((c * t0 ** (d - k) * t1 ** k for k, c in enumerate(self.poly.coeffs)),
                   Fraction(0) * t0)

    def __eq__(self, other):
        return (isinstance(other, HPoly) and self.degree == other.degree
                and self.poly == other.poly)

    def __hash__(self):
        return hash((self.poly, self.degree))

    def format(self) -> str:
        terms = []
        d = self.degree
        for k in range(len(self.poly.coeffs) - 1, -1, -1):
            c = self.poly.coeffs[k]
            if not c:
                continue
            mono = "*".join(x for x in (
                "" if d - k == 0 else ("t0" if d - k == 1 else f"t0^{d - k}"),
                "" if k == 0 else ("t1" if k == 1 else f"t1^{k}")) if x)
            coef = str(c) if c.denominator == 1 else f"({c})"
            if not mono:
                terms.append(coef)
            elif c == 1:
                terms.append(mono)
            elif c == -1:
                terms.append("-" + mono)
            else:
                terms.append(f"{coef}*{mono}")
        return " + ".join(terms).replace("+ -", "- ") if terms else "0"

    def __repr__(self) -> str:
        return f"HPoly({self.format()})"


def factor_linear_power(h: HPoly) -> tuple[int, int, int] | None:
    """Write ``h = c*(a*t1 - b*t0)**e``; return ``(a, b, e)`` or None.

    ``(a, b)`` are coprime integers with ``a > 0`` or ``a == 0, b > 0``.
    """
    if h.poly.is_zero():
        raise DegenerateInput("zero form")
    k = h.poly.degree
    if k == 0:
        return (0, 1, h.degree) if h.degree > 0 else None
    if k != h.degree:
        return None
    sf = squarefree_part(h.poly)
    if sf.degree != 1:
        return None
    root = -sf[0] / sf[1]
    return (root.denominator, root.numerator, h.degree)
