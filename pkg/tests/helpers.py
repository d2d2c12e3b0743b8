"""Independent oracles and random generators shared by the test modules."""

from __future__ import annotations

import math
import random
from fractions import Fraction

import numpy as np

from curveimage.algebra import T, UPoly
from curveimage.interval_engine import IntervalDesc
from curveimage.ratmap import AffineRatMap, RatFunc

INF = math.inf

#: acceptance criterion number -> PASS/FAIL line, filled by test_acceptance
ACCEPTANCE_LINES: dict[int, str] = {}


# --------------------------------------------------------------------------
# Oracles


def sylvester_det(a: list, b: list) -> Fraction:
    """Resultant of two polynomials (coefficients by ascending degree) as the
    determinant of their Sylvester matrix, by fraction Gaussian elimination."""
    a = [Fraction(c) for c in a]
    b = [Fraction(c) for c in b]
    m, n = len(a) - 1, len(b) - 1
    size = m + n
    rows = []
    for i in range(n):
        rows.append([Fraction(0)] * i + a[::-1] + [Fraction(0)] * (size - m - 1 - i))
    for i in range(m):
        rows.append([Fraction(0)] * i + b[::-1] + [Fraction(0)] * (size - n - 1 - i))
    det = Fraction(1)
    for col in range(size):
        piv = next((r for r in range(col, size) if rows[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            rows[col], rows[piv] = rows[piv], rows[col]
            det = -det
        det *= rows[col][col]
        for r in range(col + 1, size):
            f = rows[r][col] / rows[col][col]
            if f:
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[col])]
    return det


def sign_change_roots(coeffs: list, lo: float = -50, hi: float = 50, steps: int = 200_001) -> int:
    """Count sign changes of a polynomial on a fine grid; equals the number of
    distinct real roots in ``[lo, hi]`` for squarefree inputs with roots
    separated by more than the grid step and away from the grid points."""
    xs = np.linspace(lo, hi, steps)
    vals = np.polyval([float(c) for c in reversed(coeffs)], xs)
    s = np.sign(vals)
    s = s[s != 0]
    return int(np.sum(s[1:] != s[:-1]))


def sample_interval(I: IntervalDesc, k: int = 4001) -> np.ndarray:
    """Dense float samples of ``I``, reaching far out on unbounded sides."""
    lo = -1e6 if I.lo == -INF else float(I.lo)
    hi = 1e6 if I.hi == INF else float(I.hi)
    core = np.linspace(max(lo, -50), min(hi, 50), k)
    pts = [core]
    if I.lo == -INF:
        pts.append(-np.logspace(0, 6, k // 4))
    if I.hi == INF:
        pts.append(np.logspace(0, 6, k // 4))
    xs = np.concatenate(pts)
    width = min(hi - lo, 1.0)
    mask = (xs > lo) & (xs < hi)
    xs = xs[mask]
    extra = []
    if I.lo_closed:
        extra.append(lo)
    elif I.lo != -INF:
        extra += [lo + width * 10.0 ** -e for e in range(3, 9)]
    if I.hi_closed:
        extra.append(hi)
    elif I.hi != INF:
        extra += [hi - width * 10.0 ** -e for e in range(3, 9)]
    return np.concatenate([xs, np.array(extra)])


def numeric_image(r: RatFunc, I: IntervalDesc) -> tuple[float, float]:
    """Approximate ``inf`` and ``sup`` of ``r`` on ``I`` by sampling."""
    xs = sample_interval(I)
    num = np.polyval([float(c) for c in reversed(r.num.coeffs)], xs)
    den = np.polyval([float(c) for c in reversed(r.den.coeffs)], xs)
    ys = num / den
    return float(ys.min()), float(ys.max())


# hand-derived (p, r) for each interval shape
INTERVAL_TABLE = {
    "singleton": (1, 1),
    "R": (1, 1),
    "closed half-line": (1, 1),
    "open half-line": (2, 2),
    "closed bounded": (INF, 1),
    "half-open bounded": (INF, 1),
    "open bounded": (INF, 2),
}


# --------------------------------------------------------------------------
# Random inputs


def random_upoly(rng: random.Random, degree: int, bound: int = 3) -> UPoly:
    return UPoly([rng.randint(-bound, bound) for _ in range(degree + 1)])


_DENOMINATORS = [UPoly([1]), T * T + 1, T * T + 2 * T + 2, T * T - T + 1, (T * T + 1) ** 2,
                 (T * T + 1) * (T * T + 4), (T * T + 1) ** 3]


def random_map(rng: random.Random, m: int = 2, max_degree: int = 6) -> AffineRatMap:
    """Random nonconstant map of degree at most ``max_degree`` whose
    denominators have no real roots."""
    while True:
        comps = []
        for _ in range(m):
            den = rng.choice([d for d in _DENOMINATORS if d.degree <= max_degree])
            comps.append(RatFunc(random_upoly(rng, rng.randint(0, max_degree)), den))
        f = AffineRatMap(comps)
        if not f.is_constant() and f.degree <= max_degree:
            return f


def random_interval(rng: random.Random) -> IntervalDesc:
    shape = rng.choice(["R", "left", "right", "bounded"])
    a = Fraction(rng.randint(-6, 6), rng.choice([1, 1, 2, 3]))
    if shape == "R":
        return IntervalDesc.real_line()
    if shape == "left":
        return IntervalDesc(-INF, a, False, rng.random() < 0.5)
    if shape == "right":
        return IntervalDesc(a, INF, rng.random() < 0.5, False)
    b = a + Fraction(rng.randint(1, 8), rng.choice([1, 2]))
    return IntervalDesc(a, b, rng.random() < 0.5, rng.random() < 0.5)


def random_plant(rng: random.Random, n: int = 2, polynomial: bool = True):
    """Random ``(g, h, f)`` with ``f = h o g``: ``g`` of total degree at most
    4 in ``x1..xn``, ``h`` a map in one variable of degree at most 3."""
    import sympy as sp

    from curveimage.luroth import variables

    xs = variables(n)
    while True:
        terms = [sp.Integer(rng.randint(-3, 3)) * sp.Mul(*[x ** rng.randint(0, 2) for x in xs])
                 for _ in range(rng.randint(2, 4))]
        g = sp.expand(sum(terms))
        if len(g.free_symbols) >= min(n, 2) and 1 <= sp.Poly(g, *xs).total_degree() <= 4:
            break
    m = rng.choice([1, 2, 2, 3])
    comps = []
    for _ in range(m):
        num = random_upoly(rng, rng.randint(1, 3))
        den = UPoly([1]) if polynomial else rng.choice([UPoly([1]), T * T + 1])
        comps.append(RatFunc(num, den))
    h = AffineRatMap(comps)
    if h.is_constant():
        return random_plant(rng, n, polynomial)
    u = sp.Symbol("u")
    f = []
    for c in h.components:
        num = sum(sp.Rational(v.numerator, v.denominator) * u ** k for k, v in enumerate(c.num.coeffs))
        den = sum(sp.Rational(v.numerator, v.denominator) * u ** k for k, v in enumerate(c.den.coeffs))
        f.append(sp.cancel((num / den).subs(u, g)))
    return g, h, f


PROPER_BASES = [
    AffineRatMap([T, T ** 3 - T]),
    AffineRatMap([T * T, T ** 3 + T]),
    AffineRatMap([RatFunc(UPoly([1]), T * T + 1), RatFunc(T, T * T + 1)]),
    AffineRatMap([T ** 3, T ** 2 + T]),
    AffineRatMap([T * T + T, T ** 3, T ** 4 - 2]),
]


def planted(rng: random.Random):
    """Random ``(base, inner, base o inner)`` with ``base`` proper and
    ``inner`` of degree 2 or 3 without real poles."""
    base = rng.choice(PROPER_BASES)
    k = rng.randint(2, 3)
    while True:
        num = random_upoly(rng, k)
        den = rng.choice([UPoly([1]), T * T + 1, UPoly([1, 0, 0, 1]) + T if k == 3 else T * T + 3])
        inner = RatFunc(num, den)
        if inner.degree == k and (den.degree == 0 or not inner.real_poles):
            return base, inner, base.compose(inner)
