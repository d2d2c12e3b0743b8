"""Intervals of R: exact images under univariate regular maps, the (p, r)
classification, and explicit certificate maps onto each interval shape."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction

import sympy as sp

from .algebra import real_roots, real_to_json, simplify_real
from .certificate import CertificateMap, source_symbols
from .errors import DegenerateConstant, DegenerateInput, DomainViolation, NotAPolynomialImage
from .ratmap import AffineRatMap, RatFunc, side_limit

INF = math.inf

#: invariant values are the ints 1, 2 and ``math.inf``


def format_invariant(v) -> str:
    return "inf" if v == INF else str(int(v))


def _is_inf(x) -> bool:
    return isinstance(x, float) and math.isinf(x)


@dataclass(frozen=True)
class IntervalDesc:
    lo: object
    hi: object
    lo_closed: bool = False
    hi_closed: bool = False

    def __post_init__(self):
        lo, hi = simplify_real(self.lo), simplify_real(self.hi)
        if isinstance(lo, float) and not math.isinf(lo) or isinstance(hi, float) and not math.isinf(hi):
            raise TypeError("finite endpoints must be exact")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)
        if lo == INF or hi == -INF:
            raise DegenerateInput("empty interval")
        if _is_inf(lo):
            object.__setattr__(self, "lo_closed", False)
        if _is_inf(hi):
            object.__setattr__(self, "hi_closed", False)
        if hi < lo:
            raise DegenerateInput("empty interval: hi < lo")
        if not _is_inf(lo) and lo == hi and not (self.lo_closed and self.hi_closed):
            raise DegenerateInput("empty interval")

    @classmethod
    def real_line(cls) -> "IntervalDesc":
        return cls(-INF, INF)

    @classmethod
    def closed(cls, lo, hi) -> "IntervalDesc":
        return cls(lo, hi, not _is_inf(lo), not _is_inf(hi))

    @classmethod
    def open(cls, lo, hi) -> "IntervalDesc":
        return cls(lo, hi, False, False)

    @classmethod
    def singleton(cls, v) -> "IntervalDesc":
        return cls(v, v, True, True)

    @classmethod
    def parse(cls, text: str) -> "IntervalDesc":
        m = re.fullmatch(r"\s*([\[\(])\s*([^,]+?)\s*,\s*([^,]+?)\s*([\]\)])\s*", text)
        if not m:
            raise DegenerateInput(f"cannot parse interval {text!r}")
        lb, a, b, rb = m.groups()

        def endpoint(s: str):
            s = s.replace(" ", "")
            if s in ("inf", "+inf", "oo", "+oo"):
                return INF
            if s in ("-inf", "-oo"):
                return -INF
            try:
                return Fraction(s)
            except (ValueError, ZeroDivisionError):
                raise DegenerateInput(f"bad interval endpoint {s!r}") from None

        lo, hi = endpoint(a), endpoint(b)
        if (lo == -INF and lb == "[") or (hi == INF and rb == "]"):
            raise DegenerateInput("an infinite endpoint must be open")
        return cls(lo, hi, lb == "[", rb == "]")

    # --- shape predicates
    @property
    def is_singleton(self) -> bool:
        return not _is_inf(self.lo) and self.lo == self.hi

    @property
    def is_bounded(self) -> bool:
        return not _is_inf(self.lo) and not _is_inf(self.hi)

    @property
    def is_real_line(self) -> bool:
        return self.lo == -INF and self.hi == INF

    @property
    def is_open(self) -> bool:
        return not self.lo_closed and not self.hi_closed

    @property
    def is_closed(self) -> bool:
        return (self.lo_closed or _is_inf(self.lo)) and (self.hi_closed or _is_inf(self.hi))

    def contains(self, x) -> bool:
        x = simplify_real(x)
        if _is_inf(x):
            return False
        if self.lo_closed:
            if x < self.lo:
                return False
        elif not (x > self.lo):
            return False
        if self.hi_closed:
            return not (x > self.hi)
        return x < self.hi

    def in_closure(self, x) -> bool:
        x = simplify_real(x)
        if _is_inf(x):
            return (x > 0 and self.hi == INF) or (x < 0 and self.lo == -INF)
        return not (x < self.lo) and not (x > self.hi)

    def shape(self) -> str:
        if self.is_singleton:
            return "singleton"
        if self.is_real_line:
            return "R"
        if not self.is_bounded:
            finite_closed = self.lo_closed if self.hi == INF else self.hi_closed
            return "closed half-line" if finite_closed else "open half-line"
        return {(True, True): "closed bounded", (False, False): "open bounded"}.get(
            (self.lo_closed, self.hi_closed), "half-open bounded")

    def format(self) -> str:
        def ep(x):
            if _is_inf(x):
                return "inf" if x > 0 else "-inf"
            if isinstance(x, Fraction):
                return str(x)
            return x.decimal()
        return (("[" if self.lo_closed else "(") + ep(self.lo) + ", " + ep(self.hi)
                + ("]" if self.hi_closed else ")"))

    def __str__(self):
        return self.format()

    def to_json(self) -> dict:
        return {
            "text": self.format(),
            "lo": real_to_json(self.lo),
            "hi": real_to_json(self.hi),
            "lo_closed": self.lo_closed,
            "hi_closed": self.hi_closed,
        }

    def __eq__(self, other):
        if not isinstance(other, IntervalDesc):
            return NotImplemented
        return (self.lo_closed == other.lo_closed and self.hi_closed == other.hi_closed
                and self.lo == other.lo and self.hi == other.hi)

    __hash__ = None  # type: ignore[assignment]


def classify_interval(I: IntervalDesc) -> tuple:
    """``(p, r)`` of an interval; singletons get (1, 1) via constant maps."""
    if I.is_singleton or I.is_real_line:
        return 1, 1
    if not I.is_bounded:
        return (1, 1) if I.is_closed else (2, 2)
    return INF, (2 if I.is_open else 1)


def _as_ratfunc(f) -> RatFunc:
    if isinstance(f, RatFunc):
        return f
    if isinstance(f, AffineRatMap):
        if f.m != 1:
            raise DegenerateInput("image_of needs a map to R")
        return f.components[0]
    raise TypeError(f"not a univariate map: {f!r}")


def image_of(f, I: IntervalDesc, allow_open_end_poles: bool = False) -> IntervalDesc:
    """Exact image ``f(I)`` of a univariate rational function.

    With ``allow_open_end_poles`` a pole sitting on an open finite end of
    ``I`` is tolerated; the image is then unbounded on that side.
    """
    r = _as_ratfunc(f)
    if I.is_singleton:
        if any(p == I.lo for p in r.real_poles):
            raise DomainViolation(f"pole at {I.lo}")
        return IntervalDesc.singleton(r(I.lo))
    if r.is_constant():
        v = r.num[0]
        raise DegenerateConstant(f"constant map with value {v}", IntervalDesc.singleton(v))
    for pole in r.real_poles:
        if I.contains(pole):
            raise DomainViolation(f"denominator root {pole!r} lies in {I}")
        if I.in_closure(pole) and not allow_open_end_poles:
            raise DomainViolation(f"denominator root {pole!r} lies in the closure of {I}")

    attained = []
    limits = []
    for c in real_roots(r.derivative_numerator()):
        if I.contains(c):
            attained.append(r(c))
    for end, closed, side in ((I.lo, I.lo_closed, "right"), (I.hi, I.hi_closed, "left")):
        if closed:
            attained.append(r(end))
        else:
            limits.append(side_limit(r, end, side))

    cands = attained + limits
    lo = min(cands)
    hi = max(cands)
    lo_closed = any(a == lo for a in attained)
    hi_closed = any(a == hi for a in attained)
    return IntervalDesc(lo, hi, lo_closed and not _is_inf(lo), hi_closed and not _is_inf(hi))


# --------------------------------------------------------------------------
# Certificates


def _template_q(x, y):
    return (x * y - 1) ** 2 + x ** 2


def certificate_interval(I: IntervalDesc, kind: str) -> CertificateMap:
    """An explicit map from R^n onto ``I`` with n the requested invariant."""
    if kind not in ("polynomial", "regular"):
        raise ValueError(f"unknown kind {kind!r}")
    p, r = classify_interval(I)
    n = p if kind == "polynomial" else r
    if n == INF:
        raise NotAPolynomialImage(f"{I} is bounded and not a point")
    for e in (I.lo, I.hi):
        if not _is_inf(e) and not isinstance(e, Fraction):
            raise DegenerateInput(f"certificate templates need rational endpoints, got {e!r}")

    lo = None if _is_inf(I.lo) else sp.Rational(I.lo.numerator, I.lo.denominator)
    hi = None if _is_inf(I.hi) else sp.Rational(I.hi.numerator, I.hi.denominator)
    shape = I.shape()
    if n == 1:
        (t,) = source_symbols(1)
        if shape == "singleton":
            expr, how = lo + 0 * t, "constant map"
        elif shape == "R":
            expr, how = t, "identity"
        elif shape == "closed half-line":
            expr, how = (lo + t ** 2, "a + t^2") if hi is None else (hi - t ** 2, "b - t^2")
        elif shape == "closed bounded":
            expr, how = lo + (hi - lo) * (t / (1 + t ** 2) + sp.Rational(1, 2)), \
                "affine rescale of t/(1+t^2) + 1/2 onto [0,1]"
        elif shape == "half-open bounded":
            s = t ** 2 / (1 + t ** 2)
            if I.lo_closed:
                expr, how = lo + (hi - lo) * s, "affine rescale of t^2/(1+t^2) onto [0,1)"
            else:
                expr, how = hi - (hi - lo) * s, "affine rescale of t^2/(1+t^2) onto [0,1)"
        else:  # pragma: no cover - excluded by classify_interval
            raise AssertionError(shape)
    else:
        x, y = source_symbols(2)
        q = _template_q(x, y)
        if shape == "open half-line":
            expr, how = (lo + q, "a + ((x1*x2-1)^2 + x1^2)") if hi is None else \
                (hi - q, "b - ((x1*x2-1)^2 + x1^2)")
        else:
            expr, how = lo + (hi - lo) * q / (1 + q), "affine rescale of q/(1+q), q=(x1*x2-1)^2+x1^2"
    return CertificateMap(n, (expr,), kind, claim=I,
                          witnesses=("p" if kind == "polynomial" else "r", n), construction=how)
