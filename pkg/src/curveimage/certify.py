"""Certificate synthesis for classified curves and numeric verification of
certificates against their target sets."""

from __future__ import annotations

import math
from bisect import bisect_left
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
import sympy as sp

from .certificate import T_SYM, CertificateMap
from .curve_engine import (
    Classification,
    ParamCurveSet,
    ProperParam,
    implicitize,
    make_proper,
    transfer_interval,
)
from .errors import DegenerateInput, NotAPolynomialImage
from .interval_engine import IntervalDesc, certificate_interval, classify_interval, image_of
from .ratmap import AffineRatMap, ProjMap, RatFunc, to_projective
from .mvimage import _X as mv_x, _Y as mv_y, level_nonempty
from .symbolic import to_sympy

INF = math.inf


def _is_inf(x) -> bool:
    return isinstance(x, float) and math.isinf(x)


# --------------------------------------------------------------------------
# Synthesis


def _homogeneous_substitute(F: ProjMap, t0, t1) -> list[sp.Expr]:
    """Affine components ``F_i(t0, t1) / F_0(t0, t1)`` as sympy expressions."""
    d = F.degree
    forms = []
    for h in F.dehomogenized:
        forms.append(sp.Add(*[sp.Rational(c.numerator, c.denominator) * t0 ** (d - k) * t1 ** k
                              for k, c in enumerate(h.coeffs) if c]))
    return [sp.factor_terms(sp.cancel(f / forms[0])) for f in forms[1:]]


def compose_with_template(F: ProjMap, template: CertificateMap) -> tuple:
    """``F`` in its affine chart, evaluated at the template expression."""
    u = sp.Dummy("u")
    one = sp.Integer(1)
    return tuple(e.subs(u, template.components[0]) for e in _homogeneous_substitute(F, one, u))


def _map_exprs(f: AffineRatMap) -> tuple:
    return tuple(to_sympy(c.num, T_SYM) / to_sympy(c.den, T_SYM) for c in f.components)


def _compose_map(f: AffineRatMap, inner: sp.Expr) -> tuple:
    return tuple(sp.factor_terms(sp.cancel(e.subs(T_SYM, inner))) for e in _map_exprs(f))


#: parametrization of RP^1 by R through the circle: inverse stereographic
#: projection, complex squaring, then the quotient (x, y) -> (x : y)
CIRCLE_X = (T_SYM ** 2 - 1) ** 2 - 4 * T_SYM ** 2
CIRCLE_Y = 4 * T_SYM * (T_SYM ** 2 - 1)


def _witness(kind: str) -> str:
    return "p" if kind == "polynomial" else "r"


def certificate_for(c: Classification, curve: ParamCurveSet, kind: str) -> CertificateMap:
    """Certificate realizing ``p`` (kind polynomial) or ``r`` (kind regular)."""
    n = c.p if kind == "polynomial" else c.r
    if n == INF:
        raise NotAPolynomialImage("p is infinite: the set is not a polynomial image")
    w = (_witness(kind), n)
    f, I = curve.f, curve.I
    if I.is_real_line and n == 1 and (kind == "regular" or f.is_polynomial()):
        return CertificateMap(1, _map_exprs(f), kind, claim=curve, witnesses=w,
                              construction="the input map itself")
    tr = c.transfer
    if tr.J is None:
        if kind == "polynomial":
            raise NotAPolynomialImage("a compact curve is not a polynomial image")
        comps = _homogeneous_substitute(tr.P.F, CIRCLE_X, CIRCLE_Y)
        return CertificateMap(1, tuple(comps), kind, claim=curve, witnesses=w,
                              construction="proper parametrization on RP^1 precomposed with "
                                           "t -> ((t^2-1)^2-4t^2 : 4t(t^2-1))")
    notes = []
    if kind == "polynomial" and not tr.polynomial_chart:
        notes.append("proper chart is not polynomial")
    elif classify_interval(tr.J)[0 if kind == "polynomial" else 1] != n:
        notes.append(f"parameter interval {tr.J} does not witness {w[0]} = {n}")
    else:
        try:
            template = certificate_interval(tr.J, kind)
            comps = compose_with_template(tr.P.F, template)
            return CertificateMap(template.source_dim, comps, kind, claim=curve, witnesses=w,
                                  construction=f"proper parametrization o ({template.construction}) "
                                               f"onto {tr.J}")
        except DegenerateInput as exc:
            notes.append(str(exc))
    # fall back to the input map precomposed with a certificate for I
    pI, rI = classify_interval(I)
    if (pI if kind == "polynomial" else rI) == n and (kind == "regular" or f.is_polynomial()):
        template = certificate_interval(I, kind)
        comps = _compose_map(f, template.components[0])
        return CertificateMap(template.source_dim, comps, kind, claim=curve, witnesses=w,
                              construction=f"input map o ({template.construction}) onto {I}",
                              notes=notes)
    raise NotAPolynomialImage("no certificate construction applies: " + "; ".join(notes))


def synthesize(c: Classification, curve: ParamCurveSet) -> tuple:
    """``(cert_p, cert_r)``; ``cert_p`` is None when p is infinite.  A
    construction that does not apply is reported in ``c.notes``."""
    out = []
    for kind, n in (("polynomial", c.p), ("regular", c.r)):
        if n == INF:
            out.append(None)
            continue
        try:
            out.append(certificate_for(c, curve, kind))
        except NotAPolynomialImage as exc:
            c.notes.append(f"{kind} certificate omitted: {exc}")
            out.append(None)
    return tuple(out)


# --------------------------------------------------------------------------
# Verification


@dataclass
class VerificationReport:
    membership_failures: int
    worst_residual: float
    coverage_gaps: list
    sample_counts: dict
    tolerances: dict
    notes: list = field(default_factory=list)

    @property
    def verdict(self) -> str:
        return "pass" if self.membership_failures == 0 and not self.coverage_gaps else "fail"

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "membership_failures": self.membership_failures,
            "worst_residual": float(f"{self.worst_residual:.6g}"),
            "coverage_gaps": [[round(a, 6), round(b, 6)] for a, b in self.coverage_gaps[:20]],
            "coverage_gap_count": len(self.coverage_gaps),
            "sample_counts": dict(self.sample_counts),
            "tolerances": dict(self.tolerances),
            "notes": list(self.notes),
        }


def _source_paths(dim: int, samples: int, rng: np.random.Generator) -> tuple[list, np.ndarray]:
    """Continuous source paths (for coverage) and scattered points (membership)."""
    if dim == 1:
        k = max(samples // 5, 10)
        logs = np.logspace(-6, 6, k)
        base = np.concatenate([[0.0], np.linspace(-10, 10, k), logs, -logs])
        extra = np.concatenate([rng.normal(0, 3, k), np.clip(rng.standard_cauchy(k), -1e6, 1e6)])
        path = np.unique(np.concatenate([base, extra]))
        return [path[:, None]], np.empty((0, 1))
    k = max(int(math.sqrt(samples / 4)), 8)
    half = k // 2
    logs = np.logspace(-4, 4, 2 * half + 1)
    grid = np.unique(np.concatenate([[0.0], logs, -logs, np.linspace(-3, 3, half)]))
    paths = []
    lines = grid[:: max(len(grid) // k, 1)]
    for v in lines:
        const = np.full_like(grid, v)
        paths.append(np.stack([const, grid], axis=1))
        paths.append(np.stack([grid, const], axis=1))
    scattered = np.concatenate([rng.normal(0, 2, (samples // 4, 2)),
                                np.clip(rng.standard_cauchy((samples // 4, 2)), -1e4, 1e4)])
    return paths, scattered


def _evaluate(cert: CertificateMap, pts: np.ndarray) -> np.ndarray:
    fn = cert.numeric()
    with np.errstate(all="ignore"):
        vals = fn(*[pts[:, i] for i in range(pts.shape[1])])
    cols = [np.broadcast_to(np.asarray(v, dtype=float), (len(pts),)) for v in vals]
    return np.stack(cols, axis=1)


class _IntervalTarget:
    def __init__(self, I: IntervalDesc):
        self.I = I
        self.lo = -INF if _is_inf(I.lo) else float(I.lo)
        self.hi = INF if _is_inf(I.hi) else float(I.hi)

    def membership(self, ys: np.ndarray, tol: float):
        y = ys[:, 0]
        below = np.where(np.isfinite(self.lo), (self.lo - y) / (1 + abs(self.lo if np.isfinite(self.lo) else 0)), 0)
        above = np.where(np.isfinite(self.hi), (y - self.hi) / (1 + abs(self.hi if np.isfinite(self.hi) else 0)), 0)
        res = np.maximum(np.maximum(below, above), 0.0)
        res[~np.isfinite(y)] = INF
        return res, y

    def chart(self, params):
        return _chart(params, self.lo, self.hi)

    def chart_range(self):
        return _chart_range(self.lo, self.hi)

    circular = False


def _chart(u: np.ndarray, lo: float, hi: float) -> np.ndarray:
    with np.errstate(all="ignore"):
        if np.isfinite(lo) and np.isfinite(hi):
            return (u - lo) / (hi - lo)
        if np.isfinite(lo):
            d = u - lo
            return d / (1 + np.abs(d))
        if np.isfinite(hi):
            d = hi - u
            return d / (1 + np.abs(d))
        return u / (1 + np.abs(u))


def _chart_range(lo: float, hi: float) -> tuple[float, float]:
    if np.isfinite(lo) or np.isfinite(hi):
        return 0.0, 1.0
    return -1.0, 1.0


class _CurveTarget:
    """Target ``F(J)`` for a proper ``F`` in a chart; ``J is None`` is RP^1."""

    def __init__(self, P: ProperParam, J: IntervalDesc | None, equations: list):
        self.J = J
        self.circular = J is None
        dehom = P.F.dehomogenized
        d = P.F.degree
        # coefficient rows, highest degree first, all padded to degree d
        self.coeffs = np.array([[float(p[k]) for k in range(d, -1, -1)] for p in dehom])
        self.m = len(dehom) - 1
        self.keys = [k for k in range(1, self.m + 1) if RatFunc(dehom[k], dehom[0]).degree > 0]
        if J is not None:
            self.lo = -INF if _is_inf(J.lo) else float(J.lo)
            self.hi = INF if _is_inf(J.hi) else float(J.hi)
        lead = self.coeffs[:, 0]
        self.inf_point = None if lead[0] == 0 or J is not None else lead[1:] / lead[0]
        self.equations = []
        for eq in equations:
            mons = np.array([mon for mon, _ in eq.terms()], dtype=float)
            cs = np.array([float(c) for _, c in eq.terms()])
            self.equations.append((mons, cs))

    @staticmethod
    def _horner(c: np.ndarray, u: np.ndarray) -> np.ndarray:
        """Evaluate rows ``c`` (N x L, highest first) at ``u`` (N x K)."""
        val = np.broadcast_to(c[:, :1], u.shape).astype(complex if np.iscomplexobj(u) else float)
        for j in range(1, c.shape[1]):
            val = val * u + c[:, j:j + 1]
        return val

    def _roots(self, phi: np.ndarray) -> np.ndarray:
        """Roots of each row of ``phi`` (N x L); NaN pads rows of lower degree.
        Coefficients that are pure cancellation noise must already be zero."""
        N, L = phi.shape
        d = L - 1
        out = np.full((N, d), np.nan + 0j)
        full = phi[:, 0] != 0
        if d >= 1 and np.any(full):
            rows = phi[full]
            comp = np.zeros((len(rows), d, d))
            comp[:, 0, :] = -rows[:, 1:] / rows[:, :1]
            if d > 1:
                comp[:, np.arange(1, d), np.arange(d - 1)] = 1.0
            out[full] = np.linalg.eigvals(comp)
        for i in np.flatnonzero(~full):
            r = phi[i]
            nz = np.flatnonzero(r != 0)
            if len(nz) and L - nz[0] >= 2:
                z = np.roots(r[nz[0]:])
                out[i, :len(z)] = z
        return out

    def _candidates(self, ys: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Candidate parameters (N x K) and their relative residuals."""
        us = []
        c0 = self.coeffs[0]
        for k in self.keys:
            phi = self.coeffs[k][None, :] - ys[:, k - 1:k] * c0[None, :]
            size = np.abs(self.coeffs[k])[None, :] + np.abs(ys[:, k - 1:k] * c0[None, :])
            phi = np.where(np.abs(phi) <= 1e-13 * size, 0.0, phi)
            z = self._roots(phi)
            real = np.abs(z.imag) <= 1e-6 * (1 + np.abs(z))
            u = np.where(real, z.real, np.nan)
            dphi = phi[:, :-1] * np.arange(phi.shape[1] - 1, 0, -1)[None, :]
            for _ in range(3):
                num = self._horner(phi, u)
                der = self._horner(dphi, u)
                step = np.where((der != 0) & np.isfinite(der), num / np.where(der == 0, 1, der), 0.0)
                u = np.where(np.isfinite(step), u - step, u)
            us.append(u)
        u = np.concatenate(us, axis=1) if us else np.empty((len(ys), 0))
        vals = [self._horner(np.broadcast_to(self.coeffs[j], (len(ys), self.coeffs.shape[1])), u)
                for j in range(self.m + 1)]
        res = np.zeros(u.shape)
        for j in range(1, self.m + 1):
            aff = vals[j] / vals[0]
            y = ys[:, j - 1:j]
            res = np.maximum(res, np.abs(aff - y) / (1 + np.abs(y)))
        res = np.where(np.isfinite(res), res, INF)
        if self.J is not None:
            slack = 1e-7 * (1 + np.abs(u))
            inside = (u >= self.lo - slack) & (u <= self.hi + slack)
            res = np.where(inside, res, INF)
        res = np.where(np.isnan(u), INF, res)
        if self.inf_point is not None:
            r_inf = np.max(np.abs(self.inf_point[None, :] - ys) / (1 + np.abs(ys)), axis=1)
            u = np.concatenate([u, np.full((len(ys), 1), INF)], axis=1)
            res = np.concatenate([res, r_inf[:, None]], axis=1)
        return u, res

    def _eq_residual(self, ys: np.ndarray) -> np.ndarray:
        worst = np.zeros(len(ys))
        with np.errstate(all="ignore"):
            # terms are normalized by the largest one in log space so that
            # far-out points do not overflow
            logy = np.log(np.abs(ys))[:, None, :]
            negy = (ys < 0)[:, None, :]
            for mons, cs in self.equations:
                M = mons[None, :, :]
                logs = np.log(np.abs(cs))[None, :] + np.sum(np.where(M == 0, 0.0, M * logy), axis=2)
                odd = np.sum(np.where(negy & (M % 2 == 1), 1, 0), axis=2) % 2
                signs = np.sign(cs)[None, :] * np.where(odd == 1, -1.0, 1.0)
                top = np.max(logs, axis=1, keepdims=True)
                top = np.where(np.isneginf(top), 0.0, top)
                terms = signs * np.exp(logs - top)
                scale = np.maximum(np.sum(np.abs(terms), axis=1), np.exp(-top[:, 0]))
                worst = np.maximum(worst, np.abs(np.sum(terms, axis=1)) / scale)
        return np.where(np.isfinite(worst), worst, INF)

    def membership_and_params(self, ys: np.ndarray, tol: float):
        N = len(ys)
        res = np.full(N, INF)
        params = np.full(N, np.nan)
        ok = np.all(np.isfinite(ys), axis=1)
        if not np.any(ok):
            return res, params
        with np.errstate(all="ignore"):
            u, r = self._candidates(ys[ok])
        rmin = np.min(r, axis=1) if r.shape[1] else np.full(len(u), INF)
        # near-ties (e.g. at a node) are broken by continuity along the path
        tied = r <= np.maximum(100 * rmin, 1e-13)[:, None]
        best = np.argmin(r, axis=1) if r.shape[1] else np.zeros(len(u), dtype=int)
        chosen = np.full(len(u), np.nan)
        prev = None
        for i in range(len(u)):
            if not np.isfinite(rmin[i]):
                prev = None
                continue
            idx = np.flatnonzero(tied[i])
            j = best[i]
            if prev is not None and len(idx) > 1:
                j = min(idx, key=lambda jj: _param_distance(u[i, jj], prev, self.circular))
            chosen[i] = u[i, j]
            prev = chosen[i]
        sub_res = rmin.copy()
        if self.equations:
            sub_res = np.maximum(sub_res, self._eq_residual(ys[ok]))
        res[ok] = sub_res
        params[ok] = chosen
        return res, params

    def chart(self, params):
        if self.circular:
            with np.errstate(all="ignore"):
                return np.where(np.isinf(params), math.pi, 2 * np.arctan(params))
        return _chart(params, self.lo, self.hi)

    def chart_range(self):
        if self.circular:
            return -math.pi, math.pi
        return _chart_range(self.lo, self.hi)


def _param_distance(a: float, b: float, circular: bool) -> float:
    if circular:
        ta = math.pi if math.isinf(a) else 2 * math.atan(a)
        tb = math.pi if math.isinf(b) else 2 * math.atan(b)
        d = abs(ta - tb) % (2 * math.pi)
        return min(d, 2 * math.pi - d)
    if math.isinf(a) or math.isinf(b):
        return INF
    return abs(a - b)


def _covered_segments(chart_paths: list[np.ndarray], circular: bool) -> list[tuple[float, float]]:
    segs = []
    for c in chart_paths:
        ok = np.isfinite(c)
        for i in range(len(c)):
            if not ok[i]:
                continue
            segs.append((c[i], c[i]))
            if i + 1 < len(c) and ok[i + 1]:
                a, b = c[i], c[i + 1]
                if circular and abs(b - a) > math.pi:
                    # the short arc wraps through +-pi
                    hi, lo = max(a, b), min(a, b)
                    segs.append((hi, math.pi))
                    segs.append((-math.pi, lo))
                else:
                    segs.append((min(a, b), max(a, b)))
    segs.sort()
    merged: list[list[float]] = []
    for a, b in segs:
        if merged and a <= merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], b)
        else:
            merged.append([a, b])
    return [(a, b) for a, b in merged]


def _gaps(merged: list[tuple[float, float]], lo: float, hi: float, eps: float) -> list:
    ncells = max(int(round(1 / eps)), 1)
    width = (hi - lo) / ncells
    starts = [a for a, _ in merged]
    gaps = []
    for j in range(ncells):
        c0, c1 = lo + j * width, lo + (j + 1) * width
        # any merged segment with a <= c1 and b >= c0
        idx = bisect_left(starts, c1 + 1e-15)
        hit = any(merged[i][1] >= c0 - 1e-15 for i in range(max(idx - 2, 0), idx))
        if not hit and idx > 2:
            hit = max(b for _, b in merged[:idx]) >= c0 - 1e-15
        if not hit:
            gaps.append((c0, c1))
    return gaps


def _target_model(target):
    if isinstance(target, IntervalDesc):
        return _IntervalTarget(target)
    if isinstance(target, ParamCurveSet):
        if target.f.m == 1:
            return _IntervalTarget(image_of(target.f, target.I))
        P = make_proper(to_projective(target.f))
        tr = transfer_interval(P, target.I)
        eqs = implicitize(target.f) if target.f.m == 2 else []
        return _CurveTarget(tr.P, tr.J, eqs)
    raise TypeError(f"unsupported verification target {target!r}")


def _endpoint_checks(cert: CertificateMap, I: IntervalDesc) -> tuple[int, list, list]:
    """Exact test of whether each rational finite endpoint of ``I`` is
    attained by a scalar certificate in at most two variables."""
    if len(cert.symbols) > 2 or len(cert.expanded()) != 1:
        return 0, [], []
    num, den = cert.expanded()[0]
    sub = dict(zip(cert.symbols, (mv_x, mv_y)))
    den_e = den.as_expr().subs(sub, simultaneous=True)
    if not den.is_ground and level_nonempty(sp.expand(den_e)):
        return 0, [], ["denominator vanishes; endpoint test skipped"]
    failures, gaps, notes = 0, [], []
    for e, closed in ((I.lo, I.lo_closed), (I.hi, I.hi_closed)):
        if _is_inf(e) or not isinstance(e, Fraction):
            continue
        G = sp.expand((num.as_expr() - sp.Rational(e.numerator, e.denominator) * den.as_expr())
                      .subs(sub, simultaneous=True))
        hit = level_nonempty(G)
        if hit and not closed:
            failures += 1
            notes.append(f"open endpoint {e} is attained")
        elif closed and not hit:
            gaps.append((float(e), float(e)))
            notes.append(f"closed endpoint {e} is not attained")
    return failures, gaps, notes


def verify(cert: CertificateMap, target=None, samples: int = 10_000, tol=Fraction(1, 10 ** 9),
           eps: float = 1e-2, seed: int = 0) -> VerificationReport:
    """Numerically check ``cert(R^n)`` against ``target``: sampled images lie
    in the target (membership) and every cell of an ``eps``-net of the
    target's parameter chart is reached (coverage)."""
    target = cert.claim if target is None else target
    tolf = float(tol)
    model = _target_model(target)
    rng = np.random.default_rng(seed)
    paths, scattered = _source_paths(cert.source_dim, samples, rng)

    failures, worst, n_points, nonfinite = 0, 0.0, 0, 0
    chart_paths = []
    for pts in paths + ([scattered] if len(scattered) else []):
        ys = _evaluate(cert, pts)
        if isinstance(model, _IntervalTarget):
            res, params = model.membership(ys, tolf)
        else:
            res, params = model.membership_and_params(ys, tolf)
        n_points += len(ys)
        nonfinite += int(np.sum(~np.isfinite(ys).all(axis=1)))
        failures += int(np.sum(res > tolf))
        finite_res = res[np.isfinite(res)]
        worst = max(worst, float(finite_res.max()) if len(finite_res) else 0.0,
                    INF if np.any(~np.isfinite(res)) else 0.0)
        if pts is not scattered:
            ch = model.chart(np.where(res <= tolf, params, np.nan))
            chart_paths.append(np.asarray(ch, dtype=float))
    merged = _covered_segments(chart_paths, model.circular)
    lo, hi = model.chart_range()
    gaps = _gaps(merged, lo, hi, eps)
    notes = []
    if isinstance(target, IntervalDesc):
        extra, end_gaps, notes = _endpoint_checks(cert, target)
        failures += extra
        gaps = gaps + end_gaps
    return VerificationReport(
        membership_failures=failures,
        worst_residual=worst,
        coverage_gaps=gaps,
        sample_counts={"evaluated": n_points, "nonfinite": nonfinite, "paths": len(paths),
                       "cells": max(int(round(1 / eps)), 1)},
        tolerances={"membership": str(tol), "epsilon_net": eps},
        notes=notes,
    )


# --------------------------------------------------------------------------
# Mutation testing


def mutations(cert: CertificateMap, signs: tuple[int, ...] = (1, -1)) -> list[CertificateMap]:
    """Certificates obtained by changing one coefficient of an expanded
    numerator or denominator by +-1.  The constant term of each numerator
    is included even when it is zero; mutants with a vanishing denominator
    are skipped."""
    parts = cert.expanded()
    syms = cert.symbols
    const = (0,) * len(syms)
    out = []
    for ci, (num, den) in enumerate(parts):
        for which, poly in (("num", num), ("den", den)):
            monos = list(poly.monoms())
            if which == "num" and const not in monos:
                monos.append(const)
            for mono in monos:
                for sign in signs:
                    bump = sp.Poly(sign * sp.Mul(*[s ** e for s, e in zip(syms, mono)]), *syms, domain="QQ")
                    new_parts = list(parts)
                    new_parts[ci] = (num + bump, den) if which == "num" else (num, den + bump)
                    if new_parts[ci][1].is_zero:
                        continue
                    out.append(CertificateMap.from_expanded(
                        new_parts, cert.source_dim, "regular", claim=cert.claim,
                        construction=f"mutant: component {ci} {which} {mono} {sign:+d}"))
    return out


def mutation_kill_rate(cert: CertificateMap, signs: tuple[int, ...] = (1, -1), **kw) -> tuple[int, int]:
    """``(killed, total)`` over :func:`mutations`."""
    muts = mutations(cert, signs)
    killed = sum(1 for m in muts if not verify(m, cert.claim, **kw).passed)
    return killed, len(muts)
