"""Command line interface: parsing, dispatch, JSON reports and batch jobs.

Usage::

    curveimage [options] COMMAND ARG...
    curveimage --table
    curveimage --jobs FILE

Reports follow the ``v1`` schema shipped in ``schemas/report-v1.json``.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources

import sympy as sp

from .certificate import T_SYM, X_SYMS, CertificateMap, expr_to_text
from .certify import synthesize, verify
from .curve_engine import ParamCurveSet, classify, implicit_symbols, implicitize
from .errors import (
    CurveImageError,
    DegenerateInput,
    DomainViolation,
    InternalContradiction,
    NotAPolynomialImage,
    WrongArity,
    WrongDimension,
)
from .interval_engine import IntervalDesc, certificate_interval, classify_interval, format_invariant, image_of
from .luroth import decompose, variables
from .mapexpr import MapExpr, MapSyntaxError
from .mvimage import _X as MV_X, _Y as MV_Y, level_nonempty, polynomial_image
from .ratmap import AffineRatMap, RatFunc
from .symbolic import from_sympy

SCHEMA_VERSION = "v1"
COMMANDS = ("classify-interval", "image", "classify-curve", "decompose", "implicitize",
            "certify", "verify", "table")
TABLE_ROWS = ("(-inf, inf)", "[0, inf)", "[0, 1)", "(0, inf)", "(0, 1)")
U64 = 2 ** 64


# --------------------------------------------------------------------------
# Jobs


@dataclass
class JobSpec:
    command: str
    args: list[str]
    seed: int = 0
    samples: int = 10_000
    tol: Fraction = Fraction(1, 10 ** 9)
    timing: bool = False
    verify: bool = True

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise DegenerateInput(f"unknown command {self.command!r}")
        if not all(isinstance(a, str) for a in self.args):
            raise DegenerateInput("job arguments must be strings")
        if not 0 <= self.seed < U64:
            raise DegenerateInput("seed must be an unsigned 64-bit integer")
        if self.samples < 1:
            raise DegenerateInput("samples must be positive")
        if self.tol <= 0:
            raise DegenerateInput("tolerance must be positive")
        lo, hi = _ARITY[self.command]
        if not lo <= len(self.args) <= hi:
            raise DegenerateInput(f"{self.command} takes {lo}..{hi} arguments, got {len(self.args)}")

    def echo(self) -> dict:
        return {"args": list(self.args), "seed": self.seed, "samples": self.samples,
                "tol": str(self.tol)}


_ARITY = {"classify-interval": (1, 1), "image": (1, 2), "classify-curve": (1, 2),
          "decompose": (1, 1), "implicitize": (1, 1), "certify": (1, 2), "verify": (2, 3),
          "table": (0, 0)}


def derive_seed(root: int, index: int) -> int:
    """Seed of job ``index`` in a batch run with root seed ``root``."""
    return (root * 6364136223846793005 + 1442695040888963407 * (index + 1)) % U64


# --------------------------------------------------------------------------
# Parsing maps


@dataclass
class ParsedMap:
    """A map with its source dimension and components in the standard
    source symbols (``t`` for one variable, ``x1..xn`` otherwise)."""

    expr: MapExpr
    n: int
    exprs: list = field(default_factory=list)

    @property
    def symbols(self) -> tuple:
        return variables(self.n)

    def affine(self) -> AffineRatMap:
        if self.n != 1:
            raise WrongArity("this command needs a map in one variable")
        comps = []
        for e in self.exprs:
            num, den = sp.fraction(sp.cancel(e))
            comps.append(RatFunc(from_sympy(num, T_SYM), from_sympy(den, T_SYM)))
        return AffineRatMap(comps)


def parse_map(text: str) -> ParsedMap:
    """Parse and check a map; denominators with real zeros are rejected."""
    me = MapExpr.parse(text)
    n = me.source_dim
    exprs = me.exprs
    if n == 1 and me.variables == ["x1"]:
        exprs = [e.subs(sp.Symbol("x1"), T_SYM) for e in exprs]
    pm = ParsedMap(me, n, exprs)
    for e in exprs:
        _check_denominator(sp.fraction(sp.cancel(e))[1], pm.symbols)
    return pm


def _check_denominator(den: sp.Expr, syms: tuple) -> None:
    if not den.free_symbols:
        return
    if len(syms) == 1:
        poles = RatFunc(from_sympy(1, T_SYM), from_sympy(den, T_SYM)).real_poles
        if poles:
            a = poles[0]
            where = f"t = {a.lo}" if a.is_rational else f"t in ({a.lo}, {a.hi}) ~ {a.decimal()}"
            raise DomainViolation(f"denominator {expr_to_text(den)} has a real zero at {where}")
        return
    used = [s for s in syms if s in den.free_symbols]
    if len(used) <= 2:
        G = sp.expand(den.subs(dict(zip(used, (MV_X, MV_Y))), simultaneous=True))
        if level_nonempty(G):
            raise DomainViolation(f"denominator {expr_to_text(den)} has a real zero")
        return
    poly = sp.Poly(den, *used)
    if all(all(e % 2 == 0 for e in m) and c > 0 for m, c in poly.terms()) and poly.TC() > 0:
        return
    raise WrongDimension("cannot decide real zeros of a denominator in more than two variables")


def _interval(text: str | None) -> IntervalDesc:
    return IntervalDesc.real_line() if text is None else IntervalDesc.parse(text)


def _looks_like_interval(text: str) -> bool:
    try:
        IntervalDesc.parse(text)
    except CurveImageError:
        return False
    return True


# --------------------------------------------------------------------------
# Commands


def _certificate_json(cert: CertificateMap | None, job: JobSpec, target=None) -> dict | None:
    if cert is None:
        return None
    out = cert.to_json()
    if job.verify:
        out["verification"] = verify(cert, target, samples=job.samples, tol=job.tol,
                                     seed=job.seed).to_json()
    return out


def _require_passed(certs: dict) -> None:
    for key, c in certs.items():
        if c is not None and c.get("verification", {}).get("verdict") == "fail":
            raise InternalContradiction(f"emitted certificate for {key} failed verification")


def cmd_classify_interval(job: JobSpec) -> dict:
    I = IntervalDesc.parse(job.args[0])
    p, r = classify_interval(I)
    certs = {}
    for key, kind, n in (("p", "polynomial", p), ("r", "regular", r)):
        certs[key] = None if n == math.inf else _certificate_json(certificate_interval(I, kind), job)
    _require_passed(certs)
    return {"interval": I.to_json(), "shape": I.shape(), "p": format_invariant(p),
            "r": format_invariant(r), "certificates": certs}


def cmd_image(job: JobSpec) -> dict:
    pm = parse_map(job.args[0])
    if len(pm.exprs) != 1:
        raise WrongArity("image needs a scalar map")
    notes: list[str] = []
    if pm.n == 1:
        J = image_of(pm.affine(), _interval(job.args[1] if len(job.args) > 1 else None))
    else:
        if len(job.args) > 1:
            raise DegenerateInput("maps in x1..xn are taken over all of R^n; omit the interval")
        num, den = sp.fraction(sp.cancel(pm.exprs[0]))
        if den.free_symbols:
            raise NotAPolynomialImage("exact images of multivariate rational functions are not supported")
        J, notes = polynomial_image(sp.expand(pm.exprs[0]), pm.symbols)
    p, r = classify_interval(J)
    return {"image": J.to_json(), "p": format_invariant(p), "r": format_invariant(r), "notes": notes}


def _classify_univariate(f: AffineRatMap, I: IntervalDesc, job: JobSpec) -> dict:
    curve = ParamCurveSet(f, I)
    c = classify(curve)
    cert_p, cert_r = synthesize(c, curve)
    out = c.to_json()
    certs = {"p": _certificate_json(cert_p, job, curve), "r": _certificate_json(cert_r, job, curve)}
    _require_passed(certs)
    out["certificates"] = certs
    return out


def cmd_classify_curve(job: JobSpec) -> dict:
    pm = parse_map(job.args[0])
    if pm.n == 1:
        out = _classify_univariate(pm.affine(), _interval(job.args[1] if len(job.args) > 1 else None), job)
        out["image_dimension"] = 1
        return out
    if len(job.args) > 1:
        raise DegenerateInput("maps in x1..xn are taken over all of R^n; omit the interval")
    d = decompose(pm.exprs, pm.n, seed=job.seed)
    if not d.polynomial_certified:
        raise NotAPolynomialImage("the image of a rational generator over R^n is not supported")
    J, notes = polynomial_image(d.g_expr(), pm.symbols)
    out = _classify_univariate(d.h, J, job)
    out["image_dimension"] = 1
    out["decomposition"] = d.to_json()
    out["generator_image"] = J.to_json()
    out["notes"] = out["notes"] + notes
    return out


def cmd_decompose(job: JobSpec) -> dict:
    pm = parse_map(job.args[0])
    d = decompose(pm.exprs, pm.n, seed=job.seed)
    return {"n": pm.n, "decomposition": d.to_json()}


def cmd_implicitize(job: JobSpec) -> dict:
    f = parse_map(job.args[0]).affine()
    eqs = implicitize(f)
    return {"variables": [str(s) for s in implicit_symbols(f.m)],
            "equations": [expr_to_text(e.as_expr()) for e in eqs]}


def cmd_certify(job: JobSpec) -> dict:
    if len(job.args) == 1 and _looks_like_interval(job.args[0]):
        return cmd_classify_interval(job)
    pm = parse_map(job.args[0])
    f = pm.affine()
    I = _interval(job.args[1] if len(job.args) > 1 else None)
    curve = ParamCurveSet(f, I)
    c = classify(curve)
    cert_p, cert_r = synthesize(c, curve)
    certs = {"p": _certificate_json(cert_p, job, curve), "r": _certificate_json(cert_r, job, curve)}
    _require_passed(certs)
    return {"p": format_invariant(c.p), "r": format_invariant(c.r), "certificates": certs,
            "notes": list(c.notes)}


def _certificate_from_text(text: str) -> CertificateMap:
    pm = parse_map(text)
    if pm.n > 2:
        raise WrongDimension("certificates have source dimension 1 or 2")
    syms = (T_SYM,) if pm.n == 1 else X_SYMS
    comps = [e.subs(dict(zip(pm.symbols, syms)), simultaneous=True) for e in pm.exprs]
    poly = all(not sp.fraction(sp.cancel(c))[1].free_symbols for c in comps)
    return CertificateMap(pm.n, tuple(comps), "polynomial" if poly else "regular",
                          construction="user supplied")


def cmd_verify(job: JobSpec) -> dict:
    cert = _certificate_from_text(job.args[0])
    if len(job.args) == 2 and _looks_like_interval(job.args[1]):
        target = IntervalDesc.parse(job.args[1])
        described = {"interval": target.to_json()}
    else:
        f = parse_map(job.args[1]).affine()
        I = _interval(job.args[2] if len(job.args) > 2 else None)
        target = ParamCurveSet(f, I)
        described = {"map": f.format(), "interval": I.to_json()}
    if len(cert.components) != (1 if isinstance(target, IntervalDesc) else target.f.m):
        raise WrongArity("certificate and target have different numbers of components")
    rep = verify(cert, target, samples=job.samples, tol=job.tol, seed=job.seed)
    return {"certificate": cert.to_json(), "target": described, "verification": rep.to_json()}


def cmd_table(job: JobSpec) -> dict:
    rows = []
    for text in TABLE_ROWS:
        p, r = classify_interval(IntervalDesc.parse(text))
        rows.append({"set": text, "r": format_invariant(r), "p": format_invariant(p)})
    return {"rows": rows}


HANDLERS = {
    "classify-interval": cmd_classify_interval,
    "image": cmd_image,
    "classify-curve": cmd_classify_curve,
    "decompose": cmd_decompose,
    "implicitize": cmd_implicitize,
    "certify": cmd_certify,
    "verify": cmd_verify,
    "table": cmd_table,
}


def run(job: JobSpec) -> dict:
    """Run one job and return its report (never raises for package errors)."""
    start = time.perf_counter()
    report = {"schema": SCHEMA_VERSION, "command": job.command, "input": job.echo(),
              "status": "ok", "exit_code": 0, "result": None, "error": None, "timing": None}
    try:
        job.validate()
        report["result"] = HANDLERS[job.command](job)
    except CurveImageError as exc:
        report.update(status="error", exit_code=exc.exit_code,
                      error={"type": type(exc).__name__, "message": str(exc)})
        if isinstance(exc, MapSyntaxError):
            report["error"]["position"] = exc.position
    except (ArithmeticError, RuntimeError) as exc:
        report.update(status="error", exit_code=InternalContradiction.exit_code,
                      error={"type": "InternalContradiction", "message": f"{type(exc).__name__}: {exc}"})
    if job.timing:
        report["timing"] = {"seconds": round(time.perf_counter() - start, 6)}
    return report


def dumps(report: dict, compact: bool = False) -> str:
    if compact:
        return json.dumps(report, sort_keys=True, separators=(",", ":"), default=str)
    return json.dumps(report, sort_keys=True, indent=2, default=str)


def load_schema() -> dict:
    return json.loads(resources.files("curveimage").joinpath("schemas/report-v1.json").read_text())


# --------------------------------------------------------------------------
# Text output


def render_text(report: dict) -> str:
    if report["status"] == "error":
        err = report["error"]
        return f"error ({err['type']}): {err['message']}"
    res = report["result"]
    if report["command"] == "table":
        lines = [f"{'set':<14}(r, p)"]
        lines += [f"{row['set']:<14}({row['r']}, {row['p']})" for row in res["rows"]]
        return "\n".join(lines)
    lines = []
    for key in ("image", "interval", "generator_image"):
        if key in res:
            lines.append(f"{key}: {res[key]['text']}")
    for key in ("p", "r"):
        if key in res:
            lines.append(f"{key} = {res[key]}")
    if "decomposition" in res:
        d = res["decomposition"]
        lines.append(f"g = {d['g']}")
        lines.append("h = (" + ", ".join(d["h"]) + ")")
    if "equations" in res:
        lines += [f"{e} = 0" for e in res["equations"]]
    for key, cert in (res.get("certificates") or {}).items():
        if cert is None:
            lines.append(f"certificate {key}: none (invariant is inf)")
            continue
        comps = cert["components"]
        text = comps[0] if len(comps) == 1 else "(" + ", ".join(comps) + ")"
        verdict = cert.get("verification", {}).get("verdict")
        lines.append(f"certificate {key}: {text}" + (f"  [{verdict}]" if verdict else ""))
    if "verification" in res:
        v = res["verification"]
        lines.append(f"verification: {v['verdict']} (membership failures {v['membership_failures']}, "
                     f"coverage gaps {v['coverage_gap_count']})")
    for note in res.get("notes", []):
        lines.append(f"note: {note}")
    return "\n".join(lines)


# --------------------------------------------------------------------------
# Entry point

_VALUE_OPTS = ("--seed", "--samples", "--tol", "--jobs", "--workers")
_FLAG_OPTS = ("--json", "--table", "--timing", "--no-verify", "-h", "--help")


def _split_argv(argv: list[str]) -> tuple[list[str], list[str]]:
    """Separate options from positionals so that maps like ``-t^2`` stay
    positional."""
    opts, pos = [], []
    it = iter(argv)
    rest_positional = False
    for tok in it:
        if rest_positional:
            pos.append(tok)
        elif tok == "--":
            rest_positional = True
        elif tok in _FLAG_OPTS:
            opts.append(tok)
        elif tok in _VALUE_OPTS:
            opts.append(tok)
            opts.append(next(it, ""))
        elif tok.split("=", 1)[0] in _VALUE_OPTS:
            opts.append(tok)
        else:
            pos.append(tok)
    return opts, pos


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="curveimage",
        description="Classify polynomial and regular images of intervals and rational curves.",
        epilog="commands: " + ", ".join(COMMANDS))
    ap.add_argument("--json", action="store_true", help="print the JSON report")
    ap.add_argument("--seed", type=int, default=0, help="random seed (unsigned 64-bit)")
    ap.add_argument("--samples", type=int, default=10_000, help="verification sample budget")
    ap.add_argument("--tol", type=Fraction, default=Fraction(1, 10 ** 9), help="membership tolerance")
    ap.add_argument("--jobs", metavar="FILE", help="JSONL job file; prints one report per line")
    ap.add_argument("--workers", type=int, default=1, help="processes for --jobs")
    ap.add_argument("--table", action="store_true", help="print (r, p) for the basic intervals")
    ap.add_argument("--timing", action="store_true", help="include wall-clock timing in reports")
    ap.add_argument("--no-verify", action="store_true", help="skip numeric certificate verification")
    return ap


def _jobs_from_file(path: str, defaults: argparse.Namespace) -> list[JobSpec]:
    jobs = []
    with open(path, encoding="utf-8") as fh:
        lines = [ln for ln in fh if ln.strip()]
    for i, line in enumerate(lines):
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise DegenerateInput(f"job line {i + 1}: {exc}") from None
        if not isinstance(obj, dict) or "command" not in obj:
            raise DegenerateInput(f"job line {i + 1}: expected an object with a command")
        jobs.append(JobSpec(
            command=obj["command"],
            args=list(obj.get("args", [])),
            seed=int(obj["seed"]) if "seed" in obj else derive_seed(defaults.seed, i),
            samples=int(obj.get("samples", defaults.samples)),
            tol=Fraction(str(obj.get("tol", defaults.tol))),
            timing=defaults.timing,
            verify=not obj.get("no_verify", defaults.no_verify),
        ))
    return jobs


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    opts, pos = _split_argv(argv)
    ap = build_parser()
    ns = ap.parse_args(opts)
    if not 0 <= ns.seed < U64:
        ap.error("--seed must be an unsigned 64-bit integer")

    if ns.jobs:
        try:
            jobs = _jobs_from_file(ns.jobs, ns)
        except (OSError, CurveImageError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
        if ns.workers > 1:
            with ProcessPoolExecutor(ns.workers) as pool:
                reports = list(pool.map(run, jobs))
        else:
            reports = [run(j) for j in jobs]
        for rep in reports:
            print(dumps(rep, compact=True))
        return max((r["exit_code"] for r in reports), default=0)

    if ns.table:
        command, args = "table", []
    elif not pos:
        ap.print_help()
        return 2
    else:
        command, args = pos[0], pos[1:]
    job = JobSpec(command, args, seed=ns.seed, samples=ns.samples, tol=ns.tol,
                  timing=ns.timing, verify=not ns.no_verify)
    report = run(job)
    if ns.json:
        print(dumps(report))
    else:
        out = render_text(report)
        print(out, file=sys.stderr if report["status"] == "error" else sys.stdout)
    return report["exit_code"]


if __name__ == "__main__":
    sys.exit(main())
