import json
import subprocess
import sys

import jsonschema
import pytest

from curveimage.cli import JobSpec, derive_seed, dumps, load_schema, main, parse_map, run
from curveimage.errors import DomainViolation

CIRCLE = "(((t^2-1)^2-4*t^2)/(t^2+1)^2, 4*t*(t^2-1)/(t^2+1)^2)"
SCHEMA = load_schema()


def run_cli(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def report_of(capsys, *argv):
    code, out, _ = run_cli(capsys, "--json", *argv)
    rep = json.loads(out)
    jsonschema.validate(rep, SCHEMA)
    assert rep["exit_code"] == code
    return rep


def test_schema_is_valid_draft():
    jsonschema.Draft202012Validator.check_schema(SCHEMA)


@pytest.mark.parametrize("argv, p, r", [
    (["classify-interval", "[0, inf)"], "1", "1"),
    (["classify-interval", "(0, 1)"], "inf", "2"),
    (["classify-curve", "(t^2, t^3)", "(0, inf)"], "2", "2"),
    (["classify-curve", CIRCLE, "(-inf, inf)"], "inf", "1"),
    (["classify-curve", "((x1^2+x2^2)^2, (x1^2+x2^2)^3)"], "1", "1"),
    (["image", "1/(1+t^2)"], "inf", "1"),
    (["image", "(x1*x2-1)^2 + x1^2"], "2", "2"),
])
def test_invariants_in_reports(capsys, argv, p, r):
    rep = report_of(capsys, "--samples", "3000", *argv)
    assert rep["status"] == "ok"
    assert (rep["result"]["p"], rep["result"]["r"]) == (p, r)


def test_classify_curve_report_contents(capsys):
    rep = report_of(capsys, "--samples", "3000", "classify-curve", "(t^2, t^3)", "(0, inf)")
    res = rep["result"]
    ev = res["evidence"]
    assert ev["unbounded"] and not ev["closed_in_Rm"]
    assert ev["places_at_infinity"]["germ_irreducible"]
    assert res["certificates"]["p"]["verification"]["verdict"] == "pass"
    assert rep["input"]["args"] == ["(t^2, t^3)", "(0, inf)"]
    assert rep["timing"] is None


@pytest.mark.parametrize("argv, code, kind", [
    (["image", "1/t"], 3, "DomainViolation"),
    (["image", "(t^2"], 2, "MapSyntaxError"),
    (["classify-interval", "[1, 0]"], 2, "DegenerateInput"),
    (["classify-curve", "(x1, x2)"], 4, "WrongDimension"),
    (["classify-curve", "(t, 1)", "[2, 2]"], 4, "WrongDimension"),
    (["image", "x1*x2*x3 + x1"], 4, "WrongDimension"),
    (["frobnicate", "t"], 2, "DegenerateInput"),
])
def test_error_exit_codes(capsys, argv, code, kind):
    rep = report_of(capsys, *argv)
    assert rep["status"] == "error" and rep["exit_code"] == code
    assert rep["error"]["type"] == kind


def test_syntax_error_position(capsys):
    rep = report_of(capsys, "image", "t + * 2")
    assert rep["error"]["position"] == 4


def test_domain_violation_reports_root():
    with pytest.raises(DomainViolation, match="t = 0"):
        parse_map("1/t")
    with pytest.raises(DomainViolation, match=r"t in \(-4, 0\) ~ -1.414"):
        parse_map("1/(t^2 - 2)")
    parse_map("1/(1 + t^2)")
    with pytest.raises(DomainViolation):
        parse_map("1/(x1^2 - x2)")
    parse_map("1/(1 + x1^2 + x2^2)")


def test_table(capsys):
    code, out, _ = run_cli(capsys, "--table")
    assert code == 0
    rows = [line.split(None, 2) for line in out.strip().splitlines()[1:]]
    got = [line.rsplit("(", 1)[1].rstrip(")") for line in out.strip().splitlines()[1:]]
    assert got == ["1, 1", "1, 1", "1, inf", "2, 2", "2, inf"]
    assert len(rows) == 5


def test_output_is_byte_deterministic(capsys):
    argv = ["--seed", "7", "--samples", "2000", "classify-curve", "(t^2, t^3)", "[1, 2]"]
    _, a, _ = run_cli(capsys, "--json", *argv)
    _, b, _ = run_cli(capsys, "--json", *argv)
    assert a == b


def test_batch_matches_single_runs(tmp_path, capsys):
    jobs = [
        {"command": "classify-interval", "args": ["(0, inf)"], "seed": 3, "samples": 2000},
        {"command": "image", "args": ["t^3 - 3*t", "[-2, 0]"], "seed": 4},
        {"command": "classify-curve", "args": ["(t^2, t^3)", "(0, inf)"], "seed": 5, "samples": 2000},
        {"command": "decompose", "args": ["(x1*x2 + x1, (x1*x2 + x1)^2)"], "seed": 6},
        {"command": "image", "args": ["1/t"], "seed": 7},
    ]
    path = tmp_path / "jobs.jsonl"
    path.write_text("\n".join(json.dumps(j) for j in jobs) + "\n")
    code, out, _ = run_cli(capsys, "--jobs", str(path))
    lines = out.strip().splitlines()
    assert len(lines) == len(jobs)
    assert code == 3
    for job, line in zip(jobs, lines):
        single = run(JobSpec(job["command"], job["args"], seed=job["seed"],
                             samples=job.get("samples", 10_000)))
        assert line == dumps(single, compact=True)
        jsonschema.validate(json.loads(line), SCHEMA)


def test_batch_derives_seeds(tmp_path, capsys):
    path = tmp_path / "jobs.jsonl"
    path.write_text(json.dumps({"command": "decompose", "args": ["(x1 + x2, (x1 + x2)^2)"]}) + "\n")
    _, out, _ = run_cli(capsys, "--seed", "11", "--jobs", str(path))
    assert json.loads(out)["input"]["seed"] == derive_seed(11, 0)


def test_verify_command(capsys):
    rep = report_of(capsys, "--samples", "3000", "verify", "(x1*x2-1)^2 + x1^2", "(0, inf)")
    assert rep["result"]["verification"]["verdict"] == "pass"
    rep = report_of(capsys, "--samples", "3000", "verify", "t^2 + 1", "[0, inf)")
    assert rep["result"]["verification"]["verdict"] == "fail"
    rep = report_of(capsys, "--samples", "3000", "verify", "(t^4, t^6)", "(t^2, t^3)", "[0, inf)")
    assert rep["result"]["verification"]["verdict"] == "pass"


def test_other_commands(capsys):
    rep = report_of(capsys, "implicitize", "(t^2, t^3)")
    assert rep["result"]["equations"] == ["x1^3 - x2^2"]
    rep = report_of(capsys, "decompose", "(2*(x1*x2+x1)+1, (x1*x2+x1)^2)")
    assert rep["result"]["decomposition"]["g"] == "x1*x2 + x1"
    rep = report_of(capsys, "--samples", "2000", "certify", "[0, 1)")
    assert rep["result"]["certificates"]["p"] is None
    rep = report_of(capsys, "--samples", "2000", "certify", "(t, t^2)", "(0, inf)")
    assert rep["result"]["certificates"]["r"]["source_dim"] == 2


def test_negative_leading_map_is_positional(capsys):
    code, out, _ = run_cli(capsys, "image", "-t^2", "[1, 2]")
    assert code == 0 and "[-4, -1]" in out


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "curveimage", "--table"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert "(2, inf)" in proc.stdout
