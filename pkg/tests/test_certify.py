import math

import pytest
import sympy as sp

from curveimage.algebra import T
from curveimage.certificate import CertificateMap
from curveimage.certify import mutation_kill_rate, mutations, synthesize, verify
from curveimage.curve_engine import ParamCurveSet, classify
from curveimage.interval_engine import IntervalDesc, certificate_interval
from curveimage.ratmap import AffineRatMap, RatFunc

INF = math.inf
P = IntervalDesc.parse
t, x1, x2 = sp.symbols("t x1 x2")
DEN = (T * T + 1) ** 2
CIRCLE = AffineRatMap([RatFunc((T * T - 1) ** 2 - T * T * 4, DEN), RatFunc(T * 4 * (T * T - 1), DEN)])


def cert(*components, dim=1):
    return CertificateMap(dim, tuple(components), "regular")


@pytest.mark.parametrize("c, target", [
    (cert(t ** 2), "[0, inf)"),
    (cert(t ** 3 - t), "(-inf, inf)"),
    (cert(1 / (1 + t ** 2)), "(0, 1]"),
    (cert((x1 * x2 - 1) ** 2 + x1 ** 2, dim=2), "(0, inf)"),
    (cert(((x1 * x2 - 1) ** 2 + x1 ** 2) / ((x1 * x2 - 1) ** 2 + x1 ** 2 + 1), dim=2), "(0, 1)"),
])
def test_correct_certificates_pass(c, target):
    rep = verify(c, P(target), samples=10_000, tol=sp.Rational(1, 10 ** 9), eps=1e-3)
    assert rep.passed, rep.to_json()


@pytest.mark.parametrize("c, target", [
    (cert(t ** 2), "(0, inf)"),                      # attains the open endpoint
    (cert(t ** 2 + 1), "[0, inf)"),                  # misses [0, 1)
    (cert(t ** 3), "[0, inf)"),                      # leaves the target
    (cert(1 / (2 + t ** 2)), "(0, 1]"),              # misses (1/2, 1]
    (cert((x1 * x2 - 1) ** 2, dim=2), "(0, inf)"),   # attains 0
    (cert(x1 ** 2 + x2 ** 2 + 1, dim=2), "(0, inf)"),
])
def test_wrong_certificates_fail(c, target):
    assert not verify(c, P(target), samples=4000).passed


def test_curve_certificates():
    for f, I in [(AffineRatMap([T * T, T ** 3]), "(0, inf)"), (CIRCLE, "(-inf, inf)"),
                 (AffineRatMap([T, T * T]), "[0, 1)")]:
        curve = ParamCurveSet(f, P(I))
        c = classify(curve)
        cp, cr = synthesize(c, curve)
        assert (cp is None) == (c.p == INF)
        for k in (cp, cr):
            if k is not None:
                assert verify(k, curve).passed
                assert k.source_dim == (c.p if k is cp else c.r)


def test_wrong_curve_certificate_fails():
    curve = ParamCurveSet(AffineRatMap([T * T, T ** 3]), P("(0, inf)"))
    bad = cert(t ** 2, t ** 3)              # whole cusp, includes the origin
    assert not verify(bad, curve).passed
    shifted = cert(t ** 2, t ** 3 + 1)
    assert not verify(shifted, curve, samples=2000).passed


def test_verify_is_deterministic():
    c = certificate_interval(P("(0, 1)"), "regular")
    a = verify(c, seed=4, samples=3000).to_json()
    b = verify(c, seed=4, samples=3000).to_json()
    assert a == b


def test_mutations_change_one_coefficient():
    got = sorted(sp.sstr(sp.cancel(m.components[0])) for m in mutations(cert(t ** 2 + 1)))
    # the denominator 1 - 1 = 0 is skipped
    assert got == sorted(["2*t**2 + 1", "1", "t**2 + 2", "t**2", "t**2/2 + 1/2"])


def test_mutation_kill_rate_on_cusp_certificate():
    curve = ParamCurveSet(AffineRatMap([T * T, T ** 3]), P("[1, 2]"))
    c = classify(curve)
    _, cr = synthesize(c, curve)
    killed, total = mutation_kill_rate(cr, samples=3000)
    assert total > 0 and killed == total
