import random

import numpy as np
import pytest
import sympy as sp

from curveimage.errors import WrongDimension
from curveimage.interval_engine import IntervalDesc
from curveimage.mvimage import level_nonempty, polynomial_image

x, y, z = sp.symbols("x y z")
P = IntervalDesc.parse


@pytest.mark.parametrize("g, expected", [
    (x ** 2 + y ** 2, "[0, inf)"),
    (x * y, "(-inf, inf)"),
    ((x * y - 1) ** 2 + x ** 2, "(0, inf)"),
    (x ** 2 * y ** 2 + 1, "[1, inf)"),
    (3 - x ** 2 - y ** 2, "(-inf, 3]"),
    (x ** 2 + x * y + y ** 2 - x, "[-1/3, inf)"),
    ((x * y - 1) ** 2 + x ** 2 + sp.Rational(1, 2), "(1/2, inf)"),
    (x ** 2 * y ** 2 - 2 * x * y + 3, "[2, inf)"),
    (x ** 3 + y, "(-inf, inf)"),
    (x ** 2, "[0, inf)"),
])
def test_exact_images(g, expected):
    J, _ = polynomial_image(g, (x, y))
    assert J == P(expected)


def test_more_than_two_variables():
    with pytest.raises(WrongDimension):
        polynomial_image(x * y * z + x, (x, y, z))
    with pytest.raises(WrongDimension):
        polynomial_image(sp.Integer(4), (x, y))


@pytest.mark.parametrize("G, expected", [
    (x ** 2 + y ** 2 + 1, False),
    (x ** 2 + y ** 2, True),           # isolated real point
    ((x * y - 1) ** 2 + x ** 2, False),
    (x ** 2 - y ** 3, True),
    (x ** 2 + 1, False),
    ((x - 1) ** 2 + (y - 2) ** 2, True),
    ((x ** 2 - 2) ** 2 + (y - x) ** 2, True),
])
def test_level_nonempty(G, expected):
    assert level_nonempty(sp.expand(G)) is expected


def test_images_contain_sampled_values():
    rng = random.Random(3)
    pts = np.random.default_rng(0).normal(0, 3, (4000, 2))
    for _ in range(12):
        g = sp.expand(sum(rng.randint(-2, 2) * x ** rng.randint(0, 2) * y ** rng.randint(0, 2)
                          for _ in range(3)))
        if len(g.free_symbols) < 2:
            continue
        J, _ = polynomial_image(g, (x, y))
        vals = sp.lambdify((x, y), g, "numpy")(pts[:, 0], pts[:, 1])
        lo = -np.inf if J.lo == -float("inf") else float(J.lo)
        hi = np.inf if J.hi == float("inf") else float(J.hi)
        assert np.all(vals >= lo - 1e-9) and np.all(vals <= hi + 1e-9)
