from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from curveimage.mapexpr import MapExpr, MapSyntaxError, map_to_text, parse_ast, to_sympy_expr, to_text
from curveimage.errors import DegenerateInput

t, x1, x2 = sp.symbols("t x1 x2")


@pytest.mark.parametrize("text, expected", [
    ("(t^2, t^3)", [t ** 2, t ** 3]),
    ("1/(1+t^2)", [1 / (1 + t ** 2)]),
    ("-t^2", [-t ** 2]),
    ("2^-1*t", [t / 2]),
    ("0.25*x1 - x2/3", [x1 / 4 - x2 / 3]),
    ("((t))", [t]),
    ("(t - 1)*(t + 1)", [t ** 2 - 1]),
    ("2 - 3 - 4", [-5]),
    ("8/4/2", [1]),
    ("--t", [t]),
])
def test_parse_values(text, expected):
    got = MapExpr.parse(text).exprs
    assert len(got) == len(expected)
    for g, e in zip(got, expected):
        assert sp.simplify(g - e) == 0


@pytest.mark.parametrize("text, pos", [
    ("(t^2, t^3", 9),
    ("t +* 2", 3),
    ("t^t", 2),
    ("t^1.5", 2),
    ("y + 1", 0),
    ("t @ 2", 2),
    ("", 0),
    ("2 t", 2),
])
def test_syntax_errors_carry_positions(text, pos):
    with pytest.raises(MapSyntaxError) as info:
        MapExpr.parse(text)
    assert info.value.position == pos
    assert info.value.exit_code == 2


def test_division_by_zero():
    with pytest.raises(DegenerateInput):
        MapExpr.parse("1/(t - t)").exprs


def test_mixed_variables_rejected():
    with pytest.raises(MapSyntaxError):
        MapExpr.parse("t + x1").source_dim


def test_source_dimension():
    assert MapExpr.parse("(t, 1)").source_dim == 1
    assert MapExpr.parse("x3 + x1").source_dim == 3
    assert MapExpr.parse("7").source_dim == 1


# --------------------------------------------------------------------------
# round trip on random syntax trees

_nums = st.one_of(
    st.integers(0, 1000).map(Fraction),
    st.tuples(st.integers(0, 999), st.integers(1, 3)).map(lambda p: Fraction(p[0], 10 ** p[1])),
).map(lambda v: ("num", v))
_vars = st.sampled_from(["t", "x1", "x2", "x9"]).map(lambda v: ("var", v))


def _extend(children):
    return st.one_of(
        children.map(lambda a: ("neg", a)),
        st.tuples(st.sampled_from(["add", "sub", "mul", "div"]), children, children),
        st.tuples(children, st.integers(-4, 6)).map(lambda p: ("pow", p[0], p[1])),
    )


trees = st.recursive(st.one_of(_nums, _vars), _extend, max_leaves=12)


@settings(max_examples=200, deadline=None)
@given(st.lists(trees, min_size=1, max_size=3))
def test_print_parse_round_trip(items):
    text = map_to_text(items)
    reparsed = parse_ast(text)
    assert map_to_text(reparsed) == text
    assert [to_text(n) for n in parse_ast(map_to_text(reparsed))] == [to_text(n) for n in reparsed]


@settings(max_examples=200, deadline=None)
@given(trees)
def test_round_trip_preserves_value(node):
    again = parse_ast(to_text(node))[0]
    try:
        a = to_sympy_expr(node)
    except DegenerateInput:
        with pytest.raises(DegenerateInput):
            to_sympy_expr(again)
        return
    assert sp.simplify(a - to_sympy_expr(again)) == 0
