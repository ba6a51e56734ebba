import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from phasequant.errors import ConfigError
from phasequant.expressions import parse_expression


def ev(source, **values):
    expr = parse_expression(source, tuple(values))
    return expr.eval(values)


@pytest.mark.parametrize(
    "source, value",
    [
        ("2 + 3*4", 14.0),
        ("(2 + 3)*4", 20.0),
        ("-x + 1", 0.5),
        ("x**3", 0.125),
        ("x/2", 0.25),
        ("cos(x)", math.cos(0.5)),
        ("sin(x)*cos(x)", math.sin(0.5) * math.cos(0.5)),
        ("pi", math.pi),
    ],
)
def test_evaluation(source, value):
    assert ev(source, x=0.5) == pytest.approx(value, abs=1e-14)


def test_two_variables():
    assert ev("x*y + sin(y)", x=2.0, y=0.3) == pytest.approx(0.6 + math.sin(0.3))


@pytest.mark.parametrize(
    "source, dsource",
    [
        ("x**4", "4*x**3"),
        ("sin(2*x)", "2*cos(2*x)"),
        ("cos(x)**2", "-2*cos(x)*sin(x)"),
        ("x*sin(x)", "sin(x) + x*cos(x)"),
        ("1/x", "-1/x**2"),
    ],
)
def test_symbolic_derivative(source, dsource):
    expr = parse_expression(source, ("x",))
    want = parse_expression(dsource, ("x",))
    for x in (-1.3, 0.4, 2.2):
        assert expr.diff("x").eval({"x": x}) == pytest.approx(
            want.eval({"x": x}), abs=1e-12
        )


def test_derivative_of_missing_variable_is_zero():
    expr = parse_expression("sin(x)", ("x", "y"))
    assert expr.diff("y").eval({"x": 0.7, "y": 1.0}) == 0.0


@pytest.mark.parametrize(
    "source",
    [
        "tan(x)",  # unknown function
        "z + 1",  # unknown name
        "x ** y",  # non-literal exponent
        "x ** 0.5",  # non-integer exponent
        "sin(x, 1)",  # wrong arity
        "x +",  # syntax error
        "'a'",  # non-numeric literal
        "x @ x",  # unsupported operator
    ],
)
def test_rejects_invalid_sources(source):
    with pytest.raises(ConfigError):
        parse_expression(source, ("x",))


@given(
    c=st.lists(st.floats(-2, 2), min_size=3, max_size=3),
    x=st.floats(-2, 2),
)
@settings(max_examples=30, deadline=None)
def test_quadratic_round_trip(c, x):
    source = f"{c[0]!r} + {c[1]!r}*x + {c[2]!r}*x**2"
    got = ev(source, x=x)
    want = c[0] + c[1] * x + c[2] * x * x
    assert got == pytest.approx(want, abs=1e-9, rel=1e-9)


@given(x=st.floats(-3, 3))
@settings(max_examples=30, deadline=None)
def test_trig_identity(x):
    assert ev("sin(x)**2 + cos(x)**2", x=x) == pytest.approx(1.0, abs=1e-12)


def test_constant_folding_keeps_value():
    # folded or not, numeric subtrees must evaluate identically
    assert ev("2*3 + 0*x + 1*x", x=0.7) == pytest.approx(6.7)
