import math
import random

import numpy as np
import pytest

from geomhd.errors import DomainError, ParseError, UsageError
from geomhd.expr import (
    Add,
    Call,
    Const,
    Div,
    Integral,
    Mul,
    Neg,
    Pow,
    Sub,
    Var,
    ast_equal,
    diff_expr,
    eval_expr_jet,
    eval_value,
    free_vars,
    parse_expr,
    substitute,
    to_source,
)

ALL = {"t", "x", "y", "z", "w", "varpi"}


# -- parsing -----------------------------------------------------------------------


def test_parse_power():
    e = parse_expr("t^2", {"t"})
    assert isinstance(e, Pow)
    assert isinstance(e.base, Var) and e.base.name == "t"
    assert isinstance(e.exponent, Const) and e.exponent.value == 2.0


def test_parse_mixed_calls():
    e = parse_expr("sin(2*t) + exp(-z)", {"t", "z"})
    assert isinstance(e, Add)
    assert isinstance(e.left, Call) and e.left.fn == "sin"
    assert isinstance(e.left.arg, Mul)
    assert isinstance(e.right, Call) and e.right.fn == "exp"
    assert isinstance(e.right.arg, Neg)


def test_parse_rejects_disallowed_variable():
    with pytest.raises(ParseError):
        parse_expr("x + q", {"x"})  # unknown identifier
    with pytest.raises(ParseError):
        parse_expr("x + t", {"x"})  # known variable, not allowed here


def test_parse_error_carries_offset():
    with pytest.raises(ParseError) as err:
        parse_expr("sin(", {"t"})
    assert err.value.offset == 4
    with pytest.raises(ParseError) as err:
        parse_expr("t + $", {"t"})
    assert err.value.offset == 4


def test_parse_empty():
    with pytest.raises(ParseError):
        parse_expr("   ", {"t"})


def test_precedence_power_over_unary_minus():
    e = parse_expr("-t^2", {"t"})
    assert isinstance(e, Neg) and isinstance(e.arg, Pow)
    assert eval_value(e, {"t": 3.0}) == -9.0


def test_power_right_associative():
    assert eval_value(parse_expr("2^3^2", set()), {}) == 512.0


def test_precedence_mul_over_add():
    assert eval_value(parse_expr("1+2*3", set()), {}) == 7.0
    assert eval_value(parse_expr("2*t^3", {"t"}), {"t": 2.0}) == 16.0


def test_negative_literal_exponent():
    e = parse_expr("t^-2", {"t"})
    assert isinstance(e, Pow) and e.exponent.value == -2.0
    assert eval_value(e, {"t": 2.0}) == 0.25


def test_nonconstant_exponent_rejected():
    with pytest.raises(ParseError):
        parse_expr("t^x", {"t", "x"})


def test_named_constants():
    assert eval_value(parse_expr("pi", set()), {}) == math.pi
    assert eval_value(parse_expr("e^2", set()), {}) == pytest.approx(math.e**2)


def test_function_requires_parenthesis():
    with pytest.raises(ParseError):
        parse_expr("exp", {"t"})
    with pytest.raises(ParseError):
        parse_expr("exp 3", {"t"})


def test_trailing_garbage():
    with pytest.raises(ParseError):
        parse_expr("t 3", {"t"})


def test_scientific_numbers():
    assert eval_value(parse_expr("1.5e-3 + .5", set()), {}) == pytest.approx(0.5015)


# -- differentiation ----------------------------------------------------------------


def test_diff_power():
    d = diff_expr(parse_expr("t^2", {"t"}), "t")
    assert eval_value(d, {"t": 5.0}) == 10.0


def test_diff_chain_rule():
    d = diff_expr(parse_expr("sin(2*t)", {"t"}), "t")
    assert eval_value(d, {"t": 0.3}) == pytest.approx(2.0 * math.cos(0.6))


def test_diff_fundamental_theorem():
    inner = parse_expr("1/(1+t^2)", {"t"})
    I = Integral(inner, "t", 0.0)
    assert diff_expr(I, "t") is inner


def test_diff_all_functions():
    point = {"t": 0.7}
    h = 1e-5
    for src in ("exp(t)", "ln(t)", "sqrt(t)", "sin(t)", "cos(t)", "tan(t)", "t^2.5"):
        e = parse_expr(src, {"t"})
        d = eval_value(diff_expr(e, "t"), point)
        fd = (
            eval_value(e, {"t": point["t"] + h}) - eval_value(e, {"t": point["t"] - h})
        ) / (2 * h)
        assert d == pytest.approx(fd, rel=1e-8), src


# -- evaluation ---------------------------------------------------------------------


def test_eval_jet_square():
    j = eval_expr_jet(parse_expr("t^2", {"t"}), {"t": 3.0}, ("t",), 2)
    assert list(j.coeffs) == [9.0, 6.0, 1.0]


def test_eval_jet_log():
    j = eval_expr_jet(parse_expr("ln(x)", {"x"}), {"x": 1.0}, ("x",), 3)
    assert np.allclose(j.coeffs, [0.0, 1.0, -0.5, 1.0 / 3.0])


def test_eval_domain_error_names_subexpression():
    with pytest.raises(DomainError) as err:
        eval_expr_jet(parse_expr("t + ln(x)", {"t", "x"}), {"t": 1.0, "x": 0.0}, ("t", "x"), 3)
    assert err.value.where == "ln(x)"


def test_eval_value_division_by_zero():
    with pytest.raises(DomainError):
        eval_value(parse_expr("1/t", {"t"}), {"t": 0.0})


def test_eval_missing_binding():
    with pytest.raises(UsageError):
        eval_expr_jet(parse_expr("t+x", {"t", "x"}), {"t": 1.0}, ("t",), 2)


def test_eval_extra_bindings_are_constants():
    j = eval_expr_jet(parse_expr("t*x", {"t", "x"}), {"t": 2.0, "x": 5.0}, ("t",), 2)
    assert j.value == 10.0
    assert j.partial((1,)) == 5.0  # x held constant


def test_free_vars_and_substitute():
    e = parse_expr("sin(w) + varpi^2", {"w", "varpi"})
    assert free_vars(e) == {"w", "varpi"}
    s = substitute(e, {"w": parse_expr("t+z", {"t", "z"})})
    assert free_vars(s) == {"t", "z", "varpi"}
    # untouched branch keeps its identity
    assert s.right is e.right


# -- integral nodes -----------------------------------------------------------------


def test_integral_univariate_only():
    with pytest.raises(UsageError):
        Integral(parse_expr("t+x", {"t", "x"}), "t", 0.0)


def test_integral_eval_and_jet():
    I = Integral(parse_expr("1/(1+t^2)", {"t"}), "t", 0.0)
    assert eval_value(I, {"t": 1.0}) == pytest.approx(math.pi / 4, abs=1e-10)
    j = eval_expr_jet(I, {"t": 1.0}, ("t",), 3)
    assert j.value == pytest.approx(math.pi / 4, abs=1e-10)
    assert j.partial((1,)) == pytest.approx(0.5)  # integrand value
    assert j.partial((2,)) == pytest.approx(-0.5)  # integrand derivative


# -- printing / round trip -------------------------------------------------------------


def test_round_trip_examples():
    for src in (
        "t^2",
        "sin(2*t) + exp(-z)",
        "-t^2",
        "1 - (t - z)",
        "t*(z+1)",
        "2/t/z",
        "t^-2",
        "-(t*z)",
        "--t",
        "pi*t + e",
        "(t+1)^3",
    ):
        e = parse_expr(src, ALL)
        printed = to_source(e)
        again = parse_expr(printed, ALL)
        assert ast_equal(e, again), f"{src!r} -> {printed!r}"


def _random_expr(r: random.Random, depth: int):
    if depth == 0:
        return r.choice(
            [Const(round(r.uniform(0.1, 3.0), 3)), Var("t"), Var("x")]
        )
    kind = r.choice(["add", "sub", "mul", "div", "neg", "call", "pow"])
    a = _random_expr(r, depth - 1)
    b = _random_expr(r, depth - 1)
    if kind == "add":
        return Add(a, b)
    if kind == "sub":
        return Sub(a, b)
    if kind == "mul":
        return Mul(a, b)
    if kind == "div":
        return Div(a, Add(Call("cos", b), Const(2.0)))  # denominator bounded away from 0
    if kind == "neg":
        # the parser folds negated literals, so never wrap a bare constant
        return Neg(a if not isinstance(a, Const) else Var("t"))
    if kind == "call":
        return Call(r.choice(["sin", "cos", "exp"]), a)
    return Pow(a, Const(float(r.randint(1, 3))))


def test_round_trip_random_asts():
    r = random.Random(3)
    for _ in range(200):
        e = _random_expr(r, 3)
        assert ast_equal(e, parse_expr(to_source(e), ALL))


def test_diff_matches_jet_linear_coefficient():
    r = random.Random(5)
    checked = 0
    for _ in range(150):
        e = _random_expr(r, 3)
        point = {"t": r.uniform(-1.5, 1.5), "x": r.uniform(-1.5, 1.5)}
        d = eval_value(diff_expr(e, "t"), point)
        j = eval_expr_jet(e, point, ("t", "x"), 1)
        slope = j.partial({"t": 1})
        assert d == pytest.approx(slope, rel=1e-12, abs=1e-12)
        checked += 1
    assert checked == 150
