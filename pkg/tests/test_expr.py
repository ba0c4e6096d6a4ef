"""Parser and evaluator tests."""

import math
import random

import pytest

from semitrotter.expr import (
    BinOp,
    Call,
    ExprEvalError,
    ExprSyntaxError,
    Neg,
    Num,
    Pi,
    Var,
    eval_expr,
    parse_expr,
    to_source,
)


def test_parse_cos_x():
    e = parse_expr("cos(x)")
    assert e == Call("cos", Var())


def test_parse_identity():
    assert parse_expr("x") == Var()


def test_double_angle_at_zero():
    e = parse_expr("2*sin(x)^2 - 1")
    assert eval_expr(e, 0.0) == pytest.approx(-1.0)


def test_eval_basics():
    assert eval_expr(parse_expr("cos(x)"), 0.0) == 1.0
    assert eval_expr(parse_expr("pi"), 3.0) == pytest.approx(math.pi)
    assert eval_expr(parse_expr("exp(x)"), 1.0) == pytest.approx(math.e)
    assert eval_expr(parse_expr("tanh(x)"), 0.0) == 0.0


def test_precedence():
    assert eval_expr(parse_expr("2+3*4"), 0.0) == 14.0
    assert eval_expr(parse_expr("2^3^2"), 0.0) == 512.0
    assert eval_expr(parse_expr("(2^3)^2"), 0.0) == 64.0
    assert eval_expr(parse_expr("-2^2"), 0.0) == -4.0  # ^ binds tighter than unary -
    assert eval_expr(parse_expr("2^-1"), 0.0) == 0.5
    assert eval_expr(parse_expr("10-4-3"), 0.0) == 3.0  # left associative
    assert eval_expr(parse_expr("16/4/2"), 0.0) == 2.0


def test_unary_minus():
    assert eval_expr(parse_expr("-x"), 2.0) == -2.0
    assert eval_expr(parse_expr("--x"), 2.0) == 2.0
    assert eval_expr(parse_expr("3*-2"), 0.0) == -6.0


def test_syntax_error_offset():
    with pytest.raises(ExprSyntaxError) as err:
        parse_expr("1+$2")
    assert err.value.offset == 2
    with pytest.raises(ExprSyntaxError):
        parse_expr("sin(x")
    with pytest.raises(ExprSyntaxError):
        parse_expr("")
    with pytest.raises(ExprSyntaxError):
        parse_expr("1 2")


def test_unknown_identifier():
    with pytest.raises(ExprSyntaxError) as err:
        parse_expr("cos(y)")
    assert "y" in str(err.value)
    assert err.value.offset == 4
    with pytest.raises(ExprSyntaxError):
        parse_expr("log(x)")


def test_eval_errors():
    with pytest.raises(ExprEvalError):
        eval_expr(parse_expr("1/x"), 0.0)
    with pytest.raises(ExprEvalError):
        eval_expr(parse_expr("x^-1"), 0.0)  # 0^negative
    with pytest.raises(ExprEvalError):
        eval_expr(parse_expr("(-4)^(1/2)"), 0.0)  # stays real-valued


def _random_ast(rng: random.Random, depth: int):
    # literals are kept nonnegative: the printer renders a negative value
    # as unary minus, which reparses to Neg(Num(...)) rather than Num(-...)
    if depth == 0:
        return rng.choice(
            [Num(abs(round(rng.uniform(-5, 5), 3))), Var(), Pi(), Num(float(rng.randint(1, 9)))]
        )
    kind = rng.randrange(7)
    if kind < 4:
        op = rng.choice("+-*/")
        return BinOp(op, _random_ast(rng, depth - 1), _random_ast(rng, depth - 1))
    if kind == 4:
        return Neg(_random_ast(rng, depth - 1))
    if kind == 5:
        return Call(rng.choice(["sin", "cos", "exp", "tanh"]), _random_ast(rng, depth - 1))
    # keep exponents small constants so values stay finite
    return BinOp("^", _random_ast(rng, depth - 1), Num(float(rng.randint(0, 3))))


def test_roundtrip_property():
    """parse(print(e)) rebuilds a structurally identical AST, 1000 random trees."""
    rng = random.Random(2024)
    checked = 0
    for _ in range(1000):
        e = _random_ast(rng, rng.randint(1, 5))
        text = to_source(e)
        e2 = parse_expr(text)
        assert e2 == e, f"round trip changed {text!r}"
        x = rng.uniform(-math.pi, math.pi)
        try:
            v1 = eval_expr(e, x)
        except ExprEvalError:
            continue
        v2 = eval_expr(e2, x)
        assert v2 == pytest.approx(v1, rel=1e-14, abs=1e-300) or (
            math.isnan(v1) and math.isnan(v2)
        )
        checked += 1
    assert checked > 500  # most random trees evaluate cleanly
