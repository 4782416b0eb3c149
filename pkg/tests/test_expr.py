import numpy as np
import pytest

from families import random_interval, random_tree
from hhquad.errors import DomainError, ExprSyntaxError, NonIntegerExponentError, UnknownIdentifierError
from hhquad.expr import (
    Binary,
    Const,
    Pow,
    Unary,
    X,
    eval_array,
    eval_interval,
    eval_real,
    parse,
    to_text,
)
from hhquad.interval import Interval


def test_parse_power():
    assert parse("x^2") == Pow(X, 2)


def test_parse_precedence():
    assert parse("2*x + exp(x)") == Binary("add", Binary("mul", Const(2.0), X), Unary("exp", X))


def test_parse_left_associative():
    assert parse("x - 1 - 2") == Binary("sub", Binary("sub", X, Const(1.0)), Const(2.0))
    assert parse("x / 2 / 3") == Binary("div", Binary("div", X, Const(2.0)), Const(3.0))


def test_unary_minus_is_an_atom():
    # '-' atom binds tighter than '^' in this grammar
    assert parse("-x^2") == Pow(Unary("neg", X), 2)
    assert parse("-(x^2)") == Unary("neg", Pow(X, 2))
    assert parse("--x") == Unary("neg", Unary("neg", X))


def test_parse_numbers_and_whitespace():
    assert parse(" 1.5e-3 * x ") == Binary("mul", Const(1.5e-3), X)
    assert parse(".5+x") == Binary("add", Const(0.5), X)
    assert parse("x^-2") == Pow(X, -2)


def test_unbalanced_paren_offset():
    with pytest.raises(ExprSyntaxError) as exc:
        parse("sin(x")
    assert exc.value.position == 5


@pytest.mark.parametrize(
    "text, position",
    [("x^", 2), ("x +", 3), ("2x", 1), ("(x", 2), ("x)", 1), ("x $ 1", 2), ("", 0), ("x^(2)", 2)],
)
def test_syntax_error_positions(text, position):
    with pytest.raises(ExprSyntaxError) as exc:
        parse(text)
    assert exc.value.position == position
    assert f"offset {position}" in str(exc.value)


def test_unknown_identifier():
    with pytest.raises(UnknownIdentifierError) as exc:
        parse("1 + tan(x)")
    assert exc.value.position == 4
    with pytest.raises(UnknownIdentifierError):
        parse("y")


@pytest.mark.parametrize("text", ["x^2.5", "x^0.5", "x^1e2"])
def test_non_integer_exponent(text):
    with pytest.raises(NonIntegerExponentError):
        parse(text)


ROUND_TRIP_CORPUS = [
    "x", "1", "0.1", "1e-05", "2.5e+20", "x^2", "x^-3", "x^0", "-x", "-x^2", "-(x^2)", "--x",
    "x + 1", "x - 1 - 2", "x - (1 - 2)", "x * 2 / 3", "x / (2 * 3)", "(x + 1)^2", "(x * 2)^3",
    "2^3", "(2^3)^2", "exp(x)", "log(x)", "sin(x)", "cos(x)", "sqrt(x)", "exp(-x^2)",
    "sin(x)^2 + cos(x)^2", "1 / (1 + x^2)", "log(1 + exp(x))", "sqrt(x^2 + 1) - x",
    "x * exp(x) * sin(3 * x)", "-(x + 1) * 2", "-exp(x)", "(-2)^2", "x - -x",
    "exp(exp(exp(x)))", "sin(cos(sin(x)))", "1 - x + x^2 - x^3 + x^4", "(x - 1) * (x + 1)",
    "x / x / x", "x - (x - (x - x))", "3.14159 * x^2", "0.5 * (x + 1 / x)",
    "log(x^2 + 1) / sqrt(x^4 + 1)", "cos(-x)", "-(-x)", "((x))", "2 * -x", "x^10 - 10 * x^1",
]


def test_round_trip_corpus_size():
    assert len(ROUND_TRIP_CORPUS) == 50


@pytest.mark.parametrize("text", ROUND_TRIP_CORPUS)
def test_print_parse_fixed_point(text):
    tree = parse(text)
    printed = to_text(tree)
    assert parse(printed) == tree
    assert to_text(parse(printed)) == printed


def test_printer_handles_negative_constants():
    # The parser never builds a negative Const, so the printed form
    # reparses to neg(...) with the same value.
    tree = Binary("mul", Const(-2.0), Pow(Const(-0.5), 3))
    again = parse(to_text(tree))
    assert eval_real(again, 1.0) == eval_real(tree, 1.0) == 0.25
    assert to_text(parse(to_text(again))) == to_text(again)


def test_random_trees_print_parse_print_fixed_point():
    rng = np.random.default_rng(7)
    for _ in range(200):
        tree = random_tree(rng, 4)
        once = to_text(parse(to_text(tree)))
        assert to_text(parse(once)) == once
        assert eval_real(parse(once), 0.3) == pytest.approx(eval_real(tree, 0.3), rel=1e-15, abs=1e-15)


# ----------------------------------------------------------------------
# Real evaluation


def test_eval_real_examples():
    assert eval_real(parse("x^2"), 0.5) == 0.25
    assert eval_real(parse("exp(x)"), 0) == 1.0
    assert eval_real(parse("-x^2"), 3.0) == 9.0


@pytest.mark.parametrize(
    "text, x, culprit",
    [("1/x", 0.0, "1 / x"), ("log(x - 1)", 1.0, "log(x - 1)"), ("sqrt(x)", -1.0, "sqrt(x)"),
     ("x^-1", 0.0, "x^-1"), ("exp(x)", 1000.0, "exp(x)")],
)
def test_eval_real_domain_errors(text, x, culprit):
    with pytest.raises(DomainError) as exc:
        eval_real(parse(text), x)
    assert str(exc.value.node) == culprit


def test_eval_array_matches_scalar():
    f = parse("sin(2*x) * exp(-x/3) + x^3 / (1 + x^2)")
    xs = np.linspace(-2, 2, 17)
    ys = eval_array(f, xs)
    assert np.allclose(ys, [eval_real(f, x) for x in xs], rtol=1e-15, atol=1e-15)


def test_eval_array_constant_broadcasts():
    assert eval_array(parse("3"), np.zeros(4)).tolist() == [3.0] * 4


def test_eval_array_domain_error():
    with pytest.raises(DomainError):
        eval_array(parse("log(x)"), np.array([1.0, 0.0]))


# ----------------------------------------------------------------------
# Interval evaluation


def test_eval_interval_even_power_exact():
    r = eval_interval(parse("x^2"), Interval(-1, 2))
    assert r.lo == 0.0
    assert r.hi == pytest.approx(4.0, rel=1e-14) and r.hi >= 4.0


def test_eval_interval_identity():
    assert eval_interval(parse("x"), Interval(3, 5)) == Interval(3, 5)


def test_eval_interval_dependency_contains_zero():
    r = eval_interval(parse("x - x"), Interval(0, 1))
    assert 0.0 in r


def test_eval_interval_domain_errors():
    with pytest.raises(DomainError):
        eval_interval(parse("log(x)"), Interval(-1, 1))
    with pytest.raises(DomainError):
        eval_interval(parse("1/x"), Interval(-1, 1))
    with pytest.raises(DomainError):
        eval_interval(parse("sqrt(x)"), Interval(-0.5, 1))


def test_interval_containment_random():
    """eval_real(f, x) lies in eval_interval(f, X) for x in X."""
    rng = np.random.default_rng(2024)
    for _ in range(1000):
        f = random_tree(rng, 3)
        a, b = random_interval(rng, -2.0, 2.0, min_width=0.0)
        enc = eval_interval(f, Interval(a, b))
        xs = np.concatenate(([a, b], rng.uniform(a, b, 8)))
        for x in xs:
            v = eval_real(f, float(x))
            assert enc.lo <= v <= enc.hi, (to_text(f), a, b, x, v, enc)
