import math

import numpy as np
import pytest

from families import random_interval, random_tree, smooth_integrand_text
from hhquad.errors import DomainError
from hhquad.expr import eval_real, parse, to_text
from hhquad.interval import Interval
from hhquad.jet import Jet, eval_jet, variable_jet


def test_variable_jet():
    assert eval_jet(parse("x"), 2.5, 3).coeffs == (2.5, 1.0, 0.0, 0.0)
    assert variable_jet(1.0, 0) == [1.0]


def test_exp_jet_is_inverse_factorials():
    c = eval_jet(parse("exp(x)"), 0.0, 3).coeffs
    assert c == pytest.approx([1, 1, 1 / 2, 1 / 6], rel=1e-15)


def test_square_over_interval_exact_second_coefficient():
    c = eval_jet(parse("x^2"), Interval(0, 1), 2).coeffs
    assert c[2] == Interval(1, 1)
    assert c[1].contains(Interval(0, 2))


def test_sin_jet_against_finite_differences():
    f = parse("sin(x)")
    jet = eval_jet(f, 1.0, 2)
    h = 1e-5
    d1 = (eval_real(f, 1 + h) - eval_real(f, 1 - h)) / (2 * h)
    d2 = (eval_real(f, 1 + h) - 2 * eval_real(f, 1) + eval_real(f, 1 - h)) / h**2
    assert abs(jet[1] - d1) < 1e-6
    assert abs(2 * jet[2] - d2) < 1e-6
    assert jet[1] == pytest.approx(math.cos(1.0), rel=1e-15)
    assert jet[2] == pytest.approx(-math.sin(1.0) / 2, rel=1e-15)


def test_jet_helpers():
    jet = eval_jet(parse("x^3"), 2.0, 3)
    assert isinstance(jet, Jet)
    assert jet.order == 3 and len(jet) == 4
    assert jet.derivative(0) == 8 and jet.derivative(1) == 12
    assert jet.derivative(2) == 12 and jet.derivative(3) == 6


@pytest.mark.parametrize(
    "text, x0, expected",
    [
        # closed-form derivatives (f, f', f''/2, f'''/6)
        ("log(x)", 2.0, [math.log(2), 1 / 2, -1 / 8, 1 / 24]),
        ("sqrt(x)", 4.0, [2.0, 1 / 4, -1 / 64, 1 / 512]),
        ("1/x", 2.0, [1 / 2, -1 / 4, 1 / 8, -1 / 16]),
        ("x^-2", 1.0, [1.0, -2.0, 3.0, -4.0]),
        ("cos(x)", 0.0, [1.0, 0.0, -1 / 2, 0.0]),
        ("exp(2*x)", 0.0, [1.0, 2.0, 2.0, 4 / 3]),
        ("sin(x)*cos(x)", 0.0, [0.0, 1.0, 0.0, -2 / 3]),
    ],
)
def test_closed_form_jets(text, x0, expected):
    c = eval_jet(parse(text), x0, 3).coeffs
    assert list(c) == pytest.approx(expected, rel=1e-14, abs=1e-15)


def test_jet_domain_errors():
    with pytest.raises(DomainError):
        eval_jet(parse("log(x)"), 0.0, 2)
    with pytest.raises(DomainError):
        eval_jet(parse("1/x"), 0.0, 1)
    with pytest.raises(DomainError):
        eval_jet(parse("sqrt(x)"), 0.0, 1)
    with pytest.raises(DomainError):
        eval_jet(parse("log(x)"), Interval(-1, 1), 2)
    with pytest.raises(ValueError):
        eval_jet(parse("x"), 0.0, -1)


def test_order_zero_matches_eval_real():
    f = parse("exp(sin(x)) / (1 + x^2)")
    assert eval_jet(f, 0.7, 0).coeffs == (eval_real(f, 0.7),)


def test_vectorised_jet_matches_scalar():
    f = parse("x^3 * exp(-x) + sin(2*x)")
    xs = np.linspace(-1, 2, 9)
    arr = eval_jet(f, xs, 4)
    for i, x in enumerate(xs):
        scal = eval_jet(f, float(x), 4)
        for k in range(5):
            assert arr[k][i] == pytest.approx(scal[k], rel=1e-13, abs=1e-13)


def test_derivative_correctness_random():
    """Jet derivatives of order 1 and 2 against central finite differences."""
    rng = np.random.default_rng(11)
    for _ in range(200):
        f = parse(smooth_integrand_text(rng))
        x = float(rng.uniform(-2, 2))
        jet = eval_jet(f, x, 2)
        h1, h2 = 1e-6, 1e-4
        d1 = (eval_real(f, x + h1) - eval_real(f, x - h1)) / (2 * h1)
        d2 = (eval_real(f, x + h2) - 2 * eval_real(f, x) + eval_real(f, x - h2)) / h2**2
        for got, fd in ((jet.derivative(1), d1), (jet.derivative(2), d2)):
            assert abs(got - fd) <= max(1e-5, 1e-5 * abs(got)), (to_text(f), x, got, fd)


def test_jet_over_interval_containment():
    rng = np.random.default_rng(5)
    for _ in range(300):
        f = random_tree(rng, 3)
        a, b = random_interval(rng, -2.0, 2.0, min_width=0.0)
        enc = eval_jet(f, Interval(a, b), 3).coeffs
        for x in np.concatenate(([a, b], rng.uniform(a, b, 6))):
            pt = eval_jet(f, float(x), 3).coeffs
            for k in range(4):
                assert enc[k].lo <= pt[k] <= enc[k].hi, (to_text(f), a, b, x, k)
