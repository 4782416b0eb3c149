import math

import numpy as np
import pytest

from families import smooth_integrand_text
from hhquad.expr import eval_real, parse, to_text
from hhquad.taylor import (
    TaylorExpansion,
    gauss_legendre,
    taylor_expansion,
    taylor_polynomial,
    taylor_remainder,
)


def test_polynomial_examples():
    assert taylor_polynomial(parse("x^2"), 0, 2, 1) == 0.0
    assert taylor_polynomial(parse("exp(x)"), 0, 1, 1) == 1.0
    f = parse("sin(x)")
    t = taylor_polynomial(f, 0, 4, 0.3)
    assert t == pytest.approx(0.3 - 0.3**3 / 6, rel=1e-15)
    assert abs(eval_real(f, 0.3) - t) <= 0.3**4 / 24


def test_remainder_examples():
    assert taylor_remainder(parse("x^2"), 0, 2, 1) == pytest.approx(1.0, rel=1e-14)
    assert taylor_remainder(parse("exp(x)"), 0, 1, 1) == pytest.approx(
        eval_real(parse("exp(x)"), 1) - 1, rel=1e-14)
    assert taylor_remainder(parse("log(x)"), 2.0, 3, 2.0) == 0.0


def test_reversed_segment():
    f = parse("exp(x)")
    r = taylor_remainder(f, 1.0, 2, 0.0)
    assert r == pytest.approx(1.0 - (math.e - math.e * 1.0), rel=1e-14)


def test_expansion_object():
    e = taylor_expansion(parse("exp(x)"), 0.0, 4)
    assert isinstance(e, TaylorExpansion)
    assert e.order_r == 4 and len(e.poly_coeffs) == 4
    assert e(1.0) == pytest.approx(1 + 1 + 1 / 2 + 1 / 6, rel=1e-15)
    with pytest.raises(ValueError):
        TaylorExpansion(0.0, 2, (1.0,))
    with pytest.raises(ValueError):
        taylor_expansion(parse("x"), 0.0, 0)
    with pytest.raises(ValueError):
        taylor_remainder(parse("x"), 0.0, 1, 1.0, gl_order=1)


def test_gauss_legendre_cached_and_read_only():
    nodes, weights = gauss_legendre(8)
    assert gauss_legendre(8)[0] is nodes
    assert weights.sum() == pytest.approx(2.0, rel=1e-15)
    with pytest.raises(ValueError):
        nodes[0] = 0.0


def _cases(seed, count):
    rng = np.random.default_rng(seed)
    for _ in range(count):
        f = parse(smooth_integrand_text(rng))
        x0 = float(rng.uniform(-2, 2))
        x = float(x0 + rng.uniform(-1.5, 1.5))
        r = int(rng.integers(1, 7))
        yield f, x0, x, r


def test_taylor_identity_random():
    worst = 0.0
    for f, x0, x, r in _cases(3, 300):
        fx = eval_real(f, x)
        resid = abs(fx - taylor_polynomial(f, x0, r, x) - taylor_remainder(f, x0, r, x))
        assert resid <= 1e-9 * (1 + abs(fx)), (to_text(f), x0, x, r, resid)
        worst = max(worst, resid / (1 + abs(fx)))
    assert worst < 1e-9


def test_shifted_form_agrees():
    for f, x0, x, r in _cases(4, 300):
        plain = taylor_remainder(f, x0, r, x)
        shifted = taylor_remainder(f, x0, r, x, shifted=True)
        assert abs(plain - shifted) <= 1e-12 * max(abs(plain), abs(shifted)), (to_text(f), x0, x, r, plain, shifted)


@pytest.mark.parametrize("degree", range(0, 6))
def test_remainder_vanishes_below_degree(degree):
    rng = np.random.default_rng(degree)
    coeffs = rng.uniform(-1, 1, degree + 1)
    f = parse(" + ".join(f"({float(c)!r})*x^{k}" for k, c in enumerate(coeffs)))
    for r in range(degree + 1, 7):
        for x0, x in ((0.3, 1.7), (1.0, -0.5)):
            assert abs(taylor_remainder(f, x0, r, x)) <= 1e-12
