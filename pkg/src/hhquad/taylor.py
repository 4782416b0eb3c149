"""Taylor polynomials and the integral form of the remainder.

For ``f`` with ``r`` continuous derivatives,

    f(x) = T_{r-1}(x) + R_{r-1}(x),
    T_{r-1}(x) = sum_{k<r} f^(k)(x0) (x - x0)^k / k!,
    R_{r-1}(x) = int_{x0}^{x} (x - t)^(r-1) f^(r)(t) / (r-1)! dt.

The remainder is evaluated with Gauss-Legendre on the oriented segment
from ``x0`` to ``x``, so the identity also holds for ``x < x0``.  The
shifted form substitutes ``t -> x0 + t`` and integrates over ``[0, u]``
with ``u = x - x0``; it is the same integral, evaluated along a
different rounding path.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import factorial

import numpy as np

from .expr import Expr
from .jet import eval_jet

DEFAULT_GL_ORDER = 24


@lru_cache(maxsize=None)
def gauss_legendre(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights on [-1, 1]."""
    if n < 2:
        raise ValueError(f"Gauss-Legendre order must be >= 2, got {n}")
    nodes, weights = np.polynomial.legendre.leggauss(n)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


@dataclass(frozen=True)
class TaylorExpansion:
    x0: float
    order_r: int
    poly_coeffs: tuple[float, ...]

    def __post_init__(self):
        if len(self.poly_coeffs) != self.order_r:
            raise ValueError("need exactly order_r polynomial coefficients")

    def __call__(self, x: float) -> float:
        dx = x - self.x0
        acc = 0.0
        for c in reversed(self.poly_coeffs):
            acc = acc * dx + c
        return acc


def taylor_expansion(f: Expr, x0: float, r: int) -> TaylorExpansion:
    if r < 1:
        raise ValueError(f"r must be a positive integer, got {r}")
    jet = eval_jet(f, float(x0), r - 1)
    return TaylorExpansion(float(x0), r, tuple(float(c) for c in jet.coeffs))


def taylor_polynomial(f: Expr, x0: float, r: int, x: float) -> float:
    """Degree ``r-1`` Taylor polynomial of ``f`` about ``x0``, at ``x``."""
    return taylor_expansion(f, x0, r)(float(x))


def taylor_remainder(
    f: Expr,
    x0: float,
    r: int,
    x: float,
    gl_order: int = DEFAULT_GL_ORDER,
    *,
    shifted: bool = False,
) -> float:
    """Integral remainder ``R_{r-1}(f, x0, x)`` by Gauss-Legendre quadrature."""
    if r < 1:
        raise ValueError(f"r must be a positive integer, got {r}")
    x0, x = float(x0), float(x)
    if x == x0:
        return 0.0
    s, w = gauss_legendre(gl_order)
    u = x - x0
    half = 0.5 * u
    if shifted:
        t = half * (s + 1.0)  # t in [0, u]
        kernel = (u - t) ** (r - 1)
        fr = _derivative(f, x0 + t, r)
    else:
        t = x0 + half * (s + 1.0)  # t in [x0, x]
        kernel = (x - t) ** (r - 1)
        fr = _derivative(f, t, r)
    return float(half * np.sum(w * kernel * fr) / factorial(r - 1))


def _derivative(f: Expr, ts: np.ndarray, r: int) -> np.ndarray:
    return eval_jet(f, ts, r).coeffs[r] * factorial(r)
