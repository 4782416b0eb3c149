"""Truncated Taylor arithmetic (jets) over reals, arrays or intervals.

A jet of order ``r`` at ``x0`` holds ``coeffs[k] = f^(k)(x0) / k!`` for
``k = 0..r``.  The elementary functions use the usual recurrences obtained
from ``g' = h(u) u'``; no symbolic differentiation is involved.

Coefficients that are known to be exactly zero are skipped in
convolutions, which keeps interval jets of
polynomials tight (e.g. the second coefficient of ``x^2`` is exactly 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from math import factorial
from typing import Any

import numpy as np

from .errors import DomainError
from .expr import ARRAY, Expr, backend_for, evaluate
from .interval import Interval


def _conv(u, v, lo: int, hi: int, k: int, weighted: bool = False):
    """sum_{j=lo}^{hi} [j *] u[j] * v[k-j], skipping structural zeros (None)."""
    acc = None
    for j in range(lo, hi + 1):
        a = u[j]
        if a is None:
            continue
        b = v[k - j]
        if b is None:
            continue
        t = a * b
        if weighted and j != 1:
            t = t * j
        acc = t if acc is None else acc + t
    return acc


def _check_divisor(v0) -> None:
    if isinstance(v0, Interval):
        if v0.lo <= 0.0 <= v0.hi:
            raise DomainError(f"division by an interval containing zero {v0}")
    elif hasattr(v0, "shape"):
        if (v0 == 0).any():
            raise DomainError("division by zero")
    elif v0 == 0:
        raise DomainError("division by zero")


@dataclass(frozen=True)
class Jet:
    """Taylor coefficients ``f^(k)(x0)/k!`` for ``k = 0..order``."""

    coeffs: tuple

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def derivative(self, k: int) -> Any:
        """Return ``f^(k)(x0)`` (an enclosure of it for interval jets)."""
        c = self.coeffs[k]
        return c * factorial(k)

    def __getitem__(self, k: int):
        return self.coeffs[k]

    def __len__(self) -> int:
        return len(self.coeffs)


class _JetOps:
    """Backend over coefficient lists for one scalar backend and order.

    Inside this class ``None`` marks a coefficient that is exactly zero by
    construction; those terms are skipped instead of multiplied.
    """

    def __init__(self, be: dict, order: int):
        self.be = be
        self.n = order + 1
        self.ops = {name: getattr(self, name) for name in (
            "const", "neg", "add", "sub", "mul", "div", "pow",
            "exp", "log", "sin", "cos", "sqrt")}

    def __getitem__(self, op: str):
        return self.ops[op]

    def const(self, v: float) -> list:
        return [self.be["const"](v)] + [None] * (self.n - 1)

    def neg(self, u):
        return [None if c is None else -c for c in u]

    def add(self, u, v):
        return [b if a is None else a if b is None else a + b for a, b in zip(u, v)]

    def sub(self, u, v):
        return [(None if b is None else -b) if a is None else a if b is None else a - b
                for a, b in zip(u, v)]

    def mul(self, u, v):
        return [_conv(u, v, 0, k, k) for k in range(self.n)]

    def div(self, u, v):
        v0 = v[0]
        div = self.be["div"]
        _check_divisor(v0)
        q = []
        for k in range(self.n):
            s = _conv(v, q, 1, k, k) if k else None
            num = u[k] if s is None else (-s if u[k] is None else u[k] - s)
            q.append(None if num is None else div(num, v0))
        return q

    def pow(self, u, n: int):
        if n == 0:
            return self.const(1.0)
        if n < 0:
            return self.div(self.const(1.0), self.pow(u, -n))
        result, base, e = None, u, n
        while True:
            if e & 1:
                result = list(base) if result is None else self.mul(result, base)
            e >>= 1
            if not e:
                break
            base = self.mul(base, base)
        # Direct power for the value term: exact even-power range for intervals.
        result[0] = self.be["pow"](u[0], n)
        return result

    def exp(self, u):
        g = [self.be["exp"](u[0])]
        for k in range(1, self.n):
            s = _conv(u, g, 1, k, k, weighted=True)
            g.append(None if s is None else s / k)
        return g

    def log(self, u):
        u0 = u[0]
        div = self.be["div"]
        g = [self.be["log"](u0)]
        for k in range(1, self.n):
            s = _conv(g, u, 1, k - 1, k, weighted=True) if k > 1 else None
            if s is None:
                num = u[k]
            else:
                s = s / k
                num = -s if u[k] is None else u[k] - s
            g.append(None if num is None else div(num, u0))
        return g

    def _sincos(self, u):
        s = [self.be["sin"](u[0])]
        c = [self.be["cos"](u[0])]
        for k in range(1, self.n):
            ss = _conv(u, c, 1, k, k, weighted=True)
            cs = _conv(u, s, 1, k, k, weighted=True)
            s.append(None if ss is None else ss / k)
            c.append(None if cs is None else -cs / k)
        return s, c

    def sin(self, u):
        return self._sincos(u)[0]

    def cos(self, u):
        return self._sincos(u)[1]

    def sqrt(self, u):
        div = self.be["div"]
        g = [self.be["sqrt"](u[0])]
        if self.n > 1:
            two_g0 = g[0] * 2
            if isinstance(two_g0, Interval):
                if two_g0.lo <= 0.0:
                    raise DomainError("sqrt is not differentiable at 0")
            elif hasattr(two_g0, "shape"):
                if (two_g0 == 0).any():
                    raise DomainError("sqrt is not differentiable at 0")
            elif two_g0 == 0:
                raise DomainError("sqrt is not differentiable at 0")
        for k in range(1, self.n):
            s = _conv(g, g, 1, k - 1, k) if k > 1 else None
            num = u[k] if s is None else (-s if u[k] is None else u[k] - s)
            g.append(None if num is None else div(num, two_g0))
        return g


def variable_jet(x0, order: int) -> list:
    return [x0] + ([1.0] if order >= 1 else []) + [None] * max(order - 1, 0)


def eval_jet(f: Expr, x0, order: int) -> Jet:
    """Taylor coefficients of ``f`` at ``x0`` up to ``order``.

    ``x0`` may be a float, a numpy array of points (vectorised), or an
    :class:`Interval`; in the last case every coefficient is an interval
    enclosing ``f^(k)(xi)/k!`` for all ``xi`` in ``x0``.
    """
    if order < 0:
        raise ValueError(f"jet order must be >= 0, got {order}")
    if not isinstance(x0, Interval) and not hasattr(x0, "shape"):
        x0 = float(x0)
    be = backend_for(x0)
    ops = _JetOps(be, order)
    coeffs = [0.0 if c is None else c for c in evaluate(f, variable_jet(x0, order), ops)]
    if isinstance(x0, Interval):
        coeffs = [Interval.coerce(c) for c in coeffs]
    elif be is ARRAY:
        coeffs = [np.broadcast_to(np.asarray(c, dtype=float), x0.shape) for c in coeffs]
        if not all(np.isfinite(c).all() for c in coeffs):
            raise DomainError("non-finite Taylor coefficient", f)
    elif not all(math.isfinite(c) for c in coeffs):
        raise DomainError(f"non-finite Taylor coefficient at x={x0!r}", f)
    return Jet(tuple(coeffs))
