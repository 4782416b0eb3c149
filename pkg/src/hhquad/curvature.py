"""Bounds ``m <= f'' <= M`` over an interval.

Three modes:

* ``rigorous`` -- interval jets (natural and centred forms) with
  best-first bisection; the hull is a guaranteed enclosure (up to the
  interval layer's slack).
* ``heuristic`` -- dense point sampling, widened by a safety margin.
  Not a proof; anything built from it is reported as non-certified.
* ``manual`` -- caller-supplied values, see :func:`manual_bounds`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from .errors import CurvatureError, DomainError
from .expr import Expr
from .interval import Interval
from .jet import eval_jet

Mode = Literal["rigorous", "heuristic", "manual"]
MODES = ("rigorous", "heuristic", "manual")

DEFAULT_BUDGET = 256
HEURISTIC_SAMPLES = 1024
HEURISTIC_REL_WIDEN = 0.01
HEURISTIC_ABS_WIDEN = 1e-12
# Rigorous refinement stops once the outer hull is within this fraction of
# its own width of the point-sampled inner hull.
DEFAULT_REL_TOL = 0.05


@dataclass(frozen=True)
class CurvatureBounds:
    """``m <= f''(x) <= M`` for ``x`` in ``domain``."""

    m: float
    M: float
    mode: Mode
    domain: Interval
    subintervals: int = field(default=1, compare=False)
    jet_evals: int = field(default=0, compare=False)
    interval_evals: int = field(default=0, compare=False)

    def __post_init__(self):
        if not (math.isfinite(self.m) and math.isfinite(self.M)):
            raise CurvatureError(f"curvature bounds must be finite, got m={self.m}, M={self.M}")
        if self.m > self.M:
            raise CurvatureError(f"m exceeds M: m={self.m!r} > M={self.M!r}")
        if self.mode not in MODES:
            raise CurvatureError(f"unknown curvature mode {self.mode!r}")

    @property
    def certified(self) -> bool:
        return self.mode != "heuristic"

    @property
    def convex(self) -> bool:
        return self.m >= 0.0

    @property
    def concave(self) -> bool:
        return self.M <= 0.0

    def covers(self, lo: float, hi: float) -> bool:
        return self.domain.lo <= lo and hi <= self.domain.hi

    def restrict(self, X: Interval) -> "CurvatureBounds":
        """The same (m, M) viewed as bounds on a sub-domain ``X``."""
        if not self.domain.contains(X):
            raise CurvatureError(f"{X} is not inside the curvature domain {self.domain}")
        return CurvatureBounds(self.m, self.M, self.mode, X)


def manual_bounds(m: float, M: float, X: Interval) -> CurvatureBounds:
    """Wrap caller-supplied curvature bounds; rejects ``m > M``."""
    return CurvatureBounds(float(m), float(M), "manual", Interval.coerce(X))


@dataclass
class _Piece:
    dom: Interval
    enc: Interval
    splittable: bool = True


def _doubled(c: Interval) -> Interval:
    # Doubling is exact in binary floating point; no slack needed.
    return Interval._raw(2.0 * c.lo, 2.0 * c.hi)


def _second_derivative(f: Expr, X: Interval) -> Interval:
    """Enclosure of the second derivative over ``X``.

    The natural jet enclosure is intersected with the centred form
    ``f2(c) + f3(X) * (X - c)`` (``f2``, ``f3`` the second and third
    derivatives).  Its overestimation shrinks quadratically with the
    width of ``X``, so far fewer bisections are needed.
    """
    try:
        jet = eval_jet(f, X, 3).coeffs
    except DomainError:
        # Only the third coefficient can fail where the second did not
        # (e.g. overflow); the order-2 enclosure is all that is required.
        return _doubled(eval_jet(f, X, 2).coeffs[2])
    natural = _doubled(jet[2])
    c = X.mid
    centred = _doubled(eval_jet(f, Interval(c), 2).coeffs[2]) + jet[3] * 6 * (X - c)
    return natural.intersect(centred) or natural


def _second_derivative_at(f: Expr, x: float) -> float:
    return eval_jet(f, x, 2).coeffs[2] * 2.0


def _rigorous(f: Expr, X: Interval, budget: int, rel_tol: float) -> CurvatureBounds:
    pieces = [_Piece(X, _second_derivative(f, X))]
    interval_evals = 1
    samples = [_second_derivative_at(f, x) for x in (X.lo, X.mid, X.hi)]
    inner_lo, inner_hi = min(samples), max(samples)
    jet_evals = 3

    while len(pieces) < budget:
        lo = min(p.enc.lo for p in pieces)
        hi = max(p.enc.hi for p in pieces)
        tol = rel_tol * (hi - lo) + 1e-12 * (1.0 + abs(lo) + abs(hi))
        candidates = []
        if inner_lo - lo > tol:
            candidates += [p for p in pieces if p.enc.lo == lo and p.splittable]
        if hi - inner_hi > tol:
            candidates += [p for p in pieces if p.enc.hi == hi and p.splittable]
        if not candidates:
            break
        target = min(candidates, key=lambda p: (-p.enc.width, -p.dom.width, p.dom.lo))
        left, right = target.dom.bisect()
        if left.width == 0.0 or right.width == 0.0:
            target.splittable = False
            continue
        pieces.remove(target)
        for half in (left, right):
            enc = _second_derivative(f, half).intersect(target.enc) or target.enc
            pieces.append(_Piece(half, enc))
            interval_evals += 1
        d2 = _second_derivative_at(f, left.hi)
        jet_evals += 1
        inner_lo, inner_hi = min(inner_lo, d2), max(inner_hi, d2)

    lo = min(p.enc.lo for p in pieces)
    hi = max(p.enc.hi for p in pieces)
    return CurvatureBounds(
        lo, hi, "rigorous", X,
        subintervals=len(pieces), jet_evals=jet_evals, interval_evals=interval_evals,
    )


def _heuristic(f: Expr, X: Interval, samples: int, rel_widen: float, abs_widen: float) -> CurvatureBounds:
    xs = np.linspace(X.lo, X.hi, samples)
    d2 = eval_jet(f, xs, 2).coeffs[2] * 2.0
    lo, hi = float(np.min(d2)), float(np.max(d2))
    pad = rel_widen * (hi - lo) + abs_widen
    return CurvatureBounds(lo - pad, hi + pad, "heuristic", X, jet_evals=samples)


def bound_curvature(
    f: Expr,
    X: Interval,
    mode: Mode = "rigorous",
    budget: int = DEFAULT_BUDGET,
    *,
    rel_tol: float = DEFAULT_REL_TOL,
    samples: int = HEURISTIC_SAMPLES,
    rel_widen: float = HEURISTIC_REL_WIDEN,
    abs_widen: float = HEURISTIC_ABS_WIDEN,
) -> CurvatureBounds:
    """Bound ``f''`` over ``X``.

    In rigorous mode ``X`` is bisected best-first, always splitting a
    subinterval whose enclosure sets the current hull, until ``budget``
    subintervals exist or the hull is within ``rel_tol`` of the sampled
    inner hull.  Running out of budget is not an error: the hull at that
    point is still valid.
    """
    X = Interval.coerce(X)
    if budget < 1:
        raise ValueError(f"budget must be >= 1, got {budget}")
    if mode == "rigorous":
        return _rigorous(f, X, budget, rel_tol)
    if mode == "heuristic":
        return _heuristic(f, X, samples, rel_widen, abs_widen)
    if mode == "manual":
        raise CurvatureError("manual curvature bounds come from the caller; use manual_bounds(m, M, X)")
    raise CurvatureError(f"unknown curvature mode {mode!r}")
