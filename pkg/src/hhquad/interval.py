"""Closed real intervals with outward slack.

Python gives no control over the FPU rounding mode, so every elementary
operation rounds to nearest and then pushes each endpoint ``SLACK_ULPS``
units in the last place outward.  For the correctly- or faithfully-rounded
operations used here (IEEE arithmetic, libm exp/log/sin/cos/sqrt/pow) this
over-covers the rounding error of the single operation.  It is not a
substitute for true directed rounding.
"""

from __future__ import annotations

import math
from typing import Union

from .errors import DomainError

SLACK_ULPS = 4

_INF = math.inf
_ulp = math.ulp
_new = object.__new__
_TWO_PI = 2.0 * math.pi
_HALF_PI = 0.5 * math.pi


def _down(v: float) -> float:
    return v - SLACK_ULPS * math.ulp(v)


def _up(v: float) -> float:
    return v + SLACK_ULPS * math.ulp(v)


def widen_ulps(lo: float, hi: float, ulps: int) -> tuple[float, float]:
    """Push ``lo`` down and ``hi`` up by ``ulps`` units in the last place."""
    return lo - ulps * math.ulp(lo), hi + ulps * math.ulp(hi)


class Interval:
    """Closed interval ``[lo, hi]`` with finite endpoints.

    Instances are treated as immutable.  Arithmetic accepts plain ints and
    floats, which are lifted to point intervals.
    """

    __slots__ = ("lo", "hi")

    def __init__(self, lo: float, hi: float | None = None):
        lo = float(lo)
        hi = lo if hi is None else float(hi)
        if not (math.isfinite(lo) and math.isfinite(hi)):
            raise ValueError(f"interval endpoints must be finite, got [{lo}, {hi}]")
        if lo > hi:
            raise ValueError(f"empty interval: lo={lo!r} > hi={hi!r}")
        self.lo = lo
        self.hi = hi

    @classmethod
    def _raw(cls, lo: float, hi: float) -> "Interval":
        # Internal constructor: ordering is the caller's responsibility.
        if not (-_INF < lo and hi < _INF):
            raise DomainError("interval overflow")
        obj = _new(cls)
        obj.lo = lo
        obj.hi = hi
        return obj

    @classmethod
    def _out(cls, lo: float, hi: float) -> "Interval":
        lo = lo - SLACK_ULPS * _ulp(lo)
        hi = hi + SLACK_ULPS * _ulp(hi)
        if not (-_INF < lo and hi < _INF):
            raise DomainError("interval overflow")
        obj = _new(cls)
        obj.lo = lo
        obj.hi = hi
        return obj

    @staticmethod
    def coerce(v: "Scalar") -> "Interval":
        if isinstance(v, Interval):
            return v
        return Interval(v, v)

    # ------------------------------------------------------------------
    # Basic queries

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def mid(self) -> float:
        m = 0.5 * (self.lo + self.hi)
        # Guard against overflow in lo + hi for huge endpoints.
        if not math.isfinite(m):
            m = 0.5 * self.lo + 0.5 * self.hi
        return min(max(m, self.lo), self.hi)

    def contains(self, x: Union[float, "Interval"]) -> bool:
        if isinstance(x, Interval):
            return self.lo <= x.lo and x.hi <= self.hi
        return self.lo <= x <= self.hi

    __contains__ = contains

    def hull(self, other: "Interval") -> "Interval":
        return Interval._raw(min(self.lo, other.lo), max(self.hi, other.hi))

    def intersect(self, other: "Interval") -> "Interval | None":
        lo = max(self.lo, other.lo)
        hi = min(self.hi, other.hi)
        if lo > hi:
            return None
        return Interval._raw(lo, hi)

    def bisect(self) -> tuple["Interval", "Interval"]:
        m = self.mid
        return Interval._raw(self.lo, m), Interval._raw(m, self.hi)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Interval):
            return self.lo == other.lo and self.hi == other.hi
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.lo, self.hi))

    def __repr__(self) -> str:
        return f"Interval({self.lo!r}, {self.hi!r})"

    def __str__(self) -> str:
        return f"[{self.lo!r}, {self.hi!r}]"

    # ------------------------------------------------------------------
    # Arithmetic

    def __neg__(self) -> "Interval":
        return Interval._raw(-self.hi, -self.lo)

    def __pos__(self) -> "Interval":
        return self

    def __add__(self, other) -> "Interval":
        if isinstance(other, Interval):
            return Interval._out(self.lo + other.lo, self.hi + other.hi)
        if isinstance(other, (int, float)):
            if other == 0:
                return self
            return Interval._out(self.lo + other, self.hi + other)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other) -> "Interval":
        if isinstance(other, Interval):
            return Interval._out(self.lo - other.hi, self.hi - other.lo)
        if isinstance(other, (int, float)):
            if other == 0:
                return self
            return Interval._out(self.lo - other, self.hi - other)
        return NotImplemented

    def __rsub__(self, other) -> "Interval":
        if isinstance(other, (int, float)):
            return Interval._out(other - self.hi, other - self.lo)
        return NotImplemented

    def __mul__(self, other) -> "Interval":
        if isinstance(other, Interval):
            a, b, c, d = self.lo, self.hi, other.lo, other.hi
            if a >= 0.0 and c >= 0.0:
                return Interval._out(a * c, b * d)
            p = (a * c, a * d, b * c, b * d)
            return Interval._out(min(p), max(p))
        if isinstance(other, (int, float)):
            if other == 1:
                return self
            if other == 0:
                return Interval._raw(0.0, 0.0)
            if other > 0:
                return Interval._out(self.lo * other, self.hi * other)
            return Interval._out(self.hi * other, self.lo * other)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Interval":
        if isinstance(other, Interval):
            c, d = other.lo, other.hi
            if c <= 0.0 <= d:
                raise DomainError(f"division by an interval containing zero {other}")
            a, b = self.lo, self.hi
            q = (a / c, a / d, b / c, b / d)
            return Interval._out(min(q), max(q))
        if isinstance(other, (int, float)):
            if other == 0:
                raise DomainError("division by zero")
            if other == 1:
                return self
            if other > 0:
                return Interval._out(self.lo / other, self.hi / other)
            return Interval._out(self.hi / other, self.lo / other)
        return NotImplemented

    def __rtruediv__(self, other) -> "Interval":
        if isinstance(other, (int, float)):
            return Interval._raw(other, other) / self
        return NotImplemented

    def __pow__(self, n: int) -> "Interval":
        return ipow(self, n)


Scalar = Union[float, Interval]


# ----------------------------------------------------------------------
# Elementary functions


def ipow(x: Interval, n: int) -> Interval:
    """Integer power with the exact even-power range rule."""
    if n == 0:
        return Interval._raw(1.0, 1.0)
    if n == 1:
        return x
    if n < 0:
        if x.lo <= 0.0 <= x.hi:
            raise DomainError(f"negative power of an interval containing zero {x}")
        return 1.0 / ipow(x, -n)
    try:
        if n % 2 == 1:
            return Interval._out(x.lo**n, x.hi**n)
        if x.lo >= 0.0:
            return Interval._raw(max(0.0, _down(x.lo**n)), _up(x.hi**n))
        if x.hi <= 0.0:
            return Interval._raw(max(0.0, _down(x.hi**n)), _up(x.lo**n))
        return Interval._raw(0.0, _up(max(-x.lo, x.hi) ** n))
    except OverflowError as exc:
        raise DomainError("power overflow") from exc


def iexp(x: Interval) -> Interval:
    try:
        return Interval._raw(max(0.0, _down(math.exp(x.lo))), _up(math.exp(x.hi)))
    except OverflowError as exc:
        raise DomainError(f"exp overflow on {x}") from exc


def ilog(x: Interval) -> Interval:
    if x.lo <= 0.0:
        raise DomainError(f"log of non-positive values in {x}")
    return Interval._out(math.log(x.lo), math.log(x.hi))


def isqrt(x: Interval) -> Interval:
    if x.lo < 0.0:
        raise DomainError(f"sqrt of negative values in {x}")
    return Interval._raw(max(0.0, _down(math.sqrt(x.lo))), _up(math.sqrt(x.hi)))


def _hits(x: Interval, phase: float) -> bool:
    """Whether ``x`` may contain a point ``phase + 2*k*pi``.

    Errs toward True near the boundary; the caller then reports the
    extreme value, which is always a valid (if wider) bound.
    """
    fuzz = 1e-12 * (1.0 + max(abs(x.lo), abs(x.hi)))
    k = math.ceil((x.lo - fuzz - phase) / _TWO_PI)
    return phase + k * _TWO_PI <= x.hi + fuzz


def _trig(x: Interval, fn, max_phase: float, min_phase: float) -> Interval:
    if x.hi - x.lo >= _TWO_PI:
        return Interval._raw(-1.0, 1.0)
    a, b = fn(x.lo), fn(x.hi)
    lo, hi = min(a, b), max(a, b)
    lo = -1.0 if _hits(x, min_phase) else max(-1.0, _down(lo))
    hi = 1.0 if _hits(x, max_phase) else min(1.0, _up(hi))
    return Interval._raw(lo, hi)


def isin(x: Interval) -> Interval:
    return _trig(x, math.sin, _HALF_PI, -_HALF_PI)


def icos(x: Interval) -> Interval:
    return _trig(x, math.cos, 0.0, math.pi)
