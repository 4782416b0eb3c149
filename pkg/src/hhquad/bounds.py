"""Two-sided bounds on the mean value of f over a panel.

Every kernel returns an interval for ``(1/(b-a)) * integral_a^b f``.  With
``h = b - a``, ``T = (f(a) + f(b))/2`` and ``F = f((a+b)/2)``:

=============  ==============================================
midpoint       ``[F + m h^2/24,  F + M h^2/24]``
trapezoid      ``[T - M h^2/12,  T - m h^2/12]``
ujevic         ``[T - S/8,  F + S/8]``, ``S = (f'(b) - f'(a)) h``
classic_hh     convex ``[F, T]``, concave ``[T, F]``
=============  ==============================================

The first two hold for any ``m <= f'' <= M`` and are sharp: for
``f(x) = (x - a)^2`` the midpoint lower end, the mean and the trapezoid
upper end all equal ``h^2/3``.  The last two need certified convexity
(``ujevic``) or convexity/concavity (``classic_hh``) and are only used to
tighten.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Literal

from .curvature import CurvatureBounds
from .errors import CurvatureError, InconsistentCurvatureError, ShapeError
from .interval import Interval, widen_ulps

KERNELS = ("midpoint", "trapezoid", "ujevic", "classic_hh")
DEFAULT_KERNELS = frozenset({"midpoint", "trapezoid", "auto"})
# Outward widening of each kernel endpoint before intersecting.
ENDPOINT_SLACK_ULPS = 2
# Rounding allowance when a shape-only kernel comes out reversed.
_SHAPE_SLACK_ULPS = 16


@dataclass(frozen=True)
class PanelData:
    a: float
    b: float
    fa: float
    fb: float
    fmid: float
    dfa: float = 0.0
    dfb: float = 0.0
    # Absolute error radius of each sampled value (fa, fb, fmid) and of each
    # slope (dfa, dfb).  Zero means the samples are taken as exact.
    f_err: float = 0.0
    df_err: float = 0.0

    def __post_init__(self):
        vals = (self.a, self.b, self.fa, self.fb, self.fmid, self.dfa, self.dfb, self.f_err, self.df_err)
        if not all(math.isfinite(v) for v in vals):
            raise ValueError(f"panel data must be finite: {self}")
        if self.f_err < 0 or self.df_err < 0:
            raise ValueError("error radii must be non-negative")
        if not self.a < self.b:
            raise ValueError(f"panel needs a < b, got a={self.a!r}, b={self.b!r}")

    @property
    def h(self) -> float:
        return self.b - self.a

    @property
    def trap(self) -> float:
        return 0.5 * (self.fa + self.fb)


@dataclass(frozen=True)
class Enclosure:
    """Bounds on the panel mean plus which kernels produced them."""

    bounds: Interval
    certified: bool
    contributors: tuple[str, ...]
    lower_from: str
    upper_from: str


def _check_domain(p: PanelData, c: CurvatureBounds) -> None:
    if not c.covers(p.a, p.b):
        raise CurvatureError(
            f"curvature bounds on {c.domain} do not cover the panel [{p.a!r}, {p.b!r}]"
        )


def _padded(lo: float, hi: float, r: float) -> Interval:
    return Interval(lo - r, hi + r) if r else Interval(lo, hi)


def midpoint_pair(p: PanelData, c: CurvatureBounds) -> Interval:
    _check_domain(p, c)
    h2 = p.h * p.h
    return _padded(p.fmid + c.m / 24.0 * h2, p.fmid + c.M / 24.0 * h2, p.f_err)


def trapezoid_pair(p: PanelData, c: CurvatureBounds) -> Interval:
    _check_domain(p, c)
    h2 = p.h * p.h
    t = p.trap
    return _padded(t - c.M / 12.0 * h2, t - c.m / 12.0 * h2, p.f_err)


def _ordered(lo: float, hi: float, r: float, scale: float, what: str, certified: bool) -> Interval:
    if lo <= hi:
        return _padded(lo, hi, r)
    # With the shape certified by curvature data a reversal can only be
    # rounding noise in the sampled values, so take the hull.
    if certified or lo - hi <= 2.0 * r + _SHAPE_SLACK_ULPS * math.ulp(scale):
        return _padded(hi, lo, r)
    raise ShapeError(f"{what}: lower end {lo!r} exceeds upper end {hi!r}; data is not {what.split()[0]}")


def ujevic_pair(p: PanelData, c: CurvatureBounds | None = None) -> Interval:
    """Bounds with the endpoint-slope spread ``S = (f'(b) - f'(a)) (b - a)``.

    Valid for convex ``f``.  When curvature data is passed it must certify
    convexity (``m >= 0``).
    """
    if c is not None:
        _check_domain(p, c)
        if not c.convex:
            raise ShapeError(f"ujevic kernel needs convexity (m >= 0), got m={c.m!r}")
    s = (p.dfb - p.dfa) * p.h
    lo = p.trap - s / 8.0
    hi = p.fmid + s / 8.0
    scale = max(abs(p.fa), abs(p.fb), abs(p.fmid), abs(s))
    r = p.f_err + 0.25 * p.df_err * p.h
    return _ordered(lo, hi, r, scale, "convex (ujevic)", c is not None)


def classic_hh_pair(
    p: PanelData,
    shape: Literal["convex", "concave"],
    c: CurvatureBounds | None = None,
) -> Interval:
    """Midpoint value and endpoint average as bounds on the mean.

    ``convex`` gives ``[F, T]``, ``concave`` gives ``[T, F]``.
    """
    if shape not in ("convex", "concave"):
        raise ValueError(f"shape must be 'convex' or 'concave', got {shape!r}")
    if c is not None:
        _check_domain(p, c)
        if shape == "convex" and not c.convex:
            raise ShapeError(f"curvature m={c.m!r} < 0 does not certify convexity")
        if shape == "concave" and not c.concave:
            raise ShapeError(f"curvature M={c.M!r} > 0 does not certify concavity")
    scale = max(abs(p.fa), abs(p.fb), abs(p.fmid))
    if shape == "convex":
        return _ordered(p.fmid, p.trap, p.f_err, scale, "convex (classic_hh)", c is not None)
    return _ordered(p.trap, p.fmid, p.f_err, scale, "concave (classic_hh)", c is not None)


def resolve_kernels(kernels: Iterable[str], c: CurvatureBounds) -> tuple[str, ...]:
    """Expand ``auto`` and validate shape-only kernels against ``c``.

    Returns the kernels in canonical order.
    """
    requested = set(kernels)
    if not requested:
        raise ValueError("at least one kernel is required")
    unknown = requested - set(KERNELS) - {"auto"}
    if unknown:
        raise ValueError(f"unknown kernel(s): {', '.join(sorted(unknown))}")
    if "ujevic" in requested and not c.convex:
        raise ShapeError(f"ujevic kernel requested but m={c.m!r} < 0 does not certify convexity")
    if "classic_hh" in requested and not (c.convex or c.concave):
        raise ShapeError(
            f"classic_hh kernel requested but curvature [{c.m!r}, {c.M!r}] certifies no shape"
        )
    if "auto" in requested:
        requested.discard("auto")
        if c.convex:
            requested |= {"ujevic", "classic_hh"}
        elif c.concave:
            requested.add("classic_hh")
    if not requested:
        raise ValueError("'auto' alone selects no kernel; add midpoint or trapezoid")
    return tuple(k for k in KERNELS if k in requested)


def kernel_interval(name: str, p: PanelData, c: CurvatureBounds) -> Interval:
    if name == "midpoint":
        return midpoint_pair(p, c)
    if name == "trapezoid":
        return trapezoid_pair(p, c)
    if name == "ujevic":
        return ujevic_pair(p, c)
    if name == "classic_hh":
        return classic_hh_pair(p, "convex" if c.convex else "concave", c)
    raise ValueError(f"unknown kernel {name!r}")


def enclose_panel(
    p: PanelData,
    c: CurvatureBounds,
    kernels: Iterable[str] = DEFAULT_KERNELS,
) -> Enclosure:
    """Intersect the selected kernel intervals into one mean-value enclosure.

    Raises :class:`InconsistentCurvatureError` when the intervals are
    disjoint, which can only happen if ``c`` does not bound ``f''``.
    """
    names = resolve_kernels(kernels, c)
    lo, hi = -math.inf, math.inf
    lower_from = upper_from = names[0]
    for name in names:
        iv = kernel_interval(name, p, c)
        klo, khi = widen_ulps(iv.lo, iv.hi, ENDPOINT_SLACK_ULPS)
        if klo > lo:
            lo, lower_from = klo, name
        if khi < hi:
            hi, upper_from = khi, name
    if lo > hi:
        raise InconsistentCurvatureError(
            f"inconsistent curvature data on [{p.a!r}, {p.b!r}]: "
            f"{lower_from} lower bound {lo!r} exceeds {upper_from} upper bound {hi!r} "
            f"(m={c.m!r}, M={c.M!r})"
        )
    return Enclosure(Interval(lo, hi), c.certified, names, lower_from, upper_from)
