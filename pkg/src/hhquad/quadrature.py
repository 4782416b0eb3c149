"""Composite and adaptive integral enclosures built from panel kernels."""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field, replace
from typing import Iterable, Literal

import numpy as np

from .bounds import DEFAULT_KERNELS, Enclosure, PanelData, enclose_panel
from .curvature import DEFAULT_BUDGET, CurvatureBounds, bound_curvature, manual_bounds
from .errors import CurvatureError, DomainError, InconsistentCurvatureError, PanelError, ShapeError
from .expr import Expr, eval_array, eval_interval
from .interval import Interval
from .jet import eval_jet

Method = Literal["fixed", "adaptive"]


@dataclass(frozen=True)
class QuadConfig:
    """Driver settings.

    ``curvature_mode`` is ``rigorous``, ``heuristic`` or ``manual``; manual
    mode takes ``manual_curvature=(m, M)`` valid on all of ``[a, b]``.
    ``curvature_scope="global"`` bounds ``f''`` once over ``[a, b]`` and
    reuses it on every panel instead of re-bounding per panel.
    """

    method: Method = "adaptive"
    panels_n: int = 1
    tolerance: float = 1e-6
    max_panels: int = 1024
    curvature_mode: str = "rigorous"
    kernels: frozenset = DEFAULT_KERNELS
    curvature_budget_per_panel: int = DEFAULT_BUDGET
    curvature_scope: Literal["panel", "global"] = "panel"
    manual_curvature: tuple[float, float] | None = None
    compensated: bool = False

    def __post_init__(self):
        if self.method not in ("fixed", "adaptive"):
            raise ValueError(f"method must be 'fixed' or 'adaptive', got {self.method!r}")
        if not self.tolerance > 0:
            raise ValueError(f"tolerance must be > 0, got {self.tolerance!r}")
        if self.panels_n < 1:
            raise ValueError(f"panels_n must be >= 1, got {self.panels_n!r}")
        if self.max_panels < self.panels_n:
            raise ValueError(f"max_panels ({self.max_panels}) must be >= panels_n ({self.panels_n})")
        if self.curvature_budget_per_panel < 1:
            raise ValueError("curvature_budget_per_panel must be >= 1")
        if self.curvature_scope not in ("panel", "global"):
            raise ValueError(f"curvature_scope must be 'panel' or 'global', got {self.curvature_scope!r}")
        if self.curvature_mode == "manual":
            if self.manual_curvature is None:
                raise CurvatureError("manual curvature mode needs manual_curvature=(m, M)")
            m, M = self.manual_curvature
            if m > M:
                raise CurvatureError(f"m exceeds M: m={m!r} > M={M!r}")
        elif self.curvature_mode not in ("rigorous", "heuristic"):
            raise ValueError(f"unknown curvature mode {self.curvature_mode!r}")
        object.__setattr__(self, "kernels", frozenset(self.kernels))


@dataclass
class EvalCounts:
    f: int = 0
    jet: int = 0
    interval: int = 0

    def as_dict(self) -> dict:
        return {"f": self.f, "jet": self.jet, "interval": self.interval}


@dataclass(frozen=True)
class PanelResult:
    domain: Interval
    curvature: CurvatureBounds
    enclosure: Enclosure
    integral: Interval  # width-scaled enclosure

    @property
    def contributors(self) -> tuple[str, ...]:
        return self.enclosure.contributors


@dataclass(frozen=True)
class QuadReport:
    integral_bounds: Interval
    certified: bool
    tolerance_met: bool
    panel_count: int
    evaluations: EvalCounts
    kernels_used: tuple[str, ...]
    panels: tuple[PanelResult, ...] | None = field(default=None, repr=False)

    @property
    def width(self) -> float:
        return self.integral_bounds.width


def _centre(iv: Interval) -> tuple[float, float]:
    """Midpoint of ``iv`` and a radius that reaches both ends."""
    c = iv.mid
    return c, max(c - iv.lo, iv.hi - c)


def _endpoint_sample(f: Expr, x: float) -> tuple[float, float, float, float]:
    jet = eval_jet(f, Interval(x), 1)
    fx, fr = _centre(jet.coeffs[0])
    dx, dr = _centre(jet.coeffs[1])
    return fx, fr, dx, dr


def sample_panel(f: Expr, a: float, b: float) -> PanelData:
    """Panel data for ``f`` on ``[a, b]`` with rigorous sampling error radii.

    Values and slopes are evaluated in interval arithmetic at the sample
    points, so rounding inside ``f`` (cancellation included) is carried
    into ``f_err``/``df_err`` instead of being ignored.
    """
    fa, ra, dfa, dra = _endpoint_sample(f, a)
    fb, rb, dfb, drb = _endpoint_sample(f, b)
    fmid, rm = _centre(eval_interval(f, Interval(Interval(a, b).mid)))
    return PanelData(a, b, fa, fb, fmid, dfa, dfb, max(ra, rb, rm), max(dra, drb))


class _PanelEvaluator:
    """Evaluates panels of one integrand, caching shared endpoint data."""

    def __init__(self, f: Expr, a: float, b: float, cfg: QuadConfig):
        self.f = f
        self.cfg = cfg
        self.counts = EvalCounts()
        self._endpoint: dict[float, tuple[float, float, float, float]] = {}
        self.done: list[PanelResult] = []
        self.global_curvature: CurvatureBounds | None = None
        whole = Interval(a, b)
        if cfg.curvature_mode == "manual":
            self.global_curvature = manual_bounds(*cfg.manual_curvature, whole)
        elif cfg.curvature_scope == "global":
            try:
                self.global_curvature = self._bound(whole)
            except (DomainError, CurvatureError) as exc:
                raise PanelError(whole, exc) from exc

    def _bound(self, X: Interval) -> CurvatureBounds:
        c = bound_curvature(self.f, X, self.cfg.curvature_mode, self.cfg.curvature_budget_per_panel)
        self.counts.jet += c.jet_evals
        self.counts.interval += c.interval_evals
        return c

    def _endpoint_data(self, x: float) -> tuple[float, float, float, float]:
        hit = self._endpoint.get(x)
        if hit is None:
            hit = self._endpoint[x] = _endpoint_sample(self.f, x)
            self.counts.jet += 1
        return hit

    def panel(self, lo: float, hi: float) -> PanelResult:
        dom = Interval(lo, hi)
        try:
            fa, ra, dfa, dra = self._endpoint_data(lo)
            fb, rb, dfb, drb = self._endpoint_data(hi)
            fmid, rm = _centre(eval_interval(self.f, Interval(dom.mid)))
            self.counts.f += 1
            data = PanelData(lo, hi, fa, fb, fmid, dfa, dfb, max(ra, rb, rm), max(dra, drb))
            if self.global_curvature is not None:
                curv = self.global_curvature.restrict(dom)
            else:
                curv = self._bound(dom)
            enc = enclose_panel(data, curv, self.cfg.kernels)
        except (DomainError, CurvatureError, InconsistentCurvatureError, ShapeError) as exc:
            raise PanelError(dom, exc, self.done) from exc
        width = Interval(hi) - Interval(lo)
        result = PanelResult(dom, curv, enc, enc.bounds * width)
        self.done.append(result)
        return result


def _sum(results: Iterable[PanelResult], compensated: bool) -> Interval:
    parts = [r.integral for r in results]
    if compensated:
        # fsum is correctly rounded; one ulp outward makes it a bound.
        lo = math.fsum(p.lo for p in parts)
        hi = math.fsum(p.hi for p in parts)
        return Interval(lo - math.ulp(lo), hi + math.ulp(hi))
    total = parts[0]
    for p in parts[1:]:
        total = total + p
    return total


def _report(ev: _PanelEvaluator, results: list[PanelResult], tolerance_met: bool, extra_ok: bool = True) -> QuadReport:
    results = sorted(results, key=lambda r: r.domain.lo)
    total = _sum(results, ev.cfg.compensated)
    used = sorted({k for r in results for k in r.contributors})
    certified = extra_ok and all(r.enclosure.certified for r in results)
    return QuadReport(
        integral_bounds=total,
        certified=certified,
        tolerance_met=tolerance_met,
        panel_count=len(results),
        evaluations=ev.counts,
        kernels_used=tuple(used),
        panels=tuple(results),
    )


def _check_limits(a: float, b: float) -> tuple[float, float]:
    a, b = float(a), float(b)
    if not (math.isfinite(a) and math.isfinite(b)):
        raise ValueError(f"integration limits must be finite, got a={a!r}, b={b!r}")
    if not a < b:
        raise ValueError(f"need a < b, got a={a!r}, b={b!r}")
    return a, b


def _nodes(a: float, b: float, n: int) -> list[float]:
    xs = [a + (b - a) * i / n for i in range(n)]
    xs.append(b)
    return xs


def integrate_fixed(f: Expr, a: float, b: float, cfg: QuadConfig | None = None) -> QuadReport:
    """Enclose the integral using ``cfg.panels_n`` uniform panels."""
    cfg = cfg or QuadConfig(method="fixed")
    if cfg.method != "fixed":
        cfg = replace(cfg, method="fixed")
    a, b = _check_limits(a, b)
    ev = _PanelEvaluator(f, a, b, cfg)
    xs = _nodes(a, b, cfg.panels_n)
    results = [ev.panel(lo, hi) for lo, hi in zip(xs, xs[1:])]
    report = _report(ev, results, tolerance_met=True)
    return replace(report, tolerance_met=report.width <= cfg.tolerance)


def integrate_adaptive(f: Expr, a: float, b: float, cfg: QuadConfig | None = None) -> QuadReport:
    """Bisect the widest panel until the enclosure width meets ``cfg.tolerance``.

    The worklist is keyed by scaled enclosure width; ties go to the
    leftmost panel, so the run is deterministic.
    """
    cfg = cfg or QuadConfig()
    a, b = _check_limits(a, b)
    ev = _PanelEvaluator(f, a, b, cfg)
    xs = _nodes(a, b, cfg.panels_n)
    heap: list[tuple[float, float, int, PanelResult]] = []
    frozen: list[PanelResult] = []  # panels too narrow to split
    seq = 0
    total_width = 0.0
    for lo, hi in zip(xs, xs[1:]):
        r = ev.panel(lo, hi)
        heapq.heappush(heap, (-r.integral.width, lo, seq, r))
        seq += 1
        total_width += r.integral.width

    def count() -> int:
        return len(heap) + len(frozen)

    while heap and count() < cfg.max_panels:
        if total_width <= cfg.tolerance:
            total_width = math.fsum(r.integral.width for r in _all(heap, frozen))
            if total_width <= cfg.tolerance:
                break
        neg_w, lo, _, worst = heapq.heappop(heap)
        left, right = worst.domain.bisect()
        if left.width == 0.0 or right.width == 0.0:
            frozen.append(worst)
            continue
        total_width += neg_w
        for half in (left, right):
            r = ev.panel(half.lo, half.hi)
            heapq.heappush(heap, (-r.integral.width, half.lo, seq, r))
            seq += 1
            total_width += r.integral.width

    results = list(_all(heap, frozen))
    report = _report(ev, results, tolerance_met=True)
    met = report.width <= cfg.tolerance
    return replace(report, tolerance_met=met, certified=report.certified and met)


def _all(heap, frozen):
    yield from (item[3] for item in heap)
    yield from frozen


def integrate(f: Expr, a: float, b: float, cfg: QuadConfig | None = None) -> QuadReport:
    cfg = cfg or QuadConfig()
    if cfg.method == "fixed":
        return integrate_fixed(f, a, b, cfg)
    return integrate_adaptive(f, a, b, cfg)


def oracle_integrate(f: Expr, a: float, b: float, n: int) -> float:
    """Composite Simpson with ``n`` (even) subintervals.

    A non-rigorous reference value for tests and ``--compare``; it never
    feeds a certified result.
    """
    if n < 2 or n % 2:
        raise ValueError(f"Simpson needs an even n >= 2, got {n}")
    xs = np.linspace(a, b, n + 1)
    ys = eval_array(f, xs)
    h = (b - a) / n
    return float(h / 3.0 * (ys[0] + ys[-1] + 4.0 * ys[1:-1:2].sum() + 2.0 * ys[2:-1:2].sum()))
