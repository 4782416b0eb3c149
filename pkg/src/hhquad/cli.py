"""Command-line front end.

Exit codes: 0 success, 2 input error, 3 adaptive tolerance not met (the
enclosure is still printed), 4 domain or curvature error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass
from typing import Any, Sequence, TextIO

from . import __version__
from .bounds import KERNELS
from .errors import (
    CurvatureError,
    DomainError,
    ExprSyntaxError,
    HHQuadError,
    InconsistentCurvatureError,
    PanelError,
    ShapeError,
)
from .expr import parse
from .quadrature import QuadConfig, QuadReport, integrate, oracle_integrate

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_TOLERANCE = 3
EXIT_DOMAIN = 4

CSV_HEADER = ("label", "a", "b", "lower", "upper", "width", "certified", "panel_count")
DEFAULT_ORACLE_PANELS = 20000


class InputError(HHQuadError):
    """Bad user input; ``field`` names the flag or job key at fault."""

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")


@dataclass(frozen=True)
class Job:
    expr_text: str
    a: float
    b: float
    config: QuadConfig
    output: str = "text"
    compare_oracle: bool = False
    label: str = "job"
    emit_panels: bool = False
    oracle_panels: int = DEFAULT_ORACLE_PANELS


# ----------------------------------------------------------------------
# Formatting


def fmt(v: float) -> str:
    """17 significant digits: re-parsing gives back the identical double."""
    s = "%.17g" % v
    if s.lstrip("-").isdigit():
        s += ".0"
    return s


def _json(obj: Any) -> str:
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, float):
        return fmt(obj) if math.isfinite(obj) else "null"
    if isinstance(obj, (int, str)):
        return json.dumps(obj)
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {_json(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(_json(v) for v in obj) + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def report_record(job: Job, report: QuadReport, oracle: float | None) -> dict:
    rec = {
        "label": job.label,
        "expr": job.expr_text,
        "a": job.a,
        "b": job.b,
        "lower": report.integral_bounds.lo,
        "upper": report.integral_bounds.hi,
        "width": report.width,
        "certified": report.certified,
        "tolerance_met": report.tolerance_met,
        "panel_count": report.panel_count,
        "evaluations": report.evaluations.as_dict(),
        "kernels_used": list(report.kernels_used),
    }
    if oracle is not None:
        rec["oracle"] = oracle
    if job.emit_panels and report.panels is not None:
        rec["panels"] = [
            {
                "a": p.domain.lo,
                "b": p.domain.hi,
                "lower": p.integral.lo,
                "upper": p.integral.hi,
                "m": p.curvature.m,
                "M": p.curvature.M,
                "curvature": p.curvature.mode,
                "certified": p.enclosure.certified,
                "contributors": list(p.contributors),
                "lower_from": p.enclosure.lower_from,
                "upper_from": p.enclosure.upper_from,
            }
            for p in report.panels
        ]
    return rec


def _text_value(v: Any) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return fmt(v)
    if isinstance(v, dict):
        return " ".join(f"{k}:{_text_value(x)}" for k, x in v.items())
    if isinstance(v, list):
        return ",".join(_text_value(x) for x in v)
    return str(v)


def write_text(rec: dict, out: TextIO, curvature_mode: str | None = None) -> None:
    if "error" in rec:
        for key in ("line", "label", "error"):
            if key in rec:
                out.write(f"{key}={rec[key]}\n")
        out.write("\n")
        return
    for key, value in rec.items():
        if key == "oracle":
            out.write(f"simpson={fmt(value)}\n")
        elif key == "panels":
            for i, p in enumerate(value):
                out.write(f"panel[{i}]=" + " ".join(f"{k}:{_text_value(x)}" for k, x in p.items()) + "\n")
        else:
            out.write(f"{key}={_text_value(value)}\n")
    if curvature_mode == "heuristic":
        out.write("note=heuristic curvature bounds; enclosure is not certified\n")
    out.write("\n")


def csv_row(rec: dict) -> list[str]:
    if "error" in rec:
        return [rec.get("label", "")] + [""] * (len(CSV_HEADER) - 1)
    return [
        rec["label"], fmt(rec["a"]), fmt(rec["b"]), fmt(rec["lower"]), fmt(rec["upper"]),
        fmt(rec["width"]), "true" if rec["certified"] else "false", str(rec["panel_count"]),
    ]


class _Emitter:
    def __init__(self, fmt_name: str, out: TextIO):
        self.fmt = fmt_name
        self.out = out
        self._csv = csv.writer(out, lineterminator="\n") if fmt_name == "csv" else None
        if self._csv is not None:
            self._csv.writerow(CSV_HEADER)

    def emit(self, rec: dict, curvature_mode: str | None = None) -> None:
        if self.fmt == "json":
            self.out.write(_json(rec) + "\n")
        elif self.fmt == "csv":
            self._csv.writerow(csv_row(rec))
        else:
            write_text(rec, self.out, curvature_mode)


# ----------------------------------------------------------------------
# Building jobs


def parse_curvature(text: str, field: str = "--curvature") -> tuple[str, tuple[float, float] | None]:
    text = text.strip()
    if text in ("rigorous", "heuristic"):
        return text, None
    if text.startswith("manual:"):
        parts = text[len("manual:"):].split(",")
        if len(parts) != 2:
            raise InputError(field, f"manual curvature needs 'manual:m,M', got {text!r}")
        try:
            m, M = (float(p) for p in parts)
        except ValueError:
            raise InputError(field, f"manual curvature values must be numbers, got {text!r}") from None
        if not (math.isfinite(m) and math.isfinite(M)):
            raise InputError(field, "manual curvature values must be finite")
        if m > M:
            raise InputError(field, f"m exceeds M: m={m!r} > M={M!r}")
        return "manual", (m, M)
    raise InputError(field, f"expected rigorous, heuristic or manual:m,M, got {text!r}")


def parse_kernels(value, field: str = "--kernels") -> frozenset:
    items = value.split(",") if isinstance(value, str) else list(value)
    names = {str(k).strip() for k in items if str(k).strip()}
    bad = names - set(KERNELS) - {"auto"}
    if bad:
        raise InputError(field, f"unknown kernel(s) {', '.join(sorted(bad))}; choose from {', '.join(KERNELS)}, auto")
    if not names - {"auto"}:
        raise InputError(field, "select at least one of midpoint, trapezoid, ujevic, classic_hh")
    return frozenset(names)


def _number(value, field: str) -> float:
    try:
        v = float(value)
    except (TypeError, ValueError):
        raise InputError(field, f"expected a number, got {value!r}") from None
    if not math.isfinite(v):
        raise InputError(field, f"expected a finite number, got {value!r}")
    return v


def _integer(value, field: str, minimum: int = 1) -> int:
    if isinstance(value, bool):
        raise InputError(field, f"expected an integer, got {value!r}")
    try:
        v = int(value)
    except (TypeError, ValueError):
        raise InputError(field, f"expected an integer, got {value!r}") from None
    if v != value and not isinstance(value, str):
        raise InputError(field, f"expected an integer, got {value!r}")
    if v < minimum:
        raise InputError(field, f"must be >= {minimum}, got {v}")
    return v


def build_job(
    *,
    expr: Any,
    a: Any,
    b: Any,
    method: str = "adaptive",
    panels: Any = 1,
    tol: Any = 1e-6,
    max_panels: Any = 1024,
    kernels: Any = "midpoint,trapezoid,auto",
    curvature: str = "rigorous",
    scope: str = "panel",
    budget: Any = 256,
    output: str = "text",
    compare: bool = False,
    label: str = "job",
    emit_panels: bool = False,
    oracle_panels: Any = DEFAULT_ORACLE_PANELS,
    names: dict | None = None,
) -> Job:
    """Validate raw values into a :class:`Job`; ``names`` maps parameter
    names to the flag or key used in error messages."""
    names = names or {}
    n = lambda key: names.get(key, key)  # noqa: E731

    if not isinstance(expr, str) or not expr.strip():
        raise InputError(n("expr"), "expression is empty")
    try:
        parse(expr)
    except ExprSyntaxError as exc:
        raise InputError(n("expr"), str(exc)) from exc
    a_val, b_val = _number(a, n("a")), _number(b, n("b"))
    if not a_val < b_val:
        raise InputError(n("a"), f"need a < b, got a={a_val!r}, b={b_val!r}")
    if method not in ("fixed", "adaptive"):
        raise InputError(n("method"), f"expected fixed or adaptive, got {method!r}")
    tol_val = _number(tol, n("tol"))
    if tol_val <= 0:
        raise InputError(n("tol"), f"must be > 0, got {tol_val!r}")
    panels_val = _integer(panels, n("panels"))
    max_val = max(_integer(max_panels, n("max_panels")), panels_val)
    mode, manual = parse_curvature(curvature, n("curvature"))
    if scope not in ("panel", "global"):
        raise InputError(n("scope"), f"expected panel or global, got {scope!r}")
    cfg = QuadConfig(
        method=method,
        panels_n=panels_val,
        tolerance=tol_val,
        max_panels=max_val,
        curvature_mode=mode,
        manual_curvature=manual,
        kernels=parse_kernels(kernels, n("kernels")),
        curvature_budget_per_panel=_integer(budget, n("budget")),
        curvature_scope=scope,
    )
    oracle_n = _integer(oracle_panels, n("oracle_panels"), minimum=2)
    if oracle_n % 2:
        raise InputError(n("oracle_panels"), f"Simpson needs an even count, got {oracle_n}")
    return Job(
        expr_text=expr,
        a=a_val,
        b=b_val,
        config=cfg,
        output=output,
        compare_oracle=bool(compare),
        label=str(label),
        emit_panels=bool(emit_panels),
        oracle_panels=oracle_n,
    )


def run_job(job: Job) -> tuple[dict, int]:
    """Run one job; returns its output record and exit code."""
    f = parse(job.expr_text)
    try:
        report = integrate(f, job.a, job.b, job.config)
        oracle = oracle_integrate(f, job.a, job.b, job.oracle_panels) if job.compare_oracle else None
    except (PanelError, DomainError, CurvatureError, InconsistentCurvatureError, ShapeError) as exc:
        return {"label": job.label, "error": str(exc)}, EXIT_DOMAIN
    rec = report_record(job, report, oracle)
    if job.config.method == "adaptive" and not report.tolerance_met:
        return rec, EXIT_TOLERANCE
    return rec, EXIT_OK


# ----------------------------------------------------------------------
# Entry points

_FLAG_NAMES = {
    "expr": "--expr", "a": "--a", "b": "--b", "method": "--method", "panels": "--panels",
    "tol": "--tol", "max_panels": "--max-panels", "kernels": "--kernels",
    "curvature": "--curvature", "scope": "--curvature-scope", "budget": "--budget",
    "oracle_panels": "--oracle-panels",
}


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="hhquad",
        description="Certified enclosures of definite integrals from second-derivative bounds.",
    )
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("--expr", help="integrand in x, e.g. 'exp(-x^2)'")
    p.add_argument("--a", help="lower limit")
    p.add_argument("--b", help="upper limit")
    p.add_argument("--method", choices=("fixed", "adaptive"), default="adaptive")
    p.add_argument("--panels", default="1", help="panel count (fixed) or initial panels (adaptive)")
    p.add_argument("--tol", default="1e-6", help="target width of the integral enclosure")
    p.add_argument("--max-panels", default="1024", help="adaptive panel limit")
    p.add_argument("--kernels", default="midpoint,trapezoid,auto",
                   help="comma list of midpoint, trapezoid, ujevic, classic_hh, auto")
    p.add_argument("--curvature", default="rigorous", help="rigorous | heuristic | manual:m,M")
    p.add_argument("--curvature-scope", choices=("panel", "global"), default="panel")
    p.add_argument("--budget", default="256", help="curvature subintervals per panel")
    p.add_argument("--output", choices=("text", "json", "csv"), default="text")
    p.add_argument("--compare", action="store_true", help="also print a composite Simpson value")
    p.add_argument("--oracle-panels", default=str(DEFAULT_ORACLE_PANELS))
    p.add_argument("--emit-panels", action="store_true", help="include per-panel diagnostics")
    p.add_argument("--label", default="job")
    p.add_argument("--batch", metavar="PATH", help="newline-delimited JSON job file")
    return p


def run_cli(argv: Sequence[str] | None = None, out: TextIO | None = None, err: TextIO | None = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK

    if args.batch is not None:
        return run_batch(args.batch, args.output, out=out, err=err, emit_panels=args.emit_panels)

    missing = [flag for flag, v in (("--expr", args.expr), ("--a", args.a), ("--b", args.b)) if v is None]
    if missing:
        err.write(f"hhquad: error: missing required flag(s): {', '.join(missing)}\n")
        return EXIT_INPUT
    try:
        job = build_job(
            expr=args.expr, a=args.a, b=args.b, method=args.method, panels=args.panels,
            tol=args.tol, max_panels=args.max_panels, kernels=args.kernels,
            curvature=args.curvature, scope=args.curvature_scope, budget=args.budget,
            output=args.output, compare=args.compare, label=args.label,
            emit_panels=args.emit_panels, oracle_panels=args.oracle_panels, names=_FLAG_NAMES,
        )
    except InputError as exc:
        err.write(f"hhquad: error: {exc}\n")
        cause = exc.__cause__
        if isinstance(cause, ExprSyntaxError):
            err.write(f"  {cause.text}\n  {' ' * cause.position}^\n")
        return EXIT_INPUT

    rec, code = run_job(job)
    if "error" in rec:
        err.write(f"hhquad: error: {rec['error']}\n")
        return code
    _Emitter(job.output, out).emit(rec, job.config.curvature_mode)
    if code == EXIT_TOLERANCE:
        err.write(f"hhquad: tolerance {job.config.tolerance!r} not met with {rec['panel_count']} panels\n")
    return code


_JOB_KEYS = {
    "expr", "a", "b", "method", "panels", "tol", "max_panels", "kernels", "curvature",
    "scope", "budget", "compare", "label", "emit_panels", "oracle_panels",
}


def run_batch(
    path: str,
    output: str = "json",
    *,
    out: TextIO | None = None,
    err: TextIO | None = None,
    emit_panels: bool = False,
) -> int:
    """Run every job in a newline-delimited JSON file.

    One record per job in input order; a failing job yields an error
    record and does not stop the batch.  Exit code 0 only if every job
    succeeded, otherwise the most severe of 2 (input), 4 (domain) and 3
    (tolerance), in that order of precedence.
    """
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        err.write(f"hhquad: error: --batch: cannot read {path!r}: {exc.strerror}\n")
        return EXIT_INPUT

    emitter = _Emitter(output, out)
    codes = set()
    seen: set[str] = set()
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        label = f"line{lineno}"
        try:
            try:
                raw = json.loads(line)
            except json.JSONDecodeError as exc:
                raise InputError(f"line {lineno}", f"malformed JSON ({exc.msg} at column {exc.colno})") from None
            if not isinstance(raw, dict):
                raise InputError(f"line {lineno}", "job must be a JSON object")
            unknown = set(raw) - _JOB_KEYS
            if unknown:
                raise InputError(f"line {lineno}", f"unknown job field(s) {', '.join(sorted(unknown))}")
            label = str(raw.get("label", label))
            if label in seen:
                raise InputError("label", f"duplicate label {label!r}")
            seen.add(label)
            for key in ("expr", "a", "b"):
                if key not in raw:
                    raise InputError(key, "required job field is missing")
            fields = dict(raw, label=label, output=output)
            fields.setdefault("emit_panels", emit_panels)
            job = build_job(**fields)
        except InputError as exc:
            rec = {"line": lineno, "label": label, "error": str(exc)}
            emitter.emit(rec)
            codes.add(EXIT_INPUT)
            continue
        rec, code = run_job(job)
        if "error" in rec:
            rec = {"line": lineno, **rec}
        emitter.emit(rec, job.config.curvature_mode)
        codes.add(code)

    for code in (EXIT_INPUT, EXIT_DOMAIN, EXIT_TOLERANCE):
        if code in codes:
            return code
    return EXIT_OK


def main() -> None:
    sys.exit(run_cli())


def render(rec: dict, output: str) -> str:
    """Render one record in the given format (the CSV form includes the header)."""
    buf = io.StringIO()
    _Emitter(output, buf).emit(rec)
    return buf.getvalue()
