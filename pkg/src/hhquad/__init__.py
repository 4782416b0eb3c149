"""Certified integral enclosures from sharp second-derivative bounds."""

__version__ = "0.1.0"

from .bounds import (
    Enclosure,
    PanelData,
    classic_hh_pair,
    enclose_panel,
    midpoint_pair,
    trapezoid_pair,
    ujevic_pair,
)
from .curvature import CurvatureBounds, bound_curvature, manual_bounds
from .errors import (
    CurvatureError,
    DomainError,
    ExprSyntaxError,
    HHQuadError,
    InconsistentCurvatureError,
    PanelError,
    ShapeError,
)
from .expr import Expr, eval_interval, eval_real, parse, to_text
from .interval import Interval
from .jet import Jet, eval_jet
from .quadrature import (
    QuadConfig,
    QuadReport,
    integrate,
    integrate_adaptive,
    integrate_fixed,
    oracle_integrate,
    sample_panel,
)
from .taylor import TaylorExpansion, taylor_expansion, taylor_polynomial, taylor_remainder

__all__ = [
    "CurvatureBounds", "CurvatureError", "DomainError", "Enclosure", "Expr", "ExprSyntaxError",
    "HHQuadError", "InconsistentCurvatureError", "Interval", "Jet", "PanelData", "PanelError",
    "QuadConfig", "QuadReport", "ShapeError", "TaylorExpansion", "bound_curvature",
    "classic_hh_pair", "enclose_panel", "eval_interval", "eval_jet", "eval_real", "integrate",
    "integrate_adaptive", "integrate_fixed", "manual_bounds", "midpoint_pair", "oracle_integrate",
    "parse", "sample_panel", "taylor_expansion", "taylor_polynomial", "taylor_remainder", "to_text",
    "trapezoid_pair", "ujevic_pair",
]
