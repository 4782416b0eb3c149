"""Exception hierarchy shared by every hhquad module."""

from __future__ import annotations


class HHQuadError(Exception):
    """Base class for all library errors."""


class ExprSyntaxError(HHQuadError, ValueError):
    """Raised by the parser; ``position`` is the 0-based character offset."""

    def __init__(self, message: str, position: int, text: str = ""):
        self.position = position
        self.text = text
        super().__init__(f"{message} at offset {position}")


class UnknownIdentifierError(ExprSyntaxError):
    pass


class NonIntegerExponentError(ExprSyntaxError):
    pass


class DomainError(HHQuadError, ArithmeticError):
    """An elementary operation was applied outside its real domain.

    ``node`` is the expression node that failed, once the evaluator has
    attached it.
    """

    def __init__(self, message: str, node=None):
        self.reason = message
        self.node = node
        super().__init__(message)

    def __str__(self) -> str:
        if self.node is None:
            return self.reason
        return f"{self.reason} (in '{self.node}')"


class CurvatureError(HHQuadError, ValueError):
    """Invalid curvature data, e.g. m > M or a misused mode."""


class ShapeError(HHQuadError, ValueError):
    """A convex/concave-only kernel was requested without certified shape."""


class InconsistentCurvatureError(HHQuadError, ValueError):
    """The kernel intervals of a panel do not intersect."""


class PanelError(HHQuadError):
    """Evaluation failed on one panel of a quadrature run.

    Carries the failing panel domain and the panels completed so far.
    """

    def __init__(self, panel, cause: Exception, partial=()):
        self.panel = panel
        self.cause = cause
        self.partial = tuple(partial)
        super().__init__(f"panel [{panel.lo!r}, {panel.hi!r}]: {cause}")
