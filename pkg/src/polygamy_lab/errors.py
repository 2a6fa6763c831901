"""Exception hierarchy.

All library errors derive from :class:`PolygamyLabError`.  Input-shaped
problems additionally derive from :class:`ValueError` so that generic
callers keep working.
"""

from __future__ import annotations


class PolygamyLabError(Exception):
    """Base class for every error raised by this package."""


class ShapeError(PolygamyLabError, ValueError):
    """Operand has the wrong shape (non-square, length mismatch, ...)."""


class SizeError(PolygamyLabError, ValueError):
    """A requested object exceeds the configured dimension cap."""


class LayoutError(PolygamyLabError, ValueError):
    """Subsystem indices or dimensions are inconsistent with the layout."""


class DomainError(PolygamyLabError, ValueError):
    """A scalar argument lies outside the documented domain."""


class RangeError(PolygamyLabError, ValueError):
    """An integer argument lies outside its admissible range."""


class PositivityError(PolygamyLabError, ValueError):
    """A matrix that must be positive semidefinite is not."""


class StateFileError(PolygamyLabError, ValueError):
    """A state file failed parsing or validation."""


class ConvergenceError(PolygamyLabError, RuntimeError):
    """An iterative routine exhausted its iteration budget.

    Carries the final residual in :attr:`residual`.
    """

    def __init__(self, message: str, residual: float):
        super().__init__(f"{message} (residual={residual:.3e})")
        self.residual = float(residual)
