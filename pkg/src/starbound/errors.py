"""Exception types raised across the package."""

from __future__ import annotations


class StarboundError(Exception):
    """Base class for all package errors."""


class InvalidArmCount(StarboundError, ValueError):
    pass


class NotBound(StarboundError, ValueError):
    pass


class NotNormalizable(StarboundError, ValueError):
    pass


class GeometryOverlap(StarboundError, ValueError):
    pass


class OutOfBounds(StarboundError, ValueError):
    pass


class Disconnected(StarboundError, ValueError):
    pass


class TooLarge(StarboundError, ValueError):
    pass


class BadMatrix(StarboundError, ValueError):
    pass


class ShapeError(StarboundError, ValueError):
    pass


class NeedVectors(StarboundError, ValueError):
    pass


class FitDomainError(StarboundError, ValueError):
    pass


class NoConvergence(StarboundError, RuntimeError):
    """An iterative solver hit its iteration cap.

    ``best_residual`` carries the smallest residual norm reached.
    """

    def __init__(self, message: str, best_residual: float = float("nan")):
        super().__init__(message)
        self.best_residual = best_residual


class StateNotTracked(StarboundError, RuntimeError):
    """A tracked bound state vanished at some system size."""

    def __init__(self, size, message: str | None = None):
        super().__init__(message or f"bound state not found at size {size!r}")
        self.size = size
