"""Exception types raised across the package."""

from __future__ import annotations


class DegenerateSeriesError(ValueError):
    """Raised when a series is constant (zero variance) and cannot be normalized."""


class InsufficientDataError(ValueError):
    """Raised when a series is too short for the requested windowing or split."""


class NoPeriodError(ValueError):
    """Raised when no candidate period passes the autocorrelation threshold."""


class Stage1DisabledError(ValueError):
    """Raised when a first-stage operation is asked of a zero-length future segment."""


class UndefinedMetricError(ValueError):
    """Raised when a metric has no valid terms left (e.g. all targets near zero)."""


class ModelLoadError(ValueError):
    """Raised when a model file is truncated, corrupt, or has the wrong format."""
