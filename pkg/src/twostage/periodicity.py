"""Autocorrelation-based period detection.

Candidate periods are lags where the sample autocorrelation function has a
local maximum above a significance threshold.  The shortest candidate is the
period used for windowing; strongly seasonal hourly data typically yields
both a daily and a weekly candidate, and the daily one wins.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import DegenerateSeriesError, NoPeriodError
from .data import TimeSeries
from .validation import check_positive_int

ACF_THRESHOLD = 0.3
DEFAULT_PERIOD = 24


@dataclass(frozen=True)
class PeriodEstimate:
    """A candidate period and the autocorrelation score that supports it."""

    period: int
    acf_score: float

    def __post_init__(self) -> None:
        check_positive_int(self.period, "period")
        if self.period < 2:
            raise ValueError(f"period must be >= 2, got {self.period}")
        if not -1.0 - 1e-9 <= self.acf_score <= 1.0 + 1e-9:
            raise ValueError(f"acf_score must lie in [-1, 1], got {self.acf_score}")


def sample_acf(values: np.ndarray, max_lag: int) -> np.ndarray:
    """Sample autocorrelation at lags 0..max_lag (biased estimator).

    Raises
    ------
    DegenerateSeriesError
        If the series is constant (zero variance).
    """
    values = np.asarray(values, dtype=np.float64)
    n = len(values)
    if max_lag >= n:
        raise ValueError(f"max_lag {max_lag} must be smaller than the series ({n})")
    centered = values - values.mean()
    denom = float(np.dot(centered, centered))
    if denom < 1e-12:
        raise DegenerateSeriesError("cannot compute autocorrelation of a constant series")
    acf = np.empty(max_lag + 1, dtype=np.float64)
    acf[0] = 1.0
    for lag in range(1, max_lag + 1):
        acf[lag] = float(np.dot(centered[:-lag], centered[lag:])) / denom
    return acf


def estimate_periods(
    series: TimeSeries, max_lag: int, threshold: float = ACF_THRESHOLD
) -> list[PeriodEstimate]:
    """Find candidate periods as significant local peaks of the ACF.

    A lag k in 2..max_lag qualifies when acf[k] exceeds ``threshold`` and is
    strictly greater than both neighbors acf[k-1] and acf[k+1].  Results are
    sorted by descending score (ties broken by shorter period).

    Raises
    ------
    ValueError
        If max_lag < 2 or the series is shorter than 2 * max_lag.
    DegenerateSeriesError
        If the series is constant.
    """
    check_positive_int(max_lag, "max_lag")
    if max_lag < 2:
        raise ValueError(f"max_lag must be >= 2, got {max_lag}")
    n = len(series)
    if n < 2 * max_lag:
        raise ValueError(
            f"series {series.series_id!r} has {n} points; "
            f"need at least {2 * max_lag} for max_lag={max_lag}"
        )
    acf = sample_acf(series.values, max_lag + 1)
    candidates = [
        PeriodEstimate(period=lag, acf_score=float(acf[lag]))
        for lag in range(2, max_lag + 1)
        if acf[lag] > threshold and acf[lag] > acf[lag - 1] and acf[lag] > acf[lag + 1]
    ]
    candidates.sort(key=lambda est: (-est.acf_score, est.period))
    return candidates


def shortest_period(candidates: list[PeriodEstimate]) -> int:
    """Return the minimum period among the candidates.

    Raises
    ------
    NoPeriodError
        If the candidate list is empty; callers fall back to a configured
        default period.
    """
    if not candidates:
        raise NoPeriodError("no candidate period passed the threshold")
    return min(est.period for est in candidates)
