"""Point-forecast accuracy metrics and their trimmed variants.

Four base metrics (MAPE, RMSPE, RMSE, MAE) plus "-95" variants that drop the
worst 5% of per-point error terms of each series before recomputing.  Because
series are normalized they cross zero, so points with |actual| below a small
threshold are excluded from the two percentage metrics (the threshold is
configurable; setting it to 0 disables the guard).  MAPE and RMSPE are
reported as plain ratios, not percentages.

Aggregation across series comes in two modes: macro (unweighted mean of
per-series metric values, the headline) and pooled (metrics recomputed over
the union of all per-point errors, which weights points rather than series;
trims are then applied to the pooled term collection).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import UndefinedMetricError
from .validation import check_vector

ZERO_TOL = 1e-8
KEEP_FRACTION = 0.95

MAPE = "mape"
RMSPE = "rmspe"
RMSE = "rmse"
MAE = "mae"
METRIC_KINDS = (MAPE, RMSPE, RMSE, MAE)
METRIC_NAMES = ("mape", "mape95", "rmspe", "rmspe95", "rmse", "rmse95", "mae", "mae95")

MACRO = "macro"
POOLED = "pooled"

AGGREGATE_ID = "aggregate"


@dataclass(frozen=True)
class PointErrors:
    """Per-point evaluation records: time index, actual value, prediction."""

    times: np.ndarray
    actual: np.ndarray
    predicted: np.ndarray

    def __post_init__(self) -> None:
        actual = check_vector(self.actual, "actual").copy()
        predicted = check_vector(self.predicted, "predicted").copy()
        times = np.array(self.times, dtype=np.int64)
        if times.ndim != 1:
            raise ValueError(f"times must be 1-dimensional, got shape {times.shape}")
        if not len(times) == len(actual) == len(predicted):
            raise ValueError(
                f"length mismatch: {len(times)} times, {len(actual)} actual, "
                f"{len(predicted)} predicted"
            )
        for name, arr in (("times", times), ("actual", actual), ("predicted", predicted)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    def __len__(self) -> int:
        return len(self.times)


@dataclass(frozen=True)
class EvalReport:
    """All eight accuracy numbers for one series (or an aggregate of series).

    ``s1_mse`` is the first-stage evaluation MSE when a first stage exists;
    ``s1_count`` is the number of elements behind it (needed for pooled
    aggregation).  ``points`` keeps the raw per-point records so reports can
    be pooled later; aggregated reports drop them.
    """

    series_id: str
    mape: float
    mape95: float
    rmspe: float
    rmspe95: float
    rmse: float
    rmse95: float
    mae: float
    mae95: float
    n_points: int
    s1_mse: float | None = None
    s1_count: int | None = None
    points: PointErrors | None = None

    def __post_init__(self) -> None:
        # No trimmed-vs-untrimmed inequality here: it holds when each metric
        # ranks by its own terms (the default) but not under rank_by_abs_error,
        # where dropping the largest absolute errors can raise a percentage
        # metric.
        for name in METRIC_NAMES:
            value = getattr(self, name)
            if not (np.isfinite(value) and value >= 0.0):
                raise ValueError(f"{name} must be finite and >= 0, got {value}")
        if self.s1_mse is not None and not (np.isfinite(self.s1_mse) and self.s1_mse >= 0):
            raise ValueError(f"s1_mse must be finite and >= 0, got {self.s1_mse}")

    def metric(self, name: str) -> float:
        return getattr(self, name)


def _percentage_terms(errs: PointErrors, zero_tol: float, squared: bool) -> np.ndarray:
    included = np.abs(errs.actual) >= zero_tol
    if not np.any(included):
        raise UndefinedMetricError(
            "every point was excluded by the zero-denominator guard"
        )
    ratio = (errs.actual[included] - errs.predicted[included]) / errs.actual[included]
    return ratio * ratio if squared else np.abs(ratio)


def _metric_terms(kind: str, errs: PointErrors, zero_tol: float) -> np.ndarray:
    """Per-point error terms whose (root) mean is the metric value."""
    if kind == MAPE:
        return _percentage_terms(errs, zero_tol, squared=False)
    if kind == RMSPE:
        return _percentage_terms(errs, zero_tol, squared=True)
    diff = errs.actual - errs.predicted
    if kind == RMSE:
        return diff * diff
    if kind == MAE:
        return np.abs(diff)
    raise ValueError(f"metric kind must be one of {METRIC_KINDS}, got {kind!r}")


def _finish(kind: str, terms: np.ndarray) -> float:
    mean = float(np.mean(terms))
    return float(np.sqrt(mean)) if kind in (RMSPE, RMSE) else mean


def mape(errs: PointErrors, zero_tol: float = ZERO_TOL) -> float:
    """Mean of |actual - predicted| / |actual| over non-guarded points."""
    return _finish(MAPE, _metric_terms(MAPE, errs, zero_tol))


def rmspe(errs: PointErrors, zero_tol: float = ZERO_TOL) -> float:
    """Root mean of squared relative errors over non-guarded points."""
    return _finish(RMSPE, _metric_terms(RMSPE, errs, zero_tol))


def rmse(errs: PointErrors) -> float:
    """Root mean squared error."""
    return _finish(RMSE, _metric_terms(RMSE, errs, 0.0))


def mae(errs: PointErrors) -> float:
    """Mean absolute error."""
    return _finish(MAE, _metric_terms(MAE, errs, 0.0))


def trimmed(
    kind: str,
    errs: PointErrors,
    keep_fraction: float = KEEP_FRACTION,
    zero_tol: float = ZERO_TOL,
    rank_by_abs_error: bool = False,
) -> float:
    """Recompute a metric after dropping its largest error terms.

    With n contributing points, the largest floor((1 - keep_fraction) * n)
    terms are removed (a small tolerance keeps exact multiples from being
    lost to float rounding).  By default each metric ranks by its own terms;
    with ``rank_by_abs_error`` every metric instead drops the points with the
    largest absolute error.

    Raises
    ------
    UndefinedMetricError
        If no terms survive the trim (or the zero guard).
    """
    if not 0.0 < keep_fraction <= 1.0:
        raise ValueError(f"keep_fraction must be in (0, 1], got {keep_fraction}")
    terms = _metric_terms(kind, errs, zero_tol)
    n = len(terms)
    drop = int(np.floor((1.0 - keep_fraction) * n + 1e-9))
    if drop >= n:
        raise UndefinedMetricError(f"trimming drops all {n} points for {kind}")
    if drop == 0:
        return _finish(kind, terms)
    if rank_by_abs_error:
        if kind in (MAPE, RMSPE):
            included = np.abs(errs.actual) >= zero_tol
            rank = np.abs(errs.actual[included] - errs.predicted[included])
        else:
            rank = np.abs(errs.actual - errs.predicted)
        survivors = terms[np.argsort(rank, kind="stable")[: n - drop]]
    else:
        survivors = np.sort(terms)[: n - drop]
    return _finish(kind, survivors)


def point_report(
    series_id: str,
    times,
    actual,
    predicted,
    s1_mse: float | None = None,
    s1_count: int | None = None,
    zero_tol: float = ZERO_TOL,
    keep_fraction: float = KEEP_FRACTION,
    rank_by_abs_error: bool = False,
) -> EvalReport:
    """Compute the full eight-metric report for one series."""
    errs = PointErrors(times=times, actual=actual, predicted=predicted)

    def pair(kind: str) -> tuple[float, float]:
        full = _finish(kind, _metric_terms(kind, errs, zero_tol))
        trim = trimmed(kind, errs, keep_fraction, zero_tol, rank_by_abs_error)
        return full, trim

    mape_v, mape95_v = pair(MAPE)
    rmspe_v, rmspe95_v = pair(RMSPE)
    rmse_v, rmse95_v = pair(RMSE)
    mae_v, mae95_v = pair(MAE)
    return EvalReport(
        series_id=series_id,
        mape=mape_v,
        mape95=mape95_v,
        rmspe=rmspe_v,
        rmspe95=rmspe95_v,
        rmse=rmse_v,
        rmse95=rmse95_v,
        mae=mae_v,
        mae95=mae95_v,
        n_points=len(errs),
        s1_mse=s1_mse,
        s1_count=s1_count,
        points=errs,
    )


def aggregate(
    reports: list[EvalReport],
    mode: str = MACRO,
    zero_tol: float = ZERO_TOL,
    keep_fraction: float = KEEP_FRACTION,
    rank_by_abs_error: bool = False,
) -> EvalReport:
    """Combine per-series reports into one.

    Macro mode takes the unweighted mean of each metric across series.
    Pooled mode concatenates the per-point records of all reports and
    recomputes every metric from scratch, so longer series weigh more; it
    requires each report to still carry its points.

    Raises
    ------
    ValueError
        If ``reports`` is empty or pooled mode is asked of point-free reports.
    """
    if not reports:
        raise ValueError("cannot aggregate an empty collection of reports")
    if mode == MACRO:
        values = {
            name: float(np.mean([r.metric(name) for r in reports]))
            for name in METRIC_NAMES
        }
        with_s1 = [r for r in reports if r.s1_mse is not None]
        s1 = float(np.mean([r.s1_mse for r in with_s1])) if with_s1 else None
        return EvalReport(
            series_id=AGGREGATE_ID,
            n_points=int(sum(r.n_points for r in reports)),
            s1_mse=s1,
            s1_count=None,
            points=None,
            **values,
        )
    if mode != POOLED:
        raise ValueError(f"mode must be {MACRO!r} or {POOLED!r}, got {mode!r}")
    if any(r.points is None for r in reports):
        raise ValueError("pooled aggregation needs reports that retain their points")
    pooled = point_report(
        AGGREGATE_ID,
        np.concatenate([r.points.times for r in reports]),
        np.concatenate([r.points.actual for r in reports]),
        np.concatenate([r.points.predicted for r in reports]),
        zero_tol=zero_tol,
        keep_fraction=keep_fraction,
        rank_by_abs_error=rank_by_abs_error,
    )
    weighted = [(r.s1_mse, r.s1_count) for r in reports if r.s1_mse is not None]
    s1 = None
    s1_count = None
    if weighted:
        if any(count is None for _, count in weighted):
            raise ValueError("pooled s1_mse needs s1_count on every contributing report")
        s1_count = int(sum(count for _, count in weighted))
        s1 = float(sum(value * count for value, count in weighted) / s1_count)
    return EvalReport(
        series_id=AGGREGATE_ID,
        mape=pooled.mape,
        mape95=pooled.mape95,
        rmspe=pooled.rmspe,
        rmspe95=pooled.rmspe95,
        rmse=pooled.rmse,
        rmse95=pooled.rmse95,
        mae=pooled.mae,
        mae95=pooled.mae95,
        n_points=pooled.n_points,
        s1_mse=s1,
        s1_count=s1_count,
        points=pooled.points,
    )
