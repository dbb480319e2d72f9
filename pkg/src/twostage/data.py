"""Series ingestion, normalization, splitting, and sliding-window extraction.

A series is split in half: the first ``floor(n/2)`` points are for training,
the rest for evaluation.  Normalization statistics (mean, population std) are
computed on the training half only and applied to both halves, so reported
errors are in normalized units without test leakage.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path

import numpy as np

from .exceptions import DegenerateSeriesError, InsufficientDataError
from .validation import check_nonnegative_int, check_positive_int, check_vector

DEFAULT_HISTORY_FALLBACK = 48
HISTORY_PERIODS = 2

STD_FLOOR = 1e-12


@dataclass(frozen=True)
class TimeSeries:
    """A univariate series with an identifier and an optional known period."""

    series_id: str
    values: np.ndarray
    period: int | None = None

    def __post_init__(self) -> None:
        values = check_vector(self.values, "values").copy()
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        if len(values) < 2:
            raise ValueError("values must contain at least 2 points")
        if self.period is not None:
            period = check_positive_int(self.period, "period")
            if period >= len(values):
                raise ValueError(
                    f"period {period} must be shorter than the series ({len(values)})"
                )
            object.__setattr__(self, "period", period)

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class NormStats:
    """Mean and population standard deviation used to normalize one series."""

    mean: float
    std: float

    def __post_init__(self) -> None:
        if not self.std > 0.0:
            raise ValueError(f"std must be positive, got {self.std}")

    def apply(self, values: np.ndarray) -> np.ndarray:
        return (np.asarray(values, dtype=np.float64) - self.mean) / self.std

    def invert(self, values: np.ndarray) -> np.ndarray:
        return np.asarray(values, dtype=np.float64) * self.std + self.mean


@dataclass(frozen=True)
class HorizonSpec:
    """Window geometry: history length, forecast horizon, future-context length.

    ``history`` points feed the models, the next ``horizon`` points are the
    forecast target, and the ``future`` points after those form the extra
    context segment used by the second stage (may be zero).
    """

    history: int
    horizon: int
    future: int = 0

    def __post_init__(self) -> None:
        check_positive_int(self.history, "history")
        check_positive_int(self.horizon, "horizon")
        check_nonnegative_int(self.future, "future")

    @property
    def total(self) -> int:
        return self.history + self.horizon + self.future


@dataclass(frozen=True)
class WindowSample:
    """One window: contiguous history, target, and future slices of a series.

    ``anchor`` is the index of the last history point in the source series.
    """

    history: np.ndarray
    target: np.ndarray
    future: np.ndarray
    anchor: int


@dataclass(frozen=True)
class SampleSet:
    """All windows drawn from one series under a fixed :class:`HorizonSpec`."""

    samples: tuple[WindowSample, ...]
    spec: HorizonSpec
    source_id: str

    def __post_init__(self) -> None:
        for sample in self.samples:
            if (
                len(sample.history) != self.spec.history
                or len(sample.target) != self.spec.horizon
                or len(sample.future) != self.spec.future
            ):
                raise ValueError("sample segment lengths do not match spec")

    def __len__(self) -> int:
        return len(self.samples)

    @cached_property
    def history(self) -> np.ndarray:
        """Stacked history segments, shape (n_samples, history)."""
        return np.stack([s.history for s in self.samples])

    @cached_property
    def target(self) -> np.ndarray:
        """Stacked target segments, shape (n_samples, horizon)."""
        return np.stack([s.target for s in self.samples])

    @cached_property
    def future(self) -> np.ndarray:
        """Stacked future segments, shape (n_samples, future)."""
        if self.spec.future == 0:
            return np.empty((len(self.samples), 0), dtype=np.float64)
        return np.stack([s.future for s in self.samples])

    @cached_property
    def anchors(self) -> np.ndarray:
        return np.array([s.anchor for s in self.samples], dtype=np.int64)


def load_series_csv(path: str | Path) -> list[TimeSeries]:
    """Load series from a CSV file, one series per row.

    The first cell of each row is the series id, the remaining cells are
    numeric values.  Rows may have differing lengths and trailing empty cells
    (padding, as in the M4 distribution files) are ignored.  If the second
    cell of the first row is not numeric the row is treated as a header and
    skipped.

    Raises
    ------
    ValueError
        If a numeric cell fails to parse (the message names row and column)
        or the file contains no series.
    """
    path = Path(path)
    series: list[TimeSeries] = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        for row_num, row in enumerate(reader, start=1):
            if not row or all(cell.strip() == "" for cell in row):
                continue
            cells = list(row)
            while cells and cells[-1].strip() == "":
                cells.pop()
            if len(cells) < 2:
                raise ValueError(f"row {row_num}: expected an id and at least one value")
            if row_num == 1 and not _is_number(cells[1]):
                continue
            values = []
            for col_num, cell in enumerate(cells[1:], start=2):
                try:
                    values.append(float(cell))
                except ValueError:
                    raise ValueError(
                        f"row {row_num}, column {col_num}: invalid numeric value {cell!r}"
                    ) from None
            series.append(TimeSeries(series_id=cells[0].strip(), values=np.array(values)))
    if not series:
        raise ValueError(f"no series found in {path}")
    return series


def _is_number(cell: str) -> bool:
    try:
        float(cell)
    except ValueError:
        return False
    return True


def save_series_csv(path: str | Path, series: list[TimeSeries]) -> None:
    """Write series as CSV rows (id, then values), one per series.

    Values are written with ``repr`` so a load/save round-trip is bitwise
    exact.  Known periods are not stored in the file.
    """
    if not series:
        raise ValueError("no series to save")
    with open(Path(path), "w", newline="") as fh:
        writer = csv.writer(fh)
        for entry in series:
            writer.writerow([entry.series_id, *[repr(float(v)) for v in entry.values]])


def normalize(
    series: TimeSeries, stats: NormStats | None = None
) -> tuple[TimeSeries, NormStats]:
    """Scale a series to zero mean and unit variance.

    When ``stats`` is None the mean and population standard deviation are
    computed from ``series`` itself; pass the training-half statistics to
    normalize the evaluation half consistently.

    Raises
    ------
    DegenerateSeriesError
        If the series is (numerically) constant and stats must be computed.
    """
    if stats is None:
        mean = float(np.mean(series.values))
        std = float(np.std(series.values))
        if std < STD_FLOOR:
            raise DegenerateSeriesError(
                f"series {series.series_id!r} is constant; cannot normalize"
            )
        stats = NormStats(mean=mean, std=std)
    scaled = TimeSeries(
        series_id=series.series_id,
        values=stats.apply(series.values),
        period=series.period,
    )
    return scaled, stats


def split_half(series: TimeSeries) -> tuple[TimeSeries, TimeSeries]:
    """Split a series into a training half and an evaluation half.

    The training half gets the first ``floor(n/2)`` points; for odd lengths
    the evaluation half is one point longer.
    """
    n = len(series)
    if n < 4:
        raise InsufficientDataError(
            f"series {series.series_id!r} has {n} points; need at least 4 to split"
        )
    cut = n // 2

    def _carry(period: int | None, length: int) -> int | None:
        return period if period is not None and period < length else None

    first = TimeSeries(series.series_id, series.values[:cut], _carry(series.period, cut))
    second = TimeSeries(series.series_id, series.values[cut:], _carry(series.period, n - cut))
    return first, second


def build_windows(series: TimeSeries, spec: HorizonSpec, stride: int = 1) -> SampleSet:
    """Extract every sliding window of a series that fits the given geometry.

    Window anchors start at index ``history - 1`` and advance by ``stride``;
    a window is kept while its last future point stays inside the series.
    With ``n`` points this yields ``floor((n - total) / stride) + 1`` samples.

    Raises
    ------
    InsufficientDataError
        If the series is shorter than ``spec.total``.
    """
    check_positive_int(stride, "stride")
    values = series.values
    n = len(values)
    if n < spec.total:
        raise InsufficientDataError(
            f"series {series.series_id!r} has {n} points; "
            f"need at least {spec.total} for one window"
        )
    samples = []
    for anchor in range(spec.history - 1, n - spec.horizon - spec.future, stride):
        his = values[anchor - spec.history + 1 : anchor + 1]
        fut_start = anchor + spec.horizon + 1
        samples.append(
            WindowSample(
                history=his,
                target=values[anchor + 1 : fut_start],
                future=values[fut_start : fut_start + spec.future],
                anchor=anchor,
            )
        )
    return SampleSet(samples=tuple(samples), spec=spec, source_id=series.series_id)


def default_history_length(period: int | None) -> int:
    """History length to use when not configured: two periods, else 48."""
    if period is None:
        return DEFAULT_HISTORY_FALLBACK
    return HISTORY_PERIODS * check_positive_int(period, "period")
