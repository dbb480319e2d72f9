"""Report emission: deterministic CSVs plus a structured JSON sidecar.

Each experiment writes three files into its output directory:

- ``report.csv``: one row per (model, horizon geometry) with macro and
  pooled aggregates.  Bitwise deterministic for a fixed config and seed.
- ``per_series.csv``: one row per (model, series).  Also deterministic.
- ``report.json``: config echo, the same rows, and a wall-clock timing
  block.  The timing block is the only part of any output that varies
  between identical reruns.

Floats are written with ``repr`` (shortest exact round-trip); missing values
(e.g. Stage-1 MSE of a future-free model) are empty fields.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path

from .metrics import METRIC_NAMES, EvalReport

MODEL_LABELS = ("two_stage", "mlp_mar", "mlp", "mar", "previous_period")

REPORT_COLUMNS = (
    "experiment",
    "model",
    "horizon",
    "future",
    "history",
    "period",
    "n_series",
    "n_points",
    *[f"{name}_macro" for name in METRIC_NAMES],
    "s1_mse_macro",
    *[f"{name}_pooled" for name in METRIC_NAMES],
    "s1_mse_pooled",
    "seed",
)

PER_SERIES_COLUMNS = (
    "experiment",
    "model",
    "series_id",
    "horizon",
    "future",
    "history",
    "period",
    "n_points",
    *METRIC_NAMES,
    "s1_mse",
    "seed",
)


@dataclass(frozen=True)
class ReportRow:
    """One aggregate line of a report.

    ``history`` and ``period`` are None when they differ across the
    aggregated series (possible with automatic period detection).
    ``wall_time_seconds`` is carried to the JSON sidecar only, never to the
    CSV, so the CSV stays bitwise deterministic.
    """

    experiment: str
    model: str
    horizon: int
    future: int
    history: int | None
    period: int | None
    n_series: int
    n_points: int
    macro: EvalReport
    pooled: EvalReport
    seed: int
    wall_time_seconds: float = 0.0

    def __post_init__(self) -> None:
        if self.model not in MODEL_LABELS:
            raise ValueError(f"model must be one of {MODEL_LABELS}, got {self.model!r}")


@dataclass(frozen=True)
class SeriesRow:
    """One per-series line of a report.

    ``period`` may be None when a stored model carries no period (the field
    is then left empty in the CSV).
    """

    experiment: str
    model: str
    series_id: str
    horizon: int
    future: int
    history: int
    period: int | None
    report: EvalReport
    seed: int

    def __post_init__(self) -> None:
        if self.model not in MODEL_LABELS:
            raise ValueError(f"model must be one of {MODEL_LABELS}, got {self.model!r}")


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return repr(float(value))
    return str(value)


def _aggregate_cells(report: EvalReport) -> list[str]:
    cells = [_fmt(report.metric(name)) for name in METRIC_NAMES]
    cells.append(_fmt(report.s1_mse))
    return cells


def report_row_cells(row: ReportRow) -> list[str]:
    return [
        row.experiment,
        row.model,
        _fmt(row.horizon),
        _fmt(row.future),
        _fmt(row.history),
        _fmt(row.period),
        _fmt(row.n_series),
        _fmt(row.n_points),
        *_aggregate_cells(row.macro),
        *_aggregate_cells(row.pooled),
        _fmt(row.seed),
    ]


def series_row_cells(row: SeriesRow) -> list[str]:
    return [
        row.experiment,
        row.model,
        row.series_id,
        _fmt(row.horizon),
        _fmt(row.future),
        _fmt(row.history),
        _fmt(row.period),
        _fmt(row.report.n_points),
        *[_fmt(row.report.metric(name)) for name in METRIC_NAMES],
        _fmt(row.report.s1_mse),
        _fmt(row.seed),
    ]


def write_report_csv(path: str | Path, rows: list[ReportRow]) -> Path:
    path = Path(path)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(REPORT_COLUMNS)
        for row in rows:
            writer.writerow(report_row_cells(row))
    return path


def write_per_series_csv(path: str | Path, rows: list[SeriesRow]) -> Path:
    path = Path(path)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(PER_SERIES_COLUMNS)
        for row in rows:
            writer.writerow(series_row_cells(row))
    return path


def write_sidecar(
    path: str | Path,
    config_echo: dict,
    rows: list[ReportRow],
    skipped: list[dict],
    wall_time_seconds: float,
) -> Path:
    """Write the JSON sidecar with config echo and timing."""
    path = Path(path)
    document = {
        "config": config_echo,
        "rows": [
            dict(zip(REPORT_COLUMNS, report_row_cells(row))) for row in rows
        ],
        "skipped": skipped,
        "timing": {
            "wall_time_seconds": wall_time_seconds,
            "per_row_seconds": {
                f"{row.experiment}/{row.model}/h{row.horizon}/H{row.future}": row.wall_time_seconds
                for row in rows
            },
        },
    }
    with open(path, "w") as fh:
        json.dump(document, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path
