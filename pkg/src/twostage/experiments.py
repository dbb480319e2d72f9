"""Experiment configuration and the runners behind the CLI subcommands.

A config file is YAML with sections (data, model, training, evaluation,
sweep, augment, synth, runtime); every field has a default, command-line
flags override file values, and the effective config is echoed into each
report's JSON sidecar.  All report CSVs are bitwise deterministic for a
fixed config and master seed.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, fields, replace
from functools import partial
from pathlib import Path
from time import perf_counter

import yaml

from .data import TimeSeries, load_series_csv, save_series_csv
from .exceptions import (
    DegenerateSeriesError,
    InsufficientDataError,
    UndefinedMetricError,
)
from .metrics import EvalReport, aggregate
from .models import ModelKind, PreviousPeriodModel
from .persist import load_bundle, save_models
from .reports import (
    MODEL_LABELS,
    ReportRow,
    SeriesRow,
    write_per_series_csv,
    write_report_csv,
    write_sidecar,
)
from .synth import generate_dataset
from .two_stage import (
    PipelineSettings,
    PreparedSeries,
    evaluate_forecast,
    evaluation_offset,
    evaluation_windows,
    fit_two_stage,
    predict,
    prepare_series,
    run_tasks,
    stage1_eval_mse,
    sweep_future_horizon,
    training_windows,
)

DATA_DIR_ENV = "TWOSTAGE_DATA_DIR"

KIND_BY_LABEL = {
    "mlp_mar": ModelKind.HYBRID_MLP_MAR,
    "mlp": ModelKind.MLP,
    "mar": ModelKind.MAR,
}
COMPARE_LABELS = ("two_stage", "mlp_mar", "mlp", "mar", "previous_period")

SKIP_ERRORS = (InsufficientDataError, DegenerateSeriesError, UndefinedMetricError)


@dataclass(frozen=True)
class ExperimentConfig:
    """Full configuration of one experiment run (defaults mirror the shipped
    network configuration: layers [200, 100, 50], 40/20 epochs, dropout 0.5,
    learning rate 0.01, batch 64, layer normalization on)."""

    data_path: str | None = None
    out_dir: str = "out"
    models_dir: str | None = None
    horizon: int = 12
    future: int = 12
    history: int | None = None
    period: int | None = None
    period_auto: bool = False
    default_period: int = 24
    stage1_kind: str = "mlp_mar"
    stage2_kind: str = "mlp_mar"
    widths: tuple[int, ...] = (200, 100, 50)
    dropout_rate: float = 0.5
    use_layer_norm: bool = True
    stage1_epochs: int = 40
    stage2_epochs: int = 20
    learning_rate: float = 0.01
    batch_size: int = 64
    master_seed: int = 0
    zero_tol: float = 1e-8
    keep_fraction: float = 0.95
    aggregation: str = "macro"
    workers: int = 0
    sweep_futures: tuple[int, ...] = (0, 6, 12, 18, 24)
    augment_horizons: tuple[int, ...] = (6, 12, 24)
    augment_future: int | None = None
    synth_series: int = 10
    synth_length: int = 960
    synth_periods: tuple[int, ...] = (24, 168)
    synth_amplitudes: tuple[float, ...] | None = None
    synth_sigma: float = 0.2
    synth_ar: float = 0.6
    synth_anomaly_rate: float = 0.0
    synth_anomaly_scale: float = 5.0

    def __post_init__(self) -> None:
        if self.horizon < 1:
            raise ValueError(f"horizon must be >= 1, got {self.horizon}")
        if self.future < 0:
            raise ValueError(f"future must be >= 0, got {self.future}")
        if self.stage1_kind not in KIND_BY_LABEL:
            raise ValueError(f"stage1_kind must be one of {sorted(KIND_BY_LABEL)}")
        if self.stage2_kind not in KIND_BY_LABEL:
            raise ValueError(f"stage2_kind must be one of {sorted(KIND_BY_LABEL)}")
        if self.aggregation not in ("macro", "pooled"):
            raise ValueError("aggregation must be 'macro' or 'pooled'")
        if any(f < 0 for f in self.sweep_futures):
            raise ValueError("sweep futures must be >= 0")
        if self.workers < 0:
            raise ValueError(f"workers must be >= 0, got {self.workers}")

    def settings(self) -> PipelineSettings:
        workers = self.workers if self.workers > 0 else (os.cpu_count() or 1)
        return PipelineSettings(
            history=self.history,
            period=self.period,
            period_auto=self.period_auto,
            default_period=self.default_period,
            stage1_epochs=self.stage1_epochs,
            stage2_epochs=self.stage2_epochs,
            learning_rate=self.learning_rate,
            batch_size=self.batch_size,
            widths=tuple(self.widths),
            dropout_rate=self.dropout_rate,
            use_layer_norm=self.use_layer_norm,
            master_seed=self.master_seed,
            zero_tol=self.zero_tol,
            keep_fraction=self.keep_fraction,
            workers=workers,
        )

    def echo(self) -> dict:
        """The effective configuration, JSON-ready, for the report sidecar."""
        out = {}
        for field in fields(self):
            value = getattr(self, field.name)
            out[field.name] = list(value) if isinstance(value, tuple) else value
        return out


CONFIG_SECTIONS: dict[str, dict[str, str]] = {
    "data": {
        "path": "data_path",
        "history": "history",
        "period": "period",
        "period_auto": "period_auto",
        "default_period": "default_period",
    },
    "model": {
        "stage1_kind": "stage1_kind",
        "stage2_kind": "stage2_kind",
        "widths": "widths",
        "dropout_rate": "dropout_rate",
        "use_layer_norm": "use_layer_norm",
    },
    "training": {
        "stage1_epochs": "stage1_epochs",
        "stage2_epochs": "stage2_epochs",
        "learning_rate": "learning_rate",
        "batch_size": "batch_size",
        "master_seed": "master_seed",
    },
    "evaluation": {
        "horizon": "horizon",
        "future": "future",
        "zero_tol": "zero_tol",
        "keep_fraction": "keep_fraction",
        "aggregation": "aggregation",
    },
    "sweep": {"futures": "sweep_futures"},
    "augment": {"horizons": "augment_horizons", "future": "augment_future"},
    "synth": {
        "series": "synth_series",
        "length": "synth_length",
        "periods": "synth_periods",
        "amplitudes": "synth_amplitudes",
        "sigma": "synth_sigma",
        "ar_coeff": "synth_ar",
        "anomaly_rate": "synth_anomaly_rate",
        "anomaly_scale": "synth_anomaly_scale",
    },
    "runtime": {"out_dir": "out_dir", "models_dir": "models_dir", "workers": "workers"},
}

_TUPLE_FIELDS = {
    "widths",
    "sweep_futures",
    "augment_horizons",
    "synth_periods",
    "synth_amplitudes",
}


def config_from_mapping(mapping: dict, source: str = "<config>") -> ExperimentConfig:
    """Build a config from a nested section mapping, rejecting unknown keys."""
    values: dict = {}
    for section, entries in (mapping or {}).items():
        known = CONFIG_SECTIONS.get(section)
        if known is None:
            raise ValueError(
                f"{source}: unknown config section {section!r} "
                f"(expected one of {sorted(CONFIG_SECTIONS)})"
            )
        if entries is None:
            continue
        if not isinstance(entries, dict):
            raise ValueError(f"{source}: section {section!r} must be a mapping")
        for key, value in entries.items():
            field = known.get(key)
            if field is None:
                raise ValueError(
                    f"{source}: unknown key {key!r} in section {section!r} "
                    f"(expected one of {sorted(known)})"
                )
            if field in _TUPLE_FIELDS and value is not None:
                if not isinstance(value, (list, tuple)):
                    raise ValueError(f"{source}: {section}.{key} must be a list")
                value = tuple(value)
            values[field] = value
    return ExperimentConfig(**values)


def config_from_yaml(path: str | Path) -> ExperimentConfig:
    path = Path(path)
    with open(path) as fh:
        mapping = yaml.safe_load(fh)
    if mapping is None:
        mapping = {}
    if not isinstance(mapping, dict):
        raise ValueError(f"{path}: config root must be a mapping of sections")
    return config_from_mapping(mapping, source=str(path))


def resolve_data_path(config: ExperimentConfig) -> Path:
    """Locate the data file, consulting the data-directory env var if needed."""
    if config.data_path is None:
        raise ValueError("no data file configured (set data.path or pass --data)")
    direct = Path(config.data_path)
    if direct.exists():
        return direct
    data_dir = os.environ.get(DATA_DIR_ENV)
    if not direct.is_absolute() and data_dir:
        fallback = Path(data_dir) / direct
        if fallback.exists():
            return fallback
        raise FileNotFoundError(
            f"data file not found at {direct} nor {fallback} (${DATA_DIR_ENV})"
        )
    raise FileNotFoundError(f"data file not found: {direct}")


def load_dataset(config: ExperimentConfig) -> list[TimeSeries]:
    return load_series_csv(resolve_data_path(config))


@dataclass(frozen=True)
class LabelOutcome:
    report: EvalReport | None
    error: str | None
    seconds: float


@dataclass(frozen=True)
class SeriesTaskResult:
    series_id: str
    period: int | None
    history: int | None
    outcomes: dict[str, LabelOutcome]


@dataclass(frozen=True)
class TaskSpec:
    """What to run for each series of one experiment row group."""

    settings: PipelineSettings
    horizon: int
    future: int
    labels: tuple[str, ...]
    stage1_kind: ModelKind
    stage2_kind: ModelKind


def _evaluate_label(label: str, prep: PreparedSeries, eval_set, task: TaskSpec):
    offset = evaluation_offset(prep)
    if label == "previous_period":
        model = PreviousPeriodModel(period=prep.period, horizon=task.horizon)
        return evaluate_forecast(
            lambda windows: model.forward(windows)[0],
            eval_set,
            offset,
            prep.series_id,
            task.settings,
        )
    if label == "two_stage":
        future = task.future
        stage2_kind = task.stage2_kind
    else:
        future = 0
        stage2_kind = KIND_BY_LABEL[label]
    train_set = training_windows(prep, task.horizon, future)
    s1_eval = None
    if future > 0:
        try:
            s1_eval = evaluation_windows(prep, task.horizon, future)
        except InsufficientDataError:
            s1_eval = None
    pair = fit_two_stage(
        train_set,
        task.settings,
        stage1_kind=task.stage1_kind,
        stage2_kind=stage2_kind,
        eval_set=s1_eval,
    )
    mse, count = stage1_eval_mse(pair, s1_eval)
    return evaluate_forecast(
        partial(predict, pair),
        eval_set,
        offset,
        prep.series_id,
        task.settings,
        s1_mse=mse,
        s1_count=count,
    )


def _series_task(args: tuple[TimeSeries, TaskSpec]) -> SeriesTaskResult:
    series, task = args
    outcomes: dict[str, LabelOutcome] = {}
    started = perf_counter()
    try:
        prep = prepare_series(series, task.settings)
        eval_set = evaluation_windows(prep, task.horizon)
    except SKIP_ERRORS as exc:
        elapsed = perf_counter() - started
        outcomes = {
            label: LabelOutcome(None, str(exc), elapsed) for label in task.labels
        }
        return SeriesTaskResult(series.series_id, None, None, outcomes)
    for label in task.labels:
        label_start = perf_counter()
        try:
            report = _evaluate_label(label, prep, eval_set, task)
            outcomes[label] = LabelOutcome(report, None, perf_counter() - label_start)
        except SKIP_ERRORS as exc:
            outcomes[label] = LabelOutcome(None, str(exc), perf_counter() - label_start)
    return SeriesTaskResult(series.series_id, prep.period, prep.history, outcomes)


def _uniform(values: list) -> int | None:
    unique = set(values)
    return values[0] if len(unique) == 1 else None


def _assemble_rows(
    experiment: str,
    results: list[SeriesTaskResult],
    task: TaskSpec,
    config: ExperimentConfig,
) -> tuple[list[ReportRow], list[SeriesRow], list[dict]]:
    rows: list[ReportRow] = []
    series_rows: list[SeriesRow] = []
    skipped: list[dict] = []
    for label in task.labels:
        future = task.future if label == "two_stage" else 0
        kept = [
            (res, res.outcomes[label].report)
            for res in results
            if res.outcomes[label].report is not None
        ]
        for res in results:
            outcome = res.outcomes[label]
            if outcome.error is not None:
                skipped.append(
                    {
                        "experiment": experiment,
                        "model": label,
                        "series_id": res.series_id,
                        "reason": outcome.error,
                    }
                )
        if not kept:
            continue
        reports = [report for _, report in kept]
        seconds = sum(res.outcomes[label].seconds for res in results)
        rows.append(
            ReportRow(
                experiment=experiment,
                model=label,
                horizon=task.horizon,
                future=future,
                history=_uniform([res.history for res, _ in kept]),
                period=_uniform([res.period for res, _ in kept]),
                n_series=len(kept),
                n_points=int(sum(r.n_points for r in reports)),
                macro=aggregate(reports, "macro"),
                pooled=aggregate(
                    reports,
                    "pooled",
                    zero_tol=config.zero_tol,
                    keep_fraction=config.keep_fraction,
                ),
                seed=config.master_seed,
                wall_time_seconds=seconds,
            )
        )
        series_rows.extend(
            SeriesRow(
                experiment=experiment,
                model=label,
                series_id=res.series_id,
                horizon=task.horizon,
                future=future,
                history=res.history,
                period=res.period,
                report=report,
                seed=config.master_seed,
            )
            for res, report in kept
        )
    return rows, series_rows, skipped


def _run_task_spec(
    experiment: str,
    series_list: list[TimeSeries],
    task: TaskSpec,
    config: ExperimentConfig,
):
    tasks = [(series, task) for series in series_list]
    results = run_tasks(_series_task, tasks, task.settings.workers)
    return _assemble_rows(experiment, results, task, config)


def _out_dir(config: ExperimentConfig, command: str) -> Path:
    out = Path(config.out_dir) / command
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write_reports(
    out: Path,
    config: ExperimentConfig,
    rows: list[ReportRow],
    series_rows: list[SeriesRow],
    skipped: list[dict],
    wall_time: float,
) -> dict[str, Path]:
    return {
        "report": write_report_csv(out / "report.csv", rows),
        "per_series": write_per_series_csv(out / "per_series.csv", series_rows),
        "sidecar": write_sidecar(
            out / "report.json", config.echo(), rows, skipped, wall_time
        ),
    }


def cmd_compare(config: ExperimentConfig) -> dict[str, Path]:
    """Train and evaluate all five models at the configured horizon."""
    started = perf_counter()
    series_list = load_dataset(config)
    task = TaskSpec(
        settings=config.settings(),
        horizon=config.horizon,
        future=config.future,
        labels=COMPARE_LABELS,
        stage1_kind=KIND_BY_LABEL[config.stage1_kind],
        stage2_kind=KIND_BY_LABEL[config.stage2_kind],
    )
    rows, series_rows, skipped = _run_task_spec("compare", series_list, task, config)
    return _write_reports(
        _out_dir(config, "compare"),
        config,
        rows,
        series_rows,
        skipped,
        perf_counter() - started,
    )


def cmd_augment(config: ExperimentConfig) -> dict[str, Path]:
    """Baseline vs. its two-stage augmentation across the configured horizons."""
    started = perf_counter()
    if not config.augment_horizons:
        raise ValueError("augment.horizons must not be empty")
    series_list = load_dataset(config)
    rows: list[ReportRow] = []
    series_rows: list[SeriesRow] = []
    skipped: list[dict] = []
    for horizon in config.augment_horizons:
        future = config.augment_future if config.augment_future is not None else horizon
        task = TaskSpec(
            settings=config.settings(),
            horizon=horizon,
            future=future,
            labels=(config.stage2_kind, "two_stage"),
            stage1_kind=KIND_BY_LABEL[config.stage1_kind],
            stage2_kind=KIND_BY_LABEL[config.stage2_kind],
        )
        h_rows, h_series_rows, h_skipped = _run_task_spec(
            "augment", series_list, task, config
        )
        rows.extend(h_rows)
        series_rows.extend(h_series_rows)
        skipped.extend(h_skipped)
    return _write_reports(
        _out_dir(config, "augment"),
        config,
        rows,
        series_rows,
        skipped,
        perf_counter() - started,
    )


def cmd_sweep(config: ExperimentConfig) -> dict[str, Path]:
    """Evaluate the two-stage model across the configured future lengths."""
    started = perf_counter()
    if not config.sweep_futures:
        raise ValueError("sweep.futures must not be empty")
    series_list = load_dataset(config)
    sweep_rows = sweep_future_horizon(
        series_list,
        config.horizon,
        list(config.sweep_futures),
        config.settings(),
        stage1_kind=KIND_BY_LABEL[config.stage1_kind],
        stage2_kind=KIND_BY_LABEL[config.stage2_kind],
    )
    rows: list[ReportRow] = []
    series_rows: list[SeriesRow] = []
    skipped: list[dict] = []
    for sweep_row in sweep_rows:
        rows.append(
            ReportRow(
                experiment="sweep",
                model="two_stage",
                horizon=config.horizon,
                future=sweep_row.future,
                history=_uniform([r.history for r in sweep_row.results]),
                period=_uniform([r.period for r in sweep_row.results]),
                n_series=len(sweep_row.results),
                n_points=int(sum(r.report.n_points for r in sweep_row.results)),
                macro=sweep_row.macro,
                pooled=sweep_row.pooled,
                seed=config.master_seed,
                wall_time_seconds=sweep_row.seconds,
            )
        )
        series_rows.extend(
            SeriesRow(
                experiment="sweep",
                model="two_stage",
                series_id=result.series_id,
                horizon=config.horizon,
                future=sweep_row.future,
                history=result.history,
                period=result.period,
                report=result.report,
                seed=config.master_seed,
            )
            for result in sweep_row.results
        )
        skipped.extend(
            {
                "experiment": "sweep",
                "model": "two_stage",
                "future": sweep_row.future,
                "series_id": sid,
                "reason": reason,
            }
            for sid, reason in sweep_row.skipped
        )
    return _write_reports(
        _out_dir(config, "sweep"),
        config,
        rows,
        series_rows,
        skipped,
        perf_counter() - started,
    )


def cmd_synth(config: ExperimentConfig) -> dict[str, Path]:
    """Generate the seeded synthetic dataset and write it as CSV."""
    dataset = generate_dataset(
        n_series=config.synth_series,
        length=config.synth_length,
        periods=config.synth_periods,
        master_seed=config.master_seed,
        amplitudes=config.synth_amplitudes,
        noise_sigma=config.synth_sigma,
        ar_coeff=config.synth_ar,
        anomaly_rate=config.synth_anomaly_rate,
        anomaly_scale=config.synth_anomaly_scale,
    )
    out = _out_dir(config, "synth")
    path = out / "synthetic.csv"
    save_series_csv(path, dataset)
    return {"data": path}


def _models_dir(config: ExperimentConfig, create: bool = False) -> Path:
    path = (
        Path(config.models_dir)
        if config.models_dir is not None
        else Path(config.out_dir) / "train" / "models"
    )
    if create:
        path.mkdir(parents=True, exist_ok=True)
    return path


def _train_task(args):
    series, task, out_dir = args
    try:
        prep = prepare_series(series, task.settings)
        train_set = training_windows(prep, task.horizon, task.future)
        s1_eval = None
        if task.future > 0:
            try:
                s1_eval = evaluation_windows(prep, task.horizon, task.future)
            except InsufficientDataError:
                s1_eval = None
        pair = fit_two_stage(
            train_set,
            task.settings,
            stage1_kind=task.stage1_kind,
            stage2_kind=task.stage2_kind,
            eval_set=s1_eval,
        )
        path = Path(out_dir) / f"{series.series_id}.tspair"
        save_models(
            pair,
            path,
            norm_stats=prep.stats,
            series_id=prep.series_id,
            period=prep.period,
        )
        return series.series_id, str(path), pair.stage1_eval_mse, None
    except SKIP_ERRORS as exc:
        return series.series_id, None, None, str(exc)


def cmd_train(config: ExperimentConfig) -> dict[str, Path]:
    """Train one stage pair per series and persist each to a model file."""
    series_list = load_dataset(config)
    out = _out_dir(config, "train")
    models_out = _models_dir(config, create=True)
    task = TaskSpec(
        settings=config.settings(),
        horizon=config.horizon,
        future=config.future,
        labels=("two_stage",),
        stage1_kind=KIND_BY_LABEL[config.stage1_kind],
        stage2_kind=KIND_BY_LABEL[config.stage2_kind],
    )
    tasks = [(series, task, str(models_out)) for series in series_list]
    results = run_tasks(_train_task, tasks, task.settings.workers)
    manifest = {
        "models": [
            {"series_id": sid, "file": path, "stage1_eval_mse": mse}
            for sid, path, mse, _ in results
            if path is not None
        ],
        "skipped": [
            {"series_id": sid, "reason": err}
            for sid, _, _, err in results
            if err is not None
        ],
        "config": config.echo(),
    }
    if not manifest["models"]:
        raise InsufficientDataError("no series could be trained")
    manifest_path = out / "manifest.json"
    import json

    with open(manifest_path, "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return {"models": models_out, "manifest": manifest_path}


def cmd_predict(config: ExperimentConfig) -> dict[str, Path]:
    """Forecast past the end of each series with its trained pair.

    Uses the stored normalization statistics; output is de-normalized, one
    CSV row per series.
    """
    series_list = load_dataset(config)
    models_out = _models_dir(config)
    out = _out_dir(config, "predict")
    path = out / "forecasts.csv"
    lines = []
    for series in series_list:
        model_path = models_out / f"{series.series_id}.tspair"
        if not model_path.exists():
            raise FileNotFoundError(
                f"no model file for series {series.series_id!r} at {model_path}"
            )
        bundle = load_bundle(model_path)
        if bundle.norm_stats is None:
            raise ValueError(f"{model_path}: file carries no normalization statistics")
        history_len = bundle.pair.spec.history
        if len(series) < history_len:
            raise InsufficientDataError(
                f"series {series.series_id!r} is shorter than the history window"
            )
        normalized = bundle.norm_stats.apply(series.values)
        forecast = predict(bundle.pair, normalized[-history_len:])
        lines.append((series.series_id, bundle.norm_stats.invert(forecast)))
    import csv as _csv

    with open(path, "w", newline="") as fh:
        writer = _csv.writer(fh)
        for series_id, values in lines:
            writer.writerow([series_id, *[repr(float(v)) for v in values]])
    return {"forecasts": path}


def cmd_eval(config: ExperimentConfig) -> dict[str, Path]:
    """Evaluate saved pairs on their series' evaluation halves."""
    started = perf_counter()
    series_list = load_dataset(config)
    models_out = _models_dir(config)
    settings = config.settings()
    results: list[SeriesTaskResult] = []
    horizons = set()
    futures = set()
    for series in series_list:
        model_path = models_out / f"{series.series_id}.tspair"
        if not model_path.exists():
            raise FileNotFoundError(
                f"no model file for series {series.series_id!r} at {model_path}"
            )
        bundle = load_bundle(model_path)
        if bundle.norm_stats is None:
            raise ValueError(f"{model_path}: file carries no normalization statistics")
        pair = bundle.pair
        horizons.add(pair.spec.horizon)
        futures.add(pair.spec.future)
        started_series = perf_counter()
        prep = PreparedSeries(
            series_id=series.series_id,
            stats=bundle.norm_stats,
            values=bundle.norm_stats.apply(series.values),
            train_length=len(series) // 2,
            period=bundle.period if bundle.period is not None else 0,
            history=pair.spec.history,
        )
        try:
            eval_set = evaluation_windows(prep, pair.spec.horizon)
            s1_eval = None
            if pair.spec.future > 0:
                try:
                    s1_eval = evaluation_windows(prep, pair.spec.horizon, pair.spec.future)
                except InsufficientDataError:
                    s1_eval = None
            mse, count = stage1_eval_mse(pair, s1_eval)
            report = evaluate_forecast(
                partial(predict, pair),
                eval_set,
                evaluation_offset(prep),
                prep.series_id,
                settings,
                s1_mse=mse,
                s1_count=count,
            )
            outcome = LabelOutcome(report, None, perf_counter() - started_series)
        except SKIP_ERRORS as exc:
            outcome = LabelOutcome(None, str(exc), perf_counter() - started_series)
        results.append(
            SeriesTaskResult(
                series.series_id,
                prep.period or None,
                prep.history,
                {"two_stage": outcome},
            )
        )
    if len(horizons) > 1 or len(futures) > 1:
        raise ValueError(
            "saved pairs disagree on horizon geometry; evaluate them separately"
        )
    task = TaskSpec(
        settings=settings,
        horizon=horizons.pop(),
        future=futures.pop(),
        labels=("two_stage",),
        stage1_kind=KIND_BY_LABEL[config.stage1_kind],
        stage2_kind=KIND_BY_LABEL[config.stage2_kind],
    )
    rows, series_rows, skipped = _assemble_rows("eval", results, task, config)
    return _write_reports(
        _out_dir(config, "eval"),
        config,
        rows,
        series_rows,
        skipped,
        perf_counter() - started,
    )
