"""The two-stage forecasting pipeline.

Stage 1 learns to map the history window to the future-context segment that
lies beyond the forecast target; Stage 2 learns to map the history window
concatenated with the TRUE future segment to the target.  At prediction time
the Stage-1 output substitutes for the unknown future segment.  Stage 2 is
never trained on Stage-1 outputs, and with a future length of zero the
pipeline degenerates exactly to the plain baseline model.

This module also carries the shared evaluation protocol: per-series
preparation (split, normalize, resolve period and history length), window
construction for training and evaluation, and the future-horizon sweep.
Evaluation windows tile the evaluation half with stride equal to the
forecast horizon and never depend on the future length, so sweep rows are
computed on identical targets.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import partial
from time import perf_counter

import numpy as np

from .data import (
    HorizonSpec,
    NormStats,
    SampleSet,
    TimeSeries,
    build_windows,
    default_history_length,
    normalize,
    split_half,
)
from .exceptions import (
    DegenerateSeriesError,
    InsufficientDataError,
    NoPeriodError,
    Stage1DisabledError,
    UndefinedMetricError,
)
from .metrics import (
    KEEP_FRACTION,
    ZERO_TOL,
    EvalReport,
    aggregate,
    point_report,
)
from .models import (
    DEFAULT_DROPOUT,
    DEFAULT_WIDTHS,
    ROLE_STAGE1,
    ROLE_STAGE2,
    ModelKind,
    make_model,
)
from .nn import TrainConfig, mse_loss, train_loop
from .periodicity import DEFAULT_PERIOD, estimate_periods, shortest_period
from .seeding import STAGE_ONE, STAGE_TWO, seed_for
from .validation import check_matrix

STAGE1_EPOCHS = 40
STAGE2_EPOCHS = 20
MAX_LAG_CAP = 336

TRAINABLE_KINDS = (ModelKind.MAR, ModelKind.MLP, ModelKind.HYBRID_MLP_MAR)


@dataclass(frozen=True)
class PipelineSettings:
    """Everything the pipeline needs beyond the data and the horizon geometry.

    ``history`` and ``period`` override the derived defaults (history falls
    back to two periods; the period falls back to the series' own value, then
    autocorrelation when ``period_auto`` is set, then ``default_period``).
    """

    history: int | None = None
    period: int | None = None
    period_auto: bool = False
    default_period: int = DEFAULT_PERIOD
    max_lag: int | None = None
    stage1_epochs: int = STAGE1_EPOCHS
    stage2_epochs: int = STAGE2_EPOCHS
    learning_rate: float = 0.01
    batch_size: int = 64
    widths: tuple[int, ...] = DEFAULT_WIDTHS
    dropout_rate: float = DEFAULT_DROPOUT
    use_layer_norm: bool = True
    master_seed: int = 0
    zero_tol: float = ZERO_TOL
    keep_fraction: float = KEEP_FRACTION
    workers: int = 1

    def stage1_config(self, seed: int) -> TrainConfig:
        return TrainConfig(
            epochs=self.stage1_epochs,
            learning_rate=self.learning_rate,
            batch_size=self.batch_size,
            seed=seed,
        )

    def stage2_config(self, seed: int) -> TrainConfig:
        return TrainConfig(
            epochs=self.stage2_epochs,
            learning_rate=self.learning_rate,
            batch_size=self.batch_size,
            seed=seed,
        )


@dataclass(frozen=True)
class StagePair:
    """A trained two-stage system (stage1 is absent when future length is 0)."""

    stage1: object | None
    stage2: object
    spec: HorizonSpec
    stage1_eval_mse: float | None

    def __post_init__(self) -> None:
        if (self.stage1 is None) != (self.spec.future == 0):
            raise ValueError("stage1 must be present exactly when future length > 0")
        if (self.stage1 is None) != (self.stage1_eval_mse is None):
            raise ValueError("stage1_eval_mse must accompany stage1")
        if self.stage1 is not None:
            if self.stage1.input_dim != self.spec.history:
                raise ValueError("stage1 input dimension does not match the history length")
            if self.stage1.output_dim != self.spec.future:
                raise ValueError("stage1 output dimension does not match the future length")
            if not np.isfinite(self.stage1_eval_mse) or self.stage1_eval_mse < 0:
                raise ValueError(f"stage1_eval_mse must be finite, got {self.stage1_eval_mse}")
        if self.stage2.input_dim != self.spec.history + self.spec.future:
            raise ValueError("stage2 input dimension must equal history + future")
        if self.stage2.output_dim != self.spec.horizon:
            raise ValueError("stage2 output dimension must equal the horizon")


def _check_trainable(kind: ModelKind, where: str) -> ModelKind:
    kind = ModelKind(kind)
    if kind not in TRAINABLE_KINDS:
        raise ValueError(f"{where} requires a trainable model kind, got {kind.value!r}")
    return kind


def _check_nonempty(train_set: SampleSet) -> None:
    if len(train_set) == 0:
        raise InsufficientDataError(
            f"no training windows available for series {train_set.source_id!r}"
        )


def train_stage1(
    train_set: SampleSet,
    kind: ModelKind,
    config: TrainConfig,
    eval_set: SampleSet | None = None,
    widths=DEFAULT_WIDTHS,
    dropout_rate: float = DEFAULT_DROPOUT,
    use_layer_norm: bool = True,
):
    """Train the history -> future-segment model.

    Returns (model, eval_mse) where eval_mse is computed on ``eval_set`` when
    given (in-sample on the training windows otherwise).

    Raises
    ------
    Stage1DisabledError
        If the sample set has no future segment (future length 0).
    """
    kind = _check_trainable(kind, "stage 1")
    if train_set.spec.future == 0:
        raise Stage1DisabledError("stage 1 is disabled when the future length is 0")
    _check_nonempty(train_set)
    rng = np.random.default_rng(config.seed)
    model = make_model(
        kind,
        train_set.spec,
        widths=widths,
        seed=rng,
        role=ROLE_STAGE1,
        dropout_rate=dropout_rate,
        use_layer_norm=use_layer_norm,
    )
    train_loop(model, train_set.history, train_set.future, config, rng=rng)
    held_out = eval_set if eval_set is not None and len(eval_set) > 0 else train_set
    predictions, _ = model.forward(held_out.history)
    eval_mse, _ = mse_loss(predictions, held_out.future)
    return model, eval_mse


def train_stage2(
    train_set: SampleSet,
    kind: ModelKind,
    config: TrainConfig,
    widths=DEFAULT_WIDTHS,
    dropout_rate: float = DEFAULT_DROPOUT,
    use_layer_norm: bool = True,
):
    """Train the (history ++ true future segment) -> target model.

    With future length 0 this trains the plain baseline on the history alone;
    the true future values are used in all other cases, never Stage-1 output.
    """
    kind = _check_trainable(kind, "stage 2")
    _check_nonempty(train_set)
    rng = np.random.default_rng(config.seed)
    model = make_model(
        kind,
        train_set.spec,
        widths=widths,
        seed=rng,
        role=ROLE_STAGE2,
        dropout_rate=dropout_rate,
        use_layer_norm=use_layer_norm,
    )
    inputs = np.hstack([train_set.history, train_set.future])
    train_loop(model, inputs, train_set.target, config, rng=rng)
    return model


def predict(pair: StagePair, history) -> np.ndarray:
    """Forecast the target segment from a history window (or batch of them).

    Runs Stage 1 in evaluation mode to estimate the future segment, then
    feeds history and estimate to Stage 2, also in evaluation mode.  With no
    Stage 1 this is exactly the baseline forward pass.
    """
    history = np.asarray(history, dtype=np.float64)
    single = history.ndim == 1
    batch = check_matrix(history, "history", n_cols=pair.spec.history)
    if pair.stage1 is None:
        out, _ = pair.stage2.forward(batch)
    else:
        future_estimate, _ = pair.stage1.forward(batch)
        out, _ = pair.stage2.forward(np.hstack([batch, future_estimate]))
    return out[0] if single else out


def fit_two_stage(
    train_set: SampleSet,
    settings: PipelineSettings,
    stage1_kind: ModelKind = ModelKind.HYBRID_MLP_MAR,
    stage2_kind: ModelKind = ModelKind.HYBRID_MLP_MAR,
    eval_set: SampleSet | None = None,
    stage1_seed: int | None = None,
    stage2_seed: int | None = None,
) -> StagePair:
    """Train a full StagePair with per-stage seeds derived from the settings.

    When the sample set has no future segment only Stage 2 is trained and
    the result degenerates to the baseline model.
    """
    spec = train_set.spec
    if stage2_seed is None:
        stage2_seed = seed_for(
            settings.master_seed,
            train_set.source_id,
            STAGE_TWO,
            spec.future,
            ModelKind(stage2_kind).value,
        )
    stage1 = None
    stage1_mse = None
    if spec.future > 0:
        if stage1_seed is None:
            stage1_seed = seed_for(
                settings.master_seed,
                train_set.source_id,
                STAGE_ONE,
                spec.future,
                ModelKind(stage1_kind).value,
            )
        stage1, stage1_mse = train_stage1(
            train_set,
            stage1_kind,
            settings.stage1_config(stage1_seed),
            eval_set=eval_set,
            widths=settings.widths,
            dropout_rate=settings.dropout_rate,
            use_layer_norm=settings.use_layer_norm,
        )
    stage2 = train_stage2(
        train_set,
        stage2_kind,
        settings.stage2_config(stage2_seed),
        widths=settings.widths,
        dropout_rate=settings.dropout_rate,
        use_layer_norm=settings.use_layer_norm,
    )
    return StagePair(stage1=stage1, stage2=stage2, spec=spec, stage1_eval_mse=stage1_mse)


def augment_baseline(
    baseline_kind: ModelKind,
    stage1_kind: ModelKind,
    train_set: SampleSet,
    settings: PipelineSettings,
    eval_set: SampleSet | None = None,
) -> StagePair:
    """Widen a baseline into a two-stage system fed by a trained Stage 1.

    The baseline architecture becomes Stage 2, accepting the history plus the
    future segment; the sample set must therefore carry a future segment.
    """
    if train_set.spec.future < 1:
        raise Stage1DisabledError(
            "augmentation needs windows with a future segment (future >= 1)"
        )
    return fit_two_stage(
        train_set,
        settings,
        stage1_kind=stage1_kind,
        stage2_kind=baseline_kind,
        eval_set=eval_set,
    )


@dataclass(frozen=True)
class PreparedSeries:
    """A series after normalization and protocol resolution.

    ``values`` is the full normalized series; the first ``train_length``
    points are the training half.  ``history`` is the resolved window length.
    """

    series_id: str
    stats: NormStats
    values: np.ndarray
    train_length: int
    period: int
    history: int


def prepare_series(series: TimeSeries, settings: PipelineSettings) -> PreparedSeries:
    """Split, normalize from the training half, and resolve period and history."""
    train_half, _ = split_half(series)
    norm_train, stats = normalize(train_half)
    if settings.period is not None:
        period = settings.period
    elif series.period is not None:
        period = series.period
    elif settings.period_auto:
        max_lag = settings.max_lag or min(len(norm_train) // 2, MAX_LAG_CAP)
        if max_lag < 2 or len(norm_train) < 2 * max_lag:
            period = settings.default_period
        else:
            try:
                period = shortest_period(estimate_periods(norm_train, max_lag))
            except NoPeriodError:
                period = settings.default_period
    else:
        period = settings.default_period
    history = settings.history or default_history_length(period)
    return PreparedSeries(
        series_id=series.series_id,
        stats=stats,
        values=stats.apply(series.values),
        train_length=len(train_half),
        period=period,
        history=history,
    )


def training_windows(prep: PreparedSeries, horizon: int, future: int) -> SampleSet:
    """Stride-1 windows over the training half."""
    train = TimeSeries(prep.series_id, prep.values[: prep.train_length])
    spec = HorizonSpec(history=prep.history, horizon=horizon, future=future)
    return build_windows(train, spec, stride=1)


def evaluation_windows(prep: PreparedSeries, horizon: int, future: int = 0) -> SampleSet:
    """Windows whose targets tile the evaluation half, stride = horizon.

    The history may reach back into the training half; the first target point
    is the first point of the evaluation half.  Pass a nonzero ``future`` to
    get the subset of windows usable for Stage-1 evaluation.
    """
    if prep.train_length < prep.history:
        raise InsufficientDataError(
            f"series {prep.series_id!r}: training half ({prep.train_length}) is "
            f"shorter than the history window ({prep.history})"
        )
    tail = TimeSeries(prep.series_id, prep.values[prep.train_length - prep.history :])
    spec = HorizonSpec(history=prep.history, horizon=horizon, future=future)
    return build_windows(tail, spec, stride=horizon)


def evaluation_offset(prep: PreparedSeries) -> int:
    """Shift from evaluation-window anchor indices to full-series indices."""
    return prep.train_length - prep.history


def evaluate_forecast(
    predict_fn,
    eval_set: SampleSet,
    offset: int,
    series_id: str,
    settings: PipelineSettings,
    s1_mse: float | None = None,
    s1_count: int | None = None,
) -> EvalReport:
    """Score a forecasting function on evaluation windows."""
    if len(eval_set) == 0:
        raise InsufficientDataError(f"series {series_id!r} has no evaluation windows")
    predictions = np.asarray(predict_fn(eval_set.history), dtype=np.float64)
    actual = eval_set.target
    if predictions.shape != actual.shape:
        raise ValueError(
            f"predictions of shape {predictions.shape} do not match targets "
            f"{actual.shape}"
        )
    horizon = eval_set.spec.horizon
    times = (eval_set.anchors[:, None] + offset + 1 + np.arange(horizon)[None, :]).ravel()
    return point_report(
        series_id,
        times,
        actual.ravel(),
        predictions.ravel(),
        s1_mse=s1_mse,
        s1_count=s1_count,
        zero_tol=settings.zero_tol,
        keep_fraction=settings.keep_fraction,
    )


def stage1_eval_mse(pair: StagePair, s1_eval_set: SampleSet | None):
    """(mse, element count) of Stage 1 on held-out windows, or (None, None)."""
    if pair.stage1 is None or s1_eval_set is None or len(s1_eval_set) == 0:
        return None, None
    predictions, _ = pair.stage1.forward(s1_eval_set.history)
    mse, _ = mse_loss(predictions, s1_eval_set.future)
    return mse, int(s1_eval_set.future.size)


def run_two_stage_series(
    series: TimeSeries,
    horizon: int,
    future: int,
    settings: PipelineSettings,
    stage1_kind: ModelKind = ModelKind.HYBRID_MLP_MAR,
    stage2_kind: ModelKind = ModelKind.HYBRID_MLP_MAR,
):
    """Full per-series protocol: prepare, train a StagePair, evaluate.

    Returns (EvalReport, StagePair, PreparedSeries).
    """
    prep = prepare_series(series, settings)
    eval_set = evaluation_windows(prep, horizon)
    train_set = training_windows(prep, horizon, future)
    s1_eval = None
    if future > 0:
        try:
            s1_eval = evaluation_windows(prep, horizon, future)
        except InsufficientDataError:
            s1_eval = None
    pair = fit_two_stage(
        train_set,
        settings,
        stage1_kind=stage1_kind,
        stage2_kind=stage2_kind,
        eval_set=s1_eval,
    )
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
    return report, pair, prep


@dataclass(frozen=True)
class SeriesResult:
    """One series' evaluation plus the protocol values resolved for it."""

    series_id: str
    period: int
    history: int
    report: EvalReport


@dataclass(frozen=True)
class SweepRow:
    """Aggregated results for one future-context length."""

    future: int
    macro: EvalReport
    pooled: EvalReport
    results: list[SeriesResult]
    skipped: list[tuple[str, str]]
    seconds: float = 0.0


def _sweep_task(args):
    series, horizon, future, settings, stage1_kind, stage2_kind = args
    try:
        report, _, prep = run_two_stage_series(
            series, horizon, future, settings, stage1_kind, stage2_kind
        )
        result = SeriesResult(
            series_id=series.series_id,
            period=prep.period,
            history=prep.history,
            report=report,
        )
        return series.series_id, result, None
    except (InsufficientDataError, DegenerateSeriesError, UndefinedMetricError) as exc:
        return series.series_id, None, str(exc)


def sweep_future_horizon(
    series_list: list[TimeSeries],
    horizon: int,
    future_values: list[int],
    settings: PipelineSettings,
    stage1_kind: ModelKind = ModelKind.HYBRID_MLP_MAR,
    stage2_kind: ModelKind = ModelKind.HYBRID_MLP_MAR,
) -> list[SweepRow]:
    """Train and evaluate the pipeline at each future-context length.

    Every row is computed on identical evaluation windows, and training
    seeds differ only through the future length, so rows are comparable.
    Rows with future length 0 report no Stage-1 MSE.
    """
    if not future_values:
        raise ValueError("future_values must not be empty")
    if not series_list:
        raise ValueError("series_list must not be empty")
    rows = []
    for future in future_values:
        started = perf_counter()
        tasks = [
            (series, horizon, future, settings, stage1_kind, stage2_kind)
            for series in series_list
        ]
        outcomes = run_tasks(_sweep_task, tasks, settings.workers)
        results = [result for _, result, _ in outcomes if result is not None]
        skipped = [(sid, err) for sid, _, err in outcomes if err is not None]
        if not results:
            raise InsufficientDataError(
                f"every series was skipped at future length {future}"
            )
        reports = [result.report for result in results]
        rows.append(
            SweepRow(
                future=future,
                macro=aggregate(reports, "macro"),
                pooled=aggregate(
                    reports,
                    "pooled",
                    zero_tol=settings.zero_tol,
                    keep_fraction=settings.keep_fraction,
                ),
                results=results,
                skipped=skipped,
                seconds=perf_counter() - started,
            )
        )
    return rows


def run_tasks(fn, tasks: list, workers: int) -> list:
    """Run tasks in order, with an optional process pool; output order is fixed."""
    if workers <= 1 or len(tasks) <= 1:
        return [fn(task) for task in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, tasks))
