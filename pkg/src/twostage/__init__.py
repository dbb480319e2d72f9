"""Two-stage multi-horizon forecasting for univariate seasonal time series.

A history window is first mapped to the future context lying beyond the
forecast target; a second model then maps the history concatenated with that
context to the target.  Both stages share one architecture family: a dense
linear map, an MLP, or their elementwise sum, trained by plain SGD on a
small from-scratch engine.  The package also ships the evaluation protocol
(half split, train-half normalization, percentage/absolute error metrics
with trimmed variants), a seeded synthetic generator, binary model
persistence, and the experiment CLI.
"""

from .data import (
    HorizonSpec,
    NormStats,
    SampleSet,
    TimeSeries,
    WindowSample,
    build_windows,
    default_history_length,
    load_series_csv,
    normalize,
    save_series_csv,
    split_half,
)
from .estimators import (
    PreviousPeriodForecaster,
    TwoStageForecaster,
    WindowForecaster,
)
from .exceptions import (
    DegenerateSeriesError,
    InsufficientDataError,
    ModelLoadError,
    NoPeriodError,
    Stage1DisabledError,
    UndefinedMetricError,
)
from .experiments import ExperimentConfig, config_from_yaml
from .metrics import (
    METRIC_NAMES,
    EvalReport,
    PointErrors,
    aggregate,
    mae,
    mape,
    point_report,
    rmse,
    rmspe,
    trimmed,
)
from .models import (
    HybridModel,
    MarModel,
    MlpModel,
    ModelKind,
    PreviousPeriodModel,
    make_model,
    previous_period_forecast,
)
from .nn import (
    DenseLayer,
    MlpStack,
    TrainConfig,
    init_mlp,
    mlp_backward,
    mlp_forward,
    mse_loss,
    sgd_step,
    train_loop,
)
from .periodicity import (
    PeriodEstimate,
    estimate_periods,
    sample_acf,
    shortest_period,
)
from .persist import PersistedBundle, load_bundle, load_models, save_models
from .reports import (
    MODEL_LABELS,
    ReportRow,
    SeriesRow,
    write_per_series_csv,
    write_report_csv,
    write_sidecar,
)
from .seeding import seed_for
from .synth import generate_dataset, generate_series
from .two_stage import (
    PipelineSettings,
    PreparedSeries,
    SeriesResult,
    StagePair,
    SweepRow,
    augment_baseline,
    evaluate_forecast,
    evaluation_offset,
    evaluation_windows,
    fit_two_stage,
    predict,
    prepare_series,
    run_two_stage_series,
    sweep_future_horizon,
    train_stage1,
    train_stage2,
    training_windows,
)

__version__ = "0.1.0"

__all__ = [
    "DegenerateSeriesError",
    "DenseLayer",
    "EvalReport",
    "ExperimentConfig",
    "HorizonSpec",
    "HybridModel",
    "InsufficientDataError",
    "MarModel",
    "METRIC_NAMES",
    "MlpModel",
    "MlpStack",
    "MODEL_LABELS",
    "ModelKind",
    "ModelLoadError",
    "NoPeriodError",
    "NormStats",
    "PeriodEstimate",
    "PersistedBundle",
    "PipelineSettings",
    "PointErrors",
    "PreparedSeries",
    "PreviousPeriodForecaster",
    "PreviousPeriodModel",
    "ReportRow",
    "SampleSet",
    "SeriesResult",
    "SeriesRow",
    "Stage1DisabledError",
    "StagePair",
    "SweepRow",
    "TimeSeries",
    "TrainConfig",
    "TwoStageForecaster",
    "UndefinedMetricError",
    "WindowForecaster",
    "WindowSample",
    "aggregate",
    "augment_baseline",
    "build_windows",
    "config_from_yaml",
    "default_history_length",
    "estimate_periods",
    "evaluate_forecast",
    "evaluation_offset",
    "evaluation_windows",
    "fit_two_stage",
    "generate_dataset",
    "generate_series",
    "init_mlp",
    "load_bundle",
    "load_models",
    "load_series_csv",
    "mae",
    "make_model",
    "mape",
    "mlp_backward",
    "mlp_forward",
    "mse_loss",
    "normalize",
    "point_report",
    "predict",
    "prepare_series",
    "previous_period_forecast",
    "rmse",
    "rmspe",
    "run_two_stage_series",
    "sample_acf",
    "save_models",
    "save_series_csv",
    "seed_for",
    "sgd_step",
    "shortest_period",
    "split_half",
    "sweep_future_horizon",
    "train_loop",
    "train_stage1",
    "train_stage2",
    "training_windows",
    "trimmed",
    "write_per_series_csv",
    "write_report_csv",
    "write_sidecar",
]
