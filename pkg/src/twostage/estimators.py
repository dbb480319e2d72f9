"""Scikit-learn style estimators wrapping the window models and the pipeline.

These are thin adapters: `WindowForecaster` and `PreviousPeriodForecaster`
work on explicit (history window -> target) pairs, `TwoStageForecaster` takes
a raw series and runs the full protocol (split, normalize, window, train).
All follow the fit/predict/get_params contract, so they compose with
scikit-learn model selection utilities.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .data import HorizonSpec, TimeSeries
from .models import ModelKind, make_model, previous_period_forecast
from .nn import TrainConfig, train_loop
from .two_stage import (
    PipelineSettings,
    fit_two_stage,
    predict,
    prepare_series,
    training_windows,
)

TRAINABLE_LABELS = ("mlp_mar", "mlp", "mar")


def _as_2d(y) -> np.ndarray:
    y = np.asarray(y, dtype=np.float64)
    return y.reshape(-1, 1) if y.ndim == 1 else y


class WindowForecaster(BaseEstimator, RegressorMixin):
    """Direct multi-horizon regressor on fixed-length history windows.

    ``kind`` selects the architecture: "mar" (one dense map), "mlp", or
    "mlp_mar" (their elementwise sum).  fit(X, y) expects X of shape
    (n, history) and y of shape (n, horizon) or (n,).
    """

    def __init__(
        self,
        kind: str = "mlp_mar",
        widths: tuple[int, ...] = (200, 100, 50),
        dropout_rate: float = 0.5,
        use_layer_norm: bool = True,
        epochs: int = 20,
        learning_rate: float = 0.01,
        batch_size: int = 64,
        seed: int = 0,
    ):
        self.kind = kind
        self.widths = widths
        self.dropout_rate = dropout_rate
        self.use_layer_norm = use_layer_norm
        self.epochs = epochs
        self.learning_rate = learning_rate
        self.batch_size = batch_size
        self.seed = seed

    def fit(self, X, y):
        if self.kind not in TRAINABLE_LABELS:
            raise ValueError(f"kind must be one of {TRAINABLE_LABELS}, got {self.kind!r}")
        X = check_array(X, dtype=np.float64)
        y = _as_2d(y)
        if len(X) != len(y):
            raise ValueError(f"X has {len(X)} rows but y has {len(y)}")
        spec = HorizonSpec(history=X.shape[1], horizon=y.shape[1])
        rng = np.random.default_rng(self.seed)
        model = make_model(
            ModelKind(self.kind),
            spec,
            widths=self.widths,
            seed=rng,
            dropout_rate=self.dropout_rate,
            use_layer_norm=self.use_layer_norm,
        )
        config = TrainConfig(
            epochs=self.epochs,
            learning_rate=self.learning_rate,
            batch_size=self.batch_size,
            seed=self.seed,
        )
        _, trace = train_loop(model, X, y, config, rng=rng)
        self.model_ = model
        self.loss_trace_ = trace
        self.n_features_in_ = X.shape[1]
        self.n_outputs_ = y.shape[1]
        return self

    def predict(self, X) -> np.ndarray:
        check_is_fitted(self, "model_")
        X = check_array(X, dtype=np.float64)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(
                f"X has {X.shape[1]} columns, expected {self.n_features_in_}"
            )
        out, _ = self.model_.forward(X)
        return out[:, 0] if self.n_outputs_ == 1 else out


class PreviousPeriodForecaster(BaseEstimator, RegressorMixin):
    """Seasonal repetition baseline: prediction k repeats the value one
    period earlier, wrapping when the horizon exceeds the period."""

    def __init__(self, period: int = 24, horizon: int = 1):
        self.period = period
        self.horizon = horizon

    def fit(self, X, y=None):
        X = check_array(X, dtype=np.float64)
        if X.shape[1] < self.period:
            raise ValueError(
                f"history of length {X.shape[1]} is shorter than the period "
                f"{self.period}"
            )
        self.n_features_in_ = X.shape[1]
        return self

    def predict(self, X) -> np.ndarray:
        check_is_fitted(self, "n_features_in_")
        X = check_array(X, dtype=np.float64)
        out = np.stack(
            [previous_period_forecast(row, self.period, self.horizon) for row in X]
        )
        return out[:, 0] if self.horizon == 1 else out


class TwoStageForecaster(BaseEstimator, RegressorMixin):
    """Full two-stage pipeline on a raw series.

    fit(values) splits the series in half, normalizes from the training half,
    trains Stage 1 (history -> future context, skipped when future=0) and
    Stage 2 (history plus true future context -> target).  predict(X) takes
    raw-scale history windows and returns raw-scale forecasts; predict() with
    no argument forecasts the ``horizon`` points after the series' end.
    """

    def __init__(
        self,
        horizon: int = 12,
        future: int = 12,
        history: int | None = None,
        period: int | None = None,
        period_auto: bool = False,
        stage1_kind: str = "mlp_mar",
        stage2_kind: str = "mlp_mar",
        widths: tuple[int, ...] = (200, 100, 50),
        dropout_rate: float = 0.5,
        use_layer_norm: bool = True,
        stage1_epochs: int = 40,
        stage2_epochs: int = 20,
        learning_rate: float = 0.01,
        batch_size: int = 64,
        seed: int = 0,
    ):
        self.horizon = horizon
        self.future = future
        self.history = history
        self.period = period
        self.period_auto = period_auto
        self.stage1_kind = stage1_kind
        self.stage2_kind = stage2_kind
        self.widths = widths
        self.dropout_rate = dropout_rate
        self.use_layer_norm = use_layer_norm
        self.stage1_epochs = stage1_epochs
        self.stage2_epochs = stage2_epochs
        self.learning_rate = learning_rate
        self.batch_size = batch_size
        self.seed = seed

    def _settings(self) -> PipelineSettings:
        return PipelineSettings(
            history=self.history,
            period=self.period,
            period_auto=self.period_auto,
            stage1_epochs=self.stage1_epochs,
            stage2_epochs=self.stage2_epochs,
            learning_rate=self.learning_rate,
            batch_size=self.batch_size,
            widths=tuple(self.widths),
            dropout_rate=self.dropout_rate,
            use_layer_norm=self.use_layer_norm,
            master_seed=self.seed,
        )

    def fit(self, X, y=None):
        values = np.asarray(X, dtype=np.float64).ravel()
        series = TimeSeries("series", values)
        prep = prepare_series(series, self._settings())
        train_set = training_windows(prep, self.horizon, self.future)
        self.pair_ = fit_two_stage(
            train_set,
            self._settings(),
            stage1_kind=ModelKind(self.stage1_kind),
            stage2_kind=ModelKind(self.stage2_kind),
        )
        self.prep_ = prep
        self.n_features_in_ = prep.history
        return self

    def predict(self, X=None) -> np.ndarray:
        check_is_fitted(self, "pair_")
        if X is None:
            tail = self.prep_.values[-self.prep_.history :]
            return self.prep_.stats.invert(predict(self.pair_, tail))
        X = check_array(X, dtype=np.float64)
        normalized = self.prep_.stats.apply(X)
        return self.prep_.stats.invert(predict(self.pair_, normalized))
