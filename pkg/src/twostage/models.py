"""Forecasting models: MAR, MLP, their additive hybrid, and a seasonal-naive baseline.

The MAR model is a single dense map from the full history window to the full
forecast horizon (direct multi-horizon, not recursive one-step).  The hybrid
adds an MLP correction on top of the same linear map, and both branches are
trained jointly by SGD.  All trainable models share one protocol: forward(x,
rng) -> (prediction, cache), backward(cache, grad) -> GradientSet, and
parameters() -> list of arrays, so :func:`twostage.nn.train_loop` drives any
of them.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .data import HorizonSpec
from .exceptions import InsufficientDataError
from .nn import GradientSet, MlpStack, init_mlp, mlp_backward, mlp_forward
from .validation import check_matrix, check_positive_int, check_vector

DEFAULT_WIDTHS = (200, 100, 50)
DEFAULT_DROPOUT = 0.5

ROLE_DIRECT = "direct"
ROLE_STAGE1 = "stage1"
ROLE_STAGE2 = "stage2"
ROLES = (ROLE_DIRECT, ROLE_STAGE1, ROLE_STAGE2)


class ModelKind(Enum):
    """The model families that can appear in a comparison run."""

    MAR = "mar"
    MLP = "mlp"
    HYBRID_MLP_MAR = "mlp_mar"
    PREVIOUS_PERIOD = "previous_period"


@dataclass
class MarParams:
    """Parameters of the linear multi-horizon map: weights (out x in) and bias."""

    weights: np.ndarray
    bias: np.ndarray

    def __post_init__(self) -> None:
        self.weights = np.asarray(self.weights, dtype=np.float64)
        self.bias = np.asarray(self.bias, dtype=np.float64)
        if self.weights.ndim != 2:
            raise ValueError(f"weights must be 2-D, got shape {self.weights.shape}")
        if self.bias.shape != (self.weights.shape[0],):
            raise ValueError(
                f"bias shape {self.bias.shape} does not match "
                f"{self.weights.shape[0]} outputs"
            )
        if not (np.all(np.isfinite(self.weights)) and np.all(np.isfinite(self.bias))):
            raise ValueError("MAR parameters must be finite")

    @property
    def input_dim(self) -> int:
        return self.weights.shape[1]

    @property
    def output_dim(self) -> int:
        return self.weights.shape[0]


@dataclass
class HybridParams:
    """MAR branch plus MLP branch with matching input/output dimensions."""

    mar: MarParams
    mlp: MlpStack

    def __post_init__(self) -> None:
        if (
            self.mlp.input_dim != self.mar.input_dim
            or self.mlp.output_dim != self.mar.output_dim
        ):
            raise ValueError(
                "MAR and MLP branches must share dimensions: "
                f"({self.mar.input_dim}->{self.mar.output_dim}) vs "
                f"({self.mlp.input_dim}->{self.mlp.output_dim})"
            )


def mar_forward(params: MarParams, x) -> np.ndarray:
    """Apply the linear map to a vector or a batch of row vectors."""
    x = np.asarray(x, dtype=np.float64)
    single = x.ndim == 1
    batch = check_matrix(x, "x", n_cols=params.input_dim)
    out = batch @ params.weights.T + params.bias
    return out[0] if single else out


def hybrid_forward(params: HybridParams, x, rng: np.random.Generator | None = None):
    """Sum of the MAR output and the MLP output on the same input.

    Returns (prediction, mlp cache); the cache is needed to backpropagate
    through the MLP branch.
    """
    mlp_out, cache = mlp_forward(params.mlp, x, rng)
    return mar_forward(params.mar, x) + mlp_out, cache


def previous_period_forecast(history, period: int, horizon: int) -> np.ndarray:
    """Repeat the last observed period of the history across the horizon.

    Prediction k (1-based) is ``history[-period + ((k - 1) mod period)]``;
    horizons longer than one period wrap around.

    Raises
    ------
    InsufficientDataError
        If the history is shorter than one period.
    """
    history = check_vector(history, "history")
    check_positive_int(period, "period")
    check_positive_int(horizon, "horizon")
    if len(history) < period:
        raise InsufficientDataError(
            f"history of length {len(history)} is shorter than the period {period}"
        )
    tail = history[-period:]
    repeats = -(-horizon // period)
    return np.tile(tail, repeats)[:horizon]


@dataclass
class _ModelCache:
    """Forward intermediates for the linear models, tied to their owner."""

    owner: object
    inputs: np.ndarray
    output_shape: tuple
    mlp_cache: object = None


class MarModel:
    """Trainable wrapper around :class:`MarParams` (train_loop protocol)."""

    def __init__(self, params: MarParams):
        self.params = params

    @property
    def input_dim(self) -> int:
        return self.params.input_dim

    @property
    def output_dim(self) -> int:
        return self.params.output_dim

    def forward(self, x, rng: np.random.Generator | None = None):
        x = np.asarray(x, dtype=np.float64)
        single = x.ndim == 1
        batch = check_matrix(x, "x", n_cols=self.input_dim)
        out = batch @ self.params.weights.T + self.params.bias
        cache = _ModelCache(owner=self, inputs=batch, output_shape=out.shape)
        return (out[0] if single else out), cache

    def backward(self, cache: _ModelCache, upstream_grad) -> GradientSet:
        grad = _check_model_grad(self, cache, upstream_grad)
        return GradientSet(arrays=[grad.T @ cache.inputs, grad.sum(axis=0)])

    def parameters(self) -> list[np.ndarray]:
        return [self.params.weights, self.params.bias]


class HybridModel:
    """Trainable wrapper around :class:`HybridParams` (train_loop protocol)."""

    def __init__(self, params: HybridParams):
        self.params = params

    @property
    def input_dim(self) -> int:
        return self.params.mar.input_dim

    @property
    def output_dim(self) -> int:
        return self.params.mar.output_dim

    def forward(self, x, rng: np.random.Generator | None = None):
        x = np.asarray(x, dtype=np.float64)
        single = x.ndim == 1
        batch = check_matrix(x, "x", n_cols=self.input_dim)
        out, mlp_cache = hybrid_forward(self.params, batch, rng)
        cache = _ModelCache(
            owner=self, inputs=batch, output_shape=out.shape, mlp_cache=mlp_cache
        )
        return (out[0] if single else out), cache

    def backward(self, cache: _ModelCache, upstream_grad) -> GradientSet:
        grad = _check_model_grad(self, cache, upstream_grad)
        mar_grads = [grad.T @ cache.inputs, grad.sum(axis=0)]
        mlp_grads = mlp_backward(self.params.mlp, cache.mlp_cache, grad)
        return GradientSet(arrays=mar_grads + mlp_grads.arrays)

    def parameters(self) -> list[np.ndarray]:
        return [self.params.mar.weights, self.params.mar.bias, *self.params.mlp.parameters()]


class MlpModel:
    """Trainable wrapper around a bare :class:`MlpStack` (train_loop protocol)."""

    def __init__(self, stack: MlpStack):
        self.stack = stack

    @property
    def input_dim(self) -> int:
        return self.stack.input_dim

    @property
    def output_dim(self) -> int:
        return self.stack.output_dim

    def forward(self, x, rng: np.random.Generator | None = None):
        return mlp_forward(self.stack, x, rng)

    def backward(self, cache, upstream_grad) -> GradientSet:
        return mlp_backward(self.stack, cache, upstream_grad)

    def parameters(self) -> list[np.ndarray]:
        return self.stack.parameters()


class PreviousPeriodModel:
    """Parameter-free seasonal repetition; forward only, nothing to train."""

    def __init__(self, period: int, horizon: int):
        self.period = check_positive_int(period, "period")
        self.horizon = check_positive_int(horizon, "horizon")

    def forward(self, x, rng: np.random.Generator | None = None):
        x = np.asarray(x, dtype=np.float64)
        single = x.ndim == 1
        batch = check_matrix(x, "x")
        out = np.stack(
            [previous_period_forecast(row, self.period, self.horizon) for row in batch]
        )
        return (out[0] if single else out), None

    def parameters(self) -> list[np.ndarray]:
        return []


def _check_model_grad(model, cache: _ModelCache, upstream_grad) -> np.ndarray:
    if cache is None or not isinstance(cache, _ModelCache) or cache.owner is not model:
        raise ValueError("cache does not belong to this model")
    grad = np.asarray(upstream_grad, dtype=np.float64)
    if grad.ndim == 1:
        grad = grad.reshape(1, -1)
    if grad.shape != cache.output_shape:
        raise ValueError(
            f"upstream gradient shape {grad.shape} does not match output "
            f"{cache.output_shape}"
        )
    return grad


def init_mar(input_dim: int, output_dim: int, rng: np.random.Generator) -> MarParams:
    """Glorot-uniform weights and zero bias for the linear map."""
    check_positive_int(input_dim, "input_dim")
    check_positive_int(output_dim, "output_dim")
    bound = np.sqrt(6.0 / (input_dim + output_dim))
    return MarParams(
        weights=rng.uniform(-bound, bound, size=(output_dim, input_dim)),
        bias=np.zeros(output_dim),
    )


def role_dims(spec: HorizonSpec, role: str) -> tuple[int, int]:
    """(input, output) dimensions of a model serving the given pipeline role.

    ``direct`` maps history to the forecast target (baselines and the second
    stage when no future context is used), ``stage1`` maps history to the
    future segment, and ``stage2`` maps history plus future to the target.
    """
    if role == ROLE_DIRECT:
        return spec.history, spec.horizon
    if role == ROLE_STAGE1:
        if spec.future < 1:
            raise ValueError("stage1 needs a future segment (future >= 1)")
        return spec.history, spec.future
    if role == ROLE_STAGE2:
        return spec.history + spec.future, spec.horizon
    raise ValueError(f"role must be one of {ROLES}, got {role!r}")


def make_model(
    kind: ModelKind,
    spec: HorizonSpec,
    widths=DEFAULT_WIDTHS,
    seed=0,
    role: str = ROLE_DIRECT,
    period: int | None = None,
    dropout_rate: float = DEFAULT_DROPOUT,
    use_layer_norm: bool = True,
):
    """Construct a freshly initialized model for a pipeline role.

    ``seed`` may be an integer or an existing generator.  ``period`` is
    required for (and only used by) the previous-period baseline; ``widths``,
    ``dropout_rate``, and ``use_layer_norm`` configure the MLP branch and are
    ignored by the purely linear kinds.
    """
    kind = ModelKind(kind)
    if kind is ModelKind.PREVIOUS_PERIOD:
        if period is None:
            raise ValueError("the previous-period baseline requires a known period")
        return PreviousPeriodModel(period=period, horizon=spec.horizon)
    input_dim, output_dim = role_dims(spec, role)
    rng = np.random.default_rng(seed)
    if kind is ModelKind.MAR:
        return MarModel(init_mar(input_dim, output_dim, rng))
    widths = [check_positive_int(w, "width") for w in widths]
    if not widths:
        raise ValueError("MLP kinds need at least one hidden width")
    mar = init_mar(input_dim, output_dim, rng) if kind is ModelKind.HYBRID_MLP_MAR else None
    stack = init_mlp(
        input_dim,
        widths,
        output_dim,
        rng,
        dropout_rate=dropout_rate,
        use_layer_norm=use_layer_norm,
    )
    if kind is ModelKind.MLP:
        return MlpModel(stack)
    return HybridModel(HybridParams(mar=mar, mlp=stack))
