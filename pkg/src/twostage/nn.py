"""Minimal dense neural-network engine on numpy.

Supports exactly what the forecasting models need: batched forward passes,
analytic backpropagation, layer normalization, inverted dropout, and plain
minibatch SGD.  Per hidden layer the order is

    affine -> layer norm (optional) -> ReLU -> dropout (training only)

and the output layer is affine with identity activation, no normalization,
no dropout.  Passing a random generator to a forward call enables dropout
(training mode); passing None disables it (evaluation mode), which makes
evaluation a deterministic pure function of parameters and input.

Parameters of a stack are exposed as a flat list of arrays in a fixed order
(per layer: weights, bias, then norm gain and norm bias when present), and
gradients mirror that order, so the SGD step is a plain elementwise update.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .exceptions import InsufficientDataError
from .validation import check_fraction, check_matrix, check_positive_int

LAYER_NORM_EPS = 1e-5

RELU = "relu"
IDENTITY = "identity"
ACTIVATIONS = (RELU, IDENTITY)


@dataclass
class DenseLayer:
    """One affine layer with its activation and optional layer-norm params."""

    weights: np.ndarray
    bias: np.ndarray
    activation: str
    norm_gain: np.ndarray | None = None
    norm_bias: np.ndarray | None = None

    def __post_init__(self) -> None:
        self.weights = np.asarray(self.weights, dtype=np.float64)
        self.bias = np.asarray(self.bias, dtype=np.float64)
        if self.weights.ndim != 2:
            raise ValueError(f"weights must be 2-D, got shape {self.weights.shape}")
        if self.bias.shape != (self.weights.shape[0],):
            raise ValueError(
                f"bias shape {self.bias.shape} does not match "
                f"{self.weights.shape[0]} output units"
            )
        if not (np.all(np.isfinite(self.weights)) and np.all(np.isfinite(self.bias))):
            raise ValueError("layer parameters must be finite")
        if self.activation not in ACTIVATIONS:
            raise ValueError(f"activation must be one of {ACTIVATIONS}")
        if (self.norm_gain is None) != (self.norm_bias is None):
            raise ValueError("norm_gain and norm_bias must be set together")
        if self.norm_gain is not None:
            self.norm_gain = np.asarray(self.norm_gain, dtype=np.float64)
            self.norm_bias = np.asarray(self.norm_bias, dtype=np.float64)
            out = self.weights.shape[0]
            if self.norm_gain.shape != (out,) or self.norm_bias.shape != (out,):
                raise ValueError("norm parameters must match the output width")

    @property
    def input_dim(self) -> int:
        return self.weights.shape[1]

    @property
    def output_dim(self) -> int:
        return self.weights.shape[0]


@dataclass
class MlpStack:
    """A feed-forward network: hidden ReLU layers plus an identity output layer."""

    layers: list[DenseLayer]
    dropout_rate: float = 0.0
    use_layer_norm: bool = False

    def __post_init__(self) -> None:
        if not self.layers:
            raise ValueError("an MlpStack needs at least one layer")
        check_fraction(self.dropout_rate, "dropout_rate")
        for prev, cur in zip(self.layers, self.layers[1:]):
            if cur.input_dim != prev.output_dim:
                raise ValueError(
                    f"layer dimensions do not chain: {prev.output_dim} -> {cur.input_dim}"
                )
        for i, layer in enumerate(self.layers):
            hidden = i < len(self.layers) - 1
            if self.use_layer_norm and hidden:
                if layer.norm_gain is None:
                    raise ValueError("use_layer_norm requires norm params on hidden layers")
            elif layer.norm_gain is not None:
                raise ValueError("norm params are only allowed on hidden layers with use_layer_norm")

    @property
    def input_dim(self) -> int:
        return self.layers[0].input_dim

    @property
    def output_dim(self) -> int:
        return self.layers[-1].output_dim

    def parameters(self) -> list[np.ndarray]:
        params: list[np.ndarray] = []
        for layer in self.layers:
            params.append(layer.weights)
            params.append(layer.bias)
            if layer.norm_gain is not None:
                params.append(layer.norm_gain)
                params.append(layer.norm_bias)
        return params

    def forward(self, x, rng: np.random.Generator | None = None):
        return mlp_forward(self, x, rng)

    def backward(self, cache: "ForwardCache", upstream_grad) -> "GradientSet":
        return mlp_backward(self, cache, upstream_grad)


@dataclass(frozen=True)
class TrainConfig:
    """Hyperparameters of one SGD training run."""

    epochs: int
    learning_rate: float = 0.01
    batch_size: int = 64
    seed: int = 0
    shuffle: bool = True

    def __post_init__(self) -> None:
        check_positive_int(self.epochs, "epochs")
        check_positive_int(self.batch_size, "batch_size")
        if not self.learning_rate > 0:
            raise ValueError(f"learning_rate must be positive, got {self.learning_rate}")
        if not isinstance(self.seed, (int, np.integer)) or self.seed < 0:
            raise ValueError(f"seed must be a nonnegative integer, got {self.seed}")


@dataclass
class GradientSet:
    """Gradient arrays in the same order and shapes as a parameter list."""

    arrays: list[np.ndarray]

    def __iter__(self):
        return iter(self.arrays)

    def __len__(self) -> int:
        return len(self.arrays)


@dataclass
class _LayerRecord:
    """Intermediates of one layer's forward pass, consumed by backprop."""

    x: np.ndarray
    normalized: np.ndarray | None
    inv_std: np.ndarray | None
    activated: np.ndarray
    drop_mask: np.ndarray | None


@dataclass
class ForwardCache:
    """Everything mlp_backward needs, tied to the stack that produced it."""

    stack: MlpStack
    records: list[_LayerRecord] = field(default_factory=list)
    output: np.ndarray | None = None


def init_mlp(
    input_dim: int,
    widths: list[int],
    output_dim: int,
    rng: np.random.Generator,
    dropout_rate: float = 0.0,
    use_layer_norm: bool = False,
) -> MlpStack:
    """Build a stack with Glorot-uniform weights and zero biases.

    ``widths`` are the hidden-layer sizes in order; the output layer is
    appended automatically.  Norm gain starts at one, norm bias at zero.
    """
    check_positive_int(input_dim, "input_dim")
    check_positive_int(output_dim, "output_dim")
    dims = [input_dim, *[check_positive_int(w, "width") for w in widths], output_dim]
    layers = []
    for i, (fan_in, fan_out) in enumerate(zip(dims, dims[1:])):
        hidden = i < len(dims) - 2
        bound = np.sqrt(6.0 / (fan_in + fan_out))
        layers.append(
            DenseLayer(
                weights=rng.uniform(-bound, bound, size=(fan_out, fan_in)),
                bias=np.zeros(fan_out),
                activation=RELU if hidden else IDENTITY,
                norm_gain=np.ones(fan_out) if hidden and use_layer_norm else None,
                norm_bias=np.zeros(fan_out) if hidden and use_layer_norm else None,
            )
        )
    return MlpStack(layers=layers, dropout_rate=dropout_rate, use_layer_norm=use_layer_norm)


def layer_norm_forward(x, gain, bias, eps: float = LAYER_NORM_EPS):
    """Normalize each row of x to zero mean and unit variance, then scale and shift.

    Returns the output and a cache tuple for :func:`layer_norm_backward`.
    """
    x = np.asarray(x, dtype=np.float64)
    gain = np.asarray(gain, dtype=np.float64)
    bias = np.asarray(bias, dtype=np.float64)
    if gain.shape != (x.shape[-1],) or bias.shape != (x.shape[-1],):
        raise ValueError(
            f"gain/bias of shape {gain.shape}/{bias.shape} do not match "
            f"{x.shape[-1]} features"
        )
    mean = x.mean(axis=-1, keepdims=True)
    var = x.var(axis=-1, keepdims=True)
    inv_std = 1.0 / np.sqrt(var + eps)
    normalized = (x - mean) * inv_std
    return gain * normalized + bias, (normalized, inv_std, gain)


def layer_norm_backward(cache, upstream_grad):
    """Gradients of layer norm: returns (d_input, d_gain, d_bias)."""
    normalized, inv_std, gain = cache
    dy = np.asarray(upstream_grad, dtype=np.float64)
    if dy.shape != normalized.shape:
        raise ValueError(f"gradient shape {dy.shape} does not match {normalized.shape}")
    d_bias = dy.sum(axis=tuple(range(dy.ndim - 1)))
    d_gain = (dy * normalized).sum(axis=tuple(range(dy.ndim - 1)))
    d_norm = dy * gain
    # Exact gradient through the per-row mean and variance (eps included via inv_std).
    d_x = inv_std * (
        d_norm
        - d_norm.mean(axis=-1, keepdims=True)
        - normalized * (d_norm * normalized).mean(axis=-1, keepdims=True)
    )
    return d_x, d_gain, d_bias


def dropout(x, rate: float, rng: np.random.Generator | None = None):
    """Inverted dropout: zero each element with probability ``rate``.

    Survivors are scaled by 1/(1 - rate) so the expectation matches the
    input; the returned mask already includes that scaling.  With rate 0 the
    generator is never consulted.
    """
    check_fraction(rate, "rate")
    x = np.asarray(x, dtype=np.float64)
    if rate == 0.0:
        return x.copy(), np.ones_like(x)
    if rng is None:
        raise ValueError("dropout with rate > 0 requires a random generator")
    mask = (rng.random(x.shape) >= rate) / (1.0 - rate)
    return x * mask, mask


def mlp_forward(stack: MlpStack, x, rng: np.random.Generator | None = None):
    """Run the stack on a vector or a batch of row vectors.

    Returns (output, cache).  ``rng`` enables dropout on hidden layers; pass
    None for evaluation.  A 1-D input yields a 1-D output.
    """
    x = np.asarray(x, dtype=np.float64)
    single = x.ndim == 1
    batch = check_matrix(x, "x", n_cols=stack.input_dim)
    cache = ForwardCache(stack=stack)
    out = batch
    last = len(stack.layers) - 1
    for i, layer in enumerate(stack.layers):
        layer_input = out
        normalized = inv_std = mask = None
        z = out @ layer.weights.T + layer.bias
        if i < last and stack.use_layer_norm:
            z, (normalized, inv_std, _) = layer_norm_forward(
                z, layer.norm_gain, layer.norm_bias
            )
        activated = np.maximum(z, 0.0) if layer.activation == RELU else z
        out = activated
        if i < last and stack.dropout_rate > 0.0 and rng is not None:
            out, mask = dropout(activated, stack.dropout_rate, rng)
        cache.records.append(
            _LayerRecord(
                x=layer_input,
                normalized=normalized,
                inv_std=inv_std,
                activated=activated,
                drop_mask=mask,
            )
        )
    cache.output = out
    return (out[0] if single else out), cache


def mlp_backward(stack: MlpStack, cache: ForwardCache, upstream_grad) -> GradientSet:
    """Backpropagate a loss gradient through the stack.

    ``upstream_grad`` is dL/d(output) with the same shape the forward call
    returned.  Gradients come back in the parameter-list order.

    Raises
    ------
    ValueError
        If the cache was produced by a different stack or the gradient shape
        does not match the cached output.
    """
    if cache.stack is not stack or len(cache.records) != len(stack.layers):
        raise ValueError("cache does not belong to this network")
    grad = np.asarray(upstream_grad, dtype=np.float64)
    if grad.ndim == 1:
        grad = grad.reshape(1, -1)
    if grad.shape != cache.output.shape:
        raise ValueError(
            f"upstream gradient shape {grad.shape} does not match output "
            f"{cache.output.shape}"
        )
    last = len(stack.layers) - 1
    grads_reversed: list[np.ndarray] = []
    for i in range(last, -1, -1):
        layer = stack.layers[i]
        record = cache.records[i]
        if record.drop_mask is not None:
            grad = grad * record.drop_mask
        if layer.activation == RELU:
            grad = grad * (record.activated > 0.0)
        norm_grads: list[np.ndarray] = []
        if i < last and stack.use_layer_norm:
            grad, d_gain, d_bias = layer_norm_backward(
                (record.normalized, record.inv_std, layer.norm_gain), grad
            )
            norm_grads = [d_bias, d_gain]
        d_weights = grad.T @ record.x
        d_bias_affine = grad.sum(axis=0)
        grads_reversed.extend(norm_grads)
        grads_reversed.append(d_bias_affine)
        grads_reversed.append(d_weights)
        grad = grad @ layer.weights
    return GradientSet(arrays=grads_reversed[::-1])


def mse_loss(pred, target):
    """Mean squared error over all elements and its gradient w.r.t. pred."""
    pred = np.asarray(pred, dtype=np.float64)
    target = np.asarray(target, dtype=np.float64)
    if pred.shape != target.shape:
        raise ValueError(f"shape mismatch: pred {pred.shape} vs target {target.shape}")
    diff = pred - target
    return float(np.mean(diff * diff)), 2.0 * diff / diff.size


def sgd_step(params: list[np.ndarray], grads: GradientSet, learning_rate: float) -> list[np.ndarray]:
    """In-place SGD update p <- p - lr * g; returns the parameter list."""
    if not learning_rate >= 0:
        raise ValueError(f"learning_rate must be nonnegative, got {learning_rate}")
    if len(params) != len(grads):
        raise ValueError(f"{len(params)} parameters but {len(grads)} gradients")
    for param, grad in zip(params, grads):
        if param.shape != grad.shape:
            raise ValueError(f"shape mismatch: {param.shape} vs {grad.shape}")
        param -= learning_rate * grad
    return params


def train_loop(model, inputs, targets, config: TrainConfig, rng: np.random.Generator | None = None):
    """Minibatch SGD over (inputs, targets) rows.

    ``model`` provides forward(x, rng) -> (pred, cache), backward(cache, grad)
    -> GradientSet, and parameters() -> list of arrays.  One generator drives
    both the per-epoch shuffle and dropout, so a fixed (seed, config) pair
    reproduces the run bitwise.  When ``rng`` is None it is seeded from
    ``config.seed``.

    Returns (parameters, per-epoch mean loss trace); parameters are the
    model's own arrays, updated in place.
    """
    inputs = check_matrix(inputs, "inputs")
    targets = check_matrix(targets, "targets")
    if inputs.shape[0] != targets.shape[0]:
        raise ValueError(
            f"inputs have {inputs.shape[0]} rows but targets have {targets.shape[0]}"
        )
    n = inputs.shape[0]
    if n == 0:
        raise InsufficientDataError("cannot train on an empty dataset")
    if rng is None:
        rng = np.random.default_rng(config.seed)
    trace: list[float] = []
    for _ in range(config.epochs):
        order = rng.permutation(n) if config.shuffle else np.arange(n)
        epoch_sum = 0.0
        for start in range(0, n, config.batch_size):
            idx = order[start : start + config.batch_size]
            pred, cache = model.forward(inputs[idx], rng)
            loss, grad = mse_loss(pred, targets[idx])
            grad_set = model.backward(cache, grad)
            sgd_step(model.parameters(), grad_set, config.learning_rate)
            epoch_sum += loss * len(idx)
        trace.append(epoch_sum / n)
    return model.parameters(), trace
