"""LSTM cell, training by backpropagation through time, and forecasting.

The cell follows the standard gate equations::

    f = sigmoid(W_f [h, x] + b_f)
    i = sigmoid(W_i [h, x] + b_i)
    g = tanh(W_c [h, x] + b_c)
    C' = f * C + i * g
    o = sigmoid(W_o [h, x] + b_o)
    h' = o * tanh(C')

A scalar affine head ``y = w . h + b`` on the last hidden state turns the
recurrent output into a one-step-ahead prediction. Series are min-max
scaled to [0, 1] for training and predictions are mapped back.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DomainError, TrainingError
from .values import TimeSeries

GATES = ("f", "i", "c", "o")
MODEL_SCHEMA = "ecoval-lstm/1"
INIT_SCALE = 0.08
FORGET_BIAS = 1.0
CLIP_NORM = 5.0


def sigmoid(z):
    # split by sign so large |z| never overflows exp
    out = np.empty_like(z, dtype=float)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def _frozen(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class LstmParams:
    """Gate weights of shape ``(hidden, hidden + input)`` and biases."""

    w_f: np.ndarray
    w_i: np.ndarray
    w_c: np.ndarray
    w_o: np.ndarray
    b_f: np.ndarray
    b_i: np.ndarray
    b_c: np.ndarray
    b_o: np.ndarray

    def __post_init__(self):
        for name in ("w_f", "w_i", "w_c", "w_o", "b_f", "b_i", "b_c", "b_o"):
            object.__setattr__(self, name, _frozen(getattr(self, name)))
        hidden, width = self.w_f.shape
        if width <= hidden:
            raise DomainError("weight matrices need at least one input column")
        for g in GATES:
            if getattr(self, f"w_{g}").shape != (hidden, width):
                raise DomainError(f"w_{g} has shape {getattr(self, f'w_{g}').shape}")
            if getattr(self, f"b_{g}").shape != (hidden,):
                raise DomainError(f"b_{g} has shape {getattr(self, f'b_{g}').shape}")
            if not (np.all(np.isfinite(getattr(self, f"w_{g}")))
                    and np.all(np.isfinite(getattr(self, f"b_{g}")))):
                raise DomainError(f"gate {g} has non-finite parameters")

    @property
    def hidden_size(self):
        return self.w_f.shape[0]

    @property
    def input_size(self):
        return self.w_f.shape[1] - self.w_f.shape[0]

    @classmethod
    def zeros(cls, hidden_size, input_size):
        w = np.zeros((hidden_size, hidden_size + input_size))
        b = np.zeros(hidden_size)
        return cls(w, w, w, w, b, b, b, b)

    @classmethod
    def random(cls, hidden_size, input_size, rng, scale=INIT_SCALE, forget_bias=FORGET_BIAS):
        shape = (hidden_size, hidden_size + input_size)
        ws = {g: rng.uniform(-scale, scale, size=shape) for g in GATES}
        bs = {g: np.zeros(hidden_size) for g in GATES}
        bs["f"] = np.full(hidden_size, forget_bias)
        return cls(**{f"w_{g}": ws[g] for g in GATES}, **{f"b_{g}": bs[g] for g in GATES})


@dataclass(frozen=True)
class LstmState:
    h: np.ndarray
    c: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "h", _frozen(self.h))
        object.__setattr__(self, "c", _frozen(self.c))

    @classmethod
    def zeros(cls, hidden_size):
        return cls(np.zeros(hidden_size), np.zeros(hidden_size))


@dataclass(frozen=True)
class Readout:
    """Affine head plus the scaling needed to map predictions back."""

    weight: np.ndarray
    bias: float
    window: int
    lo: float = 0.0
    hi: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "weight", _frozen(self.weight))

    def scale(self, values):
        values = np.asarray(values, dtype=float)
        if self.hi == self.lo:
            return np.full_like(values, 0.5)
        return (values - self.lo) / (self.hi - self.lo)

    def unscale(self, values):
        values = np.asarray(values, dtype=float)
        if self.hi == self.lo:
            return np.full_like(values, self.lo)
        return self.lo + values * (self.hi - self.lo)


class Optimizer(enum.Enum):
    SGD = "sgd"
    ADAM = "adam"


@dataclass(frozen=True)
class TrainConfig:
    window: int = 4
    epochs: int = 500
    learning_rate: float = 0.01
    seed: int = 0
    optimizer: Optimizer = Optimizer.ADAM
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    hidden_size: int = 8
    clip_norm: float = CLIP_NORM

    def __post_init__(self):
        if self.window < 1 or self.epochs < 1 or self.hidden_size < 1:
            raise DomainError("window, epochs and hidden_size must be >= 1")
        if not self.learning_rate > 0:
            raise DomainError("learning_rate must be positive")
        if self.seed < 0:
            raise DomainError("seed must be unsigned")


class TrainResult(NamedTuple):
    params: LstmParams
    readout: Readout
    loss_history: list


def _check_step(params, h, x):
    if x.shape[-1] != params.input_size:
        raise DomainError(f"input has length {x.shape[-1]}, expected {params.input_size}")
    if h.shape[-1] != params.hidden_size:
        raise DomainError(f"state has length {h.shape[-1]}, expected {params.hidden_size}")


def _step(params, h, c, x):
    """One batched step; rows of ``h``, ``c`` and ``x`` are independent sequences."""
    z = np.concatenate([h, x], axis=-1)
    f = sigmoid(z @ params.w_f.T + params.b_f)
    i = sigmoid(z @ params.w_i.T + params.b_i)
    g = np.tanh(z @ params.w_c.T + params.b_c)
    c_new = f * c + i * g
    o = sigmoid(z @ params.w_o.T + params.b_o)
    tc = np.tanh(c_new)
    h_new = o * tc
    return h_new, c_new, (z, f, i, g, o, c, tc)


def cell_step(params: LstmParams, state: LstmState, x) -> LstmState:
    x = np.asarray(x, dtype=float).reshape(-1)
    if state.c.shape != state.h.shape:
        raise DomainError("h and c have different shapes")
    _check_step(params, state.h, x)
    h, c, _ = _step(params, state.h, state.c, x)
    return LstmState(h, c)


def sequence_forward(params: LstmParams, xs):
    """Hidden state after each input, starting from the zero state."""
    state = LstmState.zeros(params.hidden_size)
    out = []
    for x in xs:
        state = cell_step(params, state, x)
        out.append(state.h)
    return out


def _forward_batch(params, xs):
    """Run ``xs`` of shape (steps, batch, input) and keep caches for BPTT."""
    n = xs.shape[1]
    h = np.zeros((n, params.hidden_size))
    c = np.zeros((n, params.hidden_size))
    caches = []
    for x in xs:
        h, c, cache = _step(params, h, c, x)
        caches.append(cache)
    return h, caches


def bptt_loss_and_grad(params: LstmParams, weight, bias, xs, targets):
    """Mean squared error of the head over a batch of windows, and its gradient.

    ``xs`` has shape (steps, batch, input) and ``targets`` shape (batch,).
    Returns ``(loss, grads)`` where ``grads`` maps ``w_f``, ..., ``b_o``,
    ``head_w`` and ``head_b`` to arrays shaped like the parameters.
    """
    xs = np.asarray(xs, dtype=float)
    targets = np.asarray(targets, dtype=float)
    hidden = params.hidden_size
    h_last, caches = _forward_batch(params, xs)
    pred = h_last @ weight + bias
    err = pred - targets
    n = targets.shape[0]
    loss = float(np.mean(err ** 2))

    dpred = 2.0 * err / n
    grads = {f"w_{g}": np.zeros_like(getattr(params, f"w_{g}")) for g in GATES}
    grads.update({f"b_{g}": np.zeros(hidden) for g in GATES})
    grads["head_w"] = h_last.T @ dpred
    grads["head_b"] = np.array(dpred.sum())

    dh = np.outer(dpred, weight)
    dc = np.zeros_like(dh)
    for z, f, i, g, o, c_prev, tc in reversed(caches):
        do = dh * tc
        dc = dc + dh * o * (1.0 - tc ** 2)
        pre = {
            "f": dc * c_prev * f * (1.0 - f),
            "i": dc * g * i * (1.0 - i),
            "c": dc * i * (1.0 - g ** 2),
            "o": do * o * (1.0 - o),
        }
        dz = np.zeros_like(z)
        for gate, da in pre.items():
            grads[f"w_{gate}"] += da.T @ z
            grads[f"b_{gate}"] += da.sum(axis=0)
            dz += da @ getattr(params, f"w_{gate}")
        dh = dz[:, :hidden]
        dc = dc * f
    return loss, grads


_ORDER = tuple(f"w_{g}" for g in GATES) + tuple(f"b_{g}" for g in GATES) + ("head_w", "head_b")


def _pack(arrays):
    return np.concatenate([np.ravel(arrays[k]) for k in _ORDER])


def _unpack(flat, hidden, width):
    sizes = [hidden * width] * 4 + [hidden] * 4 + [hidden, 1]
    shapes = [(hidden, width)] * 4 + [(hidden,)] * 4 + [(hidden,), ()]
    out, pos = {}, 0
    for key, size, shape in zip(_ORDER, sizes, shapes):
        out[key] = flat[pos:pos + size].reshape(shape)
        pos += size
    return out


def sliding_windows(values, window):
    """Inputs of shape (window, batch, 1) and next-value targets."""
    values = np.asarray(values, dtype=float)
    n = len(values) - window
    xs = np.stack([values[k:k + window] for k in range(n)], axis=1)
    return xs[:, :, None], values[window:]


def train(series: TimeSeries, cfg: TrainConfig = TrainConfig()) -> TrainResult:
    """Fit a one-step-ahead LSTM forecaster to ``series``.

    Full-batch training over all sliding windows, with gradients clipped to
    an L2 norm of ``cfg.clip_norm``. ``loss_history[0]`` is the loss at
    initialization and ``loss_history[k]`` the loss after ``k`` epochs.
    """
    values = np.asarray(series.values, dtype=float)
    if len(values) <= cfg.window:
        raise DomainError(
            f"series of length {len(values)} is too short for window {cfg.window}")
    if not np.all(np.isfinite(values)):
        raise DomainError("series has non-finite values")
    lo, hi = float(values.min()), float(values.max())
    scaler = Readout(np.zeros(1), 0.0, cfg.window, lo, hi)
    xs, ys = sliding_windows(scaler.scale(values), cfg.window)

    rng = np.random.default_rng(cfg.seed)
    hidden, width = cfg.hidden_size, cfg.hidden_size + 1
    init = LstmParams.random(hidden, 1, rng)
    arrays = {k: np.array(getattr(init, k)) for k in _ORDER[:8]}
    arrays["head_w"] = rng.uniform(-INIT_SCALE, INIT_SCALE, size=hidden)
    arrays["head_b"] = np.array(0.0)
    theta = _pack(arrays)
    m = np.zeros_like(theta)
    v = np.zeros_like(theta)

    def evaluate(flat):
        a = _unpack(flat, hidden, width)
        p = LstmParams(**{k: a[k] for k in _ORDER[:8]})
        loss, grads = bptt_loss_and_grad(p, a["head_w"], float(a["head_b"]), xs, ys)
        return loss, _pack(grads)

    history = []
    for epoch in range(cfg.epochs + 1):
        if not np.all(np.isfinite(theta)):
            raise TrainingError(f"parameters diverged at epoch {epoch}", epoch=epoch)
        with np.errstate(over="ignore", invalid="ignore"):
            loss, grad = evaluate(theta)
        if not (math.isfinite(loss) and np.all(np.isfinite(grad))):
            raise TrainingError(f"non-finite loss at epoch {epoch}", epoch=epoch)
        history.append(loss)
        if epoch == cfg.epochs:
            break
        norm = float(np.sqrt(grad @ grad))
        if norm > cfg.clip_norm:
            grad = grad * (cfg.clip_norm / norm)
        if cfg.optimizer is Optimizer.ADAM:
            t = epoch + 1
            m = cfg.beta1 * m + (1.0 - cfg.beta1) * grad
            v = cfg.beta2 * v + (1.0 - cfg.beta2) * grad ** 2
            m_hat = m / (1.0 - cfg.beta1 ** t)
            v_hat = v / (1.0 - cfg.beta2 ** t)
            theta = theta - cfg.learning_rate * m_hat / (np.sqrt(v_hat) + cfg.eps)
        else:
            theta = theta - cfg.learning_rate * grad

    a = _unpack(theta, hidden, width)
    params = LstmParams(**{k: a[k] for k in _ORDER[:8]})
    readout = Readout(a["head_w"].copy(), float(a["head_b"]), cfg.window, lo, hi)
    return TrainResult(params, readout, history)


def predict_next(params: LstmParams, readout: Readout, window_values):
    """Scaled one-step prediction from a window of scaled values."""
    xs = np.asarray(window_values, dtype=float).reshape(-1, 1, 1)
    h, _ = _forward_batch(params, xs)
    return float(h[0] @ readout.weight + readout.bias)


def forecast(params: LstmParams, readout: Readout, history: TimeSeries, horizon: int):
    """Autoregressive rollout of ``horizon`` annual values after ``history``."""
    if horizon < 1:
        raise DomainError("horizon must be >= 1")
    if readout.weight.shape != (params.hidden_size,) or params.input_size != 1:
        raise DomainError("readout does not match the LSTM parameters")
    if len(history) < readout.window:
        raise DomainError(f"history shorter than window {readout.window}")
    window = list(readout.scale(history.values[-readout.window:]))
    year = history.years[-1]
    points = []
    for k in range(1, horizon + 1):
        y = predict_next(params, readout, window)
        window = window[1:] + [y]
        points.append((year + k, float(readout.unscale(y))))
    return TimeSeries(tuple(points))


def model_document(params: LstmParams, readout: Readout):
    doc = {"schema": MODEL_SCHEMA,
           "hidden_size": params.hidden_size,
           "input_size": params.input_size}
    for g in GATES:
        doc[f"w_{g}"] = getattr(params, f"w_{g}").tolist()
        doc[f"b_{g}"] = getattr(params, f"b_{g}").tolist()
    doc["readout"] = {"weight": readout.weight.tolist(), "bias": readout.bias,
                      "window": readout.window, "lo": readout.lo, "hi": readout.hi}
    return doc


def model_from_document(doc):
    if doc.get("schema") != MODEL_SCHEMA:
        raise DomainError(f"unsupported model schema {doc.get('schema')!r}")
    params = LstmParams(**{k: np.array(doc[k], dtype=float) for k in _ORDER[:8]})
    r = doc["readout"]
    readout = Readout(np.array(r["weight"], dtype=float), float(r["bias"]), int(r["window"]),
                      float(r["lo"]), float(r["hi"]))
    return params, readout
