import math

import numpy as np
import pytest

import oracles
from ecoval import lstm
from ecoval.errors import DomainError, TrainingError
from ecoval.values import TimeSeries


def as_oracle(params):
    W = {g: getattr(params, f"w_{g}").tolist() for g in lstm.GATES}
    b = {g: getattr(params, f"b_{g}").tolist() for g in lstm.GATES}
    return W, b


def fixed_params():
    # 2 hidden, 1 input; rows are over [h1, h2, x]
    return lstm.LstmParams(
        w_f=[[0.1, -0.2, 0.3], [0.05, 0.4, -0.1]],
        w_i=[[-0.3, 0.2, 0.5], [0.2, 0.1, 0.25]],
        w_c=[[0.4, -0.5, 0.6], [-0.2, 0.3, 0.9]],
        w_o=[[0.15, 0.25, -0.35], [0.3, -0.1, 0.2]],
        b_f=[1.0, 0.5], b_i=[0.0, -0.1], b_c=[0.05, 0.0], b_o=[0.1, -0.2])


def test_zero_params_step():
    p = lstm.LstmParams.zeros(3, 2)
    s = lstm.cell_step(p, lstm.LstmState.zeros(3), [0.7, -4.0])
    assert np.all(s.c == 0.0) and np.all(s.h == 0.0)


def test_zero_params_carry_cell_state():
    p = lstm.LstmParams.zeros(1, 1)
    s = lstm.cell_step(p, lstm.LstmState(np.zeros(1), np.array([2.0])), [3.0])
    assert s.c[0] == 1.0
    assert s.h[0] == pytest.approx(0.3807970780, abs=1e-10)


def test_step_matches_oracle():
    p = fixed_params()
    W, b = as_oracle(p)
    h, c = [0.2, -0.1], [0.5, -0.3]
    got = lstm.cell_step(p, lstm.LstmState(np.array(h), np.array(c)), [0.8])
    want_h, want_c = oracles.lstm_step(W, b, h, c, [0.8])
    assert got.h == pytest.approx(want_h, rel=1e-14)
    assert got.c == pytest.approx(want_c, rel=1e-14)


def test_sequence_forward():
    p = fixed_params()
    assert lstm.sequence_forward(p, []) == []
    one = lstm.sequence_forward(p, [[0.3]])
    assert one[0] == pytest.approx(lstm.cell_step(p, lstm.LstmState.zeros(2), [0.3]).h)
    W, b = as_oracle(p)
    h, c = [0.0, 0.0], [0.0, 0.0]
    got = lstm.sequence_forward(p, [[0.3], [-0.6], [1.2]])
    for x, gh in zip([0.3, -0.6, 1.2], got):
        h, c = oracles.lstm_step(W, b, h, c, [x])
        assert gh == pytest.approx(h, rel=1e-14)


def test_shape_errors():
    p = fixed_params()
    with pytest.raises(DomainError):
        lstm.cell_step(p, lstm.LstmState.zeros(2), [1.0, 2.0])
    with pytest.raises(DomainError):
        lstm.cell_step(p, lstm.LstmState.zeros(3), [1.0])


def test_gate_and_state_bounds():
    rng = np.random.default_rng(3)
    for _ in range(50):
        p = lstm.LstmParams.random(4, 2, rng, scale=3.0)
        state = lstm.LstmState(rng.uniform(-1, 1, 4), rng.uniform(-5, 5, 4))
        nxt = lstm.cell_step(p, state, rng.uniform(-10, 10, 2))
        assert np.all(np.abs(nxt.h) < 1)
        assert np.all(np.abs(nxt.c) <= np.abs(state.c) + 1)


def max_gradient_error(hidden=4, steps=3, seed=0, eps=1e-6):
    """Largest relative gap between BPTT and central differences over every parameter."""
    rng = np.random.default_rng(seed)
    p = lstm.LstmParams.random(hidden, 1, rng, scale=0.5, forget_bias=0.0)
    weight = rng.uniform(-0.5, 0.5, hidden)
    bias = 0.1
    xs = rng.uniform(0, 1, (steps, 2, 1))
    ys = rng.uniform(0, 1, 2)
    _, grads = lstm.bptt_loss_and_grad(p, weight, bias, xs, ys)

    def loss(arrays, w, b):
        return lstm.bptt_loss_and_grad(lstm.LstmParams(**arrays), w, b, xs, ys)[0]

    base = {k: np.array(getattr(p, k)) for k in ("w_f", "w_i", "w_c", "w_o",
                                                  "b_f", "b_i", "b_c", "b_o")}
    worst = 0.0

    def rel(a, n):
        return abs(a - n) / max(abs(a), abs(n), 1e-8)

    for name, arr in base.items():
        for idx in np.ndindex(arr.shape):
            up, dn = {k: v.copy() for k, v in base.items()}, {k: v.copy() for k, v in base.items()}
            up[name][idx] += eps
            dn[name][idx] -= eps
            numeric = (loss(up, weight, bias) - loss(dn, weight, bias)) / (2 * eps)
            worst = max(worst, rel(grads[name][idx], numeric))
    for k in range(hidden):
        e = np.zeros(hidden)
        e[k] = eps
        numeric = (loss(base, weight + e, bias) - loss(base, weight - e, bias)) / (2 * eps)
        worst = max(worst, rel(grads["head_w"][k], numeric))
    numeric = (loss(base, weight, bias + eps) - loss(base, weight, bias - eps)) / (2 * eps)
    return max(worst, rel(float(grads["head_b"]), numeric))


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_bptt_matches_finite_differences(seed):
    assert max_gradient_error(seed=seed) < 1e-5


def series(values, start=2000):
    return TimeSeries(tuple((start + k, float(v)) for k, v in enumerate(values)))


def declining(n=20, seed=1):
    rng = np.random.default_rng(seed)
    return series(1.0 - 0.03 * np.arange(n) + rng.normal(0, 0.01, n))


def test_constant_series_is_learned():
    result = lstm.train(series([3.0] * 12), lstm.TrainConfig(epochs=200))
    assert result.loss_history[-1] <= 1e-6
    fc = lstm.forecast(result.params, result.readout, series([3.0] * 12), 3)
    assert fc.values == pytest.approx([3.0] * 3)


def test_declining_series_trains_and_forecasts_down():
    s = declining()
    result = lstm.train(s, lstm.TrainConfig(epochs=500, seed=4))
    assert result.loss_history[-1] <= 0.1 * result.loss_history[0]
    fc = lstm.forecast(result.params, result.readout, s, 5)
    assert fc.years == [2020, 2021, 2022, 2023, 2024]
    assert np.mean(np.diff([s.values[-1]] + fc.values)) < 0


def test_training_is_deterministic():
    cfg = lstm.TrainConfig(epochs=50, seed=9)
    a = lstm.train(declining(), cfg)
    b = lstm.train(declining(), cfg)
    assert a.loss_history == b.loss_history
    fa = lstm.forecast(a.params, a.readout, declining(), 4)
    fb = lstm.forecast(b.params, b.readout, declining(), 4)
    assert fa == fb


def test_horizon_one_is_one_step_prediction():
    s = declining()
    r = lstm.train(s, lstm.TrainConfig(epochs=20))
    fc = lstm.forecast(r.params, r.readout, s, 1)
    window = r.readout.scale(s.values[-r.readout.window:])
    assert fc.values[0] == r.readout.unscale(lstm.predict_next(r.params, r.readout, window))


def test_sgd_optimizer_runs():
    r = lstm.train(declining(), lstm.TrainConfig(epochs=30, optimizer=lstm.Optimizer.SGD,
                                                 learning_rate=0.1))
    assert r.loss_history[-1] < r.loss_history[0]


def test_errors():
    with pytest.raises(DomainError, match="too short"):
        lstm.train(series([1.0, 2.0, 3.0]), lstm.TrainConfig(window=4))
    r = lstm.train(declining(), lstm.TrainConfig(epochs=2))
    with pytest.raises(DomainError):
        lstm.forecast(r.params, r.readout, declining(), 0)
    bad = lstm.Readout(np.zeros(3), 0.0, 4)
    with pytest.raises(DomainError):
        lstm.forecast(r.params, bad, declining(), 2)


def test_divergence_reports_epoch():
    cfg = lstm.TrainConfig(epochs=10, optimizer=lstm.Optimizer.SGD, learning_rate=1e306)
    with pytest.raises(TrainingError) as info:
        lstm.train(declining(), cfg)
    assert info.value.epoch >= 1


def test_model_document_round_trip():
    r = lstm.train(declining(), lstm.TrainConfig(epochs=5))
    doc = lstm.model_document(r.params, r.readout)
    assert doc["schema"] == "ecoval-lstm/1"
    params, readout = lstm.model_from_document(doc)
    assert np.array_equal(params.w_c, r.params.w_c)
    assert readout.lo == r.readout.lo and math.isclose(readout.bias, r.readout.bias)
