"""
Forecasting the composite value with an LSTM
============================================

Train on the 2000-2019 history and roll five years forward.
"""

import numpy as np

from ecoval import golden_scenario_path
from ecoval.lstm import TrainConfig, forecast, train
from ecoval.scenario import load_scenario

scenario = load_scenario(golden_scenario_path())
result = train(scenario.history, TrainConfig(seed=scenario.seed, epochs=500))
print(f"loss {result.loss_history[0]:.4f} -> {result.loss_history[-1]:.6f}")

ahead = forecast(result.params, result.readout, scenario.history, horizon=5)
for year, value in ahead.points:
    print(year, round(value, 4))
print("mean yearly change:", np.mean(np.diff(ahead.values)))
