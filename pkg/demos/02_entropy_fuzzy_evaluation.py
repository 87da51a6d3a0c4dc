"""
Entropy weights and fuzzy comprehensive evaluation
==================================================

Objective weights from indicator dispersion, composition with a membership
matrix, and reduction to a single score.
"""

import numpy as np

from ecoval import golden_scenario_path
from ecoval.mcda import (IndicatorPanel, defuzzify, entropy_weights, fuzzy_composite,
                         normalize_weights, reweight_yearly)
from ecoval.scenario import load_scenario

scenario = load_scenario(golden_scenario_path())
ind = scenario.indicators

# A constant column carries no information and gets no weight.
panel = IndicatorPanel.of([[5.0, 1.0], [5.0, 2.0], [5.0, 7.0]])
print(entropy_weights(panel).weights)

# Weights from the district panel for 2019.
w = entropy_weights(ind.panel)
for name, wj in zip(ind.panel.indicator_names, w.weights):
    print(f"{name:<42} {wj:.4f}")

# The City L weight vector sums to 3.099, so it is normalized before composing.
w_lit = normalize_weights(ind.weights)
b = fuzzy_composite(w_lit, ind.relation)
print("B =", np.round(b, 4))
print("theta =", defuzzify(b, ind.grade_scale))

# Re-weighting year by year shows how the weights drift.
for year, wy in reweight_yearly(ind.yearly_panels()).items():
    print(year, np.round(wy.weights, 4))
