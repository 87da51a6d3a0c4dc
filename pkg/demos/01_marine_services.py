"""
Marine and coastal service values
=================================

Four per-area valuation formulas, evaluated on the calibrated City L inputs.
"""

from ecoval import golden_scenario_path
from ecoval.marine import (PollutantSpec, climate_regulation_value, fishery_value,
                           landscape_value, marine_values, pollution_control_value)
from ecoval.scenario import load_scenario

# Climate regulation prices the CO2 fixed and O2 released per unit area.
print(climate_regulation_value(0.010, 0.0028))

# Pollution treatment scales linearly with each pollutant's load.
one = [PollutantSpec(capacity_x=1000, unit_cost_c=600)]
two = one + [PollutantSpec(capacity_x=500, unit_cost_c=300)]
print(pollution_control_value(one, depth_h=10, mixing_volume_q=1e7).value)
print(pollution_control_value(two, depth_h=10, mixing_volume_q=1e7).value)

# Landscape scores are importance sums over the activities in use.
scores, value = landscape_value([[0.2, 0.3], [0.1, 0.4]], [1, 0], unit_value=0.5)
print(scores, value.value)

# Fishery value is net revenue per area and can go negative.
print(fishery_value(revenue=0.0, cost=1e5, area=1e6).value)

# The bundled scenario reproduces 0.02 / 0.60 / 0.11 / 0.32 $/m2.a.
scenario = load_scenario(golden_scenario_path())
for v in marine_values(scenario.marine):
    print(f"{v.kind.value:<20} {v.value:.6f}")
