"""Ecosystem-service valuation for land-use projects.

Marine and urban service values, entropy-weighted fuzzy evaluation,
cost-benefit comparison with environmental cost, LSTM forecasting and
sensitivity analysis.
"""

from importlib import resources

__version__ = "0.1.0"


def golden_scenario_path():
    """Path of the bundled City L 2019 scenario."""
    return resources.files(__name__) / "data" / "city_l_2019.json"
