"""
Urban composite value and cost-benefit comparison
=================================================

The fuzzy score feeds the urban value; the ledger is compared with and
without environmental cost.
"""

from ecoval import golden_scenario_path
from ecoval.cost_benefit import compare_with_without_env
from ecoval.pipeline import resolve_urban, service_values
from ecoval.scenario import load_scenario
from ecoval.urban import rho_from_theta, urban_service_value

scenario = load_scenario(golden_scenario_path())

urban = resolve_urban(scenario)
print("rho =", urban.rho)
print("P_urban =", urban_service_value(urban).value)

# A calibration table bends the theta -> rho mapping.
print(rho_from_theta(0.75, ((0.0, 0.0), (0.5, 0.3), (1.0, 1.0))))

for kind, value in service_values(scenario).items():
    print(f"{kind:<20} {value:.4f}")

report = compare_with_without_env(scenario.ledger)
for case, benefit, cost, ratio in report.rows():
    print(f"{case:<28} {benefit:>8.2f} {cost:>8.2f} {ratio:.3f}")
print("change in ratio:", round(report.delta, 3))
