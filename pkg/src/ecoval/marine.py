"""Per-area values of marine and coastal ecosystem services.

All results are money densities in $/m²·a. Inputs follow the units noted on
:class:`MarineInputs`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .values import ServiceKind, ServiceValue

# Mass of CO2 fixed and O2 released per unit of primary production.
CO2_FIXED_RATIO = 1.63
O2_RELEASED_RATIO = 1.19


@dataclass(frozen=True)
class PollutantSpec:
    capacity_x: float  # ton/a
    unit_cost_c: float  # $/ton


@dataclass(frozen=True)
class MarineInputs:
    """Inputs for the four marine service formulas.

    ``mixing_volume_q`` is the effective seawater volume (m³) over which the
    pollutant load is treated; ``landscape_unit_value`` converts the mean
    dimensionless importance score into $/m²·a.
    """

    cost_fix_co2: float
    cost_release_o2: float
    pollutants: tuple[PollutantSpec, ...]
    depth_h: float
    mixing_volume_q: float
    landscape_importance_u: tuple[tuple[float, ...], ...]
    landscape_use_i: tuple[int, ...]
    landscape_unit_value: float
    fishery_revenue_r: float
    fishery_cost_c: float
    fishery_area_s: float

    def violations(self):
        out = []

        def finite(name, v):
            if not math.isfinite(v):
                out.append(f"marine.{name} is not finite")
                return False
            return True

        for name in ("cost_fix_co2", "cost_release_o2", "fishery_revenue_r",
                     "fishery_cost_c", "landscape_unit_value"):
            v = getattr(self, name)
            if finite(name, v) and v < 0:
                out.append(f"marine.{name} is negative")
        for name in ("depth_h", "mixing_volume_q", "fishery_area_s"):
            v = getattr(self, name)
            if finite(name, v) and v <= 0:
                out.append(f"marine.{name} must be positive")
        for k, p in enumerate(self.pollutants):
            for name in ("capacity_x", "unit_cost_c"):
                v = getattr(p, name)
                if not math.isfinite(v) or v < 0:
                    out.append(f"marine.pollutants[{k}].{name} must be finite and >= 0")
        try:
            _check_landscape(self.landscape_importance_u, self.landscape_use_i)
        except DomainError as exc:
            out.append(f"marine.landscape: {exc}")
        return out


def _nonneg(name, v):
    if not math.isfinite(v) or v < 0:
        raise DomainError(f"{name} must be finite and >= 0, got {v!r}")


def climate_regulation_value(cost1, cost2):
    """Climate regulation: ``1.63*cost1 + 1.19*cost2``.

    ``cost1`` prices the CO2 fixed and ``cost2`` the O2 released, both per
    unit area per year.
    """
    _nonneg("cost_fix_co2", cost1)
    _nonneg("cost_release_o2", cost2)
    return ServiceValue(ServiceKind.CLIMATE_REGULATION,
                        CO2_FIXED_RATIO * cost1 + O2_RELEASED_RATIO * cost2)


def pollution_control_value(pollutants, depth_h, mixing_volume_q):
    """Pollution treatment: ``h * sum(X_i * C_i) / Q``.

    Units resolve as ton/a · $/ton · m / m³ = $/m²·a. An empty pollutant
    list is valid and yields zero.
    """
    if not math.isfinite(depth_h) or depth_h <= 0:
        raise DomainError(f"depth_h must be positive, got {depth_h!r}")
    if mixing_volume_q == 0:
        raise DomainError("zero mixing volume")
    if not math.isfinite(mixing_volume_q) or mixing_volume_q < 0:
        raise DomainError(f"mixing_volume_q must be positive, got {mixing_volume_q!r}")
    load = 0.0
    for p in pollutants:
        _nonneg("capacity_x", p.capacity_x)
        _nonneg("unit_cost_c", p.unit_cost_c)
        load += p.capacity_x * p.unit_cost_c
    return ServiceValue(ServiceKind.POLLUTION_CONTROL, depth_h * load / mixing_volume_q)


def _check_landscape(u, i_use):
    u = np.asarray(u, dtype=float)
    i_use = np.asarray(i_use)
    if u.ndim != 2 or i_use.ndim != 1 or u.shape[1] != i_use.shape[0]:
        raise DomainError(
            f"importance matrix {u.shape} does not conform to use vector {i_use.shape}")
    if u.shape[0] == 0:
        raise DomainError("importance matrix has no regions")
    if not np.all((i_use == 0) | (i_use == 1)):
        raise DomainError("use indicators must be 0 or 1")
    if not np.all(np.isfinite(u)):
        raise DomainError("importance matrix has non-finite entries")
    return u, i_use.astype(float)


def landscape_value(u, i_use, unit_value):
    """Landscape amenity.

    Each region's score is ``sum_j U_ij * I_j``; the value is
    ``unit_value * mean(scores)`` so that it does not grow with the number of
    regions.

    Returns ``(scores, ServiceValue)``.
    """
    u, i_use = _check_landscape(u, i_use)
    _nonneg("landscape_unit_value", unit_value)
    scores = u @ i_use
    return scores, ServiceValue(ServiceKind.LANDSCAPE, unit_value * float(scores.mean()))


def fishery_value(revenue, cost, area):
    """Fishery provision, ``(R - C) / S``; negative when cost exceeds revenue."""
    if not math.isfinite(area) or area <= 0:
        raise DomainError(f"fishery_area_s must be positive, got {area!r}")
    _nonneg("fishery_revenue_r", revenue)
    _nonneg("fishery_cost_c", cost)
    return ServiceValue(ServiceKind.FISHERY, (revenue - cost) / area)


def marine_values(m: MarineInputs):
    """All four marine service values, in a fixed order."""
    _, landscape = landscape_value(m.landscape_importance_u, m.landscape_use_i,
                                   m.landscape_unit_value)
    return [
        climate_regulation_value(m.cost_fix_co2, m.cost_release_o2),
        pollution_control_value(m.pollutants, m.depth_h, m.mixing_volume_q),
        landscape,
        fishery_value(m.fishery_revenue_r, m.fishery_cost_c, m.fishery_area_s),
    ]
