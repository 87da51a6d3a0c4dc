"""Urban composite ecosystem-service value."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .values import ServiceKind, ServiceValue

FROM_MCDA = "from-mcda"


@dataclass(frozen=True)
class UrbanParams:
    """Inputs to the urban value.

    ``delta`` is a dimensional normalizer chosen so the result is in
    $/m²·a, ``p_s`` a dimensionless structural factor. ``rho`` is either a
    number in [0, 1] or ``"from-mcda"`` to take it from the fuzzy evaluation,
    optionally through ``calibration``, a monotone table of ``(theta, rho)``
    knots.
    """

    p_v: float
    p_0: float
    e_protect: float
    area_s: float
    sigma: float
    rho: float | str = FROM_MCDA
    delta: float = 1.0
    p_s: float = 1.0
    calibration: tuple[tuple[float, float], ...] | None = None

    def violations(self):
        out = []
        for name in ("p_v", "p_0", "e_protect", "area_s", "sigma", "delta", "p_s"):
            if not math.isfinite(getattr(self, name)):
                out.append(f"urban.{name} is not finite")
        if not 0.0 < self.sigma < 1.0:
            out.append("urban: sigma out of (0,1)")
        for name in ("area_s", "delta", "p_s"):
            if getattr(self, name) <= 0:
                out.append(f"urban.{name} must be positive")
        for name in ("p_v", "p_0", "e_protect"):
            if getattr(self, name) < 0:
                out.append(f"urban.{name} is negative")
        if isinstance(self.rho, str):
            if self.rho != FROM_MCDA:
                out.append(f"urban.rho must be a number or {FROM_MCDA!r}")
        elif not 0.0 <= self.rho <= 1.0:
            out.append("urban: rho out of [0,1]")
        if self.calibration is not None:
            try:
                _check_calibration(self.calibration)
            except DomainError as exc:
                out.append(f"urban.calibration: {exc}")
        return out


def urban_service_value(p: UrbanParams) -> ServiceValue:
    """``(p_v * p_0 * e_protect) / (area_s * delta) * sigma * p_s * rho``."""
    if isinstance(p.rho, str):
        raise DomainError("rho has not been resolved from the fuzzy evaluation")
    problems = p.violations()
    if problems:
        raise DomainError("; ".join(problems))
    value = (p.p_v * p.p_0 * p.e_protect) / (p.area_s * p.delta) * p.sigma * p.p_s * p.rho
    return ServiceValue(ServiceKind.URBAN_COMPOSITE, value)


def _check_calibration(table):
    xs = [float(t) for t, _ in table]
    ys = [float(r) for _, r in table]
    if len(xs) < 2:
        raise DomainError("calibration needs at least two knots")
    if any(b <= a for a, b in zip(xs, xs[1:])):
        raise DomainError("calibration theta knots must be strictly increasing")
    if any(b < a for a, b in zip(ys, ys[1:])):
        raise DomainError("calibration is not monotone")
    if any(not 0.0 <= v <= 1.0 for v in xs + ys):
        raise DomainError("calibration knots must lie in [0, 1]")
    return xs, ys


def rho_from_theta(theta, calibration=None):
    """Map the fuzzy score to the ecological value level.

    Identity without a calibration table; otherwise linear interpolation
    between knots, held constant beyond the end knots.
    """
    if not 0.0 <= theta <= 1.0:
        raise DomainError(f"theta must lie in [0, 1], got {theta!r}")
    if calibration is None:
        return float(theta)
    xs, ys = _check_calibration(calibration)
    return float(np.interp(theta, xs, ys))
