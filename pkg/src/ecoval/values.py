"""Service values and time series."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import DomainError


class ServiceKind(enum.Enum):
    CLIMATE_REGULATION = "ClimateRegulation"
    POLLUTION_CONTROL = "PollutionControl"
    LANDSCAPE = "Landscape"
    FISHERY = "Fishery"
    URBAN_COMPOSITE = "UrbanComposite"


@dataclass(frozen=True)
class ServiceValue:
    """A money density in $/m²·a for one kind of service.

    Only fishery values may be negative: they are revenue net of cost.
    """

    kind: ServiceKind
    value: float

    def __post_init__(self):
        if not math.isfinite(self.value):
            raise DomainError(f"{self.kind.value} value is not finite: {self.value!r}")
        if self.value < 0 and self.kind is not ServiceKind.FISHERY:
            raise DomainError(f"{self.kind.value} value is negative: {self.value!r}")


@dataclass(frozen=True)
class TimeSeries:
    """Annual observations as ``(year, value)`` pairs."""

    points: tuple[tuple[int, float], ...] = ()

    @classmethod
    def from_pairs(cls, pairs):
        return cls(tuple((int(y), float(v)) for y, v in pairs))

    @property
    def years(self):
        return [y for y, _ in self.points]

    @property
    def values(self):
        return [v for _, v in self.points]

    def __len__(self):
        return len(self.points)

    def violations(self):
        out = []
        years = self.years
        if any(b <= a for a, b in zip(years, years[1:])):
            out.append("history: non-increasing years")
        if not all(math.isfinite(v) for v in self.values):
            out.append("history: non-finite value")
        return out
