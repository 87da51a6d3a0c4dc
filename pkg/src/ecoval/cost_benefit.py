"""Benefit-cost comparison with and without environmental cost."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import DomainError


class CostCategory(enum.Enum):
    INVESTMENT = "tangible.investment"
    OPERATING = "tangible.operating"
    REAL_ESTATE = "tangible.real_estate"
    PAYROLL = "tangible.payroll"
    UTILITIES = "tangible.utilities"
    PROJECT_TIME = "intangible.project_time"
    EXTERNAL_ENERGY = "intangible.external_energy"
    BUSINESS_LOSS = "intangible.business_loss"
    ENVIRONMENTAL = "intangible.environmental"

    @property
    def tangible(self):
        return self.value.startswith("tangible.")


class BenefitCategory(enum.Enum):
    DIRECT = "direct"
    INDIRECT = "indirect"
    OPTION = "option"


@dataclass(frozen=True)
class CostItem:
    category: CostCategory
    amount: float
    label: str = ""


@dataclass(frozen=True)
class BenefitItem:
    category: BenefitCategory
    amount: float
    label: str = ""


@dataclass(frozen=True)
class CostLedger:
    """Itemized costs and benefits of the project, in dollars.

    ``env_cost`` is the single source of the environmental cost; an
    ``ENVIRONMENTAL`` item in ``costs`` is ignored by the totals so the
    cost is never counted twice.
    """

    costs: tuple[CostItem, ...] = ()
    benefits: tuple[BenefitItem, ...] = ()
    esv_benefit: float = 0.0
    env_cost: float = 0.0

    def violations(self):
        out = []
        for k, item in enumerate(self.costs):
            if not math.isfinite(item.amount) or item.amount < 0:
                out.append(f"ledger.costs[{k}]: amount must be finite and >= 0")
        for k, item in enumerate(self.benefits):
            if not math.isfinite(item.amount) or item.amount < 0:
                out.append(f"ledger.benefits[{k}]: amount must be finite and >= 0")
        for name in ("esv_benefit", "env_cost"):
            v = getattr(self, name)
            if not math.isfinite(v) or v < 0:
                out.append(f"ledger.{name} must be finite and >= 0")
        return out


def monetize_esv(value_density, affected_area, horizon_years):
    """Dollar benefit of a service density ($/m²·a) over an area and horizon."""
    if affected_area < 0 or horizon_years < 0:
        raise DomainError("area and horizon must be non-negative")
    return value_density * affected_area * horizon_years


def total_cost(ledger: CostLedger, include_env: bool) -> float:
    amounts = [c.amount for c in ledger.costs if c.category is not CostCategory.ENVIRONMENTAL]
    if include_env:
        amounts.append(ledger.env_cost)
    return math.fsum(amounts)


def total_benefit(ledger: CostLedger, include_esv: bool) -> float:
    amounts = [b.amount for b in ledger.benefits]
    if include_esv:
        amounts.append(ledger.esv_benefit)
    return math.fsum(amounts)


def benefit_cost_ratio(benefit, cost):
    if not cost > 0:
        raise DomainError("non-positive cost base")
    ratio = benefit / cost
    if not math.isfinite(ratio):
        raise DomainError(f"ratio is not finite ({benefit!r} / {cost!r})")
    return ratio


@dataclass(frozen=True)
class ComparisonReport:
    ratio_base: float
    ratio_env: float
    delta: float
    cost_base: float
    cost_env: float
    benefit_base: float
    benefit_env: float

    def rows(self):
        """Two-row summary table: (case, benefit, cost, ratio)."""
        return [
            ("without environmental cost", self.benefit_base, self.cost_base, self.ratio_base),
            ("with environmental cost", self.benefit_env, self.cost_env, self.ratio_env),
        ]


def compare_with_without_env(ledger: CostLedger) -> ComparisonReport:
    """Ratios before and after adding environmental cost and ESV benefit."""
    cb, ce = total_cost(ledger, False), total_cost(ledger, True)
    bb, be = total_benefit(ledger, False), total_benefit(ledger, True)
    try:
        base = benefit_cost_ratio(bb, cb)
    except DomainError as exc:
        raise DomainError(f"base case: {exc}") from exc
    try:
        env = benefit_cost_ratio(be, ce)
    except DomainError as exc:
        raise DomainError(f"environmental case: {exc}") from exc
    return ComparisonReport(base, env, env - base, cb, ce, bb, be)
