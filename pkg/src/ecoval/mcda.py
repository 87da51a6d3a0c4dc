"""Entropy weighting of urban indicators and fuzzy comprehensive evaluation.

Column sums use :func:`math.fsum`, which is correctly rounded and therefore
independent of summation order. That makes the entropy weights exactly
invariant under row permutation and exactly equivariant under column
permutation, not just to rounding.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateWeightsError, DomainError

DEFAULT_GRADES = (1.0, 0.75, 0.5, 0.25, 0.0)

INDICATOR_NAMES = (
    "urban economic development",
    "population correlation and distribution",
    "ecosystem resilience",
    "urban land use",
    "infrastructure construction",
)


class Orientation(enum.Enum):
    BENEFIT = "benefit"
    COST = "cost"


@dataclass(frozen=True)
class IndicatorPanel:
    """``m`` alternatives (years, districts) by ``n`` indicators."""

    matrix: tuple[tuple[float, ...], ...]
    orientation: tuple[Orientation, ...]
    indicator_names: tuple[str, ...]

    @classmethod
    def of(cls, matrix, orientation=None, names=None):
        matrix = tuple(tuple(float(v) for v in row) for row in matrix)
        n = len(matrix[0]) if matrix else 0
        if orientation is None:
            orientation = (Orientation.BENEFIT,) * n
        orientation = tuple(Orientation(o) for o in orientation)
        if names is None:
            names = tuple(f"x{j + 1}" for j in range(n))
        return cls(matrix, orientation, tuple(names))

    def violations(self, prefix="indicators"):
        out = []
        m = len(self.matrix)
        if m < 2:
            out.append(f"{prefix}: need at least 2 alternatives, got {m}")
        n = len(self.indicator_names)
        if any(len(row) != n for row in self.matrix):
            out.append(f"{prefix}: every row must have {n} entries")
        elif not all(math.isfinite(v) for row in self.matrix for v in row):
            out.append(f"{prefix}: non-finite entry")
        if len(set(self.indicator_names)) != n:
            out.append(f"{prefix}: indicator names are not distinct")
        if len(self.orientation) != n:
            out.append(f"{prefix}: orientation length {len(self.orientation)} != {n}")
        return out


@dataclass(frozen=True)
class WeightVector:
    weights: tuple[float, ...]

    def __len__(self):
        return len(self.weights)

    def as_array(self):
        return np.array(self.weights, dtype=float)


@dataclass(frozen=True)
class GradeScale:
    """Value of each evaluation grade, used to reduce memberships to a score."""

    grade_values: tuple[float, ...] = DEFAULT_GRADES

    def violations(self, prefix="indicators.grade_scale"):
        g = self.grade_values
        out = []
        if not g:
            out.append(f"{prefix}: empty")
        if not all(0.0 <= v <= 1.0 for v in g):
            out.append(f"{prefix}: entries must lie in [0, 1]")
        steps = [b - a for a, b in zip(g, g[1:])]
        if not (all(s > 0 for s in steps) or all(s < 0 for s in steps)):
            out.append(f"{prefix}: not strictly monotone")
        return out


def _relation_violations(r, prefix="indicators.relation"):
    out = []
    if not r or any(len(row) != len(r[0]) for row in r):
        out.append(f"{prefix}: not a rectangular matrix")
    elif not all(0.0 <= v <= 1.0 for row in r for v in row):
        out.append(f"{prefix}: memberships must lie in [0, 1]")
    return out


def entropy_weights(panel: IndicatorPanel) -> WeightVector:
    """Objective indicator weights from Shannon entropy.

    Columns are min-max normalized (inverted for cost indicators), turned
    into shares ``p_ij``, and scored ``e_j = -sum(p ln p) / ln m`` with
    ``0 ln 0 = 0``. Weights are ``(1 - e_j)`` normalized to sum to one. A
    constant column has no dispersion, so ``e_j = 1`` and its weight is 0.

    Raises DomainError for an invalid panel or a column of raw zeros, and
    DegenerateWeightsError when every column is constant.
    """
    problems = panel.violations()
    if problems:
        raise DomainError("; ".join(problems))
    m = len(panel.matrix)
    log_m = math.log(m)
    divergence = []
    for j, name in enumerate(panel.indicator_names):
        col = [row[j] for row in panel.matrix]
        if all(v == 0.0 for v in col):
            raise DomainError(f"indicator {name!r} is an all-zero column")
        lo, hi = min(col), max(col)
        if hi == lo:
            divergence.append(0.0)
            continue
        span = hi - lo
        if panel.orientation[j] is Orientation.COST:
            x = [(hi - v) / span for v in col]
        else:
            x = [(v - lo) / span for v in col]
        total = math.fsum(x)
        e = -math.fsum(p * math.log(p) for p in (v / total for v in x) if p > 0) / log_m
        divergence.append(max(0.0, 1.0 - e))
    total = math.fsum(divergence)
    if total <= 0.0:
        raise DegenerateWeightsError("all indicators are constant; weights undefined")
    return WeightVector(tuple(d / total for d in divergence))


def normalize_weights(w) -> WeightVector:
    """Rescale non-negative weights to sum to one."""
    ws = tuple(float(v) for v in (w.weights if isinstance(w, WeightVector) else w))
    if any(not math.isfinite(v) or v < 0 for v in ws):
        raise DomainError("weights must be finite and non-negative")
    total = math.fsum(ws)
    if total <= 0.0:
        raise DomainError("cannot normalize an all-zero weight vector")
    return WeightVector(tuple(v / total for v in ws))


def fuzzy_composite(w, r):
    """Weighted-average composition ``B = W · R``.

    ``w`` must already be normalized; each ``B_j`` is then a convex
    combination of column ``j`` of ``r`` and lies in ``[0, 1]``.
    """
    ws = w.weights if isinstance(w, WeightVector) else tuple(w)
    r = np.asarray(r, dtype=float)
    if r.ndim != 2 or r.shape[0] != len(ws):
        raise DomainError(f"weights of length {len(ws)} do not match relation {r.shape}")
    if abs(math.fsum(ws) - 1.0) > 1e-9 or any(v < 0 for v in ws):
        raise DomainError("weights must be normalized before composition")
    return np.array([math.fsum(wi * rij for wi, rij in zip(ws, r[:, j]))
                     for j in range(r.shape[1])])


def defuzzify(b, scale: GradeScale = GradeScale()) -> float:
    """Membership-weighted mean grade value, ``sum(b g) / sum(b)``."""
    b = [float(v) for v in b]
    g = scale.grade_values
    if len(b) != len(g):
        raise DomainError(f"membership vector of length {len(b)} vs {len(g)} grades")
    if any(v < 0 for v in b):
        raise DomainError("memberships must be non-negative")
    mass = math.fsum(b)
    if mass == 0.0:
        raise DomainError("all-zero membership vector")
    theta = math.fsum(bj * gj for bj, gj in zip(b, g)) / mass
    # rounding guard: a convex combination cannot leave the scale's range
    return min(max(theta, min(g)), max(g))


def reweight_yearly(panels):
    """Entropy weights per year, returned in ascending year order."""
    out = {}
    for year in sorted(panels):
        try:
            out[year] = entropy_weights(panels[year])
        except DomainError as exc:
            raise type(exc)(f"year {year}: {exc}") from exc
    return out


@dataclass(frozen=True)
class IndicatorInputs:
    """The indicators section of a scenario.

    ``weights`` optionally overrides the entropy weights with a literal
    vector; it is normalized before use. ``yearly`` holds one matrix per year
    for the annual re-weighting, sharing names and orientation with
    ``panel``.
    """

    panel: IndicatorPanel
    relation: tuple[tuple[float, ...], ...]
    grade_scale: GradeScale = GradeScale()
    weights: tuple[float, ...] | None = None
    yearly: dict = field(default_factory=dict)

    def yearly_panels(self):
        return {y: IndicatorPanel(mat, self.panel.orientation, self.panel.indicator_names)
                for y, mat in self.yearly.items()}

    def violations(self):
        out = self.panel.violations()
        out += _relation_violations(self.relation)
        out += self.grade_scale.violations()
        n = len(self.panel.indicator_names)
        if self.relation and len(self.relation) != n:
            out.append(f"indicators.relation: {len(self.relation)} rows for {n} indicators")
        if self.relation and len(self.relation[0]) != len(self.grade_scale.grade_values):
            out.append("indicators.relation: column count does not match grade_scale")
        if self.weights is not None:
            if len(self.weights) != n:
                out.append(f"indicators.weights: length {len(self.weights)} != {n}")
            if any(not math.isfinite(v) or v < 0 for v in self.weights) or not any(
                    v > 0 for v in self.weights):
                out.append("indicators.weights: must be non-negative with one positive entry")
        for y, p in sorted(self.yearly_panels().items()):
            out += p.violations(prefix=f"indicators.yearly[{y}]")
        return out


@dataclass(frozen=True)
class FuzzyEvaluation:
    weights: WeightVector
    membership: tuple[float, ...]
    theta: float
    weight_source: str


def evaluate(inputs: IndicatorInputs) -> FuzzyEvaluation:
    """Weights, grade memberships ``B`` and score ``theta`` for one section."""
    if inputs.weights is not None:
        w, source = normalize_weights(inputs.weights), "literal"
    else:
        w, source = entropy_weights(inputs.panel), "entropy"
    b = fuzzy_composite(w, inputs.relation)
    return FuzzyEvaluation(w, tuple(float(v) for v in b), defuzzify(b, inputs.grade_scale),
                           source)
