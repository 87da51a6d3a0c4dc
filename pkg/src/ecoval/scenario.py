"""The scenario bundle and its ``ecoval/1`` file format.

A scenario file is a JSON object::

    {"schema": "ecoval/1", "name": ..., "year": ..., "seed": ...,
     "marine": {...}, "indicators": {...}, "urban": {...},
     "ledger": {...}, "history": [[year, value], ...],
     "metadata": {...}, "reference": {...}}

``metadata`` (descriptive, unused by any formula) and ``reference``
(externally reported values kept for comparison) are optional. Unknown keys anywhere
are rejected.
"""

from __future__ import annotations

import dataclasses
import json
import math
from dataclasses import dataclass, field

from . import textio
from .cost_benefit import BenefitCategory, BenefitItem, CostCategory, CostItem, CostLedger
from .errors import ScenarioParseError, SchemaError
from .marine import MarineInputs, PollutantSpec
from .mcda import DEFAULT_GRADES, GradeScale, IndicatorInputs, IndicatorPanel, Orientation
from .urban import UrbanParams
from .values import TimeSeries

SCHEMA = "ecoval/1"


@dataclass(frozen=True)
class Scenario:
    name: str
    year: int
    marine: MarineInputs
    indicators: IndicatorInputs
    urban: UrbanParams
    ledger: CostLedger
    history: TimeSeries
    seed: int = 0
    metadata: dict = field(default_factory=dict)
    reference: dict = field(default_factory=dict)


def validate_scenario(s: Scenario):
    """All invariant violations of ``s`` as messages; empty means valid."""
    out = []
    if not s.name:
        out.append("name is empty")
    if s.seed < 0:
        out.append("seed must be unsigned")
    out += s.marine.violations()
    out += s.indicators.violations()
    out += s.urban.violations()
    out += s.ledger.violations()
    out += s.history.violations()
    for k, v in s.reference.items():
        if not math.isfinite(v):
            out.append(f"reference.{k} is not finite")
    return out


# -- numeric inputs for perturbation -------------------------------------------

_MARINE_SCALARS = ("cost_fix_co2", "cost_release_o2", "depth_h", "mixing_volume_q",
                   "landscape_unit_value", "fishery_revenue_r", "fishery_cost_c",
                   "fishery_area_s")
_URBAN_SCALARS = ("p_v", "p_0", "e_protect", "area_s", "delta", "sigma", "p_s")


def _accessor(section, attr):
    def get(s):
        return getattr(getattr(s, section), attr)

    def set_(s, value):
        sub = dataclasses.replace(getattr(s, section), **{attr: float(value)})
        return dataclasses.replace(s, **{section: sub})

    return get, set_


def numeric_inputs(s: Scenario):
    """Scalar inputs open to perturbation, as ``name -> (get, set)``."""
    out = {f"marine.{a}": _accessor("marine", a) for a in _MARINE_SCALARS}
    out.update({f"urban.{a}": _accessor("urban", a) for a in _URBAN_SCALARS})
    if not isinstance(s.urban.rho, str):
        out["urban.rho"] = _accessor("urban", "rho")
    return out


# -- parsing -------------------------------------------------------------------

class _Reader:
    """Collects schema violations while pulling typed fields out of dicts."""

    def __init__(self):
        self.errors = []

    def keys(self, obj, where, required, optional=()):
        if not isinstance(obj, dict):
            self.errors.append(f"{where}: expected an object")
            return False
        for k in obj:
            if k not in required and k not in optional:
                self.errors.append(f"{where}: unknown field {k!r}")
        for k in required:
            if k not in obj:
                self.errors.append(f"{where}: missing field {k!r}")
        return all(k in obj for k in required)

    def num(self, v, where):
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            self.errors.append(f"{where}: expected a number")
            return math.nan
        return float(v)

    def int_(self, v, where):
        if isinstance(v, bool) or not isinstance(v, int):
            self.errors.append(f"{where}: expected an integer")
            return 0
        return v

    def str_(self, v, where):
        if not isinstance(v, str):
            self.errors.append(f"{where}: expected a string")
            return ""
        return v

    def list_(self, v, where):
        if not isinstance(v, list):
            self.errors.append(f"{where}: expected a list")
            return []
        return v

    def vector(self, v, where):
        return tuple(self.num(x, f"{where}[{k}]") for k, x in enumerate(self.list_(v, where)))

    def matrix(self, v, where):
        return tuple(self.vector(row, f"{where}[{k}]")
                     for k, row in enumerate(self.list_(v, where)))

    def enum(self, cls, v, where):
        try:
            return cls(v)
        except ValueError:
            self.errors.append(f"{where}: {v!r} is not one of {[e.value for e in cls]}")
            return None


def _marine(r, d):
    fields = ("cost_fix_co2", "cost_release_o2", "pollutants", "depth_h", "mixing_volume_q",
              "landscape_importance_u", "landscape_use_i", "landscape_unit_value",
              "fishery_revenue_r", "fishery_cost_c", "fishery_area_s")
    if not r.keys(d, "marine", fields):
        return None
    pollutants = []
    for k, p in enumerate(r.list_(d["pollutants"], "marine.pollutants")):
        where = f"marine.pollutants[{k}]"
        if r.keys(p, where, ("capacity_x", "unit_cost_c")):
            pollutants.append(PollutantSpec(r.num(p["capacity_x"], where + ".capacity_x"),
                                            r.num(p["unit_cost_c"], where + ".unit_cost_c")))
    use = tuple(r.int_(x, f"marine.landscape_use_i[{k}]") for k, x in
                enumerate(r.list_(d["landscape_use_i"], "marine.landscape_use_i")))
    scalars = {k: r.num(d[k], f"marine.{k}") for k in fields
               if k not in ("pollutants", "landscape_importance_u", "landscape_use_i")}
    return MarineInputs(
        pollutants=tuple(pollutants),
        landscape_importance_u=r.matrix(d["landscape_importance_u"],
                                        "marine.landscape_importance_u"),
        landscape_use_i=use, **scalars)


def _indicators(r, d):
    if not r.keys(d, "indicators", ("names", "orientation", "matrix", "relation"),
                  ("grade_scale", "weights", "yearly")):
        return None
    names = tuple(r.str_(x, "indicators.names") for x in r.list_(d["names"], "indicators.names"))
    orientation = tuple(r.enum(Orientation, x, f"indicators.orientation[{k}]")
                        for k, x in enumerate(r.list_(d["orientation"], "indicators.orientation")))
    panel = IndicatorPanel(r.matrix(d["matrix"], "indicators.matrix"), orientation, names)
    grades = GradeScale(r.vector(d["grade_scale"], "indicators.grade_scale")
                        if "grade_scale" in d else DEFAULT_GRADES)
    weights = d.get("weights")
    if weights is not None:
        weights = r.vector(weights, "indicators.weights")
    yearly = {}
    raw_yearly = d.get("yearly", {})
    if isinstance(raw_yearly, dict):
        for key, mat in raw_yearly.items():
            try:
                year = int(key)
            except ValueError:
                r.errors.append(f"indicators.yearly: {key!r} is not a year")
                continue
            yearly[year] = r.matrix(mat, f"indicators.yearly[{key}]")
    else:
        r.errors.append("indicators.yearly: expected an object")
    return IndicatorInputs(panel, r.matrix(d["relation"], "indicators.relation"), grades,
                           weights, dict(sorted(yearly.items())))


def _urban(r, d):
    req = ("p_v", "p_0", "e_protect", "area_s", "sigma", "rho")
    if not r.keys(d, "urban", req, ("delta", "p_s", "calibration")):
        return None
    vals = {k: r.num(d[k], f"urban.{k}") for k in req if k != "rho"}
    for k in ("delta", "p_s"):
        if k in d:
            vals[k] = r.num(d[k], f"urban.{k}")
    rho = d["rho"] if isinstance(d["rho"], str) else r.num(d["rho"], "urban.rho")
    calibration = d.get("calibration")
    if calibration is not None:
        calibration = tuple(tuple(r.vector(knot, f"urban.calibration[{k}]")) for k, knot in
                            enumerate(r.list_(calibration, "urban.calibration")))
        if any(len(knot) != 2 for knot in calibration):
            r.errors.append("urban.calibration: knots must be [theta, rho] pairs")
            calibration = None
    return UrbanParams(rho=rho, calibration=calibration, **vals)


def _ledger(r, d):
    if not r.keys(d, "ledger", ("costs", "benefits", "esv_benefit", "env_cost")):
        return None

    def items(key, cls, enum_cls):
        out = []
        for k, item in enumerate(r.list_(d[key], f"ledger.{key}")):
            where = f"ledger.{key}[{k}]"
            if r.keys(item, where, ("category", "amount"), ("label",)):
                out.append(cls(r.enum(enum_cls, item["category"], where + ".category"),
                               r.num(item["amount"], where + ".amount"),
                               r.str_(item.get("label", ""), where + ".label")))
        return tuple(out)

    return CostLedger(items("costs", CostItem, CostCategory),
                      items("benefits", BenefitItem, BenefitCategory),
                      r.num(d["esv_benefit"], "ledger.esv_benefit"),
                      r.num(d["env_cost"], "ledger.env_cost"))


def _history(r, d):
    points = []
    for k, pair in enumerate(r.list_(d, "history")):
        if not isinstance(pair, list) or len(pair) != 2:
            r.errors.append(f"history[{k}]: expected [year, value]")
            continue
        points.append((r.int_(pair[0], f"history[{k}][0]"), r.num(pair[1], f"history[{k}][1]")))
    return TimeSeries(tuple(points))


def scenario_from_dict(doc) -> Scenario:
    """Build a scenario from a decoded document; raises SchemaError on mismatch."""
    r = _Reader()
    top = ("schema", "name", "year", "seed", "marine", "indicators", "urban", "ledger", "history")
    if not r.keys(doc, "scenario", top, ("metadata", "reference")):
        raise SchemaError(r.errors)
    if doc["schema"] != SCHEMA:
        raise SchemaError([f"unsupported schema {doc['schema']!r}, expected {SCHEMA!r}"])
    metadata = doc.get("metadata", {})
    if not isinstance(metadata, dict):
        r.errors.append("metadata: expected an object")
        metadata = {}
    reference = doc.get("reference", {})
    if isinstance(reference, dict):
        reference = {k: r.num(v, f"reference.{k}") for k, v in reference.items()}
    else:
        r.errors.append("reference: expected an object")
        reference = {}
    parts = dict(
        name=r.str_(doc["name"], "name"),
        year=r.int_(doc["year"], "year"),
        seed=r.int_(doc["seed"], "seed"),
        marine=_marine(r, doc["marine"]),
        indicators=_indicators(r, doc["indicators"]),
        urban=_urban(r, doc["urban"]),
        ledger=_ledger(r, doc["ledger"]),
        history=_history(r, doc["history"]),
    )
    if r.errors:
        raise SchemaError(r.errors)
    return Scenario(metadata=metadata, reference=reference, **parts)


def loads_scenario(text) -> Scenario:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioParseError(f"not valid JSON: {exc}") from exc
    return scenario_from_dict(doc)


def load_scenario(path) -> Scenario:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ScenarioParseError(f"cannot read {path}: {exc}") from exc
    return loads_scenario(text)


def scenario_to_dict(s: Scenario):
    m, ind, u, led = s.marine, s.indicators, s.urban, s.ledger
    urban = {"p_v": u.p_v, "p_0": u.p_0, "e_protect": u.e_protect, "area_s": u.area_s,
             "sigma": u.sigma, "rho": u.rho, "delta": u.delta, "p_s": u.p_s}
    if u.calibration is not None:
        urban["calibration"] = [list(k) for k in u.calibration]
    indicators = {"names": list(ind.panel.indicator_names),
                  "orientation": [o.value for o in ind.panel.orientation],
                  "matrix": [list(row) for row in ind.panel.matrix],
                  "relation": [list(row) for row in ind.relation],
                  "grade_scale": list(ind.grade_scale.grade_values)}
    if ind.weights is not None:
        indicators["weights"] = list(ind.weights)
    if ind.yearly:
        indicators["yearly"] = {str(y): [list(row) for row in mat]
                                for y, mat in ind.yearly.items()}
    doc = {
        "schema": SCHEMA,
        "name": s.name,
        "year": s.year,
        "seed": s.seed,
        "marine": {
            "cost_fix_co2": m.cost_fix_co2,
            "cost_release_o2": m.cost_release_o2,
            "pollutants": [{"capacity_x": p.capacity_x, "unit_cost_c": p.unit_cost_c}
                           for p in m.pollutants],
            "depth_h": m.depth_h,
            "mixing_volume_q": m.mixing_volume_q,
            "landscape_importance_u": [list(row) for row in m.landscape_importance_u],
            "landscape_use_i": list(m.landscape_use_i),
            "landscape_unit_value": m.landscape_unit_value,
            "fishery_revenue_r": m.fishery_revenue_r,
            "fishery_cost_c": m.fishery_cost_c,
            "fishery_area_s": m.fishery_area_s,
        },
        "indicators": indicators,
        "urban": urban,
        "ledger": {
            "costs": [{"category": c.category.value, "amount": c.amount, "label": c.label}
                      for c in led.costs],
            "benefits": [{"category": b.category.value, "amount": b.amount, "label": b.label}
                         for b in led.benefits],
            "esv_benefit": led.esv_benefit,
            "env_cost": led.env_cost,
        },
        "history": [[y, v] for y, v in s.history.points],
    }
    if s.metadata:
        doc["metadata"] = s.metadata
    if s.reference:
        doc["reference"] = s.reference
    return doc


def dumps_scenario(s: Scenario) -> str:
    return textio.dumps(scenario_to_dict(s))
