"""Pipeline stages and the results document.

Every stage is a pure function of the scenario (plus explicit options) that
returns a plain dict section. :func:`merge_section` places sections in a
fixed order, so the document bytes depend only on what was computed.
"""

from __future__ import annotations

import dataclasses
import json
import math
import os

from . import __version__, lstm, mcda, textio
from .cost_benefit import compare_with_without_env
from .errors import DomainError, StageError
from .marine import landscape_value, marine_values
from .scenario import Scenario, numeric_inputs
from .sensitivity import check_sample_count, stability_report
from .urban import rho_from_theta, urban_service_value

RESULTS_SCHEMA = "ecoval/1"
SECTION_ORDER = ("value", "cba", "forecast", "sensitivity")


def resolve_urban(s: Scenario, evaluation=None):
    """Urban parameters with ``rho`` wired from the fuzzy evaluation if requested."""
    if not isinstance(s.urban.rho, str):
        return s.urban
    evaluation = evaluation or mcda.evaluate(s.indicators)
    rho = rho_from_theta(evaluation.theta, s.urban.calibration)
    return dataclasses.replace(s.urban, rho=rho)


def service_values(s: Scenario, evaluation=None):
    """Every service density by kind name, marine services first."""
    out = {v.kind.value: v.value for v in marine_values(s.marine)}
    urban = urban_service_value(resolve_urban(s, evaluation))
    out[urban.kind.value] = urban.value
    return out


def composite_value(s: Scenario):
    """Sum of all service densities, $/m²·a."""
    return math.fsum(service_values(s).values())


def _stage(name):
    def wrap(fn):
        def run(*args, **kwargs):
            try:
                return fn(*args, **kwargs)
            except StageError:
                raise
            except (DomainError, ArithmeticError) as exc:
                raise StageError(name, str(exc)) from exc
        run.__name__ = fn.__name__
        run.__doc__ = fn.__doc__
        return run
    return wrap


@_stage("value")
def value_section(s: Scenario):
    evaluation = mcda.evaluate(s.indicators)
    urban = resolve_urban(s, evaluation)
    services = service_values(s, evaluation)
    scores, _ = landscape_value(s.marine.landscape_importance_u, s.marine.landscape_use_i,
                                s.marine.landscape_unit_value)
    try:
        entropy = list(mcda.entropy_weights(s.indicators.panel).weights)
    except DomainError:
        if evaluation.weight_source == "entropy":
            raise
        entropy = None
    yearly = {str(y): list(w.weights)
              for y, w in mcda.reweight_yearly(s.indicators.yearly_panels()).items()}
    section = {
        "services": services,
        "landscape_scores": [float(v) for v in scores],
        "weights": list(evaluation.weights.weights),
        "weight_source": evaluation.weight_source,
        "entropy_weights": entropy,
        "yearly_weights": yearly,
        "membership": list(evaluation.membership),
        "theta": evaluation.theta,
        "rho": urban.rho,
        "p_urban": services["UrbanComposite"],
        "composite": math.fsum(services.values()),
    }
    if s.reference:
        section["reference"] = dict(s.reference)
    return section


@_stage("cba")
def cba_section(s: Scenario):
    report = compare_with_without_env(s.ledger)
    return {
        "ratio_base": report.ratio_base,
        "ratio_env": report.ratio_env,
        "delta": report.delta,
        "table": [{"case": case, "benefit": b, "cost": c, "ratio": r}
                  for case, b, c, r in report.rows()],
    }


@_stage("forecast")
def forecast_section(s: Scenario, horizon=5, seed=None, cfg=None):
    """Train on the scenario history and roll ``horizon`` years forward.

    Returns ``(section, model_document)``.
    """
    cfg = cfg or lstm.TrainConfig(seed=s.seed if seed is None else seed)
    result = lstm.train(s.history, cfg)
    predicted = lstm.forecast(result.params, result.readout, s.history, horizon)
    values = predicted.values
    slope = (values[-1] - s.history.values[-1]) / horizon
    section = {
        "seed": cfg.seed,
        "window": cfg.window,
        "epochs": cfg.epochs,
        "hidden_size": cfg.hidden_size,
        "initial_loss": result.loss_history[0],
        "final_loss": result.loss_history[-1],
        "series": [[y, v] for y, v in predicted.points],
        "mean_slope": slope,
        "trend": "decreasing" if slope < 0 else "non-decreasing",
    }
    return section, lstm.model_document(result.params, result.readout)


@_stage("sensitivity")
def sensitivity_section(s: Scenario, n_samples=1024, fraction=0.10, seed=None):
    check_sample_count(n_samples)
    seed = s.seed if seed is None else seed
    report = stability_report(service_values, s, numeric_inputs(s), fraction, n_samples, seed)
    inputs = []
    for item in report.inputs:
        p = item.perturbation
        inputs.append({
            "input": item.name,
            "baseline": p.baseline,
            "delta_plus": p.delta_plus,
            "delta_minus": p.delta_minus,
            "rel_plus": p.rel_plus,
            "rel_minus": p.rel_minus,
            "additive": p.additive,
            "first_order": item.first_order,
            "first_order_se": item.first_order_se,
            "total": item.total,
            "total_se": item.total_se,
        })
    return {"fraction": fraction, "n_samples": n_samples, "seed": seed,
            "verdict": report.verdict, "inputs": inputs}


def new_document(s: Scenario, seed=None):
    return {
        "schema_version": RESULTS_SCHEMA,
        "tool_version": __version__,
        "scenario_name": s.name,
        "seed": s.seed if seed is None else seed,
    }


def merge_section(doc, name, section):
    """Return ``doc`` with ``section`` stored under ``name``, in canonical order."""
    header = {k: v for k, v in doc.items() if k not in SECTION_ORDER}
    sections = {k: doc[k] for k in SECTION_ORDER if k in doc}
    sections[name] = section
    header.update((k, sections[k]) for k in SECTION_ORDER if k in sections)
    return header


def load_document(path, s: Scenario, seed=None):
    """Existing results for the same scenario, or a fresh document."""
    fresh = new_document(s, seed)
    if not os.path.exists(path):
        return fresh
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError):
        return fresh
    if not isinstance(doc, dict) or any(doc.get(k) != v for k, v in fresh.items()):
        return fresh
    return doc


def write_document(path, doc):
    textio.atomic_write(path, textio.dumps(doc))


def run_all(s: Scenario, horizon=5, n_samples=1024, fraction=0.10, seed=None):
    """Every stage in pipeline order; returns ``(document, model_document)``."""
    doc = new_document(s, seed)
    doc = merge_section(doc, "value", value_section(s))
    doc = merge_section(doc, "cba", cba_section(s))
    forecast, model = forecast_section(s, horizon, seed)
    doc = merge_section(doc, "forecast", forecast)
    doc = merge_section(doc, "sensitivity", sensitivity_section(s, n_samples, fraction, seed))
    return doc, model
