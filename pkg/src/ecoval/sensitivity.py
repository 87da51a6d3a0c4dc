"""Perturbation sweeps and variance-based (Sobol) sensitivity indices.

The first-order and total indices come from the functional ANOVA split
``g = g0 + sum g_i + sum g_ij + ...``: ``S_i = Var(g_i) / Var(g)`` and
``ST_i`` adds every interaction term involving input ``i``. They are
estimated with pick-freeze sample matrices ``A``, ``B`` and ``A_B^(i)``
(``A`` with column ``i`` taken from ``B``)::

    S_i  = mean(f(B) * (f(A_B^i) - f(A))) / V
    ST_i = mean((f(A) - f(A_B^i))**2) / (2 V)

Outputs are centered on the pooled mean of ``f(A)`` and ``f(B)`` first.
That leaves both estimators unbiased but removes the noise the first-order
product picks up from a large output mean.

Random numbers come from Philox streams keyed by ``(seed, stream)``, so
each matrix is reproducible on its own and the result does not depend on
how model evaluations are chunked.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, ProbeError

SAMPLE_FLOOR = 2 ** 8
N_BOOTSTRAP = 200
ZERO_EPSILON = 1e-6

_STREAM_A, _STREAM_B, _STREAM_BOOT = 0, 1, 2


@dataclass(frozen=True)
class HypercubeDomain:
    """Axis-aligned box mapped affinely onto the unit cube."""

    bounds: tuple[tuple[float, float], ...]
    names: tuple[str, ...] | None = None

    def __post_init__(self):
        if not self.bounds:
            raise DomainError("domain needs at least one dimension")
        for k, (lo, hi) in enumerate(self.bounds):
            if not lo < hi:
                raise DomainError(f"dimension {k}: lower bound {lo!r} is not below {hi!r}")
        if self.names is not None and len(self.names) != len(self.bounds):
            raise DomainError("names do not match the number of dimensions")

    @classmethod
    def unit(cls, dim):
        return cls(((0.0, 1.0),) * dim)

    @property
    def dim(self):
        return len(self.bounds)

    def input_names(self):
        return self.names or tuple(f"p{k + 1}" for k in range(self.dim))

    def from_unit(self, u):
        lo = np.array([b[0] for b in self.bounds])
        hi = np.array([b[1] for b in self.bounds])
        return lo + np.asarray(u) * (hi - lo)


def _generator(seed, stream):
    return np.random.Generator(np.random.Philox(key=[seed, stream]))


@dataclass(frozen=True)
class PerturbationResult:
    name: str
    baseline: float
    value_plus: float
    value_minus: float
    delta_plus: float
    delta_minus: float
    rel_plus: float | None
    rel_minus: float | None
    additive: bool = False


def _probe(model, point, probe):
    try:
        y = float(model(point))
    except Exception as exc:
        raise ProbeError(probe, point, exc) from exc
    if not math.isfinite(y):
        raise ProbeError(probe, point, f"non-finite output {y!r}")
    return y


def perturbation_sweep(model, baseline, fraction=0.10, names=None):
    """One-at-a-time ``±fraction`` scaling of each input.

    ``model`` maps a list of floats to a float. A zero baseline cannot be
    scaled, so it is shifted by ``±1e-6`` instead and flagged ``additive``.
    """
    if not 0.0 < fraction < 1.0:
        raise DomainError(f"fraction must lie in (0, 1), got {fraction!r}")
    base = [float(v) for v in baseline]
    names = list(names) if names is not None else [f"p{k + 1}" for k in range(len(base))]
    y0 = _probe(model, list(base), "baseline")
    out = []
    for k, (name, x) in enumerate(zip(names, base)):
        additive = x == 0.0
        values = []
        for sign, label in ((1.0, "+"), (-1.0, "-")):
            point = list(base)
            point[k] = x + sign * ZERO_EPSILON if additive else x * (1.0 + sign * fraction)
            values.append(_probe(model, point, f"{name}{label}"))
        dp, dm = values[0] - y0, values[1] - y0
        rel = (None, None) if y0 == 0.0 else (dp / y0, dm / y0)
        out.append(PerturbationResult(name, x, values[0], values[1], dp, dm, *rel, additive))
    return out


def _evaluate(model, points, vectorized, label):
    if vectorized:
        y = np.asarray(model(points), dtype=float).reshape(-1)
    else:
        y = np.array([float(model(list(row))) for row in points])
    if y.shape[0] != points.shape[0]:
        raise DomainError(f"model returned {y.shape[0]} values for {points.shape[0]} points")
    bad = ~np.isfinite(y)
    if bad.any():
        row = int(np.argmax(bad))
        raise DomainError(f"non-finite model output in {label} at {points[row].tolist()}")
    return y


def _indices(fa, fb, fab):
    """First-order and total indices for one input; zero when variance vanishes."""
    pooled = np.concatenate([fa, fb])
    var = np.var(pooled)
    if var == 0.0:
        return 0.0, 0.0
    mu = pooled.mean()
    fa, fb, fab = fa - mu, fb - mu, fab - mu
    s1 = np.mean(fb * (fab - fa)) / var
    st = 0.5 * np.mean((fa - fab) ** 2) / var
    return float(s1), float(st)


@dataclass(frozen=True)
class InputSensitivity:
    name: str
    first_order: float | None = None
    first_order_se: float | None = None
    total: float | None = None
    total_se: float | None = None
    perturbation: PerturbationResult | None = None


@dataclass(frozen=True)
class SensitivityReport:
    inputs: tuple[InputSensitivity, ...]
    n_samples: int | None
    seed: int | None
    verdict: dict = field(default_factory=dict)

    def __getitem__(self, name):
        for item in self.inputs:
            if item.name == name:
                return item
        raise KeyError(name)

    @property
    def first_order(self):
        return np.array([i.first_order for i in self.inputs])

    @property
    def total(self):
        return np.array([i.total for i in self.inputs])

    def table(self):
        """Flat rows of (input, delta+, delta-, S_i, ST_i, S_i stderr, ST_i stderr)."""
        rows = []
        for i in self.inputs:
            p = i.perturbation
            rows.append((i.name,
                         None if p is None else p.delta_plus,
                         None if p is None else p.delta_minus,
                         i.first_order, i.total, i.first_order_se, i.total_se))
        return rows


def check_sample_count(n_samples):
    if n_samples < SAMPLE_FLOOR:
        raise DomainError(f"{n_samples} samples is below sample floor {SAMPLE_FLOOR}")
    if n_samples & (n_samples - 1):
        raise DomainError(f"n_samples must be a power of two, got {n_samples}")


def sobol_indices(model, domain: HypercubeDomain, n_samples, seed=0,
                  vectorized=True, n_bootstrap=N_BOOTSTRAP):
    """First-order and total Sobol indices with bootstrap standard errors.

    ``model`` receives an ``(n, dim)`` array of points in the domain's own
    coordinates and returns ``n`` outputs; pass ``vectorized=False`` for a
    model that takes one point at a time. Costs ``(dim + 2) * n_samples``
    evaluations.
    """
    check_sample_count(n_samples)
    m = domain.dim
    a = _generator(seed, _STREAM_A).random((n_samples, m))
    b = _generator(seed, _STREAM_B).random((n_samples, m))
    fa = _evaluate(model, domain.from_unit(a), vectorized, "A")
    fb = _evaluate(model, domain.from_unit(b), vectorized, "B")
    fab = []
    for i in range(m):
        ab = a.copy()
        ab[:, i] = b[:, i]
        fab.append(_evaluate(model, domain.from_unit(ab), vectorized, f"A_B[{i}]"))

    boot = _generator(seed, _STREAM_BOOT).integers(0, n_samples, size=(n_bootstrap, n_samples))
    items = []
    for i, name in enumerate(domain.input_names()):
        s1, st = _indices(fa, fb, fab[i])
        draws = np.array([_indices(fa[r], fb[r], fab[i][r]) for r in boot])
        se = draws.std(axis=0, ddof=1)
        items.append(InputSensitivity(name, s1, float(se[0]), st, float(se[1])))
    return SensitivityReport(tuple(items), n_samples, seed)


def ranking_verdict(baseline, probes):
    """Compare the service ranking at baseline with the ranking at each probe.

    ``baseline`` and each probe value are mappings of service name to value.
    Equal baseline values are reported as a tie rather than as stable.
    """
    def order(values):
        return sorted(values, key=lambda k: (-values[k], k))

    ranking = order(baseline)
    ties = [[x, y] for x, y in zip(ranking, ranking[1:]) if baseline[x] == baseline[y]]
    flips = [probe for probe, values in probes.items() if order(values) != ranking]
    if ties:
        verdict = "tie"
    elif flips:
        verdict = "unstable"
    else:
        verdict = "stable"
    return {"verdict": verdict, "ranking": ranking, "ties": ties, "flips": flips}


def stability_report(pipeline, scenario, inputs, fraction=0.10, n_samples=None, seed=0):
    """Perturbation sweep of a scenario's numeric inputs, plus optional Sobol indices.

    ``pipeline(scenario)`` returns a mapping of service name to value (or a
    plain float); the composite value is their sum. ``inputs`` maps each
    input name to a pair ``(get(scenario), set(scenario, value))``. When
    ``n_samples`` is given, Sobol indices of the composite are estimated on
    the box ``baseline * (1 ± fraction)``.
    """
    def services(s):
        out = pipeline(s)
        return out if isinstance(out, dict) else {"composite": float(out)}

    def composite(s):
        return math.fsum(services(s).values())

    names = list(inputs)
    baseline = [float(inputs[n][0](scenario)) for n in names]

    def with_values(point):
        s = scenario
        for name, v in zip(names, point):
            s = inputs[name][1](s, v)
        return s

    try:
        base_services = services(scenario)
    except Exception as exc:
        raise ProbeError("baseline", baseline, exc) from exc

    probe_services = {}

    def model(point):
        s = services(with_values(point))
        changed = [n for n, v, b in zip(names, point, baseline) if v != b]
        if changed:
            sign = "+" if point[names.index(changed[0])] > baseline[names.index(changed[0])] else "-"
            probe_services[changed[0] + sign] = s
        return math.fsum(s.values())

    sweep = perturbation_sweep(model, baseline, fraction, names)
    verdict = ranking_verdict(base_services, probe_services)

    sobol = None
    if n_samples is not None:
        bounds = tuple((x - ZERO_EPSILON, x + ZERO_EPSILON) if x == 0.0 else
                       tuple(sorted((x * (1 - fraction), x * (1 + fraction)))) for x in baseline)
        domain = HypercubeDomain(bounds, tuple(names))
        sobol = sobol_indices(lambda p: composite(with_values(p)), domain, n_samples, seed,
                              vectorized=False)

    items = []
    for k, p in enumerate(sweep):
        if sobol is None:
            items.append(InputSensitivity(p.name, perturbation=p))
        else:
            s = sobol.inputs[k]
            items.append(InputSensitivity(p.name, s.first_order, s.first_order_se,
                                          s.total, s.total_se, p))
    return SensitivityReport(tuple(items), n_samples, seed if sobol is not None else None,
                             verdict)
