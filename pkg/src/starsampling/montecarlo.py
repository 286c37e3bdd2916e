"""Repeated sampler runs with confidence intervals and estimate comparisons.

Every trial draws from its own generator seeded by ``(master_seed, trial)``,
so per-trial costs do not depend on how trials are spread over threads.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from functools import lru_cache

import numpy as np

from . import estimators as est
from .er_model import ErParams, _er_csr
from .graph_core import Graph, TargetSet, extended_neighborhood
from .samplers import Variant, sample_costs

THREADS_ENV = "STARSAMPLING_THREADS"
Z95 = 1.96
_FIXED_STREAM = 2**63 - 1  # stream id for a graph or target shared by all trials


def default_workers() -> int:
    value = os.environ.get(THREADS_ENV)
    if value:
        return max(1, int(value))
    return 1


def trial_rng(master_seed: int, trial: int) -> np.random.Generator:
    return np.random.default_rng([master_seed, trial])


@dataclass(frozen=True)
class ExperimentSpec:
    source: ErParams | Graph
    variant: Variant
    n0_star: int
    trials: int
    master_seed: int = 0
    fresh_graph_per_trial: bool = True
    fresh_target_per_trial: bool = True
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "variant", Variant(self.variant))
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not 1 <= self.n0_star <= self.source.n:
            raise ValueError(f"target size {self.n0_star} not in [1, {self.source.n}]")

    @property
    def is_er(self) -> bool:
        return isinstance(self.source, ErParams)


@dataclass
class TrialSummary:
    variant: Variant
    trials: int
    master_seed: int
    mean_unit: float
    ci_unit: tuple[float, float]
    mean_linear: float
    ci_linear: tuple[float, float]
    estimate_unit: float | est.Bounds | None = None
    estimate_linear: float | est.Bounds | None = None
    label: str = ""
    unterminated: int = 0
    units: np.ndarray = field(default=None, repr=False)
    linears: np.ndarray = field(default=None, repr=False)

    @property
    def rel_err_unit(self) -> float | None:
        return relative_error(self.mean_unit, self.estimate_unit)

    @property
    def rel_err_linear(self) -> float | None:
        return relative_error(self.mean_linear, self.estimate_linear)

    def estimate_outside_ci(self, cost_model: str) -> bool | None:
        estimate, ci = self._pick(cost_model)
        if estimate is None:
            return None
        lo, hi = estimate_interval(estimate)
        return hi < ci[0] or lo > ci[1]

    def _pick(self, cost_model):
        if cost_model == "unit":
            return self.estimate_unit, self.ci_unit
        if cost_model == "linear":
            return self.estimate_linear, self.ci_linear
        raise ValueError(f"cost model must be 'unit' or 'linear', got {cost_model!r}")


def estimate_interval(estimate: float | est.Bounds) -> tuple[float, float]:
    if isinstance(estimate, est.Bounds):
        return estimate.lower, estimate.upper
    return float(estimate), float(estimate)


def relative_error(mean: float, estimate) -> float | None:
    """Absolute relative error in percent; only defined for point estimates."""
    if estimate is None or isinstance(estimate, est.Bounds):
        return None
    return 100.0 * abs(mean - estimate) / mean


def mean_ci(values: np.ndarray) -> tuple[float, tuple[float, float]]:
    """Mean and normal-approximation 95% interval (Bessel-corrected sd)."""
    values = np.asarray(values, dtype=float)
    mean = float(values.mean())
    if len(values) < 2:
        return mean, (mean, mean)
    half = Z95 * float(values.std(ddof=1)) / len(values) ** 0.5
    return mean, (mean - half, mean + half)


def _random_target(n: int, n0: int, rng: np.random.Generator) -> np.ndarray:
    mask = np.zeros(n, dtype=np.bool_)
    mask[rng.choice(n, n0, replace=False)] = True
    return mask


def _fixed_parts(spec: ExperimentSpec):
    rng = trial_rng(spec.master_seed, _FIXED_STREAM)
    if spec.is_er:
        indptr, indices = _er_csr(spec.source.n, float(spec.source.s), rng)
    else:
        indptr, indices = spec.source.indptr, spec.source.indices
    target = _random_target(spec.source.n, spec.n0_star, rng)
    return indptr, indices, target


def _run_trials(spec: ExperimentSpec, start: int, stop: int, fixed, units, linears, done,
                targets=None):
    n = spec.source.n
    shared_graph = not (spec.is_er and spec.fresh_graph_per_trial)
    for i in range(start, stop):
        rng = trial_rng(spec.master_seed, i)
        if shared_graph:
            indptr, indices = fixed[0], fixed[1]
        else:
            indptr, indices = _er_csr(n, float(spec.source.s), rng)
        target = _random_target(n, spec.n0_star, rng) if spec.fresh_target_per_trial else fixed[2]
        if targets is not None:
            targets[i] = np.flatnonzero(target)
        units[i], linears[i], done[i] = sample_costs(spec.variant, indptr, indices, target, rng)


def simulate(spec: ExperimentSpec, workers: int | None = None, keep_targets: bool = False):
    """Run all trials; returns ``(units, linears, terminated[, targets])`` indexed by trial."""
    workers = default_workers() if workers is None else max(1, workers)
    fixed = _fixed_parts(spec)
    units = np.empty(spec.trials, dtype=np.int64)
    linears = np.empty(spec.trials, dtype=np.int64)
    done = np.empty(spec.trials, dtype=np.bool_)
    targets = np.empty((spec.trials, spec.n0_star), dtype=np.int64) if keep_targets else None
    bounds = np.linspace(0, spec.trials, min(workers, spec.trials) + 1).astype(int)
    if workers == 1:
        _run_trials(spec, 0, spec.trials, fixed, units, linears, done, targets)
    else:
        with ThreadPoolExecutor(workers) as pool:
            jobs = [pool.submit(_run_trials, spec, a, b, fixed, units, linears, done, targets)
                    for a, b in zip(bounds[:-1], bounds[1:])]
            for job in jobs:
                job.result()
    if keep_targets:
        return units, linears, done, targets
    return units, linears, done


def er_estimates(variant: Variant, inp: est.EstimatorInput):
    """``(unit, linear)`` ER estimates for one variant; bounds for SSR, SSC unit."""
    variant = Variant(variant)
    if variant is Variant.SSR:
        return est.ssr_unit_bounds_er(inp), est.ssr_linear_er(inp)
    if variant is Variant.SSC:
        return est.ssc_unit_bounds_er(inp), est.ssc_linear_er_expected(inp)
    if inp.s <= 0.0 or inp.s >= 1.0:
        # no edges, or every star covers the graph: SSS behaves exactly like SSC
        return est.ssc_unit_bounds_er(inp), est.ssc_linear_er_expected(inp)
    return est.sss_schedule(inp).c_u_approx, est.sss_linear_er(inp)


class _GraphEstimator:
    """Per-target estimates on a fixed graph, cached by target.

    Unit: SSR and SSC use the exact arbitrary-graph formulas with the measured
    extended-target order, SSS uses the ER approximation with the graph's
    ``(n, n0*, s)`` conditioned on that order. Linear: SSR is exact, SSC and
    SSS use the ER approximations conditioned on the measured order.
    """

    def __init__(self, graph: Graph, n0_star: int):
        self.graph = graph
        self.n0_star = n0_star
        self.s = graph.density
        self._cache = lru_cache(maxsize=None)(self._by_order)

    def _by_order(self, variant, n_e):
        n, s = self.graph.n, self.s
        inp = est.EstimatorInput(n, self.n0_star, s)
        if variant is Variant.SSC:
            return est.ssc_unit_exact(n, n_e), est.ssc_linear_er(n, n_e, s)
        if 0.0 < s < 1.0:
            return est.sss_schedule(inp, n_e).c_u_approx, est.sss_linear_er(inp, n_e)
        return est.ssc_unit_exact(n, n_e), est.ssc_linear_er(n, n_e, s)

    def __call__(self, variant: Variant, target: np.ndarray) -> tuple[float, float]:
        ext = extended_neighborhood(self.graph, TargetSet.of(target.tolist()))
        if variant is Variant.SSR:
            return est.ssr_unit_exact(self.graph.n, ext.n_e_star), est.ssr_linear_exact(ext, self.graph.n)
        return self._cache(variant, ext.n_e_star)


def run_experiment(spec: ExperimentSpec, workers: int | None = None) -> TrialSummary:
    """Simulate ``spec`` and attach the matching analytic estimates.

    ER sources get the ER formulas. Loaded graphs get per-target estimates
    averaged over the targets actually drawn.
    """
    units, linears, done, targets = simulate(spec, workers, keep_targets=True)
    mean_u, ci_u = mean_ci(units)
    mean_l, ci_l = mean_ci(linears)
    if spec.is_er:
        inp = est.EstimatorInput(spec.source.n, spec.n0_star, spec.source.s)
        e_unit, e_lin = er_estimates(spec.variant, inp)
    else:
        estimator = _GraphEstimator(spec.source, spec.n0_star)
        per_target = {}
        pairs = []
        for row in targets:
            key = tuple(sorted(row.tolist()))
            if key not in per_target:
                per_target[key] = estimator(spec.variant, np.array(key))
            pairs.append(per_target[key])
        pairs = np.array(pairs)
        e_unit, e_lin = float(pairs[:, 0].mean()), float(pairs[:, 1].mean())
    return TrialSummary(
        variant=spec.variant, trials=spec.trials, master_seed=spec.master_seed,
        mean_unit=mean_u, ci_unit=ci_u, mean_linear=mean_l, ci_linear=ci_l,
        estimate_unit=e_unit, estimate_linear=e_lin, label=spec.label,
        unterminated=int((~done).sum()), units=units, linears=linears,
    )


def sweep(template: ExperimentSpec, s_values, workers: int | None = None) -> list[TrialSummary]:
    """One :func:`run_experiment` per edge probability; the template's source must be ER."""
    if not template.is_er:
        raise ValueError("sweep needs an ER source")
    out = []
    for s in s_values:
        spec = replace(template, source=ErParams(template.source.n, float(s)),
                       label=template.label or f"er(n={template.source.n},s={float(s):.6g})")
        out.append(run_experiment(spec, workers))
    return out


def table_experiment(graph: Graph, n0_star: int, trials: int, seed: int, label: str = "",
                     variants=tuple(Variant), fresh_target_per_trial: bool = True,
                     workers: int | None = None) -> dict[Variant, TrialSummary]:
    """Per-variant simulation and estimates on a fixed graph with uniformly drawn targets."""
    out = {}
    for v in variants:
        spec = ExperimentSpec(graph, Variant(v), n0_star, trials, seed,
                              fresh_graph_per_trial=False,
                              fresh_target_per_trial=fresh_target_per_trial, label=label)
        out[Variant(v)] = run_experiment(spec, workers)
    return out
