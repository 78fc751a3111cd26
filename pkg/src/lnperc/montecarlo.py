"""Ensembles of simulated networks and their comparison with theory.

Instance ``i`` of an ensemble with master seed ``s`` uses seed
``split(s, i)``; its population and graph draw from ``split(seed_i, 0)``
and ``split(seed_i, 1)``.  Every sweep row reuses the same master seed, so
rows differ only through the parameters (common random numbers).
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import analytics
from .analytics import AnalyticReport
from .components import largest_component
from .distributions import sample_population
from .netgen import KernelSpec, generate_graph, generate_graph_deposition
from .params import ModelParams
from .rng import RNG_ALGORITHM, generator, split

GENERATORS = ("independent", "deposition")


@dataclass(frozen=True)
class InstanceResult:
    seed: int
    giant_fraction: float
    high_fraction: float
    n_edges: int
    mean_component_size: float

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "giant_fraction": self.giant_fraction,
            "high_fraction": self.high_fraction,
            "n_edges": self.n_edges,
            "mean_component_size": self.mean_component_size,
        }

    @classmethod
    def from_dict(cls, d: dict) -> InstanceResult:
        return cls(int(d["seed"]), float(d["giant_fraction"]), float(d["high_fraction"]),
                   int(d["n_edges"]), float(d["mean_component_size"]))


@dataclass(frozen=True)
class EnsembleResult:
    params: ModelParams
    n_instances: int
    seeds: tuple
    mean_S: float
    stderr_S: float | None
    mean_n_high_fraction: float
    per_instance: tuple
    analytic: AnalyticReport
    generator: str = "independent"

    @property
    def mean_component_size(self) -> float:
        return math.fsum(r.mean_component_size for r in self.per_instance) / self.n_instances

    def to_dict(self) -> dict:
        return {
            "params": self.params.to_dict(),
            "generator": self.generator,
            "n_instances": self.n_instances,
            "seeds": list(self.seeds),
            "mean_S": self.mean_S,
            "stderr_S": self.stderr_S,
            "mean_n_high_fraction": self.mean_n_high_fraction,
            "per_instance": [r.to_dict() for r in self.per_instance],
            "analytic": self.analytic.to_dict(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> EnsembleResult:
        return cls(
            params=ModelParams.from_dict(d["params"]),
            n_instances=int(d["n_instances"]),
            seeds=tuple(int(s) for s in d["seeds"]),
            mean_S=float(d["mean_S"]),
            stderr_S=None if d["stderr_S"] is None else float(d["stderr_S"]),
            mean_n_high_fraction=float(d["mean_n_high_fraction"]),
            per_instance=tuple(InstanceResult.from_dict(r) for r in d["per_instance"]),
            analytic=AnalyticReport.from_dict(d["analytic"]),
            generator=d.get("generator", "independent"),
        )

    def table_row(self) -> dict:
        return {
            "nbar": self.params.nbar,
            "mean_S": self.mean_S,
            "stderr_S": self.stderr_S,
            "analytic_S": self.analytic.giant_fraction,
            "f_plus": self.analytic.f_plus,
            "mean_degree": self.analytic.mean_degree,
        }


def instance_seeds(master_seed: int, n_instances: int) -> list[int]:
    return [split(master_seed, i) for i in range(n_instances)]


def deposition_edge_count(n_high: int, n_nodes: int, mu: float, seed: int) -> int:
    """Edge count matching the independent generator in distribution:
    ``Binomial(n_high (n_high - 1) / 2, mu / N)``."""
    pairs = n_high * (n_high - 1) // 2
    return int(generator(seed).binomial(pairs, min(1.0, mu / n_nodes))) if pairs else 0


def build_instance(params: ModelParams, seed: int, generator_kind: str = "independent"):
    """Population and graph for one ensemble member."""
    pop = sample_population(params, split(seed, 0))
    kernel = KernelSpec.from_params(params)
    if generator_kind == "independent":
        graph = generate_graph(pop, kernel, split(seed, 1))
    elif generator_kind == "deposition":
        m = deposition_edge_count(pop.n_high, pop.n_nodes, params.mu, split(seed, 2))
        graph = generate_graph_deposition(pop, kernel, m, split(seed, 1))
    else:
        raise ValueError(f"unknown generator {generator_kind!r}; expected one of {GENERATORS}")
    return pop, graph


def run_instance(params: ModelParams, seed: int, generator_kind: str = "independent") -> InstanceResult:
    pop, graph = build_instance(params, seed, generator_kind)
    rep = largest_component(graph)
    n = params.n_nodes
    return InstanceResult(seed, rep.largest_size / n, pop.n_high / n, graph.n_edges, rep.mean_component_size)


def _run_instance_args(args):
    return run_instance(*args)


def _map(func, items, workers: int):
    if workers <= 1 or len(items) <= 1:
        return [func(it) for it in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items))


def default_workers() -> int:
    return os.cpu_count() or 1


def aggregate(params: ModelParams, results, generator_kind: str = "independent") -> EnsembleResult:
    """Combine instances in index order; results do not depend on how they
    were executed."""
    results = tuple(results)
    n = len(results)
    s = np.array([r.giant_fraction for r in results])
    mean_S = math.fsum(s) / n
    stderr = float(np.std(s, ddof=1) / math.sqrt(n)) if n > 1 else None
    mean_high = math.fsum(r.high_fraction for r in results) / n
    return EnsembleResult(
        params=params,
        n_instances=n,
        seeds=tuple(r.seed for r in results),
        mean_S=mean_S,
        stderr_S=stderr,
        mean_n_high_fraction=mean_high,
        per_instance=results,
        analytic=analytics.analytic_report(params),
        generator=generator_kind,
    )


def run_ensemble(
    params: ModelParams,
    n_instances: int,
    master_seed: int,
    *,
    generator_kind: str = "independent",
    workers: int = 1,
) -> EnsembleResult:
    """Sample, generate and measure ``n_instances`` independent networks."""
    if n_instances < 1:
        raise ValueError("n_instances must be >= 1")
    if generator_kind not in GENERATORS:
        raise ValueError(f"unknown generator {generator_kind!r}; expected one of {GENERATORS}")
    seeds = instance_seeds(master_seed, n_instances)
    results = _map(_run_instance_args, [(params, s, generator_kind) for s in seeds], workers)
    return aggregate(params, results, generator_kind)


@dataclass(frozen=True)
class SweepTable:
    rows: tuple  # EnsembleResult per nbar

    COLUMNS = ("nbar", "mean_S", "stderr_S", "analytic_S", "f_plus", "mean_degree")

    def table(self) -> list[dict]:
        return [r.table_row() for r in self.rows]

    def to_dict(self) -> dict:
        return {"rows": [r.to_dict() for r in self.rows]}

    @classmethod
    def from_dict(cls, d: dict) -> SweepTable:
        return cls(tuple(EnsembleResult.from_dict(r) for r in d["rows"]))

    def onset(self, eps: float = 0.01):
        """First row whose ``mean_S`` exceeds ``eps``, or ``None``."""
        for r in self.rows:
            if r.mean_S > eps:
                return r
        return None


def sweep_nbar(
    params: ModelParams,
    nbar_values,
    n_instances: int,
    master_seed: int,
    *,
    generator_kind: str = "independent",
    workers: int = 1,
) -> SweepTable:
    values = [float(v) for v in nbar_values]
    if any(b < a for a, b in zip(values, values[1:])):
        raise ValueError("nbar_values must be sorted ascending")
    if n_instances < 1:
        raise ValueError("n_instances must be >= 1")
    seeds = instance_seeds(master_seed, n_instances)
    cells = [(params.replace(nbar=nb), s, generator_kind) for nb in values for s in seeds]
    results = _map(_run_instance_args, cells, workers)
    rows = tuple(
        aggregate(params.replace(nbar=nb), results[i * n_instances : (i + 1) * n_instances], generator_kind)
        for i, nb in enumerate(values)
    )
    return SweepTable(rows)


# -- degree distribution -----------------------------------------------------


@dataclass(frozen=True)
class DegreeFit:
    generator: str
    histogram: dict[int, int]
    n_samples: int
    tv_distance: float
    mean_degree: float
    stderr_mean_degree: float | None

    def to_dict(self) -> dict:
        return {
            "generator": self.generator,
            "histogram": {str(k): v for k, v in sorted(self.histogram.items())},
            "n_samples": self.n_samples,
            "tv_distance": self.tv_distance,
            "mean_degree": self.mean_degree,
            "stderr_mean_degree": self.stderr_mean_degree,
        }


@dataclass(frozen=True)
class DegreeComparison:
    params: ModelParams
    n_instances: int
    seeds: tuple
    f_plus: float
    expected_mean_degree: float
    fits: tuple

    def fit(self, generator_kind: str) -> DegreeFit:
        return next(f for f in self.fits if f.generator == generator_kind)

    def to_dict(self) -> dict:
        return {
            "params": self.params.to_dict(),
            "n_instances": self.n_instances,
            "seeds": list(self.seeds),
            "f_plus": self.f_plus,
            "expected_mean_degree": self.expected_mean_degree,
            "fits": [f.to_dict() for f in self.fits],
        }


def tv_distance(histogram: dict[int, int], f_plus: float, mu: float) -> float:
    """Total-variation distance between an empirical degree histogram and
    the mixture pmf, including pmf mass beyond the observed support."""
    total = sum(histogram.values())
    kmax = max(max(histogram, default=0), analytics.degree_support(f_plus, mu))
    k = np.arange(kmax + 1)
    emp = np.zeros(kmax + 1)
    for deg, cnt in histogram.items():
        emp[deg] = cnt / total
    pmf = analytics.degree_pmf(k, f_plus, mu)
    tail = max(0.0, 1.0 - math.fsum(pmf))
    return 0.5 * (math.fsum(np.abs(emp - pmf)) + tail)


def _instance_degrees(args):
    params, seed, generator_kind = args
    _, graph = build_instance(params, seed, generator_kind)
    return np.bincount(graph.degrees())


def degree_comparison(
    params: ModelParams,
    n_instances: int,
    master_seed: int,
    *,
    generators=GENERATORS,
    workers: int = 1,
) -> DegreeComparison:
    """Pool degree histograms over an ensemble for each generator and
    measure their distance to the mixture pmf."""
    if n_instances < 1:
        raise ValueError("n_instances must be >= 1")
    f = analytics.f_plus(params)
    seeds = instance_seeds(master_seed, n_instances)
    fits = []
    for kind in generators:
        counts = _map(_instance_degrees, [(params, s, kind) for s in seeds], workers)
        width = max(len(c) for c in counts)
        pooled = np.zeros(width, dtype=np.int64)
        means = []
        for c in counts:
            pooled[: len(c)] += c
            means.append(float(np.dot(np.arange(len(c)), c)) / params.n_nodes)
        hist = {k: int(v) for k, v in enumerate(pooled.tolist()) if v}
        stderr = float(np.std(means, ddof=1) / math.sqrt(n_instances)) if n_instances > 1 else None
        fits.append(DegreeFit(kind, hist, int(pooled.sum()), tv_distance(hist, f, params.mu),
                              math.fsum(means) / n_instances, stderr))
    return DegreeComparison(params, n_instances, tuple(seeds), f, params.mu * f * f, tuple(fits))


RNG_INFO = {"algorithm": RNG_ALGORITHM, "instance_seed": "split(master_seed, i)"}
