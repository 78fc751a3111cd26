"""Wealth, activity and fitness distributions.

Fitness is ``x = w * (l + 1)`` with wealth ``w`` drawn from a uniform law
on ``[0, w0]`` or an exponential law of mean ``w0`` and activity ``l``
Poisson with mean ``nbar``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.special import gammaln

from .params import ModelParams, ParameterError, WealthKind
from .rng import generator

POISSON_MASS_TOL = 1e-12


def poisson_cap(mean: float) -> int:
    """Hard upper index for truncated Poisson series."""
    return int(math.floor(mean + 12.0 * math.sqrt(mean + 1.0) + 50.0))


def poisson_weights(mean: float) -> np.ndarray:
    """Poisson pmf ``p[0..L]`` truncated once the cumulative mass exceeds
    ``1 - 1e-12`` (or at :func:`poisson_cap`)."""
    if mean < 0 or not math.isfinite(mean):
        raise ParameterError("nbar", "must be finite and >= 0")
    if mean == 0:
        return np.ones(1)
    cap = poisson_cap(mean)
    ell = np.arange(cap + 1, dtype=float)
    p = np.exp(-mean + ell * math.log(mean) - gammaln(ell + 1.0))
    cum = np.cumsum(p)
    stop = int(np.searchsorted(cum, 1.0 - POISSON_MASS_TOL, side="right"))
    return p[: min(stop, cap) + 1]


@dataclass(frozen=True)
class NodePopulation:
    wealth: np.ndarray
    activity: np.ndarray
    fitness: np.ndarray
    c: float
    phi: float
    n_high: int

    def __post_init__(self):
        for arr in (self.wealth, self.activity, self.fitness):
            arr.flags.writeable = False

    @property
    def n_nodes(self) -> int:
        return len(self.fitness)

    @property
    def high_mask(self) -> np.ndarray:
        return self.fitness * self.phi > self.c

    @classmethod
    def from_arrays(cls, wealth, activity, c: float = 0.0, phi: float = 1.0) -> NodePopulation:
        wealth = np.array(wealth, dtype=float)
        activity = np.array(activity, dtype=np.int64)
        if wealth.shape != activity.shape or wealth.ndim != 1:
            raise ValueError("wealth and activity must be 1-d arrays of equal length")
        if np.any(wealth < 0) or np.any(activity < 0):
            raise ValueError("wealth and activity must be non-negative")
        fitness = wealth * (activity + 1)
        n_high = int(np.count_nonzero(fitness * phi > c))
        return cls(wealth, activity, fitness, float(c), float(phi), n_high)


def sample_population(params: ModelParams, seed: int) -> NodePopulation:
    """Draw i.i.d. wealth and activity for ``params.n_nodes`` nodes."""
    rng = generator(seed)
    n = params.n_nodes
    if params.wealth_kind is WealthKind.UNIFORM:
        wealth = rng.uniform(0.0, params.w0, size=n)
    else:
        wealth = rng.exponential(params.w0, size=n)
    activity = rng.poisson(params.nbar, size=n)
    return NodePopulation.from_arrays(wealth, activity, params.c, params.phi)


def fitness_density(x, params: ModelParams):
    """Fitness pdf, a Poisson mixture of rescaled wealth densities.

    Accepts a scalar or an array; negative ``x`` maps to 0.
    """
    x_arr = np.asarray(x, dtype=float)
    p = poisson_weights(params.nbar)
    ell = np.arange(len(p))
    g = p / (ell + 1)
    w0 = params.w0
    if params.wealth_kind is WealthKind.UNIFORM:
        # sum over l with w0 (l + 1) >= x
        tail = np.concatenate([np.cumsum(g[::-1])[::-1], [0.0]])
        start = np.clip(np.ceil(x_arr / w0 - 1.0), 0, len(p)).astype(int)
        out = tail[start] / w0
    else:
        scales = w0 * (ell + 1)
        out = (g * np.exp(-x_arr[..., None] / scales)).sum(axis=-1) / w0
    out = np.where(x_arr < 0, 0.0, out)
    return float(out) if out.ndim == 0 else out


def fitness_cdf(x, params: ModelParams):
    """Cumulative distribution of the fitness, ``P(X <= x)``."""
    x_arr = np.maximum(np.asarray(x, dtype=float), 0.0)
    p = poisson_weights(params.nbar)
    scales = params.w0 * (np.arange(len(p)) + 1)
    z = x_arr[..., None] / scales
    if params.wealth_kind is WealthKind.UNIFORM:
        per_l = np.minimum(z, 1.0)
    else:
        per_l = -np.expm1(-z)
    out = (p * per_l).sum(axis=-1)
    return float(out) if out.ndim == 0 else out


class MCEstimate(NamedTuple):
    value: float
    stderr: float
    n_samples: int


def f_plus_mc(params: ModelParams, n_samples: int, seed: int, chunk: int = 1 << 20) -> MCEstimate:
    """Monte Carlo estimate of ``P(w (l + 1) phi > c)`` with binomial error."""
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    rng = generator(seed)
    hits = 0
    left = n_samples
    while left:
        m = min(chunk, left)
        if params.wealth_kind is WealthKind.UNIFORM:
            w = rng.uniform(0.0, params.w0, size=m)
        else:
            w = rng.exponential(params.w0, size=m)
        ell = rng.poisson(params.nbar, size=m)
        hits += int(np.count_nonzero(w * (ell + 1) * params.phi > params.c))
        left -= m
    f = hits / n_samples
    return MCEstimate(f, math.sqrt(f * (1.0 - f) / n_samples), n_samples)
