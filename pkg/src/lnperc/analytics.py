"""Closed-form predictions of the fitness percolation model.

Viable nodes form an Erdos-Renyi graph with mean degree ``a = mu * f_plus``
embedded among ``1 - f_plus`` isolated nodes.  The degree pmf is the
mixture ``(1 - f) [k = 0] + f Pois(k; a)`` whose generating functions give
the giant component through ``xi = exp(a (xi - 1))`` and
``S = (1 - xi) f``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.special import gammaln

from .distributions import poisson_cap, poisson_weights
from .params import ModelParams, ParameterError, WealthKind

NEAR_CRITICAL = 1e-9
NBAR_TOL = 1e-6


class Marker(str, Enum):
    """Non-numeric outcomes of :func:`critical_activity`."""

    ZERO = "ZERO"
    UNREACHABLE = "UNREACHABLE"


ZERO = Marker.ZERO
UNREACHABLE = Marker.UNREACHABLE


# -- fraction of viable nodes ------------------------------------------------


def _cost_ratio(params: ModelParams) -> float:
    return params.c / (params.phi * params.w0)


def _require(params: ModelParams, kind: WealthKind):
    if params.wealth_kind is not kind:
        raise ParameterError("wealth_kind", f"expected {kind.value}, got {params.wealth_kind.value}")


def psi_sum(t: int, params: ModelParams) -> float:
    """Poisson-weighted sum of ``(l + 1) ** t`` from the first index
    ``max(0, ceil(c / (w0 phi) - 1))`` at which a uniform-wealth node can
    be viable."""
    _require(params, WealthKind.UNIFORM)
    if t not in (0, -1):
        raise ValueError("t must be 0 or -1")
    p = poisson_weights(params.nbar)
    start = max(0, math.ceil(_cost_ratio(params) - 1.0))
    if start >= len(p):
        return 0.0
    ell = np.arange(start, len(p), dtype=float)
    return float(np.sum(p[start:] * (ell + 1.0) ** t))


def f_plus_uniform(params: ModelParams) -> float:
    """``Psi(0) - r Psi(-1)`` with ``r = c / (phi w0)``, summed term by term
    so every contribution is non-negative."""
    _require(params, WealthKind.UNIFORM)
    p = poisson_weights(params.nbar)
    r = _cost_ratio(params)
    start = max(0, math.ceil(r - 1.0))
    if start >= len(p):
        return 0.0
    ell = np.arange(start, len(p), dtype=float)
    terms = p[start:] * np.clip(1.0 - r / (ell + 1.0), 0.0, 1.0)
    return float(min(1.0, terms.sum()))


def f_plus_exponential(params: ModelParams) -> float:
    """``sum_l Pois(l) exp(-r / (l + 1))``: the exponential tail of the wealth
    needed at each activity level."""
    _require(params, WealthKind.EXPONENTIAL)
    p = poisson_weights(params.nbar)
    r = _cost_ratio(params)
    ell = np.arange(len(p), dtype=float)
    return float(min(1.0, np.sum(p * np.exp(-r / (ell + 1.0)))))


def f_plus(params: ModelParams) -> float:
    if params.wealth_kind is WealthKind.UNIFORM:
        return f_plus_uniform(params)
    return f_plus_exponential(params)


# -- degrees and giant component --------------------------------------------


def degree_pmf(k, f_plus: float, mu: float):
    """Mixture degree pmf: isolated low-fitness nodes plus Poisson(mu f)
    degrees on the viable fraction.  Vectorised over ``k``."""
    k_arr = np.asarray(k)
    if np.any(k_arr < 0):
        raise ValueError("k must be non-negative")
    a = mu * f_plus
    kf = k_arr.astype(float)
    if a > 0:
        pois = np.exp(-a + kf * math.log(a) - gammaln(kf + 1.0))
    else:
        pois = (k_arr == 0).astype(float)
    out = f_plus * pois + (1.0 - f_plus) * (k_arr == 0)
    return float(out) if out.ndim == 0 else out


def degree_support(f_plus: float, mu: float) -> int:
    """Largest degree kept when summing the pmf."""
    return poisson_cap(mu * f_plus)


def solve_xi_star(mean_er_degree: float) -> float:
    """Smallest root in (0, 1] of ``xi = exp(a (xi - 1))``.

    Returns exactly 1 for ``a <= 1`` (and within ``NEAR_CRITICAL`` above
    it).  Otherwise the root is bracketed by ``[0, 1 - ln(a) / a]``, where
    the concave residual peaks, bisected to machine resolution and then
    Newton-polished.
    """
    a = float(mean_er_degree)
    if not math.isfinite(a) or a < 0:
        raise ParameterError("mean_er_degree", f"must be finite and >= 0, got {mean_er_degree!r}")
    if a <= 1.0 + NEAR_CRITICAL:
        return 1.0

    def g(s):
        return s - math.exp(a * (s - 1.0))

    lo, hi = 0.0, 1.0 - math.log(a) / a
    for _ in range(400):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if g(mid) > 0:
            hi = mid
        else:
            lo = mid
    xi = lo if abs(g(lo)) < abs(g(hi)) else hi
    for _ in range(6):
        e = math.exp(a * (xi - 1.0))
        nxt = xi - (xi - e) / (1.0 - a * e)
        if not 0.0 <= nxt < 1.0 or abs(g(nxt)) >= abs(g(xi)):
            break
        xi = nxt
    return xi


def _t_mean(f: float, mu: float) -> float:
    a = mu * f
    if a >= 1.0 - NEAR_CRITICAL:
        return math.inf
    return 1.0 + mu * f * f / (1.0 - a)


def mean_component_size(params: ModelParams) -> float:
    """Node-averaged component size ``1 + mu f^2 / (1 - mu f)``.

    Isolated nodes count as components of size 1.  Returns ``math.inf`` once
    ``mu f >= 1``, where the average diverges.
    """
    return _t_mean(f_plus(params), params.mu)


@dataclass(frozen=True)
class AnalyticReport:
    f_plus: float
    mean_degree: float
    xi_star: float
    giant_fraction: float
    mean_component_size: float  # math.inf when diverged
    supercritical: bool

    @property
    def diverged(self) -> bool:
        return math.isinf(self.mean_component_size)

    def to_dict(self) -> dict:
        return {
            "f_plus": self.f_plus,
            "mean_degree": self.mean_degree,
            "xi_star": self.xi_star,
            "giant_fraction": self.giant_fraction,
            "mean_component_size": "diverged" if self.diverged else self.mean_component_size,
            "supercritical": self.supercritical,
        }

    @classmethod
    def from_dict(cls, data: dict) -> AnalyticReport:
        t = data["mean_component_size"]
        return cls(
            f_plus=float(data["f_plus"]),
            mean_degree=float(data["mean_degree"]),
            xi_star=float(data["xi_star"]),
            giant_fraction=float(data["giant_fraction"]),
            mean_component_size=math.inf if t == "diverged" else float(t),
            supercritical=bool(data["supercritical"]),
        )


def report_from_f_plus(f: float, mu: float) -> AnalyticReport:
    a = mu * f
    xi = solve_xi_star(a)
    return AnalyticReport(
        f_plus=f,
        mean_degree=mu * f * f,
        xi_star=xi,
        giant_fraction=(1.0 - xi) * f,
        mean_component_size=_t_mean(f, mu),
        supercritical=xi < 1.0,
    )


def analytic_report(params: ModelParams) -> AnalyticReport:
    return report_from_f_plus(f_plus(params), params.mu)


# -- critical activity and phase diagram -------------------------------------


def nbar_for_f_plus(target: float, params: ModelParams, tol: float = NBAR_TOL) -> float:
    """Smallest mean activity at which ``f_plus`` reaches ``target``.

    ``f_plus`` is non-decreasing in ``nbar``, so the answer is bracketed by
    doubling from ``max(1, 4 c / (phi w0))`` and bisected to ``tol``.
    Returns ``math.inf`` when ``target >= 1`` and the cost is positive.
    """
    if f_plus(params.replace(nbar=0.0)) >= target:
        return 0.0
    if target >= 1.0:
        return math.inf
    lo, hi = 0.0, max(1.0, 4.0 * _cost_ratio(params))
    while f_plus(params.replace(nbar=hi)) < target:
        lo, hi = hi, 2.0 * hi
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if f_plus(params.replace(nbar=mid)) < target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def critical_activity(phi: float, c: float, params: ModelParams) -> float | Marker:
    """Mean activity ``nbar*`` at which ``mu f_plus`` crosses 1 for fees
    ``(phi, c)``; the other fields of ``params`` are kept.

    Returns ``ZERO`` if the network already percolates at ``nbar = 0`` and
    ``UNREACHABLE`` if it never does (``mu <= 1``).
    """
    p = params.replace(phi=phi, c=c, nbar=0.0)
    if params.mu * f_plus(p) > 1.0:
        return ZERO
    if params.mu <= 1.0:
        return UNREACHABLE
    return nbar_for_f_plus(1.0 / params.mu, p)


def _cell_value(v: float | Marker) -> float:
    if v is ZERO:
        return 0.0
    if v is UNREACHABLE:
        return math.inf
    return float(v)


@dataclass(frozen=True)
class PhaseGrid:
    """Critical activity over a fee grid; ``nbar_star[i][j]`` belongs to
    ``c_values[i]`` and ``phi_values[j]``."""

    phi_values: tuple
    c_values: tuple
    nbar_star: tuple

    def as_array(self) -> np.ndarray:
        """Numeric view: ZERO -> 0.0, UNREACHABLE -> inf."""
        return np.array([[_cell_value(v) for v in row] for row in self.nbar_star], dtype=float)

    def regions(self) -> np.ndarray:
        """1 for ZERO cells, 2 for finite ``nbar*``, 0 for UNREACHABLE."""
        return np.array(
            [[1 if v is ZERO else 0 if v is UNREACHABLE else 2 for v in row] for row in self.nbar_star],
            dtype=int,
        )

    def to_dict(self) -> dict:
        return {
            "phi_values": list(self.phi_values),
            "c_values": list(self.c_values),
            "nbar_star": [[v.value if isinstance(v, Marker) else v for v in row] for row in self.nbar_star],
        }

    @classmethod
    def from_dict(cls, data: dict) -> PhaseGrid:
        def cell(v):
            return Marker(v) if isinstance(v, str) else float(v)

        return cls(
            tuple(float(v) for v in data["phi_values"]),
            tuple(float(v) for v in data["c_values"]),
            tuple(tuple(cell(v) for v in row) for row in data["nbar_star"]),
        )


def _check_grid(name: str, values) -> tuple:
    vals = tuple(float(v) for v in values)
    if not vals:
        raise ParameterError(name, "grid must be non-empty")
    if any(b < a for a, b in zip(vals, vals[1:])):
        raise ParameterError(name, "grid must be sorted ascending")
    return vals


def phase_diagram(phi_values, c_values, params: ModelParams) -> PhaseGrid:
    phis = _check_grid("phi_values", phi_values)
    cs = _check_grid("c_values", c_values)
    if phis[0] <= 0:
        raise ParameterError("phi_values", "must be > 0")
    if cs[0] < 0:
        raise ParameterError("c_values", "must be >= 0")
    rows = tuple(tuple(critical_activity(phi, c, params) for phi in phis) for c in cs)
    return PhaseGrid(phis, cs, rows)
