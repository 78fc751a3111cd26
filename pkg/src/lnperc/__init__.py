"""Fitness-driven bond percolation model of payment-channel networks."""

from .analytics import (
    UNREACHABLE,
    ZERO,
    AnalyticReport,
    PhaseGrid,
    analytic_report,
    critical_activity,
    degree_pmf,
    f_plus,
    f_plus_exponential,
    f_plus_uniform,
    mean_component_size,
    phase_diagram,
    psi_sum,
    solve_xi_star,
)
from .components import ComponentReport, largest_component, size_distribution
from .distributions import NodePopulation, f_plus_mc, fitness_density, sample_population
from .montecarlo import EnsembleResult, degree_comparison, run_ensemble, sweep_nbar
from .netgen import Graph, KernelSpec, generate_graph, generate_graph_deposition
from .params import InfeasibleError, KernelKind, ModelParams, ParameterError, WealthKind

__version__ = "0.1.0"
