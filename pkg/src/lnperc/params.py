"""Model parameters shared by every stage of the pipeline."""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from enum import Enum


class ParameterError(ValueError):
    """Raised when a parameter lies outside its admissible domain.

    ``field`` names the offending parameter so callers (the CLI in
    particular) can report it.
    """

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


class InfeasibleError(ValueError):
    """Raised when a generation request cannot be satisfied."""


class WealthKind(str, Enum):
    UNIFORM = "uniform"
    EXPONENTIAL = "exponential"


class KernelKind(str, Enum):
    HARD = "hard"
    SMOOTH_PRODUCT = "smooth_product"
    SMOOTH_EXP = "smooth_exp"


@dataclass(frozen=True)
class ModelParams:
    """Scalar knobs of the fitness percolation model.

    ``w0`` is the wealth scale (upper bound of the uniform law, mean of the
    exponential one), ``nbar`` the mean Poisson activity, ``c`` the channel
    base fee, ``phi`` the on-chain fee rate and ``mu`` the expected number of
    counterparties.  A node is viable when ``fitness * phi > c``.
    """

    w0: float = 1.0
    nbar: float = 0.0
    c: float = 0.0
    phi: float = 1.0
    mu: float = 4.0
    n_nodes: int = 20_000
    wealth_kind: WealthKind = WealthKind.UNIFORM
    kernel_kind: KernelKind = KernelKind.HARD

    def __post_init__(self):
        for name in ("w0", "nbar", "c", "phi", "mu"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise ParameterError(name, f"expected a real number, got {value!r}")
            if not math.isfinite(value):
                raise ParameterError(name, "must be finite")
            object.__setattr__(self, name, float(value))
        if self.w0 <= 0:
            raise ParameterError("w0", "must be > 0")
        if self.phi <= 0:
            raise ParameterError("phi", "must be > 0")
        if self.mu <= 0:
            raise ParameterError("mu", "must be > 0")
        if self.nbar < 0:
            raise ParameterError("nbar", "must be >= 0")
        if self.c < 0:
            raise ParameterError("c", "must be >= 0")
        n = self.n_nodes
        if isinstance(n, bool) or not isinstance(n, int) or n < 1:
            if isinstance(n, float) and n.is_integer() and n >= 1:
                object.__setattr__(self, "n_nodes", int(n))
            else:
                raise ParameterError("n_nodes", "must be an integer >= 1")
        try:
            object.__setattr__(self, "wealth_kind", WealthKind(self.wealth_kind))
        except ValueError:
            raise ParameterError("wealth_kind", f"unknown wealth kind {self.wealth_kind!r}") from None
        try:
            object.__setattr__(self, "kernel_kind", KernelKind(self.kernel_kind))
        except ValueError:
            raise ParameterError("kernel_kind", f"unknown kernel kind {self.kernel_kind!r}") from None

    @property
    def threshold(self) -> float:
        """Fitness cut ``c / phi`` above which a node is viable."""
        return self.c / self.phi

    def replace(self, **changes) -> ModelParams:
        return dataclasses.replace(self, **changes)

    def to_dict(self) -> dict:
        return {
            "w0": self.w0,
            "nbar": self.nbar,
            "c": self.c,
            "phi": self.phi,
            "mu": self.mu,
            "n_nodes": self.n_nodes,
            "wealth_kind": self.wealth_kind.value,
            "kernel_kind": self.kernel_kind.value,
        }

    @classmethod
    def from_dict(cls, data: dict) -> ModelParams:
        return cls(**data)
