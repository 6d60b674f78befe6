"""Model primitives: population profiles, benefit/cost families, utility, welfare.

Countries differ only in population size. A representative person in country i
gets ``b(A) - c(a_i)`` where ``a_i`` is the country's per-capita abatement and
``A`` the population-weighted world total. Benefit families are (weakly)
concave and increasing, cost families strictly convex and increasing, both
normalized to 0 at 0, so utility levels are comparable across scenarios.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "EconomyError",
    "PopulationProfile",
    "LinearBenefit",
    "LogBenefit",
    "PowerBenefit",
    "QuadraticCost",
    "PowerCost",
    "EconomySpec",
    "Allocation",
    "aggregate_abatement",
    "utility_per_capita",
    "utility_vector",
    "global_welfare",
]


class EconomyError(ValueError):
    """Invalid model primitive: bad parameter or mismatched dimensions."""


def _finite_vector(values, name: str) -> np.ndarray:
    arr = np.atleast_1d(np.asarray(values, dtype=float))
    if arr.ndim != 1 or arr.size == 0:
        raise EconomyError(f"{name} must be a non-empty 1-D sequence")
    if not np.all(np.isfinite(arr)):
        raise EconomyError(f"{name} must contain only finite values")
    arr = arr.copy()
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class PopulationProfile:
    """Country population sizes (persons), in caller-chosen order."""

    sizes: np.ndarray

    def __post_init__(self):
        arr = _finite_vector(self.sizes, "population sizes")
        if np.any(arr <= 0.0):
            raise EconomyError("every population size must be > 0")
        object.__setattr__(self, "sizes", arr)

    @property
    def n(self) -> int:
        return int(self.sizes.size)

    def __len__(self) -> int:
        return self.n

    @property
    def total(self) -> float:
        """World population P = sum of sizes."""
        return float(self.sizes.sum())

    @property
    def is_strictly_decreasing(self) -> bool:
        return bool(np.all(np.diff(self.sizes) < 0)) if self.n > 1 else True

    def descending(self) -> "PopulationProfile":
        """Ordered view with P1 >= P2 >= ... (largest country first)."""
        return PopulationProfile(np.sort(self.sizes)[::-1])


@dataclass(frozen=True)
class LinearBenefit:
    """b(A) = beta * A; constant marginal benefit."""

    beta: float
    strictly_concave = False

    def __post_init__(self):
        if not self.beta > 0:
            raise EconomyError("linear benefit requires beta > 0")

    def value(self, total):
        return self.beta * np.asarray(total, dtype=float)

    def marginal(self, total):
        total = np.asarray(total, dtype=float)
        return np.broadcast_to(np.float64(self.beta), total.shape).copy() if total.shape else np.float64(self.beta)


@dataclass(frozen=True)
class LogBenefit:
    """b(A) = kappa * ln(1 + A)."""

    kappa: float
    strictly_concave = True

    def __post_init__(self):
        if not self.kappa > 0:
            raise EconomyError("log benefit requires kappa > 0")

    def value(self, total):
        return self.kappa * np.log1p(np.asarray(total, dtype=float))

    def marginal(self, total):
        return self.kappa / (1.0 + np.asarray(total, dtype=float))


@dataclass(frozen=True)
class PowerBenefit:
    """b(A) = kappa * A**rho with 0 < rho < 1; marginal diverges at 0."""

    kappa: float
    rho: float
    strictly_concave = True

    def __post_init__(self):
        if not self.kappa > 0:
            raise EconomyError("power benefit requires kappa > 0")
        if not 0.0 < self.rho < 1.0:
            raise EconomyError("power benefit requires 0 < rho < 1")

    def value(self, total):
        return self.kappa * np.asarray(total, dtype=float) ** self.rho

    def marginal(self, total):
        total = np.asarray(total, dtype=float)
        with np.errstate(divide="ignore"):
            return self.kappa * self.rho * total ** (self.rho - 1.0)


@dataclass(frozen=True)
class QuadraticCost:
    """c(a) = gamma/2 * a**2."""

    gamma: float

    def __post_init__(self):
        if not self.gamma > 0:
            raise EconomyError("quadratic cost requires gamma > 0")

    def value(self, abatement):
        a = np.asarray(abatement, dtype=float)
        return 0.5 * self.gamma * a * a

    def marginal(self, abatement):
        return self.gamma * np.asarray(abatement, dtype=float)

    def inverse_marginal(self, price):
        return np.asarray(price, dtype=float) / self.gamma


@dataclass(frozen=True)
class PowerCost:
    """c(a) = gamma/eta * a**eta with eta > 1."""

    gamma: float
    eta: float

    def __post_init__(self):
        if not self.gamma > 0:
            raise EconomyError("power cost requires gamma > 0")
        if not self.eta > 1.0:
            raise EconomyError("power cost requires eta > 1")

    def value(self, abatement):
        a = np.asarray(abatement, dtype=float)
        return (self.gamma / self.eta) * a**self.eta

    def marginal(self, abatement):
        return self.gamma * np.asarray(abatement, dtype=float) ** (self.eta - 1.0)

    def inverse_marginal(self, price):
        return (np.asarray(price, dtype=float) / self.gamma) ** (1.0 / (self.eta - 1.0))


BenefitFamily = LinearBenefit | LogBenefit | PowerBenefit
CostFamily = QuadraticCost | PowerCost


@dataclass(frozen=True)
class EconomySpec:
    """A benefit family paired with a cost family."""

    benefit: BenefitFamily
    cost: CostFamily

    def __post_init__(self):
        if not isinstance(self.benefit, (LinearBenefit, LogBenefit, PowerBenefit)):
            raise EconomyError(f"unsupported benefit family: {type(self.benefit).__name__}")
        if not isinstance(self.cost, (QuadraticCost, PowerCost)):
            raise EconomyError(f"unsupported cost family: {type(self.cost).__name__}")


@dataclass(frozen=True)
class Allocation:
    """Per-capita abatement a_i for every country, aligned with a profile."""

    per_capita: np.ndarray

    def __post_init__(self):
        arr = _finite_vector(self.per_capita, "per-capita abatement")
        if np.any(arr < 0.0):
            raise EconomyError("per-capita abatement must be >= 0")
        object.__setattr__(self, "per_capita", arr)

    def __len__(self) -> int:
        return int(self.per_capita.size)


def _check_aligned(profile: PopulationProfile, alloc: Allocation):
    if len(profile) != len(alloc):
        raise EconomyError(
            f"dimension mismatch: {len(profile)} countries vs {len(alloc)} abatement entries"
        )


def aggregate_abatement(profile: PopulationProfile, alloc: Allocation) -> float:
    """World abatement A = sum_j P_j * a_j."""
    _check_aligned(profile, alloc)
    return float(np.dot(profile.sizes, alloc.per_capita))


def utility_per_capita(
    profile: PopulationProfile, alloc: Allocation, i: int, econ: EconomySpec
) -> float:
    """Utility of a representative person in country i: b(A) - c(a_i)."""
    _check_aligned(profile, alloc)
    if not 0 <= i < len(profile):
        raise EconomyError(f"country index {i} out of range for {len(profile)} countries")
    total = aggregate_abatement(profile, alloc)
    return float(econ.benefit.value(total) - econ.cost.value(alloc.per_capita[i]))


def utility_vector(profile: PopulationProfile, alloc: Allocation, econ: EconomySpec) -> np.ndarray:
    """Per-capita utilities for all countries at once."""
    _check_aligned(profile, alloc)
    total = aggregate_abatement(profile, alloc)
    return np.asarray(econ.benefit.value(total) - econ.cost.value(alloc.per_capita), dtype=float)


def global_welfare(profile: PopulationProfile, alloc: Allocation, econ: EconomySpec) -> float:
    """Population-weighted world welfare W = sum_j P_j * u_j."""
    return float(np.dot(profile.sizes, utility_vector(profile, alloc, econ)))
