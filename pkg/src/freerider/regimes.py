"""Solvers for the three carbon-pricing regimes.

Every regime reduces to one aggregate fixed point: each country i abates
``a_i = c'^{-1}(w_i * b'(A))`` where the weight w_i is the population mass the
country's policy-maker cares about (own size when acting nationally, world
total when acting globally). The map

    F(A) = sum_i P_i * c'^{-1}(w_i * b'(A)) - A

is strictly decreasing for concave b and strictly convex c, so bracketed
bisection finds the unique root. Linear benefits make b' constant and the
solution closed-form; that path bypasses the root-finder entirely.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .economy import EconomyError, EconomySpec, LinearBenefit, PopulationProfile

__all__ = [
    "Regime",
    "SolverConfig",
    "SolverError",
    "DegeneratePriceError",
    "RegimeOutcome",
    "solve_noncooperative",
    "solve_global_optimum",
    "solve_mixed_motives",
    "price_ratio",
]


class Regime(Enum):
    NONCOOPERATIVE = "noncooperative"
    GLOBAL_OPTIMUM = "global_optimum"
    MIXED_MOTIVES = "mixed_motives"


class SolverError(RuntimeError):
    """Aggregate fixed point could not be solved; carries the best residual."""

    def __init__(self, message: str, residual: float = float("nan")):
        super().__init__(message)
        self.residual = residual


class DegeneratePriceError(ValueError):
    """Price ratio undefined because the denominator price is zero."""


@dataclass(frozen=True)
class SolverConfig:
    """Bisection tolerances: absolute on F, relative on the aggregate A."""

    f_tol: float = 1e-12
    a_rtol: float = 1e-10
    max_iter: int = 200

    def __post_init__(self):
        if not (self.f_tol > 0 and self.a_rtol > 0 and self.max_iter > 0):
            raise ValueError("solver tolerances and max_iter must be positive")


@dataclass(frozen=True)
class RegimeOutcome:
    """One solved regime: abatements, implied prices, utilities, diagnostics."""

    regime: Regime
    profile: PopulationProfile
    abatement: np.ndarray
    aggregate: float
    prices: np.ndarray
    utilities: np.ndarray
    residual: float
    converged: bool
    iterations: int
    altruist: int | None = None


def _fixed_point_map(sizes, weights, econ):
    benefit, cost = econ.benefit, econ.cost

    def F(total):
        marg = benefit.marginal(total)
        return float(np.dot(sizes, cost.inverse_marginal(weights * marg)) - total)

    return F


def _solve_aggregate(profile, econ, weights, config):
    """Root of F on [0, A_max]; returns (A, residual, iterations)."""
    sizes = profile.sizes
    total_pop = profile.total
    F = _fixed_point_map(sizes, weights, econ)

    marg0 = float(econ.benefit.marginal(0.0))
    if not marg0 > 0.0:
        # Flat benefit at the origin: nobody abates, all prices zero.
        return 0.0, 0.0, 0

    # b' is non-increasing and w_i <= P, so A* <= P * c'^{-1}(P * b'(0)).
    if np.isfinite(marg0):
        hi = float(total_pop * econ.cost.inverse_marginal(total_pop * marg0))
    else:
        hi = max(total_pop, 1.0)
    expansions = 0
    while F(hi) > 0.0:
        hi *= 2.0
        expansions += 1
        if expansions > 1024 or not np.isfinite(hi):
            raise SolverError(
                "bracket failure: F(A) does not change sign on [0, A_max]", residual=F(hi)
            )

    lo = 0.0  # F(0+) > 0 because b'(0) > 0
    mid = 0.5 * hi
    f_mid = F(mid)
    for iteration in range(1, config.max_iter + 1):
        if abs(f_mid) <= config.f_tol or (hi - lo) <= config.a_rtol * max(mid, 1.0):
            return mid, abs(f_mid), iteration
        if f_mid > 0.0:
            lo = mid
        else:
            hi = mid
        mid = 0.5 * (lo + hi)
        f_mid = F(mid)
    raise SolverError(
        f"no convergence after {config.max_iter} bisection steps", residual=abs(f_mid)
    )


def _outcome(profile, econ, weights, regime, altruist, config):
    sizes = profile.sizes
    if isinstance(econ.benefit, LinearBenefit):
        # b' is constant: every country's problem decouples, solve exactly.
        prices = weights * econ.benefit.beta
        abatement = np.asarray(econ.cost.inverse_marginal(prices), dtype=float)
        aggregate = float(np.dot(sizes, abatement))
        residual, converged, iterations = 0.0, True, 0
    else:
        aggregate, residual, iterations = _solve_aggregate(profile, econ, weights, config)
        prices = weights * econ.benefit.marginal(aggregate)
        abatement = np.asarray(econ.cost.inverse_marginal(prices), dtype=float)
        converged = True
    utilities = np.asarray(
        econ.benefit.value(aggregate) - econ.cost.value(abatement), dtype=float
    )
    prices = np.asarray(prices, dtype=float)
    for arr in (prices, abatement, utilities):
        arr.flags.writeable = False
    return RegimeOutcome(
        regime=regime,
        profile=profile,
        abatement=abatement,
        aggregate=aggregate,
        prices=prices,
        utilities=utilities,
        residual=residual,
        converged=converged,
        iterations=iterations,
        altruist=altruist,
    )


def solve_noncooperative(
    profile: PopulationProfile, econ: EconomySpec, config: SolverConfig = SolverConfig()
) -> RegimeOutcome:
    """Nash outcome where every country prices only its domestic damages.

    Country i satisfies ``P_i * b'(A) = c'(a_i)`` and charges
    ``tau_i = P_i * b'(A)``, so prices are proportional to population sizes.
    """
    return _outcome(profile, econ, profile.sizes, Regime.NONCOOPERATIVE, None, config)


def solve_global_optimum(
    profile: PopulationProfile, econ: EconomySpec, config: SolverConfig = SolverConfig()
) -> RegimeOutcome:
    """World-welfare optimum: one uniform price tau = P * b'(A), common a_i."""
    weights = np.full(len(profile), profile.total)
    return _outcome(profile, econ, weights, Regime.GLOBAL_OPTIMUM, None, config)


def solve_mixed_motives(
    profile: PopulationProfile,
    econ: EconomySpec,
    altruist: int,
    config: SolverConfig = SolverConfig(),
) -> RegimeOutcome:
    """One globally minded policy-maker among national ones.

    The altruist's first-order condition uses the world population P while
    everyone else uses their own P_j, so the altruist's price P * b'(A)
    strictly exceeds every other price whenever b' > 0.
    """
    if not 0 <= altruist < len(profile):
        raise EconomyError(f"altruist index {altruist} out of range for {len(profile)} countries")
    weights = profile.sizes.copy()
    weights[altruist] = profile.total
    return _outcome(profile, econ, weights, Regime.MIXED_MOTIVES, altruist, config)


def price_ratio(outcome: RegimeOutcome, i: int, j: int) -> float:
    """tau_i / tau_j for a non-cooperative outcome; equals P_i / P_j.

    The ratio is independent of the benefit and cost families because the
    common factor b'(A) cancels.
    """
    if outcome.regime is not Regime.NONCOOPERATIVE:
        raise ValueError("price ratios are defined for non-cooperative outcomes")
    n = len(outcome.prices)
    if not (0 <= i < n and 0 <= j < n):
        raise EconomyError(f"country index out of range for {n} countries")
    denom = float(outcome.prices[j])
    if denom == 0.0:
        raise DegeneratePriceError(
            f"country {j} has a zero price (b'(A) = 0); ratio is degenerate"
        )
    return float(outcome.prices[i]) / denom
