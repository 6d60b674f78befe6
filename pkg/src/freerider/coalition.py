"""Two-stage coalition game: linear benefits, quadratic costs.

Stage 2 (abatement) is closed-form: a coalition with total population P_s sets
a common per-capita target ``a_s = P_s * beta / gamma`` while every outsider
plays the dominant strategy ``a_i = P_i * beta / gamma``. Stage 1
(participation) is a Nash equilibrium in unilateral join/leave deviations,
evaluated either through the reduced membership condition ``2*P_i >= P_s - P_i``
(`membership_incentive`, `enumerate_equilibria`) or through full payoff
comparisons over all subsets (`brute_force_equilibria`). The two routes are
independent and cross-checked in the test suite.

An empty coalition and a singleton coalition are payoff-identical worlds
(a lone member behaves exactly like an outsider), so stability is reported on
singleton representatives and the empty set is never returned.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .economy import PopulationProfile

__all__ = [
    "LQParams",
    "CoalitionResult",
    "abatement_stage",
    "membership_incentive",
    "enumerate_equilibria",
    "brute_force_equilibria",
    "PAYOFF_RTOL",
]

# Relative tolerance for payoff comparisons in the subset-scan oracle; keeps
# analytically knife-edge indifference stable under float rounding.
PAYOFF_RTOL = 1e-9

_MAX_ORACLE_COUNTRIES = 20


class CoalitionError(ValueError):
    """Invalid coalition-game input."""


@dataclass(frozen=True)
class LQParams:
    """Marginal benefit per abatement unit and cost curvature."""

    beta: float
    gamma: float

    def __post_init__(self):
        if not (self.beta > 0 and self.gamma > 0):
            raise CoalitionError("beta and gamma must be strictly positive")


@dataclass(frozen=True)
class CoalitionResult:
    """Abatement-stage outcome for one membership set, optionally with verdicts."""

    members: frozenset
    coalition_population: float
    member_abatement: float  # a_s; 0.0 when the coalition is empty
    abatement: np.ndarray  # per-capita, all countries
    coalition_total: float  # A_s
    outsider_total: float  # A_n
    aggregate: float  # A = A_s + A_n
    member_utility: float  # common utility of every member
    utilities: np.ndarray  # per-capita, all countries
    prices: np.ndarray
    internally_stable: bool | None = None
    externally_stable: bool | None = None

    @property
    def is_equilibrium(self):
        if self.internally_stable is None or self.externally_stable is None:
            return None
        return self.internally_stable and self.externally_stable


def _member_indices(profile: PopulationProfile, members) -> list:
    idx = sorted(set(int(i) for i in members))
    if idx and not (0 <= idx[0] and idx[-1] < len(profile)):
        raise CoalitionError(f"member indices out of range for {len(profile)} countries")
    return idx


def abatement_stage(
    profile: PopulationProfile, params: LQParams, members
) -> CoalitionResult:
    """Closed-form stage-2 outcome for a given membership set.

    Members share the per-capita target a_s = P_s*beta/gamma (price beta*P_s);
    outsiders play a_i = P_i*beta/gamma (price beta*P_i). The common member
    utility is ``beta*A_n + P_s**2 * beta**2 / (2*gamma)``.
    """
    idx = _member_indices(profile, members)
    sizes = profile.sizes
    beta, gamma = params.beta, params.gamma
    scale = beta / gamma

    inside = np.zeros(len(profile), dtype=bool)
    inside[idx] = True
    p_s = float(sizes[inside].sum())

    a_s = p_s * scale
    abatement = sizes * scale
    abatement[inside] = a_s
    coalition_total = p_s * p_s * scale
    outsider_total = float(np.dot(sizes[~inside], sizes[~inside])) * scale
    aggregate = coalition_total + outsider_total

    prices = beta * sizes.copy()
    prices[inside] = beta * p_s

    member_utility = beta * outsider_total + p_s * p_s * beta * beta / (2.0 * gamma)
    utilities = beta * aggregate - 0.5 * gamma * abatement * abatement

    for arr in (abatement, prices, utilities):
        arr.flags.writeable = False
    return CoalitionResult(
        members=frozenset(idx),
        coalition_population=p_s,
        member_abatement=a_s,
        abatement=abatement,
        coalition_total=coalition_total,
        outsider_total=outsider_total,
        aggregate=aggregate,
        member_utility=member_utility,
        utilities=utilities,
        prices=prices,
    )


def membership_incentive(
    profile: PopulationProfile, params: LQParams, members, i: int
) -> bool:
    """True iff country i weakly prefers staying in the coalition.

    Reduces to ``2*P_i >= P_s - P_i``; beta and gamma cancel out of the
    underlying utility comparison.
    """
    idx = _member_indices(profile, members)
    if int(i) not in idx:
        raise CoalitionError(f"country {i} is not a coalition member")
    sizes = profile.sizes
    p_rest = float(sizes[idx].sum()) - float(sizes[int(i)])
    return bool(2.0 * float(sizes[int(i)]) >= p_rest)


def _sorted_results(profile, params, membership_sets):
    results = []
    for s in sorted(membership_sets, key=lambda s: (len(s), tuple(sorted(s)))):
        res = abatement_stage(profile, params, s)
        results.append(replace(res, internally_stable=True, externally_stable=True))
    return results


def enumerate_equilibria(profile: PopulationProfile, params: LQParams) -> list:
    """Participation equilibria for strictly decreasing population sizes.

    At most two countries join and the largest (index 0) is always one of
    them: a singleton when 2*P2 < P1, both the singleton and {1, 2} at the
    knife edge 2*P2 = P1, and otherwise every pair {1, k} whose second member
    satisfies ``P_k >= max(P1/2, 2*P2 - P1)``.

    Raises on tied population sizes; use `brute_force_equilibria` for ties.
    """
    if not profile.is_strictly_decreasing:
        raise CoalitionError(
            "population sizes must be strictly decreasing; "
            "for tied sizes use brute_force_equilibria"
        )
    sizes = profile.sizes
    if len(profile) == 1:
        return _sorted_results(profile, params, [frozenset({0})])

    p1, p2 = float(sizes[0]), float(sizes[1])
    if 2.0 * p2 < p1:
        sets = [frozenset({0})]
    elif 2.0 * p2 == p1:
        sets = [frozenset({0}), frozenset({0, 1})]
    else:
        threshold = max(0.5 * p1, 2.0 * p2 - p1)
        sets = [
            frozenset({0, k})
            for k in range(1, len(profile))
            if float(sizes[k]) >= threshold
        ]
    return _sorted_results(profile, params, sets)


def _stable_masks(sizes: np.ndarray, beta: float, gamma: float, rtol: float) -> list:
    """Bitmasks of stable non-empty subsets, via full payoff comparisons."""
    n = sizes.size
    sq = sizes * sizes
    sum_sq = float(sq.sum())
    scale = beta / gamma
    half_u = beta * beta / (2.0 * gamma)

    n_masks = 1 << n
    masks = np.arange(n_masks, dtype=np.int64)
    member = ((masks[:, None] >> np.arange(n)) & 1).astype(bool)

    p_s = member @ sizes
    q_s = member @ sq
    a_n = (sum_sq - q_s) * scale  # outsiders' total abatement
    a_s = p_s * p_s * scale
    u_s = beta * a_n + p_s * p_s * half_u

    def tol(x, y):
        return rtol * np.maximum(1.0, np.maximum(np.abs(x), np.abs(y)))

    stable = np.ones(n_masks, dtype=bool)
    stable[0] = False  # empty set: payoff-identical to singleton worlds
    for i in range(n):
        p_i, sq_i = float(sizes[i]), float(sq[i])
        # member i leaves: coalition shrinks, i joins the outsiders
        world_leave = a_n + sq_i * scale + (p_s - p_i) ** 2 * scale
        u_leave = beta * world_leave - sq_i * half_u
        ok_inside = u_s + tol(u_s, u_leave) >= u_leave
        # outsider i joins: coalition grows by P_i
        u_join = beta * (a_n - sq_i * scale) + (p_s + p_i) ** 2 * half_u
        u_stay_out = beta * (a_n + a_s) - sq_i * half_u
        ok_outside = u_join <= u_stay_out + tol(u_join, u_stay_out)
        stable &= np.where(member[:, i], ok_inside, ok_outside)
    return [int(m) for m in masks[stable]]


def brute_force_equilibria(
    profile: PopulationProfile, params: LQParams, rtol: float = PAYOFF_RTOL
) -> list:
    """Stability oracle: scan every subset and compare raw payoffs.

    Internal stability compares each member's utility with the utility it
    would earn after leaving (outsiders' dominant strategies unchanged, the
    rump coalition re-optimizing); external stability checks that no outsider
    strictly gains by joining. Indifference counts as stable, so knife-edge
    coalitions are retained. Ties in population sizes are allowed.

    The empty participation profile is payoff-identical to every singleton
    world and is represented by stable singletons, never returned as a set of
    its own.
    """
    n = len(profile)
    if n > _MAX_ORACLE_COUNTRIES:
        raise CoalitionError(
            f"subset scan limited to {_MAX_ORACLE_COUNTRIES} countries (got {n})"
        )
    sets = []
    for mask in _stable_masks(profile.sizes, params.beta, params.gamma, rtol):
        sets.append(frozenset(i for i in range(n) if mask >> i & 1))
    return _sorted_results(profile, params, sets)
