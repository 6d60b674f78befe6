"""Which countries join a climate coalition when only population sizes differ?

Run with:
    python demos/coalition_stability.py

Stage 2 is closed form (linear benefits, quadratic costs); stage 1 checks
unilateral join/leave deviations. The closed-form enumerator and the
subset-scan oracle are independent routes to the same equilibrium set.
"""

import numpy as np

from freerider import (
    LQParams,
    PopulationProfile,
    abatement_stage,
    brute_force_equilibria,
    enumerate_equilibria,
)

params = LQParams(beta=1.0, gamma=1.0)


def label(members):
    return "{" + ",".join(str(i + 1) for i in sorted(members)) + "}"


def report(sizes):
    profile = PopulationProfile(np.asarray(sizes, dtype=float))
    fast = enumerate_equilibria(profile, params)
    scan = brute_force_equilibria(profile, params)
    agree = {r.members for r in fast} == {r.members for r in scan}
    sets = ", ".join(label(r.members) for r in scan)
    print(f"  P = {sizes!s:<16} equilibria: {sets:<18} (routes agree: {agree})")


print("At most two countries ever join, and the largest is always one of them:\n")
report((10, 3, 2))  # second country below half the size of the first
report((8, 4, 2))  # knife edge: both the singleton and the top pair survive
report((5, 4, 3))  # several second members possible
report((9, 7, 5))  # equal gaps with a big-enough third country
report((7, 5, 3))  # equal gaps, but country 3 is too small to stay

print("\nInside an equilibrium the members out-price every outsider:")
profile = PopulationProfile([5.0, 4.0, 3.0])
for res in brute_force_equilibria(profile, params):
    prices = ", ".join(f"{p:.0f}" for p in res.prices)
    print(f"  {label(res.members)}: prices ({prices}), member utility {res.member_utility:.2f}")

print("\nSymmetric countries recover the classic two-or-three-member result:")
for n in (4, 6, 8):
    stable = brute_force_equilibria(PopulationProfile(np.ones(n)), params)
    sizes = sorted({len(r.members) for r in stable})
    print(f"  N={n}: stable coalition sizes {sizes}")

print("\nWhy bigger countries stay: leaving a coalition scraps everyone's")
print("effort scale-up, and a bigger member loses more of that than it saves:")
stay = abatement_stage(profile, params, {0, 1})
gone = abatement_stage(profile, params, {0})
print(f"  country 2 inside {label({0, 1})}: utility {stay.member_utility:.2f}")
print(f"  country 2 after leaving     : utility {gone.utilities[1]:.2f}")
