"""Walk through the three carbon-pricing regimes on a three-country world.

Run with:
    python demos/pricing_regimes.py

The populations are the 2020 US / Japan / Sweden headcounts; everything else
is symmetric, which is the point: any spread in prices comes from country
size alone.
"""


from freerider import (
    EconomySpec,
    LinearBenefit,
    LogBenefit,
    PopulationProfile,
    QuadraticCost,
    price_ratio,
    solve_global_optimum,
    solve_mixed_motives,
    solve_noncooperative,
)

COUNTRIES = ["USA", "Japan", "Sweden"]
profile = PopulationProfile([331e6, 126e6, 10e6])


def show(title, outcome):
    print(f"--- {title} ---")
    for name, a, tau in zip(COUNTRIES, outcome.abatement, outcome.prices):
        print(f"  {name:<7} abatement/capita {a:12.4g}   price {tau:12.4g}")
    print(f"  aggregate abatement {outcome.aggregate:.6g}\n")


print("=" * 64)
print("1. Linear benefits, quadratic costs (prices in model units)")
print("=" * 64)
econ = EconomySpec(LinearBenefit(1e-9), QuadraticCost(1.0))

non = solve_noncooperative(profile, econ)
show("every country prices only its own damages", non)

print("price ratios are pure population ratios, whatever b and c are:")
print(f"  USA/Japan  : {price_ratio(non, 0, 1):6.2f}   (populations: {331/126:.2f})")
print(f"  USA/Sweden : {price_ratio(non, 0, 2):6.2f}   (populations: {331/10:.2f})")
print()
print("observed 2020 emission-weighted prices tell the opposite story:")
observed = {"USA": 0.73, "Japan": 1.93, "Sweden": 67.4}
print(f"  USA/Japan  : {observed['USA'] / observed['Japan']:6.2f}")
print(f"  USA/Sweden : {observed['USA'] / observed['Sweden']:6.2f}")
print()

opt = solve_global_optimum(profile, econ)
show("one world-welfare price for everyone", opt)

print("=" * 64)
print("2. Strictly concave benefits: a lone globally minded policy-maker")
print("=" * 64)
econ_log = EconomySpec(LogBenefit(1.0), QuadraticCost(1.0))
small = PopulationProfile([2.0, 1.0])
uniform = solve_global_optimum(small, econ_log)
mixed = solve_mixed_motives(small, econ_log, altruist=0)
nash = solve_noncooperative(small, econ_log)
print(f"  fully national aggregate   : {nash.aggregate:.6f}")
print(f"  one altruist aggregate     : {mixed.aggregate:.6f}")
print(f"  world optimum aggregate    : {uniform.aggregate:.6f}")
print(f"  altruist's unilateral price {mixed.prices[0]:.6f} exceeds the uniform "
      f"optimum {uniform.prices[0]:.6f}")
print("  (it compensates for everyone else's under-abatement, and convex costs")
print("   keep it from compensating fully, so total abatement still falls short)")
