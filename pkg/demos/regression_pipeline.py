"""End-to-end regression pipeline on the bundled synthetic country fixture.

Run with:
    python demos/regression_pipeline.py

Writes the fixture CSVs, ingests and validates them, then walks the full
chain -- summary statistics, collinearity filter, VIF, chained imputation,
Rubin pooling, specification chart -- and drops reports plus SVG charts in
demo_output/. The same chain run through the CLI:

    freerider empirics --data-config demo_output/fixture/mapping.json \
        --seed 11 --out demo_output/cli
"""

from pathlib import Path

from freerider import (
    CONTROL_COLUMNS,
    filter_collinear,
    impute_chained,
    load_dataset,
    ols_fit,
    pearson_matrix,
    specification_chart,
    subset,
    summary_stats,
    vif,
)
from freerider.charts import spec_chart_svg
from freerider.synthetic import write_fixture

out_dir = Path(__file__).resolve().parent.parent / "demo_output"
fixture_dir = out_dir / "fixture"
config = write_fixture(fixture_dir)
print(f"fixture written to {fixture_dir}")

dataset = load_dataset(config)
print(f"\ningested {dataset.n} countries; "
      f"{int(dataset.zero_filled.sum())} had no price and were zero-filled")

stats = summary_stats(dataset)
print("\nsummary statistics (selected rows):")
print(stats.loc[["ecp", "population_share", "cc_awareness"]].round(2).to_string())

print("\nunivariate price-on-share fits, by subset:")
for name, kind, k in (
    ("all countries", "all", None),
    ("without the two largest", "drop_largest_k", 2),
    ("Europe only", "europe_only", None),
):
    panel = subset(dataset, kind, k)
    pairs = panel.frame[["ecp", "population_share"]].dropna()
    fit = ols_fit(pairs, "ecp", ["population_share"])
    print(f"  {name:<25} N={fit.n_obs:<4} beta={fit.coefficient('population_share'):8.3f} "
          f"p={fit.p_value('population_share'):.2f} R2={fit.r_squared:.3f}")

positive = subset(dataset, "positive_price")
print(f"\nmultivariate analysis on the {positive.n} countries with a positive price")

missing = {c: int(positive.mask[c].sum()) for c in CONTROL_COLUMNS}
corr = pearson_matrix(positive, CONTROL_COLUMNS)
retained = filter_collinear(corr, threshold=0.75, priority=missing)
dropped = sorted(set(CONTROL_COLUMNS) - set(retained))
print(f"collinearity filter at |r| > 0.75 drops {dropped}; {len(retained)} controls retained")

run = impute_chained(positive, m=5, iterations=10, seed=11)
print(f"imputed {run.m} complete datasets (seed {run.seed})")

inflation = vif(run.completed[0], ["population_share", *retained])
print(f"largest variance inflation factor: {inflation.max():.2f}")

rows = specification_chart(run, "ecp", "population_share", retained)
crossing = sum(r.ci_contains_zero for r in rows)
print(f"\nspecification chart: {len(rows)} models, focal CI contains zero in "
      f"{crossing}/{len(rows)}")
for row in rows:
    marker = " " if row.ci_contains_zero else "*"
    print(f"  {row.spec_id:<28} beta={row.coefficient:8.3f} "
          f"[{row.ci_low:8.3f}, {row.ci_high:8.3f}] {marker}")

svg_path = out_dir / "spec_chart.svg"
svg_path.write_text(spec_chart_svg(rows, retained), encoding="utf-8")
print(f"\nchart written to {svg_path}")
