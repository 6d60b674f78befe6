"""Command-line behavior: outputs, determinism, exit codes, chart reproducibility."""

import json
import subprocess
import sys

import pytest

from freerider.charts import spec_chart_svg
from freerider.cli import EXIT_CONFIG, EXIT_OK, main
from freerider.speccurve import spec_rows_from_csv
from freerider.synthetic import write_fixture, write_planted_fixture


@pytest.fixture(scope="module")
def fixture_config(tmp_path_factory):
    return write_fixture(tmp_path_factory.mktemp("fixture"))


def read_json(path):
    return json.loads(path.read_text(encoding="utf-8"))


# ---------------------------------------------------------------------------
# theory


def test_theory_footnote_ratios(tmp_path):
    out = tmp_path / "theory"
    code = main(
        [
            "theory",
            "--pop",
            "331e6,126e6,10e6",
            "--benefit",
            "linear:1",
            "--cost",
            "quad:1",
            "--out",
            str(out),
        ]
    )
    assert code == EXIT_OK
    report = read_json(out / "theory_report.json")
    ratios = {(r["country_i"], r["country_j"]): r["price_ratio"] for r in report["price_ratios"]}
    assert ratios[(1, 2)] == pytest.approx(2.6, rel=0.05)
    assert ratios[(1, 3)] == pytest.approx(33.0, rel=0.05)
    assert (out / "theory_regimes.csv").exists()
    assert (out / "theory_ratios.csv").exists()


def test_theory_single_country_regimes_coincide(tmp_path):
    out = tmp_path / "single"
    assert main(["theory", "--pop", "5", "--out", str(out)]) == EXIT_OK
    regimes = read_json(out / "theory_report.json")["regimes"]
    prices = {name: data["prices"][0] for name, data in regimes.items()}
    assert prices["noncooperative"] == pytest.approx(prices["global_optimum"], rel=1e-9)
    assert prices["mixed_motives"] == pytest.approx(prices["global_optimum"], rel=1e-9)


def test_theory_mixed_motives_flag_for_concave_benefit(tmp_path):
    out = tmp_path / "mixed"
    code = main(
        ["theory", "--pop", "2,1", "--benefit", "log:1", "--cost", "quad:1", "--out", str(out)]
    )
    assert code == EXIT_OK
    report = read_json(out / "theory_report.json")
    assert report["altruist_price_exceeds_uniform"] is True
    mixed = report["regimes"]["mixed_motives"]
    uniform = report["regimes"]["global_optimum"]
    assert mixed["prices"][0] > uniform["prices"][0]


def test_theory_bad_benefit_spec_exits_two(tmp_path):
    with pytest.raises(SystemExit) as err:
        main(["theory", "--pop", "1,2", "--benefit", "cubic:1", "--out", str(tmp_path)])
    assert err.value.code == 2


# ---------------------------------------------------------------------------
# coalition


def test_coalition_singleton(tmp_path):
    out = tmp_path / "c1"
    assert main(["coalition", "--pop", "10,3,2", "--out", str(out)]) == EXIT_OK
    report = read_json(out / "coalition_report.json")
    assert [r["members"] for r in report["enumerated"]] == [[1]]
    assert report["agreement"] is None


def test_coalition_oracle_agreement(tmp_path):
    out = tmp_path / "c2"
    assert main(["coalition", "--pop", "5,4,3", "--oracle", "--out", str(out)]) == EXIT_OK
    report = read_json(out / "coalition_report.json")
    assert report["agreement"] is True
    assert [r["members"] for r in report["oracle"]] == [[1, 2], [1, 3]]


def test_coalition_symmetric_requires_oracle(tmp_path):
    out = tmp_path / "c3"
    assert main(["coalition", "--pop", "1,1,1,1,1", "--out", str(out)]) == EXIT_CONFIG
    assert main(["coalition", "--pop", "1,1,1,1,1", "--oracle", "--out", str(out)]) == EXIT_OK
    report = read_json(out / "coalition_report.json")
    assert report["stable_sizes"] == [2, 3]


# ---------------------------------------------------------------------------
# empirics / ingest


def test_empirics_known_slope_fixture(tmp_path):
    config = write_planted_fixture(tmp_path / "fx", slope=5.0, noise_sd=0.0, seed=7)
    out = tmp_path / "out"
    code = main(["empirics", "--data-config", str(config), "--seed", "3", "--out", str(out)])
    assert code == EXIT_OK
    report = read_json(out / "empirics_report.json")
    univariate = next(r for r in report["spec_chart"] if r["spec_id"] == "univariate")
    assert univariate["coefficient"] == pytest.approx(5.0, abs=1e-9)
    assert univariate["r_squared"] == pytest.approx(1.0, abs=1e-12)


def test_empirics_known_null_fixture_all_cis_contain_zero(tmp_path):
    config = write_planted_fixture(tmp_path / "fx", slope=0.0, noise_sd=2.0, seed=11)
    out = tmp_path / "out"
    code = main(["empirics", "--data-config", str(config), "--seed", "3", "--out", str(out)])
    assert code == EXIT_OK
    rows = read_json(out / "empirics_report.json")["spec_chart"]
    assert all(r["ci_low"] <= 0.0 <= r["ci_high"] for r in rows)


def test_empirics_degenerate_subset_degrades_to_partial(tmp_path):
    from freerider.cli import EXIT_PARTIAL

    config = write_planted_fixture(tmp_path / "fx", slope=0.0, noise_sd=1.0, seed=4)
    prices = tmp_path / "fx" / "prices.csv"
    lines = prices.read_text().splitlines()
    prices.write_text("\n".join(lines[:6]) + "\n")  # only 5 priced countries left

    out = tmp_path / "out"
    code = main(["empirics", "--data-config", str(config), "--seed", "3", "--out", str(out)])
    assert code == EXIT_PARTIAL
    report = read_json(out / "empirics_report.json")
    assert report["full_model_failed"] is True
    assert "error" in report["full_model"]
    rows = report["spec_chart"]
    assert any(r["error"] for r in rows)  # wide specs cannot fit on 5 rows
    univariate = next(r for r in rows if r["spec_id"] == "univariate")
    assert not univariate["error"]  # the narrow spec still goes out
    assert (out / "spec_chart.svg").exists()


def test_empirics_needs_seed_for_imputation(tmp_path, monkeypatch, fixture_config):
    monkeypatch.delenv("FREERIDER_SEED", raising=False)
    out = tmp_path / "out"
    assert (
        main(["empirics", "--data-config", str(fixture_config), "--out", str(out)])
        == EXIT_CONFIG
    )


def test_empirics_seed_env_fallback_and_flag_priority(tmp_path, monkeypatch, fixture_config):
    monkeypatch.setenv("FREERIDER_SEED", "21")
    out_env = tmp_path / "env"
    assert (
        main(["empirics", "--data-config", str(fixture_config), "--out", str(out_env)])
        == EXIT_OK
    )
    assert read_json(out_env / "empirics_report.json")["metadata"]["seed"] == 21
    out_flag = tmp_path / "flag"
    assert (
        main(
            [
                "empirics",
                "--data-config",
                str(fixture_config),
                "--seed",
                "5",
                "--out",
                str(out_flag),
            ]
        )
        == EXIT_OK
    )
    assert read_json(out_flag / "empirics_report.json")["metadata"]["seed"] == 5


def test_empirics_deterministic_outputs(tmp_path, fixture_config):
    args = ["empirics", "--data-config", str(fixture_config), "--seed", "11"]
    out_a, out_b = tmp_path / "a", tmp_path / "b"
    assert main(args + ["--out", str(out_a)]) == EXIT_OK
    assert main(args + ["--out", str(out_b)]) == EXIT_OK
    for path_a in sorted(out_a.iterdir()):
        path_b = out_b / path_a.name
        assert path_a.read_bytes() == path_b.read_bytes(), path_a.name


def test_empirics_pipeline_mirrors_filter_and_vif(tmp_path, fixture_config):
    out = tmp_path / "out"
    assert (
        main(
            ["empirics", "--data-config", str(fixture_config), "--seed", "11", "--out", str(out)]
        )
        == EXIT_OK
    )
    report = read_json(out / "empirics_report.json")
    assert report["correlation"]["dropped"] == ["cc_awareness"]
    assert len(report["correlation"]["retained"]) == 7
    assert all(v <= 4.0 for v in report["vif_max"].values())
    assert len(report["spec_chart"]) == 16
    assert report["metadata"]["p_value_reference"] == "t"
    panel_names = {p["panel"] for p in report["panels"]}
    assert {"all", "all_positive", "europe", "europe_positive"} <= panel_names


def test_empirics_casewise_deletion_mode(tmp_path, fixture_config):
    out = tmp_path / "out"
    code = main(
        [
            "empirics",
            "--data-config",
            str(fixture_config),
            "--missing",
            "deletion",
            "--out",
            str(out),
        ]
    )
    assert code == EXIT_OK
    report = read_json(out / "empirics_report.json")
    assert report["missing_handling"] == "deletion"
    assert report["imputation"] is None
    full = next(r for r in report["spec_chart"] if r["spec_id"] == "full")
    univariate = next(r for r in report["spec_chart"] if r["spec_id"] == "univariate")
    assert full["n_obs"] <= univariate["n_obs"]


def test_reports_embed_complete_metadata_block(tmp_path, fixture_config):
    out = tmp_path / "out"
    assert (
        main(
            ["empirics", "--data-config", str(fixture_config), "--seed", "11", "--out", str(out)]
        )
        == EXIT_OK
    )
    meta = read_json(out / "empirics_report.json")["metadata"]
    assert meta["schema_version"] == 1
    assert meta["tool_version"]
    assert len(meta["config_hash"]) == 64
    assert meta["seed"] == 11
    assert meta["tolerances"] == {"corr_threshold": 0.75}

    out2 = tmp_path / "theory"
    assert main(["theory", "--pop", "2,1", "--out", str(out2)]) == EXIT_OK
    meta2 = read_json(out2 / "theory_report.json")["metadata"]
    assert meta2["tolerances"] == {"f_tol": 1e-12, "a_rtol": 1e-10}
    assert meta2["config_hash"] != meta["config_hash"]


def test_scatter_svg_rerenders_from_emitted_csv(tmp_path, fixture_config):
    import csv

    from freerider.charts import scatter_svg

    out = tmp_path / "out"
    assert (
        main(
            ["empirics", "--data-config", str(fixture_config), "--seed", "11", "--out", str(out)]
        )
        == EXIT_OK
    )
    with open(out / "scatter_all.csv", newline="", encoding="utf-8") as handle:
        points = [(float(r["population_share"]), float(r["ecp"])) for r in csv.DictReader(handle)]
    with open(out / "panel_fits.csv", newline="", encoding="utf-8") as handle:
        panel = next(r for r in csv.DictReader(handle) if r["panel"] == "all")
    caption = (
        f"R2={float(panel['r_squared']):.3f}; beta={float(panel['coefficient']):.2f}; "
        f"p={float(panel['p_value']):.2f}; N={panel['n_obs']}"
    )
    rendered = scatter_svg(
        [p[0] for p in points],
        [p[1] for p in points],
        float(panel["coefficient"]),
        float(panel["intercept"]),
        caption,
        "population share (% of world)",
        "carbon price (USD/tCO2e)",
    )
    assert rendered == (out / "scatter_all.svg").read_text(encoding="utf-8")


def test_spec_chart_svg_rerenders_from_csv(tmp_path, fixture_config):
    out = tmp_path / "out"
    assert (
        main(
            ["empirics", "--data-config", str(fixture_config), "--seed", "11", "--out", str(out)]
        )
        == EXIT_OK
    )
    rows = spec_rows_from_csv(out / "spec_chart.csv")
    report = read_json(out / "empirics_report.json")
    rendered = spec_chart_svg(rows, report["correlation"]["retained"])
    assert rendered == (out / "spec_chart.svg").read_text(encoding="utf-8")


def test_ingest_writes_canonical_csv_and_manifest(tmp_path, fixture_config):
    out = tmp_path / "out"
    assert main(["ingest", "--data-config", str(fixture_config), "--out", str(out)]) == EXIT_OK
    manifest = read_json(out / "manifest.json")
    assert manifest["n_rows"] == 195
    assert manifest["zero_filled"] == 155
    assert manifest["n_missing"]["cc_awareness"] == 76
    from freerider.dataset import CountryDataset, load_dataset

    reloaded = CountryDataset.from_canonical_csv(out / "dataset.csv")
    assert reloaded.equals(load_dataset(fixture_config))


def test_ingest_missing_config_exits_two(tmp_path):
    assert (
        main(["ingest", "--data-config", str(tmp_path / "nope.json"), "--out", str(tmp_path)])
        == EXIT_CONFIG
    )


def test_console_entry_point_runs():
    proc = subprocess.run(
        [sys.executable, "-m", "freerider.cli", "--version"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert "freerider" in proc.stdout
