"""Deterministic synthetic fixtures shaped like the real country table.

The bundled data sources are licensed and not redistributable, so tests,
demos, and the default pipeline run on seeded synthetic stand-ins with the
same schema: 195 countries, a sparse price file, heterogeneous covariate
files with realistic missingness, and a region table. Smaller generators
plant exact linear relationships (or none) for pipeline property checks.
"""

from __future__ import annotations

import io
import json
from importlib import resources
from pathlib import Path

import numpy as np
import pandas as pd

from .dataset import CountryDataset

__all__ = [
    "region_table",
    "synthetic_country_table",
    "null_effect_dataset",
    "write_fixture",
    "write_planted_fixture",
    "DEFAULT_FIXTURE_SEED",
]

DEFAULT_FIXTURE_SEED = 20_200

GOVERNANCE_INDICATORS = (
    "voice_accountability",
    "political_stability",
    "govt_effectiveness",
    "regulatory_quality",
    "rule_of_law",
    "control_corruption",
)

# the three countries quoted in the predicted-vs-observed ratio check
_PINNED_PRICES = {"USA": 0.73, "JPN": 1.93, "SWE": 67.35}
_PINNED_POPULATIONS = {"CHN": 1.41e9, "IND": 1.38e9, "USA": 3.31e8, "JPN": 1.26e8, "SWE": 1.0e7}


def region_table() -> pd.DataFrame:
    """The bundled iso3 -> region lookup (195 countries, 45 in Europe)."""
    text = resources.files("freerider").joinpath("data/regions.csv").read_text("utf-8")
    return pd.read_csv(io.StringIO(text))


def _clip(values, low, high):
    return np.minimum(np.maximum(values, low), high)


def synthetic_country_table(seed: int, n: int = 60, keys=None) -> pd.DataFrame:
    """Complete covariate table with a realistic correlation structure.

    One latent development factor drives GDP, governance, awareness, CO2 and
    (inversely) air pollution; population shares are lognormal and sum to
    well under 100. No cell is missing; `ecp` is left out on purpose.
    """
    rng = np.random.default_rng(seed)
    if keys is None:
        keys = [f"S{i:03d}" for i in range(1, n + 1)]
    n = len(keys)

    development = rng.normal(0.0, 1.0, n)
    weights = rng.lognormal(0.0, 1.2, n)
    frame = pd.DataFrame(index=pd.Index(keys, name="iso3"))
    frame["population_share"] = 90.0 * weights / weights.sum()
    frame["gdp_per_capita"] = np.exp(8.6 + 1.1 * development + rng.normal(0, 0.35, n))
    governance = _clip(50.0 + 20.0 * development + rng.normal(0, 6.0, n), 0.5, 99.5)
    frame["governance_mean"] = governance
    frame["cc_awareness"] = _clip(15.0 + 0.75 * governance + rng.normal(0, 6.0, n), 0.0, 100.0)
    frame["fossil_share"] = _clip(55.0 + 22.0 * rng.normal(0, 1, n), 0.0, 100.0)
    frame["co2_per_capita"] = np.exp(
        0.4 + 0.75 * development + 0.012 * frame["fossil_share"] + rng.normal(0, 0.4, n)
    )
    frame["industry_share_gdp"] = _clip(25.0 + 8.0 * rng.normal(0, 1, n), 5.0, 60.0)
    frame["air_pollution"] = _clip(32.0 - 9.0 * development + rng.normal(0, 7.0, n), 5.0, 95.0)
    frame["damages_per_capita"] = 1e-7 * rng.normal(0.6, 1.5, n)
    return frame


def null_effect_dataset(seed: int, n: int = 60) -> CountryDataset:
    """Dataset whose price is pure noise: the focal coefficient is truly zero.

    Covariates keep their mutual correlations; a slice of cells is missing
    completely at random so the imputation path is exercised.
    """
    rng = np.random.default_rng([seed, 99])
    frame = synthetic_country_table(seed, n=n)
    n = len(frame)
    frame.insert(0, "ecp", 20.0 + 3.0 * rng.normal(0, 1, n))
    if float(frame["ecp"].min()) < 0.0:  # > 6 sigma; never at these parameters
        raise ValueError("null-effect price draw went negative; choose another seed")
    frame.insert(0, "region", pd.Series(np.nan, index=frame.index, dtype=object))

    for column, share in (
        ("cc_awareness", 0.15),
        ("fossil_share", 0.10),
        ("damages_per_capita", 0.10),
        ("air_pollution", 0.08),
    ):
        holes = rng.choice(n, size=int(round(share * n)), replace=False)
        frame.iloc[holes, frame.columns.get_loc(column)] = np.nan

    zero_filled = pd.Series(False, index=frame.index, name="zero_filled")
    return CountryDataset(frame=frame, zero_filled=zero_filled)


def _write_csv(path: Path, frame: pd.DataFrame) -> None:
    lines = [",".join(frame.columns)]
    for _, row in frame.iterrows():
        cells = []
        for value in row:
            if isinstance(value, float):
                cells.append("" if np.isnan(value) else repr(value))
            else:
                cells.append(str(value))
        lines.append(",".join(cells))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def _write_mapping(directory: Path, files: dict, region: bool) -> Path:
    mapping = {
        "key_column": "iso3",
        "price": {"file": files["prices"], "column": "ecp_usd_2019"},
        "columns": {
            "population_share": {"file": files["covariates"], "column": "pop_share_pct"},
            "co2_per_capita": {"file": files["covariates"], "column": "co2_t_pc"},
            "fossil_share": {"file": files["covariates"], "column": "fossil_pct_energy"},
            "gdp_per_capita": {"file": files["covariates"], "column": "gdp_pc_usd"},
            "industry_share_gdp": {"file": files["covariates"], "column": "industry_pct_gdp"},
            "governance_mean": {"file": files["governance"], "columns": list(GOVERNANCE_INDICATORS)},
            "air_pollution": {"file": files["pm25"], "column": "pm25_ugm3"},
            "cc_awareness": {"file": files["awareness"], "column": "aware_pct"},
            "damages_per_capita": {"file": files["damages"], "column": "dmg_pc_usd"},
        },
    }
    if region:
        mapping["region_table"] = "regions.csv"
    config = directory / "mapping.json"
    config.write_text(json.dumps(mapping, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return config


def write_fixture(directory, seed: int = DEFAULT_FIXTURE_SEED) -> Path:
    """Write the full 195-country fixture; returns the mapping-config path.

    40 countries carry a positive price (the USA/Japan/Sweden prices are
    pinned to the observed 0.73/1.93/67.35 for the ratio demos). Missingness
    mimics the real sources: sparse awareness data skewed toward low-income
    countries, thinner coverage for fossil shares, damages, air pollution.
    """
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(seed)

    regions = region_table()
    keys = list(regions["iso3"])
    table = synthetic_country_table(seed + 1, keys=keys)
    n = len(table)

    populations = rng.lognormal(np.log(9e6), 1.5, n)
    for iso3, pop in _PINNED_POPULATIONS.items():
        populations[keys.index(iso3)] = pop
    table["population_share"] = 100.0 * populations / populations.sum()

    europe = (regions.set_index("iso3")["region"] == "Europe").reindex(table.index)
    score = table["governance_mean"] + 25.0 * europe.to_numpy(dtype=float)
    score += rng.normal(0, 8.0, n)
    for iso3 in _PINNED_PRICES:
        score[iso3] = np.inf  # pinned countries always price carbon
    priced = score.sort_values(ascending=False).index[:40]
    prices = pd.Series(
        np.minimum(rng.lognormal(1.6, 1.1, len(priced)), 60.0), index=priced
    )
    for iso3, value in _PINNED_PRICES.items():
        prices[iso3] = value

    gdp_order = table["gdp_per_capita"].sort_values().index  # poorest first

    def knock_out(column: str, count: int, skew_poor: bool) -> None:
        if skew_poor:
            pool = gdp_order[: max(count * 2, count)]
            holes = rng.choice(len(pool), size=count, replace=False)
            rows = pool[holes]
        else:
            rows = rng.choice(table.index, size=count, replace=False)
        table.loc[rows, column] = np.nan

    knock_out("cc_awareness", 76, skew_poor=True)
    knock_out("fossil_share", 27, skew_poor=True)
    knock_out("damages_per_capita", 29, skew_poor=False)
    knock_out("air_pollution", 8, skew_poor=False)
    knock_out("industry_share_gdp", 8, skew_poor=False)
    knock_out("co2_per_capita", 7, skew_poor=False)
    table.loc[rng.choice(table.index, 1), "population_share"] = np.nan

    covariate_file = pd.DataFrame(
        {
            "iso3": table.index,
            "pop_share_pct": table["population_share"].to_numpy(),
            "co2_t_pc": table["co2_per_capita"].to_numpy(),
            "fossil_pct_energy": table["fossil_share"].to_numpy(),
            "gdp_pc_usd": table["gdp_per_capita"].to_numpy(),
            "industry_pct_gdp": table["industry_share_gdp"].to_numpy(),
        }
    )

    governance_file = pd.DataFrame({"iso3": table.index})
    governance = table["governance_mean"].to_numpy()
    for indicator in GOVERNANCE_INDICATORS:
        governance_file[indicator] = _clip(governance + rng.normal(0, 4.0, n), 0.0, 100.0)
    # a few countries miss individual indicator scores; the mean still exists
    for indicator in GOVERNANCE_INDICATORS:
        holes = rng.choice(n, size=5, replace=False)
        governance_file.loc[holes, indicator] = np.nan

    prices_frame = pd.DataFrame(
        {"iso3": list(priced), "year": 2020, "ecp_usd_2019": prices.to_numpy()}
    ).sort_values("iso3")

    def single_column(name: str, column: str) -> pd.DataFrame:
        present = table[~table[column].isna()]
        return pd.DataFrame({"iso3": present.index, name: present[column].to_numpy()})

    files = {
        "prices": "prices.csv",
        "covariates": "covariates.csv",
        "governance": "governance.csv",
        "pm25": "pm25.csv",
        "awareness": "awareness.csv",
        "damages": "damages.csv",
    }
    _write_csv(directory / files["prices"], prices_frame)
    _write_csv(directory / files["covariates"], covariate_file)
    _write_csv(directory / files["governance"], governance_file)
    _write_csv(directory / files["pm25"], single_column("pm25_ugm3", "air_pollution"))
    _write_csv(directory / files["awareness"], single_column("aware_pct", "cc_awareness"))
    _write_csv(directory / files["damages"], single_column("dmg_pc_usd", "damages_per_capita"))
    _write_csv(directory / "regions.csv", regions)
    return _write_mapping(directory, files, region=True)


def write_planted_fixture(
    directory,
    slope: float,
    noise_sd: float = 0.0,
    seed: int = 7,
    n: int = 80,
) -> Path:
    """Fixture with ecp = 10 + slope * population_share (+ optional noise).

    Every country has a price row and no cell is missing, so the imputation
    stage degenerates to the identity and a noiseless planted slope comes
    back exactly.
    """
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng([seed, 5])
    table = synthetic_country_table(seed, n=n)
    ecp = 10.0 + slope * table["population_share"].to_numpy()
    if noise_sd > 0.0:
        ecp = ecp + rng.normal(0.0, noise_sd, len(table))
    ecp = np.maximum(ecp, 0.0)

    prices_frame = pd.DataFrame(
        {"iso3": table.index, "year": 2020, "ecp_usd_2019": ecp}
    )
    covariate_file = pd.DataFrame(
        {
            "iso3": table.index,
            "pop_share_pct": table["population_share"].to_numpy(),
            "co2_t_pc": table["co2_per_capita"].to_numpy(),
            "fossil_pct_energy": table["fossil_share"].to_numpy(),
            "gdp_pc_usd": table["gdp_per_capita"].to_numpy(),
            "industry_pct_gdp": table["industry_share_gdp"].to_numpy(),
        }
    )
    governance_file = pd.DataFrame({"iso3": table.index})
    governance = table["governance_mean"].to_numpy()
    for offset, indicator in enumerate(GOVERNANCE_INDICATORS):
        governance_file[indicator] = _clip(governance + (offset - 2.5), 0.0, 100.0)

    files = {
        "prices": "prices.csv",
        "covariates": "covariates.csv",
        "governance": "governance.csv",
        "pm25": "pm25.csv",
        "awareness": "awareness.csv",
        "damages": "damages.csv",
    }
    _write_csv(directory / files["prices"], prices_frame)
    _write_csv(directory / files["covariates"], covariate_file)
    _write_csv(directory / files["governance"], governance_file)
    _write_csv(
        directory / files["pm25"],
        pd.DataFrame({"iso3": table.index, "pm25_ugm3": table["air_pollution"].to_numpy()}),
    )
    _write_csv(
        directory / files["awareness"],
        pd.DataFrame({"iso3": table.index, "aware_pct": table["cc_awareness"].to_numpy()}),
    )
    _write_csv(
        directory / files["damages"],
        pd.DataFrame(
            {"iso3": table.index, "dmg_pc_usd": table["damages_per_capita"].to_numpy()}
        ),
    )
    return _write_mapping(directory, files, region=False)
