"""Country-level dataset: CSV ingestion, validation, subsets, summary statistics.

The canonical table has one row per ISO-3166 alpha-3 code and ten numeric
columns (an emission-weighted carbon price plus nine covariates). Countries
without a price row are zero-filled and flagged; a governance score is the
mean of whichever of the six indicator columns are present. Input files are
UTF-8 CSV with a header row, '.' decimals, and empty cells for missing values.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import pandas as pd

__all__ = [
    "IngestError",
    "CountryDataset",
    "LOGICAL_COLUMNS",
    "COVARIATE_COLUMNS",
    "FOCAL_COLUMN",
    "CONTROL_COLUMNS",
    "PERCENT_COLUMNS",
    "load_dataset",
    "summary_stats",
    "subset",
    "SUBSET_KINDS",
]

LOGICAL_COLUMNS = (
    "ecp",
    "population_share",
    "co2_per_capita",
    "fossil_share",
    "gdp_per_capita",
    "governance_mean",
    "industry_share_gdp",
    "air_pollution",
    "cc_awareness",
    "damages_per_capita",
)
COVARIATE_COLUMNS = LOGICAL_COLUMNS[1:]
FOCAL_COLUMN = "population_share"
# regression controls: every covariate except the focal population share
CONTROL_COLUMNS = tuple(c for c in COVARIATE_COLUMNS if c != FOCAL_COLUMN)
PERCENT_COLUMNS = (
    "population_share",
    "fossil_share",
    "governance_mean",
    "industry_share_gdp",
    "cc_awareness",
)
SUBSET_KINDS = ("all", "positive_price", "europe_only", "drop_largest_k")

_PCT_TOL = 1e-9


class IngestError(ValueError):
    """Unreadable input, bad mapping, duplicate key, or invalid cell."""


@dataclass(frozen=True)
class CountryDataset:
    """Immutable country table keyed by ISO3, with missingness and provenance."""

    frame: pd.DataFrame  # index iso3 (sorted), LOGICAL_COLUMNS + 'region'
    zero_filled: pd.Series  # True where ecp was absent from the price source

    def __post_init__(self):
        if self.frame.index.has_duplicates:
            dup = self.frame.index[self.frame.index.duplicated()][0]
            raise IngestError(f"duplicate country key '{dup}'")

    @property
    def n(self) -> int:
        return int(len(self.frame))

    @property
    def mask(self) -> pd.DataFrame:
        """Per-cell missingness flags (True = missing) for the numeric columns."""
        return self.frame[list(LOGICAL_COLUMNS)].isna()

    def copy_with(self, frame: pd.DataFrame) -> "CountryDataset":
        return CountryDataset(frame=frame, zero_filled=self.zero_filled.loc[frame.index].copy())

    def manifest(self) -> dict:
        missing = self.mask.sum()
        return {
            "n_rows": self.n,
            "n_missing": {col: int(missing[col]) for col in LOGICAL_COLUMNS},
            "zero_filled": int(self.zero_filled.sum()),
        }

    def to_canonical_csv(self, path) -> None:
        """Serialize deterministically: sorted keys, repr floats, empty = missing."""
        lines = ["iso3,region," + ",".join(LOGICAL_COLUMNS) + ",zero_filled"]
        for iso3 in self.frame.index:
            row = self.frame.loc[iso3]
            region = row.get("region")
            cells = [str(iso3), "" if pd.isna(region) else str(region)]
            for col in LOGICAL_COLUMNS:
                value = row[col]
                cells.append("" if pd.isna(value) else repr(float(value)))
            cells.append("1" if bool(self.zero_filled.loc[iso3]) else "0")
            lines.append(",".join(cells))
        Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")

    @classmethod
    def from_canonical_csv(cls, path) -> "CountryDataset":
        raw = pd.read_csv(path, dtype=str, keep_default_na=False)
        frame = pd.DataFrame(index=pd.Index(raw["iso3"], name="iso3"))
        frame["region"] = [cell if cell else np.nan for cell in raw["region"]]
        for col in LOGICAL_COLUMNS:
            frame[col] = [float(cell) if cell else np.nan for cell in raw[col]]
        zero_filled = pd.Series(
            [cell == "1" for cell in raw["zero_filled"]], index=frame.index, name="zero_filled"
        )
        return cls(frame=frame[["region", *LOGICAL_COLUMNS]], zero_filled=zero_filled)

    def equals(self, other: "CountryDataset") -> bool:
        if list(self.frame.index) != list(other.frame.index):
            return False
        if not self.zero_filled.equals(other.zero_filled):
            return False
        a = self.frame["region"].fillna("")
        b = other.frame["region"].fillna("")
        if not a.equals(b):
            return False
        left = self.frame[list(LOGICAL_COLUMNS)].to_numpy(dtype=float)
        right = other.frame[list(LOGICAL_COLUMNS)].to_numpy(dtype=float)
        same_nan = np.isnan(left) == np.isnan(right)
        close = np.isclose(left, right, rtol=1e-12, atol=0.0, equal_nan=True)
        return bool(np.all(same_nan) and np.all(close))


def _read_raw_csv(path: Path) -> pd.DataFrame:
    try:
        return pd.read_csv(path, dtype=str, keep_default_na=False, encoding="utf-8")
    except FileNotFoundError:
        raise IngestError(f"unreadable file: {path} does not exist")
    except Exception as exc:  # malformed CSV, permission, ...
        raise IngestError(f"unreadable file {path}: {exc}")


def _numeric(cell: str, path, row_number: int, column: str) -> float:
    cell = cell.strip()
    if cell == "":
        return np.nan
    try:
        return float(cell)
    except ValueError:
        raise IngestError(
            f"non-numeric cell in {path} at row {row_number}, column '{column}': {cell!r}"
        )


class _SourceFile:
    """One parsed CSV keyed by country, optionally collapsed to latest year."""

    def __init__(self, path: Path, key_column: str, year_column=None, latest=False):
        self.path = path
        raw = _read_raw_csv(path)
        if key_column not in raw.columns:
            raise IngestError(f"{path}: key column '{key_column}' not found")
        raw = raw.copy()
        raw["__row__"] = np.arange(2, len(raw) + 2)  # header is row 1
        if year_column is not None and latest:
            if year_column not in raw.columns:
                raise IngestError(f"{path}: year column '{year_column}' not found")
            years = [
                _numeric(cell, path, rownum, year_column)
                for cell, rownum in zip(raw[year_column], raw["__row__"])
            ]
            # rows with no year lose to any dated row for the same country
            raw = raw.assign(__year__=np.nan_to_num(np.asarray(years), nan=-np.inf))
            raw = raw.sort_values("__year__", kind="mergesort").groupby(
                key_column, sort=False
            ).tail(1)
        keys = raw[key_column]
        if keys.duplicated().any():
            dup = keys[keys.duplicated()].iloc[0]
            raise IngestError(f"{path}: duplicate key '{dup}'")
        self.raw = raw.set_index(key_column)

    def keys(self):
        return list(self.raw.index)

    def column(self, name: str) -> pd.Series:
        if name not in self.raw.columns:
            raise IngestError(f"{self.path}: column '{name}' not found")
        values = [
            _numeric(cell, self.path, rownum, name)
            for cell, rownum in zip(self.raw[name], self.raw["__row__"])
        ]
        return pd.Series(values, index=self.raw.index, dtype=float)


def _load_config(config) -> tuple:
    if isinstance(config, (str, Path)):
        path = Path(config)
        try:
            mapping = json.loads(path.read_text(encoding="utf-8"))
        except FileNotFoundError:
            raise IngestError(f"unreadable file: {path} does not exist")
        except json.JSONDecodeError as exc:
            raise IngestError(f"invalid config {path}: {exc}")
        return mapping, path.parent
    return dict(config), Path(".")


def load_dataset(config, latest: bool = False) -> CountryDataset:
    """Join the configured source files into a validated CountryDataset.

    `config` is a JSON file path or dict with:
      key_column    name of the ISO3 column shared by all files
      price         {"file", "column", optional "year_column"}
      columns       mapping of each remaining logical column to
                    {"file", "column"} or, for governance_mean,
                    {"file", "columns": [six indicator columns]}
      region_table  optional CSV with iso3,country,region
    File paths are resolved relative to the config file. Countries missing
    from the price file get ecp = 0 with a zero-filled provenance flag.
    """
    mapping, base = _load_config(config)
    key_column = mapping.get("key_column", "iso3")
    if "price" not in mapping or "column" not in mapping.get("price", {}):
        raise IngestError("unmapped mandatory column 'ecp' (config needs a 'price' block)")
    column_specs = mapping.get("columns", {})
    for logical in COVARIATE_COLUMNS:
        if logical not in column_specs:
            raise IngestError(f"unmapped mandatory column '{logical}'")

    files: dict = {}

    def source(spec) -> _SourceFile:
        rel = spec["file"]
        if rel not in files:
            files[rel] = _SourceFile(
                base / rel, key_column, spec.get("year_column"), latest
            )
        return files[rel]

    price_spec = mapping["price"]
    price_file = source(price_spec)
    covariates = {}
    for logical in COVARIATE_COLUMNS:
        spec = column_specs[logical]
        src = source(spec)
        if "columns" in spec:
            parts = pd.concat([src.column(c) for c in spec["columns"]], axis=1)
            covariates[logical] = parts.mean(axis=1, skipna=True)
        elif "column" in spec:
            covariates[logical] = src.column(spec["column"])
        else:
            raise IngestError(f"column mapping for '{logical}' needs 'column' or 'columns'")

    universe = set(price_file.keys())
    for series in covariates.values():
        universe |= set(series.index)
    index = pd.Index(sorted(universe), name="iso3")

    frame = pd.DataFrame(index=index)
    raw_price = price_file.column(price_spec["column"]).reindex(index)
    zero_filled = raw_price.isna()
    frame["ecp"] = raw_price.fillna(0.0)
    for logical in COVARIATE_COLUMNS:
        frame[logical] = covariates[logical].reindex(index)

    region = pd.Series(np.nan, index=index, dtype=object)
    if mapping.get("region_table"):
        table = _read_raw_csv(base / mapping["region_table"])
        for needed in ("iso3", "region"):
            if needed not in table.columns:
                raise IngestError(f"region table must have an '{needed}' column")
        lookup = table.set_index("iso3")["region"]
        if lookup.index.has_duplicates:
            raise IngestError("region table has duplicate country keys")
        region = lookup.reindex(index).astype(object)
    frame.insert(0, "region", region)

    _validate(frame)
    return CountryDataset(frame=frame, zero_filled=zero_filled.rename("zero_filled"))


def _validate(frame: pd.DataFrame) -> None:
    negative = frame.index[frame["ecp"] < 0.0]
    if len(negative):
        raise IngestError(f"negative carbon price for '{negative[0]}'")
    for col in PERCENT_COLUMNS:
        values = frame[col]
        bad = frame.index[(values < -_PCT_TOL) | (values > 100.0 + _PCT_TOL)]
        if len(bad):
            raise IngestError(
                f"column '{col}' outside [0, 100] for '{bad[0]}': {float(values[bad[0]])!r}"
            )
    share_sum = float(frame["population_share"].sum(skipna=True))
    if share_sum > 100.0 + 1e-6:
        raise IngestError(f"population shares sum to {share_sum!r} > 100")


def summary_stats(ds: CountryDataset) -> pd.DataFrame:
    """Per-column min/p25/median/mean/p75/max over observed values, plus n_missing."""
    rows = {}
    for col in LOGICAL_COLUMNS:
        values = ds.frame[col].to_numpy(dtype=float)
        observed = values[~np.isnan(values)]
        if observed.size == 0:
            raise IngestError(f"column '{col}' has no observed values")
        rows[col] = {
            "min": float(observed.min()),
            "p25": float(np.percentile(observed, 25)),
            "median": float(np.percentile(observed, 50)),
            "mean": float(observed.mean()),
            "p75": float(np.percentile(observed, 75)),
            "max": float(observed.max()),
            "n_missing": int(np.isnan(values).sum()),
        }
    return pd.DataFrame.from_dict(rows, orient="index")


def subset(ds: CountryDataset, kind: str, k: int | None = None) -> CountryDataset:
    """Filtered copy: 'all', 'positive_price', 'europe_only', or 'drop_largest_k'."""
    if kind == "all":
        return ds.copy_with(ds.frame.copy())
    if kind == "positive_price":
        return ds.copy_with(ds.frame[ds.frame["ecp"] > 0.0].copy())
    if kind == "europe_only":
        region = ds.frame["region"]
        if region.isna().all():
            raise IngestError("unknown region mapping: load with a region_table to "
                              "use the European subset")
        return ds.copy_with(ds.frame[region == "Europe"].copy())
    if kind == "drop_largest_k":
        if k is None or k < 0:
            raise IngestError("drop_largest_k requires a non-negative k")
        shares = ds.frame["population_share"].fillna(-np.inf)
        order = shares.sort_values(ascending=False, kind="mergesort").index
        keep = ds.frame.index.difference(order[:k], sort=False)
        return ds.copy_with(ds.frame.loc[ds.frame.index.isin(keep)].copy())
    raise IngestError(f"unknown subset '{kind}' (expected one of {SUBSET_KINDS})")
