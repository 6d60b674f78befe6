"""Specification chart: one focal coefficient across a grid of model specs.

The series is fixed: a univariate model, the full model, one row per single
covariate added to the univariate model, and one row per covariate left out
of the full model (2 + k + k rows for k covariates; just the univariate row
when k = 0). Each spec is fitted on every completed dataset of an imputation
run and Rubin-pooled; a case-wise deletion variant fits each spec once on its
own complete cases.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dataset import CountryDataset
from .imputation import ImputationRun, pool_rubin
from .regression import ols_fit

__all__ = [
    "SpecChartRow",
    "spec_series",
    "specification_chart",
    "specification_chart_casewise",
    "spec_rows_to_records",
    "spec_rows_from_csv",
]


@dataclass(frozen=True)
class SpecChartRow:
    """One fitted specification: focal estimate, 95% CI, fit diagnostics."""

    spec_id: str
    included: tuple  # covariates beyond the focal regressor
    coefficient: float
    ci_low: float
    ci_high: float
    p_value: float
    r_squared: float
    n_obs: int
    error: str | None = None

    @property
    def failed(self) -> bool:
        return self.error is not None

    @property
    def ci_contains_zero(self) -> bool:
        return self.ci_low <= 0.0 <= self.ci_high


def spec_series(covariates) -> list:
    """(spec_id, included covariates) in chart order."""
    covariates = list(covariates)
    if not covariates:
        return [("univariate", ())]
    series = [("univariate", ()), ("full", tuple(covariates))]
    series += [(f"add:{c}", (c,)) for c in covariates]
    series += [
        (f"drop:{c}", tuple(x for x in covariates if x != c)) for c in covariates
    ]
    return series


def _failed_row(spec_id, included, exc) -> SpecChartRow:
    return SpecChartRow(
        spec_id=spec_id,
        included=tuple(included),
        coefficient=float("nan"),
        ci_low=float("nan"),
        ci_high=float("nan"),
        p_value=float("nan"),
        r_squared=float("nan"),
        n_obs=0,
        error=str(exc),
    )


def specification_chart(run: ImputationRun, y: str, focal: str, covariates) -> list:
    """Rubin-pooled focal estimates per spec across the imputed datasets."""
    rows = []
    for spec_id, included in spec_series(covariates):
        regressors = [focal, *included]
        try:
            fits = [ols_fit(ds, y, regressors) for ds in run.completed]
            pooled = pool_rubin(fits)
            low, high = pooled.conf_int(focal)
            rows.append(
                SpecChartRow(
                    spec_id=spec_id,
                    included=included,
                    coefficient=pooled.coefficient(focal),
                    ci_low=low,
                    ci_high=high,
                    p_value=pooled.p_value(focal),
                    r_squared=float(np.mean([fit.r_squared for fit in fits])),
                    n_obs=pooled.n_obs,
                )
            )
        except Exception as exc:  # keep the chart, mark the row
            rows.append(_failed_row(spec_id, included, exc))
    return rows


SPEC_CSV_HEADER = (
    "spec_id",
    "included",
    "coefficient",
    "ci_low",
    "ci_high",
    "p_value",
    "r_squared",
    "n_obs",
    "error",
)


def spec_rows_to_records(rows) -> list:
    """Rows as flat tuples in SPEC_CSV_HEADER order (included ';'-joined)."""
    records = []
    for row in rows:
        records.append(
            (
                row.spec_id,
                ";".join(row.included),
                row.coefficient,
                row.ci_low,
                row.ci_high,
                row.p_value,
                row.r_squared,
                row.n_obs,
                row.error or "",
            )
        )
    return records


def spec_rows_from_csv(path) -> list:
    """Inverse of the CSV emission; lets charts be re-rendered from disk."""
    import csv

    rows = []
    with open(path, newline="", encoding="utf-8") as handle:
        for record in csv.DictReader(handle):
            rows.append(
                SpecChartRow(
                    spec_id=record["spec_id"],
                    included=tuple(c for c in record["included"].split(";") if c),
                    coefficient=float(record["coefficient"]) if record["coefficient"] else float("nan"),
                    ci_low=float(record["ci_low"]) if record["ci_low"] else float("nan"),
                    ci_high=float(record["ci_high"]) if record["ci_high"] else float("nan"),
                    p_value=float(record["p_value"]) if record["p_value"] else float("nan"),
                    r_squared=float(record["r_squared"]) if record["r_squared"] else float("nan"),
                    n_obs=int(record["n_obs"]),
                    error=record["error"] or None,
                )
            )
    return rows


def specification_chart_casewise(ds: CountryDataset, y: str, focal: str, covariates) -> list:
    """Deletion variant: each spec fitted once on its own complete cases."""
    rows = []
    for spec_id, included in spec_series(covariates):
        regressors = [focal, *included]
        try:
            used = ds.frame[[y, *regressors]]
            complete = ds.frame[~used.isna().any(axis=1)]
            fit = ols_fit(complete, y, regressors)
            low, high = fit.conf_int(focal)
            rows.append(
                SpecChartRow(
                    spec_id=spec_id,
                    included=included,
                    coefficient=fit.coefficient(focal),
                    ci_low=low,
                    ci_high=high,
                    p_value=fit.p_value(focal),
                    r_squared=fit.r_squared,
                    n_obs=fit.n_obs,
                )
            )
        except Exception as exc:
            rows.append(_failed_row(spec_id, included, exc))
    return rows
