"""Chained-equation imputation with Gaussian-noise draws, and Rubin pooling.

Each of the m completed datasets is produced by an independent deterministic
random stream derived from (seed, dataset index). Missing cells start at the
column median; the chain then cycles over incomplete columns in descending
missingness order, refits a linear model of that column on all others at their
current values, and redraws the missing cells as prediction plus Gaussian
noise at the fit's residual standard deviation. Gaussian draws (rather than
predictive mean matching) keep the procedure fully deterministic and
implementation-agnostic.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
import pandas as pd
from scipy import stats

from .dataset import LOGICAL_COLUMNS, CountryDataset

__all__ = ["ImputationError", "ImputationRun", "PooledFit", "impute_chained", "pool_rubin"]

logger = logging.getLogger(__name__)

MIN_OBSERVED_ROWS = 10


class ImputationError(ValueError):
    """Imputation preconditions violated."""


@dataclass(frozen=True)
class ImputationRun:
    """m completed datasets plus the parameters that produced them."""

    m: int
    seed: int
    iterations: int
    completed: list  # CountryDatasets (or DataFrames when the input was one)


@dataclass(frozen=True)
class PooledFit:
    """Rubin-combined estimates across m per-dataset fits."""

    names: tuple
    m: int
    coefficients: np.ndarray  # mean of the per-dataset coefficients
    within_variance: np.ndarray  # mean squared standard error
    between_variance: np.ndarray  # sample variance of the coefficients
    total_variance: np.ndarray  # within + (1 + 1/m) * between
    standard_errors: np.ndarray
    t_stats: np.ndarray
    p_values: np.ndarray
    dof: np.ndarray  # per-coefficient degrees of freedom
    n_obs: int

    def coefficient(self, name: str) -> float:
        return float(self.coefficients[self.names.index(name)])

    def conf_int(self, name: str, level: float = 0.95) -> tuple:
        idx = self.names.index(name)
        half = float(stats.t.ppf(0.5 + level / 2.0, self.dof[idx])) * float(
            self.standard_errors[idx]
        )
        return float(self.coefficients[idx]) - half, float(self.coefficients[idx]) + half

    def p_value(self, name: str) -> float:
        return float(self.p_values[self.names.index(name)])


def _independent_columns(X: np.ndarray, names: list) -> list:
    """Indices of a maximal independent column set, in order; drops the rest."""
    keep = []
    for j in range(X.shape[1]):
        candidate = X[:, keep + [j]]
        if np.linalg.matrix_rank(candidate) == len(keep) + 1:
            keep.append(j)
        else:
            logger.warning("imputation model: dropping collinear regressor '%s'", names[j])
    return keep


def _impute_frame(frame: pd.DataFrame, columns, iterations: int, rng) -> pd.DataFrame:
    values = frame[columns].to_numpy(dtype=float)
    missing = np.isnan(values)
    counts = missing.sum(axis=0)
    incomplete = [j for j in np.argsort(-counts, kind="stable") if counts[j] > 0]

    for j in range(len(columns)):
        if counts[j]:
            observed = values[~missing[:, j], j]
            values[missing[:, j], j] = float(np.median(observed))

    for _ in range(iterations):
        for j in incomplete:
            rows_obs = ~missing[:, j]
            others = [c for c in range(len(columns)) if c != j]
            X = np.column_stack([np.ones(len(values)), values[:, others]])
            names = ["intercept"] + [columns[c] for c in others]
            keep = _independent_columns(X[rows_obs], names)
            Xk = X[:, keep]
            coef, *_ = np.linalg.lstsq(Xk[rows_obs], values[rows_obs, j], rcond=None)
            fitted = Xk[rows_obs] @ coef
            resid = values[rows_obs, j] - fitted
            dof = int(rows_obs.sum()) - len(keep)
            sigma = float(np.sqrt((resid @ resid) / dof)) if dof > 0 else 0.0
            prediction = Xk[missing[:, j]] @ coef
            values[missing[:, j], j] = prediction + rng.normal(0.0, sigma, missing[:, j].sum())

    out = frame.copy()
    out[columns] = values
    return out


def impute_chained(data, m: int = 5, iterations: int = 10, *, seed: int) -> ImputationRun:
    """Produce m completed copies of `data` (CountryDataset or DataFrame).

    Every incomplete numeric column needs at least 10 observed rows and at
    least one numeric column must be complete. Observed cells are never
    touched; the same seed reproduces the run bit for bit.
    """
    if m < 1 or iterations < 1:
        raise ImputationError("m and iterations must be >= 1")
    is_dataset = isinstance(data, CountryDataset)
    frame = data.frame if is_dataset else data
    if is_dataset:
        columns = [c for c in LOGICAL_COLUMNS if c in frame.columns]
    else:
        columns = [c for c in frame.columns if pd.api.types.is_numeric_dtype(frame[c])]
    if not columns:
        raise ImputationError("no numeric columns to impute")

    n_missing = frame[columns].isna().sum()
    incomplete = [c for c in columns if n_missing[c] > 0]
    for col in incomplete:
        observed = len(frame) - int(n_missing[col])
        if observed < MIN_OBSERVED_ROWS:
            raise ImputationError(
                f"column '{col}' has only {observed} observed rows "
                f"(needs >= {MIN_OBSERVED_ROWS})"
            )
    if incomplete and not any(n_missing[c] == 0 for c in columns):
        raise ImputationError("at least one numeric column must be complete")

    completed = []
    for k in range(m):
        if incomplete:
            rng = np.random.default_rng([int(seed), k])
            filled = _impute_frame(frame, columns, iterations, rng)
        else:
            filled = frame.copy()
        if is_dataset:
            completed.append(CountryDataset(frame=filled, zero_filled=data.zero_filled.copy()))
        else:
            completed.append(filled)
    return ImputationRun(m=m, seed=int(seed), iterations=iterations, completed=completed)


def pool_rubin(fits) -> PooledFit:
    """Combine m OlsFits: mean estimates, within/between/total variances.

    p-values use the t reference with Barnard-Rubin adjusted degrees of
    freedom; with zero between-imputation variance the pooled inference
    reduces exactly to the single complete-data fit.
    """
    fits = list(fits)
    if not fits:
        raise ImputationError("pool_rubin needs at least one fit")
    first = fits[0]
    for fit in fits[1:]:
        if fit.names != first.names:
            raise ImputationError(
                f"mismatched regressor sets: {fit.names} vs {first.names}"
            )
        if fit.n_obs != first.n_obs:
            raise ImputationError("fits were computed on different sample sizes")

    m = len(fits)
    coefs = np.array([fit.coefficients for fit in fits])
    ses = np.array([fit.standard_errors for fit in fits])
    qbar = coefs.mean(axis=0)
    ubar = (ses**2).mean(axis=0)
    if m > 1:
        between = coefs.var(axis=0, ddof=1)
        # bitwise-identical fits have no imputation variability; the sample
        # variance can still pick up 1-ulp noise from the mean, so zero it
        between[np.all(coefs == coefs[:1], axis=0)] = 0.0
    else:
        between = np.zeros_like(qbar)
    total = ubar + (1.0 + 1.0 / m) * between

    dof_complete = float(first.dof)
    dof = np.empty_like(qbar)
    for idx in range(qbar.size):
        if between[idx] == 0.0:
            # no imputation variability: classical complete-data inference
            dof[idx] = dof_complete
            continue
        lam = (1.0 + 1.0 / m) * between[idx] / total[idx]
        nu_old = (m - 1) / lam**2
        nu_obs = (dof_complete + 1.0) / (dof_complete + 3.0) * dof_complete * (1.0 - lam)
        dof[idx] = nu_old if nu_obs <= 0.0 else (nu_old * nu_obs) / (nu_old + nu_obs)

    se = np.sqrt(total)
    with np.errstate(divide="ignore", invalid="ignore"):
        tvals = np.where(se > 0.0, qbar / se, np.inf * np.sign(qbar))
    pvals = 2.0 * stats.t.sf(np.abs(tvals), dof)
    return PooledFit(
        names=first.names,
        m=m,
        coefficients=qbar,
        within_variance=ubar,
        between_variance=between,
        total_variance=total,
        standard_errors=se,
        t_stats=tvals,
        p_values=pvals,
        dof=dof,
        n_obs=first.n_obs,
    )
