"""OLS with classical inference, pairwise correlation, collinearity filtering, VIF."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import pandas as pd
import scipy.linalg
from scipy import stats

__all__ = [
    "RegressionError",
    "RankDeficientError",
    "OlsFit",
    "ols_fit",
    "pearson_matrix",
    "filter_collinear",
    "vif",
]

INTERCEPT = "intercept"


class RegressionError(ValueError):
    """Bad regression input: missing data, too few rows, unknown column."""


class RankDeficientError(RegressionError):
    """Design matrix is rank deficient; names the offending column."""

    def __init__(self, column: str):
        super().__init__(f"design matrix is rank deficient: column '{column}' is "
                         "linearly dependent on the preceding regressors")
        self.column = column


@dataclass(frozen=True)
class OlsFit:
    """Least-squares fit with intercept and classical (homoskedastic) errors."""

    names: tuple  # intercept first, then regressors in call order
    coefficients: np.ndarray
    standard_errors: np.ndarray
    t_stats: np.ndarray
    p_values: np.ndarray
    r_squared: float
    n_obs: int
    dof: int
    sigma2: float  # residual variance RSS / dof

    def coefficient(self, name: str) -> float:
        return float(self.coefficients[self.names.index(name)])

    def standard_error(self, name: str) -> float:
        return float(self.standard_errors[self.names.index(name)])

    def p_value(self, name: str) -> float:
        return float(self.p_values[self.names.index(name)])

    def conf_int(self, name: str, level: float = 0.95) -> tuple:
        """Two-sided t confidence interval for one coefficient."""
        half = float(stats.t.ppf(0.5 + level / 2.0, self.dof)) * self.standard_error(name)
        center = self.coefficient(name)
        return center - half, center + half


def _frame_of(data) -> pd.DataFrame:
    return data.frame if hasattr(data, "frame") else data


def _design(frame: pd.DataFrame, y: str, regressors) -> tuple:
    for col in [y, *regressors]:
        if col not in frame.columns:
            raise RegressionError(f"unknown column '{col}'")
    used = frame[[y, *regressors]].to_numpy(dtype=float)
    if np.isnan(used).any():
        raise RegressionError(
            "missing values among the used columns; impute or subset to complete cases first"
        )
    yv = used[:, 0]
    X = np.column_stack([np.ones(len(yv)), used[:, 1:]])
    return yv, X


def ols_fit(data, y: str, regressors, robust: bool = False) -> OlsFit:
    """OLS of column y on the named regressors plus an always-included intercept.

    Classical standard errors by default; two-sided p-values from the t
    distribution with n - k - 1 degrees of freedom. `robust=True` switches to
    HC1 heteroskedasticity-consistent errors. `data` may be a CountryDataset
    or DataFrame.
    """
    regressors = list(regressors)
    yv, X = _design(_frame_of(data), y, regressors)
    names = (INTERCEPT, *regressors)
    return _ols_matrix(yv, X, names, robust=robust)


def _ols_matrix(yv: np.ndarray, X: np.ndarray, names, robust: bool = False) -> OlsFit:
    n, p = X.shape
    if n <= p:
        raise RegressionError(
            f"insufficient observations: n={n} with {p - 1} regressors plus intercept"
        )
    q, r, piv = scipy.linalg.qr(X, mode="economic", pivoting=True)
    diag = np.abs(np.diag(r))
    tol = max(n, p) * np.finfo(float).eps * (diag.max() if diag.size else 0.0)
    rank = int(np.sum(diag > tol))
    if rank < p:
        raise RankDeficientError(names[piv[rank]])

    q, r = np.linalg.qr(X)
    coef = scipy.linalg.solve_triangular(r, q.T @ yv)
    resid = yv - X @ coef
    rss = float(resid @ resid)
    dof = n - p
    sigma2 = rss / dof
    r_inv = scipy.linalg.solve_triangular(r, np.eye(p))
    xtx_inv = r_inv @ r_inv.T
    if robust:  # HC1 sandwich with the usual n/(n-p) small-sample factor
        meat = (X * (resid**2)[:, None]).T @ X
        cov = xtx_inv @ meat @ xtx_inv * (n / dof)
    else:
        cov = sigma2 * xtx_inv
    se = np.sqrt(np.diag(cov))
    tvals = coef / se
    pvals = 2.0 * stats.t.sf(np.abs(tvals), dof)

    tss = float(np.sum((yv - yv.mean()) ** 2))
    if tss > 0.0:
        r2 = max(0.0, 1.0 - rss / tss)
    else:
        r2 = 1.0 if rss <= np.finfo(float).eps else 0.0
    return OlsFit(
        names=tuple(names),
        coefficients=coef,
        standard_errors=se,
        t_stats=tvals,
        p_values=pvals,
        r_squared=r2,
        n_obs=n,
        dof=dof,
        sigma2=sigma2,
    )


def pearson_matrix(data, columns) -> pd.DataFrame:
    """Pairwise-complete Pearson correlations; unit diagonal, symmetric."""
    frame = _frame_of(data)
    columns = list(columns)
    values = frame[columns].to_numpy(dtype=float)
    k = len(columns)
    out = np.eye(k)
    for i in range(k):
        for j in range(i + 1, k):
            both = ~np.isnan(values[:, i]) & ~np.isnan(values[:, j])
            if both.sum() < 3:
                raise RegressionError(
                    f"columns '{columns[i]}' and '{columns[j]}' share fewer than 3 "
                    "complete observations"
                )
            r = np.corrcoef(values[both, i], values[both, j])[0, 1]
            out[i, j] = out[j, i] = float(np.clip(r, -1.0, 1.0))
    return pd.DataFrame(out, index=columns, columns=columns)


def filter_collinear(matrix: pd.DataFrame, threshold: float = 0.75, priority=None) -> list:
    """Columns retained after dropping one side of each |r| > threshold pair.

    For every offending pair the column with more missing values (per the
    `priority` mapping of column -> missing count) is dropped; ties drop the
    later column in the matrix's column order. Deterministic: the pair with
    the largest |r| is resolved first.
    """
    priority = dict(priority or {})
    order = list(matrix.columns)
    retained = list(order)
    while True:
        worst = None
        for a_pos, a in enumerate(retained):
            for b in retained[a_pos + 1 :]:
                r = abs(float(matrix.loc[a, b]))
                if r > threshold and (worst is None or r > worst[0]):
                    worst = (r, a, b)
        if worst is None:
            return retained
        _, a, b = worst
        miss_a, miss_b = priority.get(a, 0), priority.get(b, 0)
        if miss_a > miss_b:
            drop = a
        elif miss_b > miss_a:
            drop = b
        else:
            drop = b if order.index(b) > order.index(a) else a
        retained.remove(drop)


def vif(data, columns) -> pd.Series:
    """Variance inflation factor 1 / (1 - R^2_j) per column; inf if collinear."""
    frame = _frame_of(data)
    columns = list(columns)
    if frame[columns].isna().any().any():
        raise RegressionError("VIF requires complete data on the requested columns")
    out = {}
    for j, col in enumerate(columns):
        others = columns[:j] + columns[j + 1 :]
        while True:
            if not others:
                out[col] = 1.0
                break
            try:
                r2 = ols_fit(frame, col, others).r_squared
            except RankDeficientError as exc:
                # redundancy among the *other* columns; drop it and refit
                others = [c for c in others if c != exc.column]
                continue
            out[col] = np.inf if r2 >= 1.0 - 1e-12 else 1.0 / (1.0 - r2)
            break
    return pd.Series(out, name="vif")
