"""OLS against a normal-equations oracle, correlation tools, VIF diagnostics."""

import numpy as np
import pandas as pd
import pytest
from scipy import stats

from freerider.regression import (
    RankDeficientError,
    RegressionError,
    filter_collinear,
    ols_fit,
    pearson_matrix,
    vif,
)


def normal_equations_oracle(y, X_cols):
    """Minimal independent OLS: beta = (X'X)^-1 X'y with plain inversion."""
    X = np.column_stack([np.ones(len(y)), *X_cols])
    xtx_inv = np.linalg.inv(X.T @ X)
    beta = xtx_inv @ X.T @ y
    resid = y - X @ beta
    dof = len(y) - X.shape[1]
    sigma2 = float(resid @ resid) / dof
    se = np.sqrt(np.diag(sigma2 * xtx_inv))
    tss = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - float(resid @ resid) / tss
    return beta, se, r2


def test_noiseless_line_recovers_exactly():
    x = np.arange(10.0)
    frame = pd.DataFrame({"x": x, "y": 3.0 + 2.0 * x})
    fit = ols_fit(frame, "y", ["x"])
    assert fit.coefficient("x") == pytest.approx(2.0, abs=1e-12)
    assert fit.coefficient("intercept") == pytest.approx(3.0, abs=1e-12)
    assert fit.r_squared == pytest.approx(1.0, abs=1e-12)


def test_matches_normal_equations_oracle_on_seeded_designs():
    rng = np.random.default_rng(1234)
    for _ in range(25):
        n = int(rng.integers(20, 200))
        k = int(rng.integers(1, 9))
        cols = [rng.normal(0, rng.uniform(0.5, 3.0), n) for _ in range(k)]
        y = 1.0 + sum(rng.normal(0, 1) * c for c in cols) + rng.normal(0, 0.7, n)
        frame = pd.DataFrame({f"x{i}": c for i, c in enumerate(cols)} | {"y": y})
        fit = ols_fit(frame, "y", [f"x{i}" for i in range(k)])
        beta, se, r2 = normal_equations_oracle(y, cols)
        assert fit.coefficients == pytest.approx(beta, rel=1e-8)
        assert fit.standard_errors == pytest.approx(se, rel=1e-8)
        assert fit.r_squared == pytest.approx(r2, rel=1e-8)


def test_univariate_slope_equals_cov_over_var():
    rng = np.random.default_rng(9)
    x = rng.normal(0, 2, 80)
    y = 0.4 - 1.7 * x + rng.normal(0, 1, 80)
    fit = ols_fit(pd.DataFrame({"x": x, "y": y}), "y", ["x"])
    slope = np.cov(x, y, ddof=1)[0, 1] / np.var(x, ddof=1)
    assert fit.coefficient("x") == pytest.approx(slope, rel=1e-10)


def test_residuals_orthogonal_to_design():
    rng = np.random.default_rng(4)
    frame = pd.DataFrame(
        {
            "a": rng.normal(0, 1, 60),
            "b": rng.normal(0, 1, 60),
            "y": rng.normal(0, 1, 60),
        }
    )
    fit = ols_fit(frame, "y", ["a", "b"])
    X = np.column_stack([np.ones(60), frame["a"], frame["b"]])
    resid = frame["y"].to_numpy() - X @ fit.coefficients
    scale = float(np.linalg.norm(resid)) * 60
    assert np.all(np.abs(X.T @ resid) < 1e-8 * scale)


def test_r_squared_equals_squared_correlation_of_fitted():
    rng = np.random.default_rng(14)
    frame = pd.DataFrame(
        {"a": rng.normal(0, 1, 70), "b": rng.uniform(-2, 2, 70)}
    )
    frame["y"] = 2 + frame["a"] - 0.5 * frame["b"] + rng.normal(0, 1.5, 70)
    fit = ols_fit(frame, "y", ["a", "b"])
    X = np.column_stack([np.ones(70), frame["a"], frame["b"]])
    fitted = X @ fit.coefficients
    corr = np.corrcoef(fitted, frame["y"])[0, 1]
    assert fit.r_squared == pytest.approx(corr**2, rel=1e-10)


def test_scaling_y_scales_slope_but_not_inference():
    rng = np.random.default_rng(21)
    x = rng.normal(0, 1, 50)
    y = 1 + 0.5 * x + rng.normal(0, 1, 50)
    base = ols_fit(pd.DataFrame({"x": x, "y": y}), "y", ["x"])
    scaled = ols_fit(pd.DataFrame({"x": x, "y": 7.0 * y}), "y", ["x"])
    assert scaled.coefficient("x") == pytest.approx(7.0 * base.coefficient("x"), rel=1e-10)
    assert scaled.t_stats == pytest.approx(base.t_stats, rel=1e-10)
    assert scaled.p_values == pytest.approx(base.p_values, rel=1e-10)
    assert scaled.r_squared == pytest.approx(base.r_squared, rel=1e-10)


def test_robust_errors_match_hc1_sandwich():
    rng = np.random.default_rng(33)
    x = rng.normal(0, 1, 90)
    y = 1 + 0.5 * x + rng.normal(0, 1 + 0.8 * np.abs(x), 90)  # heteroskedastic
    frame = pd.DataFrame({"x": x, "y": y})
    classical = ols_fit(frame, "y", ["x"])
    robust = ols_fit(frame, "y", ["x"], robust=True)
    assert robust.coefficients == pytest.approx(classical.coefficients, rel=1e-12)

    X = np.column_stack([np.ones(90), x])
    resid = y - X @ classical.coefficients
    xtx_inv = np.linalg.inv(X.T @ X)
    meat = X.T @ np.diag(resid**2) @ X
    expected = np.sqrt(np.diag(xtx_inv @ meat @ xtx_inv) * 90 / 88)
    assert robust.standard_errors == pytest.approx(expected, rel=1e-10)
    assert not np.allclose(robust.standard_errors, classical.standard_errors)


def test_p_values_from_t_distribution():
    rng = np.random.default_rng(2)
    x = rng.normal(0, 1, 30)
    y = 1 + 0.2 * x + rng.normal(0, 1, 30)
    fit = ols_fit(pd.DataFrame({"x": x, "y": y}), "y", ["x"])
    expected = 2 * stats.t.sf(abs(fit.t_stats[1]), 30 - 2)
    assert fit.p_value("x") == pytest.approx(expected, rel=1e-12)
    assert np.all((fit.p_values >= 0) & (fit.p_values <= 1))


def test_rank_deficiency_names_offender():
    rng = np.random.default_rng(8)
    a = rng.normal(0, 1, 40)
    frame = pd.DataFrame({"a": a, "twice_a": 2 * a, "y": rng.normal(0, 1, 40)})
    with pytest.raises(RankDeficientError) as err:
        ols_fit(frame, "y", ["a", "twice_a"])
    assert err.value.column in {"a", "twice_a"}


def test_insufficient_observations():
    frame = pd.DataFrame({"a": [1.0, 2.0], "b": [2.0, 1.0], "y": [0.0, 1.0]})
    with pytest.raises(RegressionError, match="insufficient"):
        ols_fit(frame, "y", ["a", "b"])


def test_missing_cells_rejected():
    frame = pd.DataFrame({"x": [1.0, np.nan, 3.0, 4.0], "y": [1.0, 2.0, 3.0, 4.0]})
    with pytest.raises(RegressionError, match="missing values"):
        ols_fit(frame, "y", ["x"])


# ---------------------------------------------------------------------------
# correlation matrix


def test_pearson_self_and_anticorrelation():
    rng = np.random.default_rng(3)
    x = rng.normal(0, 1, 30)
    frame = pd.DataFrame({"x": x, "neg": -x, "z": rng.normal(0, 1, 30)})
    corr = pearson_matrix(frame, ["x", "neg", "z"])
    assert corr.loc["x", "x"] == 1.0
    assert corr.loc["x", "neg"] == pytest.approx(-1.0)
    assert corr.equals(corr.T)
    assert ((corr.values >= -1) & (corr.values <= 1)).all()


def test_pearson_uses_pairwise_complete_rows():
    frame = pd.DataFrame(
        {
            "a": [1.0, 2.0, 3.0, 4.0, np.nan],
            "b": [2.0, 4.0, 6.0, np.nan, 10.0],
        }
    )
    corr = pearson_matrix(frame, ["a", "b"])
    assert corr.loc["a", "b"] == pytest.approx(1.0)


def test_pearson_too_few_complete_pairs():
    frame = pd.DataFrame({"a": [1.0, np.nan, 3.0], "b": [np.nan, 2.0, 4.0]})
    with pytest.raises(RegressionError, match="fewer than 3"):
        pearson_matrix(frame, ["a", "b"])


# ---------------------------------------------------------------------------
# collinearity filter


def test_filter_keeps_everything_below_threshold():
    matrix = pd.DataFrame(np.eye(3), index=list("abc"), columns=list("abc"))
    assert filter_collinear(matrix, 0.75, {}) == ["a", "b", "c"]


def test_filter_drops_column_with_more_missing():
    matrix = pd.DataFrame(
        [[1.0, 0.9], [0.9, 1.0]], index=["keep", "drop"], columns=["keep", "drop"]
    )
    assert filter_collinear(matrix, 0.75, {"keep": 1, "drop": 10}) == ["keep"]
    assert filter_collinear(matrix, 0.75, {"keep": 10, "drop": 1}) == ["drop"]


def test_filter_tie_break_drops_later_column():
    matrix = pd.DataFrame(
        [[1.0, 0.9], [0.9, 1.0]], index=["first", "second"], columns=["first", "second"]
    )
    assert filter_collinear(matrix, 0.75, {"first": 3, "second": 3}) == ["first"]


def test_filter_handles_negative_correlations_and_order_invariance():
    names = ["a", "b", "c"]
    values = np.array([[1.0, -0.9, 0.1], [-0.9, 1.0, 0.2], [0.1, 0.2, 1.0]])
    matrix = pd.DataFrame(values, index=names, columns=names)
    missing = {"a": 5, "b": 0, "c": 0}
    assert filter_collinear(matrix, 0.75, missing) == ["b", "c"]
    shuffled = matrix.loc[["c", "b", "a"], ["c", "b", "a"]]
    assert set(filter_collinear(shuffled, 0.75, missing)) == {"b", "c"}


# ---------------------------------------------------------------------------
# VIF


def test_vif_orthogonal_columns_are_one():
    n = 400
    t = np.arange(n)
    frame = pd.DataFrame(
        {
            "s": np.sin(2 * np.pi * t / n),
            "c": np.cos(2 * np.pi * t / n),
        }
    )
    values = vif(frame, ["s", "c"])
    assert values["s"] == pytest.approx(1.0, abs=1e-10)
    assert values["c"] == pytest.approx(1.0, abs=1e-10)


def test_vif_flags_perfect_collinearity():
    rng = np.random.default_rng(10)
    a = rng.normal(0, 1, 50)
    frame = pd.DataFrame({"a": a, "dup": a.copy(), "z": rng.normal(0, 1, 50)})
    values = vif(frame, ["a", "dup", "z"])
    assert np.isinf(values["a"]) and np.isinf(values["dup"])
    assert values["z"] < 2.0


def test_vif_requires_complete_data():
    frame = pd.DataFrame({"a": [1.0, np.nan, 2.0], "b": [1.0, 2.0, 3.0]})
    with pytest.raises(RegressionError, match="complete data"):
        vif(frame, ["a", "b"])


def test_vif_matches_direct_formula():
    rng = np.random.default_rng(77)
    base = rng.normal(0, 1, 120)
    frame = pd.DataFrame(
        {
            "x1": base + rng.normal(0, 0.6, 120),
            "x2": base + rng.normal(0, 0.6, 120),
            "x3": rng.normal(0, 1, 120),
        }
    )
    values = vif(frame, ["x1", "x2", "x3"])
    r2 = ols_fit(frame, "x1", ["x2", "x3"]).r_squared
    assert values["x1"] == pytest.approx(1.0 / (1.0 - r2), rel=1e-10)
