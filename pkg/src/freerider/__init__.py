"""freerider: carbon-pricing regimes, coalition stability, and the
country-size regression pipeline behind the free-rider test."""

from .coalition import (
    CoalitionError,
    CoalitionResult,
    LQParams,
    abatement_stage,
    brute_force_equilibria,
    enumerate_equilibria,
    membership_incentive,
)
from .dataset import (
    CONTROL_COLUMNS,
    COVARIATE_COLUMNS,
    FOCAL_COLUMN,
    LOGICAL_COLUMNS,
    CountryDataset,
    IngestError,
    load_dataset,
    subset,
    summary_stats,
)
from .economy import (
    Allocation,
    EconomyError,
    EconomySpec,
    LinearBenefit,
    LogBenefit,
    PopulationProfile,
    PowerBenefit,
    PowerCost,
    QuadraticCost,
    aggregate_abatement,
    global_welfare,
    utility_per_capita,
    utility_vector,
)
from .imputation import ImputationError, ImputationRun, PooledFit, impute_chained, pool_rubin
from .regimes import (
    DegeneratePriceError,
    Regime,
    RegimeOutcome,
    SolverConfig,
    SolverError,
    price_ratio,
    solve_global_optimum,
    solve_mixed_motives,
    solve_noncooperative,
)
from .regression import (
    OlsFit,
    RankDeficientError,
    RegressionError,
    filter_collinear,
    ols_fit,
    pearson_matrix,
    vif,
)
from .speccurve import (
    SpecChartRow,
    spec_series,
    specification_chart,
    specification_chart_casewise,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # economy
    "EconomyError", "PopulationProfile", "LinearBenefit", "LogBenefit", "PowerBenefit",
    "QuadraticCost", "PowerCost", "EconomySpec", "Allocation",
    "aggregate_abatement", "utility_per_capita", "utility_vector", "global_welfare",
    # regimes
    "Regime", "SolverConfig", "SolverError", "DegeneratePriceError", "RegimeOutcome",
    "solve_noncooperative", "solve_global_optimum", "solve_mixed_motives", "price_ratio",
    # coalition
    "CoalitionError", "LQParams", "CoalitionResult", "abatement_stage",
    "membership_incentive", "enumerate_equilibria", "brute_force_equilibria",
    # dataset
    "IngestError", "CountryDataset", "LOGICAL_COLUMNS", "COVARIATE_COLUMNS",
    "FOCAL_COLUMN", "CONTROL_COLUMNS",
    "load_dataset", "summary_stats", "subset",
    # regression
    "RegressionError", "RankDeficientError", "OlsFit", "ols_fit",
    "pearson_matrix", "filter_collinear", "vif",
    # imputation
    "ImputationError", "ImputationRun", "PooledFit", "impute_chained", "pool_rubin",
    # spec chart
    "SpecChartRow", "spec_series", "specification_chart", "specification_chart_casewise",
]
