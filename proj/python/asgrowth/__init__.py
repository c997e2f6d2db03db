"""Country-level AS number growth analysis.

The heavy lifting lives in the compiled ``_core`` module; this package
re-exports its public names.
"""

from ._core import (  # noqa: F401
    AcfResult,
    AnnualCountSeries,
    ArimaFit,
    ChangePointResult,
    CorrelationComparison,
    ForecastResult,
    GrowthRates,
    Series,
    StatTestResult,
    TrendEstimate,
    acf,
    binseg,
    build_annual_series,
    compare_correlations,
    compare_fisher_z,
    consensus_changepoints,
    cusum,
    dickey_fuller,
    difference,
    fisher_z,
    fit,
    forecast,
    holdout_rmse,
    iaav,
    iaav_growth_rates,
    jarque_bera,
    linear_trend,
    pacf,
    parse_delegated_file,
    psi_weights,
    relative_growth_pct,
    rw_drift_trend,
    segneigh,
    shapiro_wilk,
    trend_correlation,
)

__all__ = [
    "AcfResult",
    "AnnualCountSeries",
    "ArimaFit",
    "ChangePointResult",
    "CorrelationComparison",
    "ForecastResult",
    "GrowthRates",
    "Series",
    "StatTestResult",
    "TrendEstimate",
    "acf",
    "binseg",
    "build_annual_series",
    "compare_correlations",
    "compare_fisher_z",
    "consensus_changepoints",
    "cusum",
    "dickey_fuller",
    "difference",
    "fisher_z",
    "fit",
    "forecast",
    "holdout_rmse",
    "iaav",
    "iaav_growth_rates",
    "jarque_bera",
    "linear_trend",
    "pacf",
    "parse_delegated_file",
    "psi_weights",
    "relative_growth_pct",
    "rw_drift_trend",
    "segneigh",
    "shapiro_wilk",
    "trend_correlation",
]

__version__ = "1.0.0"
