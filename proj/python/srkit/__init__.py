"""Stochastic resonance in a two-pathway double-well potential."""

from ._srkit import (
    KS_THRESHOLD_99,
    CriticalForcing,
    Forcing,
    InvalidParams,
    ModelParams,
    SrkError,
    SweepConfig,
    TwoStateChain,
    conditional_cdf,
    critical_forcing,
    critical_points,
    kolmogorov_cdf,
    ks_uniform,
    linear_response,
    potential,
    rate_table,
    run_sweep,
    simulate,
    six_measures,
)

__all__ = [
    "KS_THRESHOLD_99",
    "CriticalForcing",
    "Forcing",
    "InvalidParams",
    "ModelParams",
    "SrkError",
    "SweepConfig",
    "TwoStateChain",
    "conditional_cdf",
    "critical_forcing",
    "critical_points",
    "kolmogorov_cdf",
    "ks_uniform",
    "linear_response",
    "potential",
    "rate_table",
    "run_sweep",
    "simulate",
    "six_measures",
]

__version__ = "0.1.0"
