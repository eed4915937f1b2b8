"""Fair odds, margins, posteriors and simulation for betting with noisy probabilities."""

from ._core import (
    ConfigError,
    DegenerateError,
    DomainError,
    NoRegionError,
    NoRootError,
    PosteriorDensity,
    asymmetry_delta,
    belief_envelope,
    conditional_mean_seller_margin,
    conditioned_margin_mc,
    figure_series,
    mean_margin,
    net_asymmetry,
    probability_to_woe,
    quadrature_mean_margin,
    region,
    run_verification,
    seller_objective_margin,
    simulate,
    solve_adjustment,
    solve_w1_star,
    woe_to_probability,
)

__all__ = [
    "ConfigError",
    "DegenerateError",
    "DomainError",
    "NoRegionError",
    "NoRootError",
    "PosteriorDensity",
    "asymmetry_delta",
    "belief_envelope",
    "conditional_mean_seller_margin",
    "conditioned_margin_mc",
    "figure_series",
    "mean_margin",
    "net_asymmetry",
    "probability_to_woe",
    "quadrature_mean_margin",
    "region",
    "run_verification",
    "seller_objective_margin",
    "simulate",
    "solve_adjustment",
    "solve_w1_star",
    "woe_to_probability",
]
