"""Concavity verification for semilinear heat equations on convex planar domains."""

from ._concavlab import (
    ConcavlabError,
    DomainSpec,
    Grid,
    alpha_exponent,
    audit,
    concave_approximation,
    concave_approximation_1d,
    concavity_value,
    config_reference,
    harmonic_concavity_value,
    hyers_ulam_constant,
    laplacian,
    principal_eigenpair,
    property_suite,
    run_scenario,
    run_suite,
    scenario_ids,
    solve,
    stationary,
)

__all__ = [
    "ConcavlabError",
    "DomainSpec",
    "Grid",
    "alpha_exponent",
    "audit",
    "concave_approximation",
    "concave_approximation_1d",
    "concavity_value",
    "config_reference",
    "harmonic_concavity_value",
    "hyers_ulam_constant",
    "laplacian",
    "principal_eigenpair",
    "property_suite",
    "run_scenario",
    "run_suite",
    "scenario_ids",
    "solve",
    "stationary",
]
