"""Viscous Euler-Poisson simulator and verification harness."""

from ._core import (
    BlowupError,
    BracketError,
    ConfigError,
    DomainError,
    InfeasibleError,
    PreconditionError,
    ShapeError,
    DopingProfile,
    GasModel,
    StationaryProfile,
    Trajectory,
    choose_M,
    coercivity_constants,
    fit_decay_rate,
    from_invariants,
    mechanical_energy,
    mollify_initial,
    parse_config,
    pressure,
    project_neutral,
    relative_entropy,
    run,
    solve_stationary,
    to_invariants,
    weak_entropy_pair,
)

__all__ = [
    "BlowupError",
    "BracketError",
    "ConfigError",
    "DomainError",
    "InfeasibleError",
    "PreconditionError",
    "ShapeError",
    "DopingProfile",
    "GasModel",
    "StationaryProfile",
    "Trajectory",
    "choose_M",
    "coercivity_constants",
    "fit_decay_rate",
    "from_invariants",
    "mechanical_energy",
    "mollify_initial",
    "parse_config",
    "pressure",
    "project_neutral",
    "relative_entropy",
    "run",
    "solve_stationary",
    "to_invariants",
    "weak_entropy_pair",
]
