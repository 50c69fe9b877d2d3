"""Casimir interaction energies between rank-1 mirrors and separable bodies."""

import json

from ._casimir import (
    CasimirError,
    ConfigError,
    DegenerateCouplingError,
    DomainError,
    EmptyChannelSetError,
    IndefiniteMatrixError,
    InfraredDivergenceError,
    NonConvergenceError,
    OverlapError,
    PreconditionError,
    bessel_zero,
    channelize,
    dilog,
    energy,
    find_equilibria,
    force,
    lattice_interaction_energy,
    preset_json,
    preset_names,
    product_eigenvalues,
    run,
    separable_energy,
    separable_force,
    short_distance_coefficient,
)


def preset(name):
    """Built-in scenario as a dict."""
    return json.loads(preset_json(name))


__all__ = [name for name in dir() if not name.startswith("_") and name != "json"]
