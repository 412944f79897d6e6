"""Trait-structured chemostat model."""

from ._core import (
    ContractViolation,
    DegeneratePopulation,
    NumericalError,
    default_config,
    eigen,
    entry_time,
    k_functional,
    materialize,
    simulate,
    sweep,
)

__all__ = [
    "ContractViolation",
    "DegeneratePopulation",
    "NumericalError",
    "default_config",
    "eigen",
    "entry_time",
    "k_functional",
    "materialize",
    "simulate",
    "sweep",
]
