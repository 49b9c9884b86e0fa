"""Quantum Markov chains on the comb graph for Ising-type models."""

from ._core import (
    Error,
    VolumeTooLarge,
    acceptance,
    branches,
    clustering,
    evaluate,
    model_params,
)

__all__ = [
    "Error",
    "VolumeTooLarge",
    "acceptance",
    "branches",
    "clustering",
    "evaluate",
    "model_params",
]
