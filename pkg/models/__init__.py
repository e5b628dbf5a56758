"""
IBGAS - models package

Numeric domain objects (numpy-backed dataclasses). Pydantic value objects
that cross the CLI boundary live in `schemas`.
"""

from __future__ import annotations

from .ba_state_model import BaState  # noqa: F401
from .distribution_model import (  # noqa: F401
    ConditionalKernel,
    Distribution,
    IbProblem,
    JointDistribution,
)
from .gas_state_model import GasState, Kernel  # noqa: F401

__all__ = [
    "Distribution",
    "ConditionalKernel",
    "JointDistribution",
    "IbProblem",
    "GasState",
    "Kernel",
    "BaState",
]
