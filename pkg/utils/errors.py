from __future__ import annotations

from typing import Any, Optional

from enums.solver_enum import SolverStatus


# ============================================================
# IBGAS — exception hierarchy
# ============================================================


class IbError(Exception):
    """Base class for every error raised by ibgas."""


class DomainError(IbError, ValueError):
    """Argument outside the domain of a function or generator."""


class DistributionError(DomainError):
    """A probability object failed construction validation."""


class InputFileError(IbError):
    """Malformed or empty data file. `row` is 1-based."""

    def __init__(self, message: str, *, row: Optional[int] = None, token: Optional[str] = None):
        self.row = row
        self.token = token
        if row is not None:
            message = f"row {row}: {message}"
        super().__init__(message)


class SolverError(IbError):
    status: SolverStatus = SolverStatus.NUMERICAL_FAILURE

    def __init__(self, message: str, *, zeta: Optional[float] = None, iteration: Optional[int] = None):
        self.zeta = zeta
        self.iteration = iteration
        super().__init__(message)


class InfeasibleError(SolverError):
    status = SolverStatus.INFEASIBLE


class NumericalFailureError(SolverError):
    status = SolverStatus.NUMERICAL_FAILURE


class SearchFailedError(IbError):
    """BA slope search could not reach the target relevance.

    Expected on constant-slope segments, where the relevance jumps across
    the target as beta crosses the critical slope.
    """

    def __init__(self, message: str, *, trials: Optional[list[Any]] = None):
        self.trials = list(trials or [])
        super().__init__(message)
