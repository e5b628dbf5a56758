from __future__ import annotations

from typing import List, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from enums.solver_enum import SolverKind, SolverStatus


# ================================
# GAS CONFIG
# ================================
class GasConfig(BaseModel):
    """Solver knobs. Immutable; safe to share across solves."""

    model_config = ConfigDict(frozen=True)

    bottleneck_size: Optional[int] = Field(None, ge=1)  # None -> |T| = |X|
    max_iter: int = Field(1000, ge=1)

    rate_tol: float = Field(1e-10, gt=0)
    constraint_tol: float = Field(1e-8, gt=0)
    marginal_tol: float = Field(1e-10, gt=0)

    newton_tol: float = Field(1e-12, gt=0)
    newton_max_steps: int = Field(100, ge=1)
    zeta_cap: float = Field(1e6, gt=0)
    zeta_growth: float = Field(2.0, gt=1)  # per-iteration ζ ceiling, × max(1, ζ_prev)

    log_floor: float = -700.0
    dead_cluster_mass: float = Field(1e-300, ge=0)

    jitter_scale: float = Field(1e-2, ge=0, lt=1)
    rng_seed: int = 0
    stabilized: bool = True

    record_history: bool = False

    @model_validator(mode="after")
    def check_log_floor(self):
        if not (self.log_floor < 0):
            raise ValueError("log_floor must be negative")
        return self


# ================================
# REPORTS
# ================================
class Residuals(BaseModel):
    marginal: float  # max_i |Σ_j w_ij r_j − p_i|
    constraint: float  # |I(T;Y) − I| (ζ > 0) or max(0, I − I(T;Y)) (ζ = 0)
    rate_change: float  # |Δ objective| over the last iteration
    column: float = 0.0  # max_j |Σ_i w_ij − 1|


class IterationDiagnostics(BaseModel):
    iteration: int
    objective: float
    relevance: float
    marginal_residual: float
    zeta: float


class SolverReport(BaseModel):
    solver: SolverKind = SolverKind.GAS
    threshold: Optional[float] = None

    rate: float  # I(X;T), nats
    relevance: float  # I(T;Y), nats
    objective: float  # Σ w r log w, nats
    zeta: float  # final dual (GAS) or fixed multiplier (BA)

    iterations: int
    status: SolverStatus
    residuals: Residuals

    history: Optional[List[IterationDiagnostics]] = None

    @property
    def converged(self) -> bool:
        return self.status == SolverStatus.CONVERGED
