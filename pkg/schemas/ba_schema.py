from __future__ import annotations

from typing import List, Optional

from pydantic import BaseModel, ConfigDict, Field

from schemas.gas_schema import SolverReport


# ================================
# BA SOLVE / SLOPE SEARCH CONFIG
# ================================
class SlopeSearchConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    tol: float = Field(1e-6, gt=0)  # |I(T;Y) − target| accepted
    beta_max: float = Field(1e5, gt=1)
    max_trials: int = Field(200, ge=1)

    # per-trial ba_solve knobs
    max_iter: int = Field(5000, ge=1)
    ba_tol: float = Field(1e-12, gt=0)
    seed: int = 0
    jitter_scale: float = Field(1e-2, ge=0, lt=1)
    bottleneck_size: Optional[int] = Field(None, ge=1)


class SlopeTrial(BaseModel):
    beta: float
    relevance: float
    rate: float
    converged: bool


class SlopeSearchResult(BaseModel):
    beta: float
    report: SolverReport
    trials: List[SlopeTrial]

    @property
    def trial_count(self) -> int:
        return len(self.trials)
