from __future__ import annotations

from datetime import datetime
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field

from enums.solver_enum import InfoUnits, OutputFormat, SolverKind, SolverStatus
from schemas.problem_schema import ProblemSpec

CSV_COLUMNS = (
    "threshold_I",
    "rate_R",
    "relevance",
    "zeta",
    "iterations",
    "status",
    "marginal_residual",
)


# ================================
# CURVE POINTS
# ================================
class CurveSample(BaseModel):
    """One (I, R(I)) pair, e.g. an oracle evaluation."""

    model_config = ConfigDict(frozen=True)

    threshold: float = Field(..., ge=0)
    rate: float = Field(..., ge=0)


class CurveRecord(BaseModel):
    """One output row. Failed points keep their threshold and status; numeric
    fields are then empty.

    For BA β-sweeps threshold_I holds the achieved relevance and zeta holds β.
    """

    threshold_I: float
    rate_R: Optional[float] = None
    relevance: Optional[float] = None
    zeta: Optional[float] = None
    iterations: int = 0
    status: SolverStatus
    marginal_residual: Optional[float] = None
    message: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.rate_R is not None


class IbCurve(BaseModel):
    solver: SolverKind
    problem_fingerprint: str
    config: Dict[str, Any] = Field(default_factory=dict)
    records: List[CurveRecord] = Field(default_factory=list)

    @property
    def failed(self) -> List[CurveRecord]:
        return [rec for rec in self.records if not rec.ok]


# ================================
# RUN MANIFEST
# ================================
class RunManifest(BaseModel):
    """Everything needed to regenerate a data file; `argv` is replayed by --rerun."""

    command: str
    argv: List[str]
    problem: ProblemSpec
    problem_fingerprint: str
    solver: SolverKind
    config: Dict[str, Any]
    seed: int
    units: InfoUnits = InfoUnits.NATS
    format: OutputFormat = OutputFormat.CSV
    tool_version: str
    created_at: datetime


# ================================
# BENCHMARK ROW
# ================================
class BenchRow(BaseModel):
    target_I: float
    repeats: int

    gas_mean_s: Optional[float] = None
    gas_std_s: Optional[float] = None
    gas_rate: Optional[float] = None
    gas_zeta: Optional[float] = None
    gas_status: SolverStatus

    ba_mean_s: Optional[float] = None
    ba_std_s: Optional[float] = None
    ba_trials: Optional[float] = None  # mean trial count per search
    ba_beta: Optional[float] = None
    ba_status: SolverStatus

    speedup: Optional[float] = None  # t_BA / t_GAS
