from __future__ import annotations

from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from enums.solver_enum import ProblemKind

GRID_INTEGER_TOL = 1e-9


# -------------------------
# Gaussian grid
# -------------------------
class GaussianGridSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    snr: float = Field(1.0, gt=0)
    half_width: float = Field(10.0, gt=0)
    step: float = Field(0.2, gt=0)

    @model_validator(mode="after")
    def check_grid_size(self):
        ratio = 2.0 * self.half_width / self.step
        if round(ratio) < 1 or abs(ratio - round(ratio)) > GRID_INTEGER_TOL:
            raise ValueError(
                f"2*half_width/step = {ratio!r} is not a positive integer"
            )
        return self

    @property
    def n_grid(self) -> int:
        return int(round(2.0 * self.half_width / self.step))


# -------------------------
# Labeled data row
# -------------------------
class LabeledSample(BaseModel):
    model_config = ConfigDict(frozen=True)

    features: tuple[float, ...]
    label: str

    @field_validator("features")
    @classmethod
    def non_empty_features(cls, value):
        if len(value) == 0:
            raise ValueError("features must be non-empty")
        return value

    @field_validator("label")
    @classmethod
    def non_empty_label(cls, value):
        if not value.strip():
            raise ValueError("label must be non-empty")
        return value.strip()


# -------------------------
# Problem flags (CLI -> generators)
# -------------------------
class ProblemSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: ProblemKind = ProblemKind.BERNOULLI

    # bernoulli
    e: float = Field(0.15, ge=0.0, le=0.5)

    # gaussian
    snr: float = 1.0
    half_width: float = 10.0
    step: float = 0.2

    # empirical
    data: Optional[str] = None
    label_col: int = 4
    header: bool = False

    @model_validator(mode="after")
    def check_kind_params(self):
        if self.kind == ProblemKind.EMPIRICAL and not self.data:
            raise ValueError("--problem empirical requires --data <path>")
        if self.kind == ProblemKind.GAUSSIAN:
            GaussianGridSpec(snr=self.snr, half_width=self.half_width, step=self.step)
        return self

    def grid(self) -> GaussianGridSpec:
        return GaussianGridSpec(snr=self.snr, half_width=self.half_width, step=self.step)
