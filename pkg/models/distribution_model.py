from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.special import xlogy

from utils.errors import DistributionError, DomainError

# ============================================================
# IBGAS — discrete probability objects
#
# All arrays are copied, validated and frozen (read-only) at
# construction, so instances are safe to share between threads.
# ============================================================

SIMPLEX_TOL = 1e-12


def _frozen(values: np.ndarray) -> np.ndarray:
    values.setflags(write=False)
    return values


def _as_simplex(values, *, what: str) -> np.ndarray:
    arr = np.array(values, dtype=float, copy=True)
    if arr.size == 0:
        raise DistributionError(f"{what}: empty support")
    if not np.all(np.isfinite(arr)):
        raise DistributionError(f"{what}: non-finite entries")
    if np.any(arr < 0):
        raise DistributionError(f"{what}: negative entries")
    total = float(arr.sum())
    if abs(total - 1.0) > SIMPLEX_TOL:
        raise DistributionError(f"{what}: mass sums to {total!r}, not 1")
    return arr / total


@dataclass(frozen=True)
class Distribution:
    """Probability vector (p over X, q over Y or r over T)."""

    mass: np.ndarray

    def __post_init__(self):
        arr = _as_simplex(self.mass, what="Distribution")
        if arr.ndim != 1:
            raise DistributionError("Distribution: mass must be a vector")
        object.__setattr__(self, "mass", _frozen(arr))

    def __len__(self) -> int:
        return int(self.mass.shape[0])

    @classmethod
    def uniform(cls, size: int) -> "Distribution":
        if size < 1:
            raise DomainError("uniform distribution needs size >= 1")
        return cls(np.full(size, 1.0 / size))


@dataclass(frozen=True)
class ConditionalKernel:
    """K×M matrix, entry (k, i) = P(y_k | x_i); every column is a distribution."""

    matrix: np.ndarray

    def __post_init__(self):
        arr = np.array(self.matrix, dtype=float, copy=True)
        if arr.ndim != 2 or arr.size == 0:
            raise DistributionError("ConditionalKernel: expected a non-empty K×M matrix")
        if not np.all(np.isfinite(arr)) or np.any(arr < 0):
            raise DistributionError("ConditionalKernel: entries must be finite and >= 0")
        sums = arr.sum(axis=0)
        if np.any(np.abs(sums - 1.0) > SIMPLEX_TOL):
            worst = float(np.max(np.abs(sums - 1.0)))
            raise DistributionError(f"ConditionalKernel: column sums off by {worst!r}")
        object.__setattr__(self, "matrix", _frozen(arr / sums[None, :]))

    @property
    def shape(self) -> tuple[int, int]:
        return self.matrix.shape


@dataclass(frozen=True)
class JointDistribution:
    """Validated M×K joint P(X, Y) with cached marginals and s = P(Y|X)."""

    pxy: np.ndarray
    px: Distribution = field(init=False)
    qy: Distribution = field(init=False)
    s: ConditionalKernel = field(init=False)

    def __post_init__(self):
        arr = np.array(self.pxy, dtype=float, copy=True)
        if arr.ndim != 2:
            raise DistributionError("JointDistribution: pxy must be an M×K matrix")
        arr = _as_simplex(arr, what="JointDistribution")

        px = arr.sum(axis=1)
        qy = arr.sum(axis=0)

        # columns of s for zero-mass x_i are set uniform so the kernel stays stochastic
        s = np.empty((arr.shape[1], arr.shape[0]), dtype=float)
        positive = px > 0
        s[:, positive] = (arr[positive, :] / px[positive, None]).T
        s[:, ~positive] = 1.0 / arr.shape[1]

        object.__setattr__(self, "pxy", _frozen(arr))
        object.__setattr__(self, "px", Distribution(px / px.sum()))
        object.__setattr__(self, "qy", Distribution(qy / qy.sum()))
        object.__setattr__(self, "s", ConditionalKernel(s))

    @classmethod
    def from_marginal_and_kernel(cls, px: Distribution, s: ConditionalKernel) -> "JointDistribution":
        k, m = s.shape
        if m != len(px):
            raise DomainError(f"kernel has {m} columns but the marginal has {len(px)} entries")
        return cls((s.matrix * px.mass[None, :]).T)

    @property
    def shape(self) -> tuple[int, int]:
        return self.pxy.shape

    @property
    def m(self) -> int:
        return int(self.pxy.shape[0])

    @property
    def k(self) -> int:
        return int(self.pxy.shape[1])

    def fingerprint(self) -> str:
        """sha256 of the shape and the raw float64 bytes of pxy."""
        h = hashlib.sha256()
        h.update(f"{self.m}x{self.k}".encode("ascii"))
        h.update(np.ascontiguousarray(self.pxy, dtype="<f8").tobytes())
        return h.hexdigest()


@dataclass(frozen=True)
class IbProblem:
    """Joint + relevance threshold I (nats) + bottleneck cardinality N."""

    joint: JointDistribution
    threshold: float
    bottleneck_size: Optional[int] = None

    def __post_init__(self):
        if not np.isfinite(self.threshold) or self.threshold < 0:
            raise DomainError(f"threshold must be finite and >= 0, got {self.threshold!r}")
        n = self.joint.m if self.bottleneck_size is None else int(self.bottleneck_size)
        if n < 1:
            raise DomainError("bottleneck_size must be >= 1")
        object.__setattr__(self, "bottleneck_size", n)

    @property
    def n(self) -> int:
        return int(self.bottleneck_size)

    @property
    def i_hat(self) -> float:
        """Î = I + Σ_k q_k log q_k."""
        return float(self.threshold + xlogy(self.joint.qy.mass, self.joint.qy.mass).sum())
