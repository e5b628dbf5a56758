from __future__ import annotations

import math

from enums.solver_enum import OracleModel
from services.information_service import binary_entropy
from utils.errors import DomainError

# ======================================================
# IBGAS — CLOSED-FORM RELEVANCE-COMPRESSION CURVES
# Domains are checked, never clamped.
# ======================================================

LOG2 = math.log(2.0)
BISECTION_TOL = 1e-14
ENDPOINT_SLACK = 1e-12


def inverse_binary_entropy(h: float) -> float:
    """The u in [0, 1/2] with H(u) = h (nats), by bisection."""
    if not (0.0 <= h <= LOG2):
        raise DomainError(f"h={h!r} outside [0, log 2]")
    if h == 0.0:
        return 0.0
    if h == LOG2:
        return 0.5

    lo, hi = 0.0, 0.5
    while hi - lo > BISECTION_TOL:
        mid = 0.5 * (lo + hi)
        if binary_entropy(mid) < h:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def bernoulli_R(I: float, e: float) -> float:
    """R(I) = log 2 − H((u − e)/(1 − 2e)) with H(u) = log 2 − I."""
    if not (0.0 <= e < 0.5):
        raise DomainError(f"e={e!r} outside [0, 1/2)")
    cap = LOG2 - binary_entropy(e)
    if not (0.0 <= I <= cap + ENDPOINT_SLACK):
        raise DomainError(f"I={I!r} outside [0, I(X;Y)={cap:.12g}]")

    u = inverse_binary_entropy(max(LOG2 - I, binary_entropy(e)))
    # u ≥ e up to bisection error
    arg = min(max((u - e) / (1.0 - 2.0 * e), 0.0), 0.5)
    return LOG2 - binary_entropy(arg)


def gaussian_R(I: float, snr: float) -> float:
    """R(I) = −½ log(((1 + snr) e^{−2I} − 1) / snr), finite for I < ½ log(1 + snr)."""
    if not (snr > 0 and math.isfinite(snr)):
        raise DomainError(f"snr={snr!r} must be positive")
    cap = 0.5 * math.log1p(snr)
    if not (0.0 <= I < cap):
        raise DomainError(f"I={I!r} outside [0, ½ log(1+snr)={cap:.12g})")
    inner = ((1.0 + snr) * math.exp(-2.0 * I) - 1.0) / snr
    if inner <= 0:
        raise DomainError(f"I={I!r} too close to the capacity pole")
    return -0.5 * math.log(inner)


def constant_slope_R(I: float) -> float:
    if not (0.0 <= I <= LOG2):
        raise DomainError(f"I={I!r} outside [0, log 2]")
    return float(I)


def evaluate(model: OracleModel, I: float, *, e: float = 0.15, snr: float = 1.0) -> float:
    if model == OracleModel.BERNOULLI:
        return bernoulli_R(I, e)
    if model == OracleModel.GAUSSIAN:
        return gaussian_R(I, snr)
    if model == OracleModel.CONSTANT_SLOPE:
        return constant_slope_R(I)
    raise DomainError(f"unknown oracle model {model!r}")
