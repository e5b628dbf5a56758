from __future__ import annotations

import math

import numpy as np
from scipy.special import entr, rel_entr, xlogy

from models.distribution_model import Distribution, JointDistribution
from utils.errors import DomainError

# ======================================================
# IBGAS — information functionals (nats)
# - 0·log 0 = 0 everywhere (scipy entr / xlogy / rel_entr)
# - KL with an absolute-continuity violation is math.inf
# ======================================================

KL_INFINITY = math.inf


def entropy(d: Distribution) -> float:
    return float(max(entr(d.mass).sum(), 0.0))


def binary_entropy(u: float) -> float:
    if not (0.0 <= u <= 1.0):
        raise DomainError(f"binary_entropy: u={u!r} outside [0, 1]")
    return float(entr(u) + entr(1.0 - u))


def mutual_information(j: JointDistribution) -> float:
    outer = np.outer(j.px.mass, j.qy.mass)
    return float(max(rel_entr(j.pxy, outer).sum(), 0.0))


def kl_divergence(a: Distribution, b: Distribution) -> float:
    if len(a) != len(b):
        raise DomainError(f"kl_divergence: length mismatch {len(a)} vs {len(b)}")
    value = float(rel_entr(a.mass, b.mass).sum())
    if not math.isfinite(value):
        return KL_INFINITY
    return max(value, 0.0)


def kl_matrix(s: np.ndarray, decoder: np.ndarray) -> np.ndarray:
    """D[i, j] = KL(s[:, i] || decoder[:, j]) for column-stochastic K×M and K×N arrays.

    Entries violating absolute continuity are +inf.
    """
    # Σ_k s_ki log s_ki − Σ_k s_ki log d_kj, with 0·log 0 = 0 on both sides
    neg_entropy = xlogy(s, s).sum(axis=0)
    with np.errstate(divide="ignore"):
        log_dec = np.log(decoder)
    cross = np.zeros((s.shape[1], decoder.shape[1]))
    support = s > 0
    for i in range(s.shape[1]):
        rows = support[:, i]
        cross[i, :] = s[rows, i] @ log_dec[rows, :]
    out = neg_entropy[:, None] - cross
    out[np.isnan(out)] = KL_INFINITY
    return np.maximum(out, 0.0)


def relevance(z: np.ndarray, r: np.ndarray, q: np.ndarray) -> float:
    """I(T;Y) from z_kj = P(y_k, t_j), r_j = P(t_j), q_k = P(y_k)."""
    return float(rel_entr(z, np.outer(q, r)).sum())


def rate_from_posterior(w: np.ndarray, r: np.ndarray) -> float:
    """I(X;T) of the joint u_ij p_i = w_ij r_j, measured against its own marginals."""
    joint = w * r[None, :]
    joint = joint / joint.sum()
    outer = np.outer(joint.sum(axis=1), joint.sum(axis=0))
    return float(max(rel_entr(joint, outer).sum(), 0.0))


def posterior_objective(w: np.ndarray, r: np.ndarray) -> float:
    """Σ_ij w_ij r_j log w_ij = −H(X|T)."""
    return float((xlogy(w, w) * r[None, :]).sum())
