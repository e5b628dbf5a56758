from __future__ import annotations

import math
from typing import Optional

import numpy as np
from scipy.special import logsumexp, rel_entr

from enums.solver_enum import SolverKind, SolverStatus
from models.ba_state_model import BaState
from models.distribution_model import IbProblem
from schemas.ba_schema import SlopeSearchConfig, SlopeSearchResult, SlopeTrial
from schemas.gas_schema import Residuals, SolverReport
from services.information_service import entropy, kl_matrix, mutual_information, relevance
from utils.errors import DomainError, SearchFailedError
from utils.logger import get_logger

log = get_logger("ba")

# ======================================================
# IBGAS — BLAHUT-ARIMOTO BASELINE
# Fixed multiplier β, self-consistent encoder/decoder updates:
#   r_j      = Σ_i p_i u_ij
#   P(y|t_j) = Σ_i s_ki u_ij p_i / r_j
#   u_ij     ∝ r_j exp(−β KL(s_·i ‖ P(y|t_j)))
# ======================================================

RATE_INCREASE_TOL = 1e-9


def init_ba_state(problem: IbProblem, beta: float, seed: int = 0, jitter_scale: float = 1e-2) -> BaState:
    m, n = problem.joint.m, problem.n
    u = np.full((m, n), 1.0 / n)
    if jitter_scale > 0:
        rng = np.random.default_rng(seed)
        u = u * (1.0 + jitter_scale * rng.uniform(-1.0, 1.0, size=(m, n)))
        u = u / u.sum(axis=1, keepdims=True)

    p = problem.joint.px.mass
    r = p @ u
    z = problem.joint.s.matrix @ (p[:, None] * u)
    py_t = z / r[None, :]
    return BaState(u=u, r=r, py_t=py_t, beta=float(beta))


def ba_step(state: BaState, problem: IbProblem) -> BaState:
    p = problem.joint.px.mass
    s = problem.joint.s.matrix

    r = p @ state.u
    z = s @ (p[:, None] * state.u)
    alive = r > 0
    py_t = state.py_t.copy()
    py_t[:, alive] = z[:, alive] / r[alive]

    if state.beta == 0:
        penalty = np.zeros_like(state.u)
    else:
        # +inf KL stays +inf and yields zero weight
        penalty = state.beta * kl_matrix(s, py_t)

    with np.errstate(divide="ignore"):
        logits = np.log(r)[None, :] - penalty
    norm = logsumexp(logits, axis=1, keepdims=True)
    u = state.u.copy()
    finite = np.isfinite(norm[:, 0])
    u[finite] = np.exp(logits[finite] - norm[finite])

    return BaState(u=u, r=r, py_t=py_t, beta=state.beta)


def information_plane(state: BaState, problem: IbProblem) -> tuple[float, float]:
    """(I(T;Y), I(X;T)) of the encoder in `state`."""
    p = problem.joint.px.mass
    joint = p[:, None] * state.u
    t_mass = joint.sum(axis=0)
    rate = float(max(rel_entr(joint, np.outer(p, t_mass)).sum(), 0.0))
    z = problem.joint.s.matrix @ joint
    rel = relevance(z, t_mass, problem.joint.qy.mass)
    return max(rel, 0.0), rate


def ba_solve(
    problem: IbProblem,
    beta: float,
    max_iter: int = 5000,
    tol: float = 1e-12,
    seed: int = 0,
    jitter_scale: float = 1e-2,
) -> SolverReport:
    if beta < 0 or not math.isfinite(beta):
        raise DomainError(f"beta={beta!r} must be finite and ≥ 0")

    state = init_ba_state(problem, beta, seed, jitter_scale)
    prev_rate: Optional[float] = None
    rate_change = math.inf
    increases = 0
    status = SolverStatus.MAX_ITERATIONS
    rel = rate = 0.0

    iteration = 0
    for iteration in range(1, max_iter + 1):
        state = ba_step(state, problem)
        rel, rate = information_plane(state, problem)

        if prev_rate is not None:
            rate_change = abs(rate - prev_rate)
            if iteration > 2 and rate > prev_rate + RATE_INCREASE_TOL:
                increases += 1
        prev_rate = rate

        if rate_change <= tol:
            status = SolverStatus.CONVERGED
            break

    if increases:
        log.warning("BA β=%.6g: I(X;T) increased on %d iterations", beta, increases)
    if status == SolverStatus.MAX_ITERATIONS:
        log.debug("BA β=%.6g hit max_iter=%d (Δrate=%.2e)", beta, max_iter, rate_change)

    p = problem.joint.px.mass
    marginal = float(np.max(np.abs(p * (state.u.sum(axis=1) - 1.0))))
    return SolverReport(
        solver=SolverKind.BA,
        threshold=None,
        rate=rate,
        relevance=rel,
        objective=rate - entropy(problem.joint.px),
        zeta=float(beta),
        iterations=iteration,
        status=status,
        residuals=Residuals(marginal=marginal, constraint=0.0, rate_change=rate_change),
    )


def slope_search(problem: IbProblem, target_I: float, search_cfg: Optional[SlopeSearchConfig] = None) -> SlopeSearchResult:
    """Find β whose BA fixed point has I(T;Y) = target_I.

    Doubles β from 1 until the relevance passes the target, then bisects.
    A trial only counts as a hit when its BA run converged.
    """
    cfg = search_cfg or SlopeSearchConfig()
    cap = mutual_information(problem.joint)
    if not (0.0 < target_I < cap):
        raise DomainError(f"target I={target_I!r} outside (0, I(X;Y)={cap:.6g})")

    if cfg.bottleneck_size is not None and cfg.bottleneck_size != problem.n:
        problem = IbProblem(problem.joint, problem.threshold, cfg.bottleneck_size)

    trials: list[SlopeTrial] = []

    def trial(beta: float) -> SolverReport:
        report = ba_solve(problem, beta, cfg.max_iter, cfg.ba_tol, cfg.seed, cfg.jitter_scale)
        trials.append(
            SlopeTrial(beta=beta, relevance=report.relevance, rate=report.rate, converged=report.converged)
        )
        if len(trials) > cfg.max_trials:
            raise SearchFailedError(f"trial cap {cfg.max_trials} reached for I={target_I:.6g}", trials=trials)
        return report

    def hit(report: SolverReport) -> bool:
        return report.converged and abs(report.relevance - target_I) <= cfg.tol

    lo, hi = 0.0, 1.0
    report = trial(hi)
    while report.relevance < target_I and not hit(report):
        lo = hi
        hi = 2.0 * hi
        if hi > cfg.beta_max:
            raise SearchFailedError(
                f"relevance stayed below I={target_I:.6g} up to β_max={cfg.beta_max:g}", trials=trials
            )
        report = trial(hi)

    beta = hi
    while not hit(report):
        if hi - lo <= 1e-12 * max(1.0, hi):
            raise SearchFailedError(
                f"β bracket collapsed at {hi:.12g} without reaching I={target_I:.6g}: "
                f"relevance jumps across the target",
                trials=trials,
            )
        beta = 0.5 * (lo + hi)
        report = trial(beta)
        if report.relevance < target_I:
            lo = beta
        else:
            hi = beta

    log.info("slope search I=%.6g -> β=%.6f after %d trials", target_I, beta, len(trials))
    return SlopeSearchResult(beta=beta, report=report, trials=trials)
