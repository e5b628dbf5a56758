from __future__ import annotations

import math
from typing import Optional

import numpy as np
from scipy.special import logsumexp

from enums.solver_enum import SolverKind, SolverStatus
from models.distribution_model import IbProblem
from models.gas_state_model import GasState, Kernel
from schemas.gas_schema import GasConfig, IterationDiagnostics, Residuals, SolverReport
from services.information_service import (
    entropy,
    mutual_information,
    posterior_objective,
    relevance,
)
from utils.errors import InfeasibleError, NumericalFailureError, SolverError
from utils.logger import get_logger

log = get_logger("gas")

# ======================================================
# IBGAS — GENERALIZED ALTERNATING SINKHORN (GAS)
#
# Loop body, in order:
#   solve_zeta -> compute_kernel -> sinkhorn_step -> update_w
#   -> update_lambda -> update_r -> update_z
#
# ζ is solved first against the frozen (r, z); the kernel, φ
# and ψ are then built at that ζ with λ = −ζ. r is refreshed
# before z so that (w, r, z) leave every iteration consistent.
# ======================================================

SAFE_EXP = math.log(np.finfo(float).max)
FEASIBILITY_MARGIN = 1e-9


def _log(values: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore"):
        return np.log(values)


# ------------------------------------------------------
# initialization
# ------------------------------------------------------


def init_state(problem: IbProblem, cfg: GasConfig) -> GasState:
    """φ = 1, ψ = 1, ζ = η = 1, λ = −1, r = 1/N, w = 1/M (jittered).

    With jitter_scale > 0 each w column is multiplied by (1 + jitter·u_ij),
    u ~ Uniform(−1, 1) from rng_seed, and renormalized. z is then built as
    s·(w r) from the jittered w rather than set to 1/(K·N): a uniform z
    gives every cluster the same decoder and the first ζ equation is flat.
    With jitter_scale = 0 the uniform initialization is used verbatim.
    """
    m, k, n = problem.joint.m, problem.joint.k, problem.n

    w = np.full((m, n), 1.0 / m)
    r = np.full(n, 1.0 / n)

    if cfg.jitter_scale > 0:
        rng = np.random.default_rng(cfg.rng_seed)
        w = w * (1.0 + cfg.jitter_scale * rng.uniform(-1.0, 1.0, size=(m, n)))
        w = w / w.sum(axis=0, keepdims=True)
        z = problem.joint.s.matrix @ (w * r[None, :])
    else:
        z = np.full((k, n), 1.0 / (k * n))

    return GasState(
        w=w,
        r=r,
        z=z,
        phi=np.ones(m),
        psi=np.ones(n),
        psi_shift=np.zeros(n),
        lam=-np.ones((k, n)),
        zeta=1.0,
        eta=1.0,
    )


# ------------------------------------------------------
# kernel
# ------------------------------------------------------


def kernel_sums(
    state: GasState, problem: IbProblem, cfg: GasConfig, zeta: Optional[float] = None
) -> tuple[np.ndarray, np.ndarray]:
    """a_ij = Σ_k s_ki log z_kj (log z floored at log_floor) and b_ij = Σ_k s_ki λ_kj.

    With `zeta` given, λ is taken at its stationary value −ζ instead of state.lam.
    """
    st = problem.joint.s.matrix.T
    log_z = np.maximum(_log(state.z), cfg.log_floor)
    lam = state.lam if zeta is None else np.full_like(state.lam, -float(zeta))
    return st @ log_z, st @ lam


def _log_column_mass(state: GasState) -> np.ndarray:
    mass = state.z.sum(axis=0)
    return np.where(mass > 0, _log(mass), 0.0)


def log_likelihood(state: GasState, problem: IbProblem, cfg: GasConfig) -> np.ndarray:
    """ℓ_ij = a_ij − log Σ_k z_kj = Σ_k s_ki log P(y_k | t_j).

    Clusters whose z column vanished get log-mass 0; their r_j is 0 as well.
    """
    a, _ = kernel_sums(state, problem, cfg)
    return a - _log_column_mass(state)[None, :]


def compute_kernel(state: GasState, problem: IbProblem, cfg: GasConfig, zeta: Optional[float] = None) -> Kernel:
    """Λ_ij = exp(−b_ij + ζ·a_ij) with λ tied to ζ.

    Stabilized kernels subtract the column maximum of the exponent and
    return it as `shift`; ψ is carried in the same shifted scale.
    """
    zeta = state.zeta if zeta is None else float(zeta)
    a, b = kernel_sums(state, problem, cfg, zeta)
    exponent = -b + zeta * a

    if cfg.stabilized:
        shift = exponent.max(axis=0)
        exponent = exponent - shift[None, :]
    else:
        shift = np.zeros(a.shape[1])
        if not np.all(exponent <= SAFE_EXP):
            raise NumericalFailureError(
                f"kernel exponent {float(np.max(exponent)):.6g} overflows (ζ={zeta:.6g})", zeta=zeta
            )

    return Kernel(matrix=np.exp(exponent), a=a, b=b, shift=shift, zeta=zeta)


def coupled_log_psi(state: GasState, zeta: float, shift: np.ndarray) -> np.ndarray:
    """log ψ_j = −ζ(1 + log Σ_k z_kj), written in the scale of `shift`.

    This is the ψ the r update is stationary for (ψ_j ∝ r_j^−ζ): together
    with Λ(ζ) it leaves Λ_ij ψ_j = exp(ζ ℓ_ij).
    """
    return -zeta * (1.0 + _log_column_mass(state)) + shift


# ------------------------------------------------------
# step A: ζ, Sinkhorn scaling, w
# ------------------------------------------------------


class ZetaEquation:
    """G(ζ) and G′(ζ) with r and z frozen.

    For a candidate ζ, ψ(ζ) follows r through `coupled_log_psi` and φ(ζ) is
    the row update against Λ(ζ), so the plan π = φΛψr has rows p. Then

        G(ζ) = Σ_ij π_ij(ζ) ℓ_ij − Î

    which is the softmax form evaluated here: π_ij = p_i u_ij with
    log u_ij = log r_j + ζ ℓ_ij − logsumexp_j(...). G′(ζ) is the p-weighted
    variance of ℓ_i· under u_i·, so G is nondecreasing in ζ.
    """

    def __init__(self, state: GasState, problem: IbProblem, cfg: GasConfig):
        self.ell = log_likelihood(state, problem, cfg)
        self.log_r = _log(state.r)
        self.p = problem.joint.px.mass
        self.const = -problem.i_hat

    def encoder(self, zeta: float) -> np.ndarray:
        logits = self.log_r[None, :] + zeta * self.ell
        return np.exp(logits - logsumexp(logits, axis=1, keepdims=True))

    def value_and_derivative(self, zeta: float) -> tuple[float, float]:
        u = self.encoder(zeta)
        mean = (u * self.ell).sum(axis=1)
        var = (u * (self.ell - mean[:, None]) ** 2).sum(axis=1)
        g = self.const + float(self.p @ mean)
        dg = float(self.p @ var)
        if not (math.isfinite(g) and math.isfinite(dg)):
            raise NumericalFailureError(f"non-finite G at ζ={zeta:.6g}", zeta=zeta)
        return g, dg

    def value(self, zeta: float) -> float:
        return self.value_and_derivative(zeta)[0]

    def derivative(self, zeta: float) -> float:
        return self.value_and_derivative(zeta)[1]


def g_value(zeta: float, state: GasState, problem: IbProblem, cfg: Optional[GasConfig] = None) -> float:
    return ZetaEquation(state, problem, cfg or GasConfig()).value(zeta)


def g_derivative(zeta: float, state: GasState, problem: IbProblem, cfg: Optional[GasConfig] = None) -> float:
    return ZetaEquation(state, problem, cfg or GasConfig()).derivative(zeta)


def zeta_ceiling(state: GasState, cfg: GasConfig) -> float:
    return min(cfg.zeta_growth * max(1.0, state.zeta), cfg.zeta_cap)


def solve_zeta(state: GasState, problem: IbProblem, cfg: GasConfig) -> float:
    """Root of G on [0, ceiling] by safeguarded Newton, warm-started at the previous ζ.

    A zero threshold, or G(0) ≥ 0, leaves the constraint slack and ζ = 0.
    When G stays negative up to the ceiling zeta_growth·max(1, ζ_prev) the
    ceiling itself is returned and ζ keeps growing on later iterations;
    once the ceiling reaches zeta_cap the threshold is declared infeasible.
    """
    if problem.threshold <= 0:
        return 0.0

    eq = ZetaEquation(state, problem, cfg)
    if eq.value(0.0) >= 0:
        return 0.0

    ceiling = zeta_ceiling(state, cfg)

    # bracket [lo, hi] with G(lo) < 0 <= G(hi)
    lo = 0.0
    hi = min(max(1.0, state.zeta), ceiling)
    g_hi = eq.value(hi)
    while g_hi < 0:
        if hi >= ceiling:
            if ceiling >= cfg.zeta_cap:
                raise InfeasibleError(
                    f"G(ζ_cap={cfg.zeta_cap:g}) = {g_hi:.3e} < 0: threshold unreachable",
                    zeta=hi,
                )
            return ceiling
        lo = hi
        hi = min(2.0 * hi, ceiling)
        g_hi = eq.value(hi)

    x = state.zeta if lo < state.zeta < hi else 0.5 * (lo + hi)
    for _ in range(cfg.newton_max_steps):
        g, dg = eq.value_and_derivative(x)
        if abs(g) <= cfg.newton_tol:
            return x
        if g < 0:
            lo = x
        else:
            hi = x

        x_new = x - g / dg if dg > 0 else math.nan
        if not (lo < x_new < hi):
            x_new = 0.5 * (lo + hi)

        # bracket exhausted at floating-point resolution
        if x_new == x or hi - lo <= 4.0 * np.finfo(float).eps * max(1.0, hi):
            return x_new
        x = x_new

    log.debug("newton hit %d steps, |G|=%.3e at ζ=%.12g", cfg.newton_max_steps, abs(g), x)
    return x


def sinkhorn_step(state: GasState, kernel: Kernel, problem: IbProblem) -> tuple[np.ndarray, np.ndarray]:
    """ψ from `coupled_log_psi`, then φ_i = p_i / Σ_j Λ_ij ψ_j r_j."""
    p = problem.joint.px.mass

    with np.errstate(over="ignore"):
        psi = np.exp(coupled_log_psi(state, kernel.zeta, kernel.shift))
    if not np.all(np.isfinite(psi)):
        raise NumericalFailureError("ψ overflow", zeta=kernel.zeta)

    row = kernel.matrix @ (psi * state.r)
    ok = row > 0
    if not np.all(ok | (p == 0)) or not np.all(np.isfinite(row)):
        raise NumericalFailureError("kernel row vanished for a positive-mass x", zeta=kernel.zeta)
    phi = np.where(ok, p / np.where(ok, row, 1.0), 0.0)

    state.psi = psi
    state.psi_shift = kernel.shift.copy()
    state.phi = phi
    return psi, phi


def update_w(state: GasState, kernel: Kernel, cfg: Optional[GasConfig] = None) -> np.ndarray:
    """ψ_j = 1 / Σ_i Λ_ij φ_i, then w_ij = φ_i Λ_ij ψ_j (unit columns)."""
    dead_mass = (cfg or GasConfig()).dead_cluster_mass

    col = kernel.matrix.T @ state.phi
    live = col > 0
    if not np.all(live | (state.r < dead_mass)) or not np.all(np.isfinite(col)):
        raise NumericalFailureError("kernel column vanished for a live cluster", zeta=kernel.zeta)
    psi = np.where(live, 1.0 / np.where(live, col, 1.0), state.psi)

    w = state.phi[:, None] * kernel.matrix * psi[None, :]
    dead = ~live | (state.r < dead_mass)
    if np.any(dead):
        w[:, dead] = state.w[:, dead]

    state.psi = psi
    state.psi_shift = kernel.shift.copy()
    state.w = w
    return w


# ------------------------------------------------------
# step B: λ
# ------------------------------------------------------


def update_lambda(state: GasState) -> np.ndarray:
    state.lam = np.full_like(state.lam, -state.zeta)
    return state.lam


# ------------------------------------------------------
# step C: r, η and z
# ------------------------------------------------------


def update_r(state: GasState) -> tuple[np.ndarray, float]:
    """r̃_j = r_j ψ^c_j / ψ_j, r = r̃ / Σ r̃ (log-sum-exp), η = ζ·log Σ r̃.

    ψ^c is `coupled_log_psi` at the current (z, ζ) and ψ the column scaling
    from `update_w`, so r̃_j = Σ_i φ_i Λ_ij ψ^c_j r_j is the column mass of the
    row-balanced plan and Σ r̃ = 1 up to rounding. Must run before update_z.
    """
    live = state.r > 0
    log_target = coupled_log_psi(state, state.zeta, state.psi_shift)

    log_r_tilde = np.full(state.r.shape, -np.inf)
    log_r_tilde[live] = _log(state.r[live]) + log_target[live] - _log(state.psi[live])
    if not np.all(np.isfinite(log_r_tilde[live])):
        raise NumericalFailureError("non-finite r-update exponent", zeta=state.zeta)

    log_norm = float(logsumexp(log_r_tilde))
    r = np.exp(log_r_tilde - log_norm)
    r = r / r.sum()

    state.r = r
    state.eta = state.zeta * log_norm
    return r, state.eta


def update_z(state: GasState, problem: IbProblem) -> np.ndarray:
    """z_kj = Σ_i s_ki w_ij r_j."""
    state.z = problem.joint.s.matrix @ (state.w * state.r[None, :])
    return state.z


# ------------------------------------------------------
# loop
# ------------------------------------------------------


def marginal_residual(state: GasState, problem: IbProblem) -> float:
    return float(np.max(np.abs(state.w @ state.r - problem.joint.px.mass)))


def column_residual(state: GasState) -> float:
    return float(np.max(np.abs(state.w.sum(axis=0) - 1.0)))


def constraint_residual(state: GasState, problem: IbProblem, rel: float) -> float:
    """|I(T;Y) − I| while the constraint is active, shortfall only when ζ = 0."""
    if state.zeta > 0:
        return abs(rel - problem.threshold)
    return max(0.0, problem.threshold - rel)


def iterate(
    state: GasState,
    problem: IbProblem,
    cfg: GasConfig,
    iteration: int = 0,
) -> tuple[GasState, Kernel, IterationDiagnostics]:
    state.zeta = solve_zeta(state, problem, cfg)
    kernel = compute_kernel(state, problem, cfg)
    sinkhorn_step(state, kernel, problem)
    update_w(state, kernel, cfg)
    update_lambda(state)
    update_r(state)
    update_z(state, problem)

    diag = IterationDiagnostics(
        iteration=iteration,
        objective=posterior_objective(state.w, state.r),
        relevance=relevance(state.z, state.r, problem.joint.qy.mass),
        marginal_residual=marginal_residual(state, problem),
        zeta=state.zeta,
    )
    return state, kernel, diag


def reconstruct_encoder(state: GasState, problem: IbProblem) -> np.ndarray:
    """u_ij = P(t_j | x_i) = w_ij r_j / p_i; rows with p_i = 0 are uniform."""
    p = problem.joint.px.mass
    joint = state.w * state.r[None, :]
    u = np.full_like(joint, 1.0 / joint.shape[1])
    positive = p > 0
    u[positive] = joint[positive] / p[positive, None]
    return u


def check_feasible(problem: IbProblem) -> float:
    cap = mutual_information(problem.joint)
    if problem.threshold > 0 and problem.threshold >= cap - FEASIBILITY_MARGIN:
        raise InfeasibleError(
            f"threshold I={problem.threshold:.6g} not below I(X;Y)={cap:.6g}"
        )
    return cap


def run(problem: IbProblem, cfg: GasConfig) -> tuple[SolverReport, GasState]:
    """Iterate to convergence or max_iter; returns the report and the final state.

    On MaxIterations the lowest-objective iterate that met the constraint and
    the marginal tolerance is reported instead of the last one, still flagged
    MaxIterations. Without such an iterate the last one is reported.
    """
    if cfg.bottleneck_size is not None and cfg.bottleneck_size != problem.n:
        problem = IbProblem(problem.joint, problem.threshold, cfg.bottleneck_size)
    check_feasible(problem)

    h_x = entropy(problem.joint.px)
    state = init_state(problem, cfg)
    history: list[IterationDiagnostics] = []

    iteration = 0
    prev_objective: Optional[float] = None
    status = SolverStatus.MAX_ITERATIONS
    rate_change = math.inf
    constraint = math.inf
    best: Optional[tuple[IterationDiagnostics, GasState]] = None

    try:
        for iteration in range(1, cfg.max_iter + 1):
            state, _, diag = iterate(state, problem, cfg, iteration)
            if cfg.record_history:
                history.append(diag)

            rate_change = math.inf if prev_objective is None else abs(diag.objective - prev_objective)
            prev_objective = diag.objective
            constraint = constraint_residual(state, problem, diag.relevance)

            if iteration % 100 == 0:
                log.debug(
                    "it=%d obj=%.12f rel=%.12f ζ=%.8f marg=%.2e",
                    iteration, diag.objective, diag.relevance, state.zeta, diag.marginal_residual,
                )

            if (
                rate_change <= cfg.rate_tol
                and constraint <= cfg.constraint_tol
                and diag.marginal_residual <= cfg.marginal_tol
            ):
                status = SolverStatus.CONVERGED
                break

            feasible = (
                diag.relevance >= problem.threshold - cfg.constraint_tol
                and diag.marginal_residual <= cfg.marginal_tol
            )
            if feasible and (best is None or diag.objective < best[0].objective):
                best = (diag, state.copy())
    except SolverError as exc:
        exc.iteration = iteration
        log.info("GAS stopped at iteration %d: %s (%s)", iteration, exc.status.value, exc)
        raise

    if status == SolverStatus.MAX_ITERATIONS:
        log.warning(
            "GAS hit max_iter=%d at I=%.6g (Δobj=%.2e, constraint=%.2e)",
            cfg.max_iter, problem.threshold, rate_change, constraint,
        )
        if best is not None and best[0].objective < posterior_objective(state.w, state.r):
            log.info("reporting the best feasible iterate (iteration %d)", best[0].iteration)
            state = best[1]
            constraint = constraint_residual(state, problem, best[0].relevance)

    objective = posterior_objective(state.w, state.r)
    report = SolverReport(
        solver=SolverKind.GAS,
        threshold=problem.threshold,
        rate=objective + h_x,
        relevance=relevance(state.z, state.r, problem.joint.qy.mass),
        objective=objective,
        zeta=state.zeta,
        iterations=iteration,
        status=status,
        residuals=Residuals(
            marginal=marginal_residual(state, problem),
            constraint=constraint,
            rate_change=rate_change,
            column=column_residual(state),
        ),
        history=history if cfg.record_history else None,
    )
    log.info(
        "GAS I=%.6g -> R=%.10f rel=%.10f ζ=%.6f [%s, %d it]",
        problem.threshold, report.rate, report.relevance, report.zeta, status.value, iteration,
    )
    return report, state


def solve(problem: IbProblem, cfg: GasConfig) -> SolverReport:
    return run(problem, cfg)[0]
