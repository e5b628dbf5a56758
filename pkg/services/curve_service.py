from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, Optional, Sequence, TypeVar

from enums.solver_enum import SolverKind, SolverStatus
from models.distribution_model import IbProblem, JointDistribution
from schemas.ba_schema import SlopeSearchConfig
from schemas.curve_schema import CurveRecord, IbCurve
from schemas.gas_schema import GasConfig, SolverReport
from services import ba_service, gas_service
from utils.errors import DomainError, SearchFailedError, SolverError
from utils.logger import get_logger

log = get_logger("curve")

T = TypeVar("T")
R = TypeVar("R")


# ======================================================
# IBGAS — CURVE SWEEPS
# Points are independent solves; inputs are immutable and
# every solve owns its state, so they may run in parallel.
# Rows come back sorted by threshold.
# ======================================================


def _map(fn: Callable[[T], R], items: Sequence[T], workers: int) -> list[R]:
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=min(workers, len(items))) as pool:
        return list(pool.map(fn, items))


def record_from_report(report: SolverReport, threshold: float) -> CurveRecord:
    return CurveRecord(
        threshold_I=threshold,
        rate_R=report.rate,
        relevance=report.relevance,
        zeta=report.zeta,
        iterations=report.iterations,
        status=report.status,
        marginal_residual=report.residuals.marginal,
    )


def parse_threshold_range(i_min: float, i_max: float, steps: int) -> list[float]:
    """`steps` evenly spaced thresholds from i_min to i_max inclusive."""
    if steps < 1:
        raise DomainError(f"--i-steps must be ≥ 1, got {steps}")
    if steps == 1:
        return [float(i_min)]
    if i_max < i_min:
        raise DomainError(f"--i-max {i_max} below --i-min {i_min}")
    delta = (i_max - i_min) / (steps - 1)
    return [float(i_min + k * delta) for k in range(steps)]


def parse_beta_sweep(text: str) -> list[float]:
    """'a:b:n' -> n evenly spaced β values from a to b inclusive."""
    parts = text.split(":")
    if len(parts) != 3:
        raise DomainError(f"--beta-sweep expects a:b:n, got {text!r}")
    try:
        a, b, n = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise DomainError(f"--beta-sweep expects a:b:n, got {text!r}") from None
    if a < 0 or b < a:
        raise DomainError(f"--beta-sweep needs 0 ≤ a ≤ b, got {text!r}")
    return parse_threshold_range(a, b, n)


def sweep_thresholds(
    joint: JointDistribution,
    thresholds: Iterable[float],
    cfg: GasConfig,
    workers: int = 1,
) -> IbCurve:
    """GAS at each threshold; infeasible or failed points become status rows."""
    levels = sorted(float(t) for t in thresholds)
    for t in levels:
        if t < 0:
            raise DomainError(f"threshold I={t!r} must be ≥ 0")

    def solve_point(threshold: float) -> CurveRecord:
        problem = IbProblem(joint, threshold, cfg.bottleneck_size)
        try:
            return record_from_report(gas_service.solve(problem, cfg), threshold)
        except SolverError as exc:
            log.error("I=%.6g failed: %s (%s)", threshold, exc.status.value, exc)
            return CurveRecord(threshold_I=threshold, status=exc.status, iterations=exc.iteration or 0, message=str(exc))

    records = _map(solve_point, levels, workers)
    return IbCurve(
        solver=SolverKind.GAS,
        problem_fingerprint=joint.fingerprint(),
        config=cfg.model_dump(),
        records=records,
    )


def sweep_betas(
    joint: JointDistribution,
    betas: Iterable[float],
    *,
    max_iter: int = 5000,
    tol: float = 1e-12,
    seed: int = 0,
    jitter_scale: float = 1e-2,
    bottleneck_size: Optional[int] = None,
    workers: int = 1,
) -> IbCurve:
    """BA at fixed multipliers; each row's threshold_I is the relevance reached."""
    problem = IbProblem(joint, 0.0, bottleneck_size)

    def solve_beta(beta: float) -> CurveRecord:
        report = ba_service.ba_solve(problem, beta, max_iter, tol, seed, jitter_scale)
        return record_from_report(report, report.relevance)

    records = _map(solve_beta, [float(b) for b in betas], workers)
    records.sort(key=lambda rec: (rec.threshold_I, rec.zeta or 0.0))
    return IbCurve(
        solver=SolverKind.BA,
        problem_fingerprint=joint.fingerprint(),
        config={
            "max_iter": max_iter,
            "tol": tol,
            "seed": seed,
            "jitter_scale": jitter_scale,
            "bottleneck_size": bottleneck_size,
        },
        records=records,
    )


def search_thresholds(
    joint: JointDistribution,
    thresholds: Iterable[float],
    search_cfg: SlopeSearchConfig,
    workers: int = 1,
) -> IbCurve:
    """BA at each threshold by slope search; zeta holds the β found."""
    levels = sorted(float(t) for t in thresholds)

    def search_point(threshold: float) -> CurveRecord:
        problem = IbProblem(joint, threshold, search_cfg.bottleneck_size)
        try:
            result = ba_service.slope_search(problem, threshold, search_cfg)
        except SearchFailedError as exc:
            log.error("I=%.6g: slope search failed after %d trials", threshold, len(exc.trials))
            return CurveRecord(threshold_I=threshold, status=SolverStatus.SEARCH_FAILED, message=str(exc))
        except DomainError as exc:
            return CurveRecord(threshold_I=threshold, status=SolverStatus.INFEASIBLE, message=str(exc))
        return record_from_report(result.report, threshold)

    records = _map(search_point, levels, workers)
    return IbCurve(
        solver=SolverKind.BA,
        problem_fingerprint=joint.fingerprint(),
        config=search_cfg.model_dump(),
        records=records,
    )


def cluster_points(curve: IbCurve, resolution: float = 1e-3) -> int:
    """Number of distinct (relevance, rate) points at the given resolution (max-norm)."""
    centers: list[tuple[float, float]] = []
    for rec in curve.records:
        if not rec.ok or rec.relevance is None:
            continue
        point = (rec.relevance, rec.rate_R)
        if not any(abs(point[0] - c[0]) <= resolution and abs(point[1] - c[1]) <= resolution for c in centers):
            centers.append(point)
    return len(centers)


def all_failed(curve: IbCurve) -> bool:
    """True when every row is a numerical failure. Infeasible and SearchFailed
    rows are results, not failures."""
    return bool(curve.records) and all(
        rec.status == SolverStatus.NUMERICAL_FAILURE for rec in curve.records
    )
