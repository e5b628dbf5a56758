from __future__ import annotations

import statistics
import time
from typing import Iterable, Optional

from enums.solver_enum import SolverStatus
from models.distribution_model import IbProblem, JointDistribution
from schemas.ba_schema import SlopeSearchConfig
from schemas.curve_schema import BenchRow
from schemas.gas_schema import GasConfig
from services import ba_service, gas_service
from utils.errors import DomainError, SearchFailedError, SolverError
from utils.logger import get_logger

log = get_logger("bench")


def _mean_std(samples: list[float]) -> tuple[Optional[float], Optional[float]]:
    if not samples:
        return None, None
    return statistics.fmean(samples), statistics.pstdev(samples)


def bench(
    joint: JointDistribution,
    targets: Iterable[float],
    repeats: int,
    gas_cfg: GasConfig,
    search_cfg: Optional[SlopeSearchConfig] = None,
) -> list[BenchRow]:
    """Time one GAS solve against one BA slope search per target.

    Timings are wall-clock and hardware dependent; the speed-up is t_BA / t_GAS.
    """
    if repeats < 1:
        raise DomainError(f"--repeats must be ≥ 1, got {repeats}")
    search_cfg = search_cfg or SlopeSearchConfig(bottleneck_size=gas_cfg.bottleneck_size)

    rows: list[BenchRow] = []
    for target in sorted(float(t) for t in targets):
        problem = IbProblem(joint, target, gas_cfg.bottleneck_size)

        gas_times: list[float] = []
        gas_status = SolverStatus.CONVERGED
        gas_report = None
        for _ in range(repeats):
            start = time.perf_counter()
            try:
                gas_report = gas_service.solve(problem, gas_cfg)
            except SolverError as exc:
                gas_status = exc.status
                gas_report = None
                break
            gas_times.append(time.perf_counter() - start)
            gas_status = gas_report.status

        ba_times: list[float] = []
        ba_trials: list[int] = []
        ba_status = SolverStatus.CONVERGED
        ba_beta = None
        for _ in range(repeats):
            start = time.perf_counter()
            try:
                result = ba_service.slope_search(problem, target, search_cfg)
            except SearchFailedError as exc:
                log.warning("BA slope search failed at I=%.6g after %d trials", target, len(exc.trials))
                ba_status = SolverStatus.SEARCH_FAILED
                ba_trials.append(len(exc.trials))
                break
            except DomainError as exc:
                log.warning("BA slope search skipped at I=%.6g: %s", target, exc)
                ba_status = SolverStatus.INFEASIBLE
                break
            ba_times.append(time.perf_counter() - start)
            ba_trials.append(result.trial_count)
            ba_beta = result.beta

        gas_mean, gas_std = _mean_std(gas_times)
        ba_mean, ba_std = _mean_std(ba_times) if ba_status == SolverStatus.CONVERGED else (None, None)
        speedup = ba_mean / gas_mean if (ba_mean is not None and gas_mean) else None

        rows.append(
            BenchRow(
                target_I=target,
                repeats=repeats,
                gas_mean_s=gas_mean,
                gas_std_s=gas_std,
                gas_rate=gas_report.rate if gas_report else None,
                gas_zeta=gas_report.zeta if gas_report else None,
                gas_status=gas_status,
                ba_mean_s=ba_mean,
                ba_std_s=ba_std,
                ba_trials=statistics.fmean(ba_trials) if ba_trials else None,
                ba_beta=ba_beta,
                ba_status=ba_status,
                speedup=speedup,
            )
        )
        log.info(
            "bench I=%.6g: GAS %s, BA %s, speed-up %s",
            target, gas_status.value, ba_status.value, "n/a" if speedup is None else f"{speedup:.2f}",
        )
    return rows
