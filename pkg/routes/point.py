from __future__ import annotations

import argparse
import json

from enums.solver_enum import InfoUnits, SolverKind, SolverStatus
from models.distribution_model import IbProblem
from routes.common import (
    add_gas_args,
    add_problem_args,
    ba_max_iter,
    gas_config_from_args,
    joint_from_args,
    search_config_from_args,
    solver_kind,
)
from services import ba_service, gas_service
from services.output_service import emit, render_report
from utils.errors import SearchFailedError, SolverError
from utils.logger import warning


# ============================================================
# 🎯 POINT — single threshold, SolverReport as JSON
# ============================================================


def register(subparsers) -> argparse.ArgumentParser:
    p = subparsers.add_parser("point", help="solve one threshold and print the report as JSON")
    add_problem_args(p)
    add_gas_args(p)
    p.add_argument("--i", type=float, required=True, help="relevance threshold (nats)")
    p.add_argument("--beta", type=float, default=None, help="BA: fixed multiplier instead of a slope search")
    p.add_argument("--history", action="store_true", help="GAS: include per-iteration diagnostics")
    p.add_argument("--units", choices=[k.value for k in InfoUnits], default=InfoUnits.NATS.value)
    p.add_argument("--out", type=str, default=None)
    p.set_defaults(handler=cmd_point)
    return p


def _failure(threshold: float, status: SolverStatus, message: str) -> str:
    return json.dumps({"threshold": threshold, "status": status.value, "message": message}, indent=2) + "\n"


def cmd_point(args: argparse.Namespace) -> int:
    _, joint = joint_from_args(args)
    units = InfoUnits(args.units)

    if solver_kind(args) == SolverKind.GAS:
        cfg = gas_config_from_args(args, record_history=args.history)
        problem = IbProblem(joint, args.i, cfg.bottleneck_size)
        try:
            report = gas_service.solve(problem, cfg)
        except SolverError as exc:
            warning(f"I={args.i}: {exc.status.value}: {exc}")
            emit(_failure(args.i, exc.status, str(exc)), args.out)
            return 4 if exc.status == SolverStatus.NUMERICAL_FAILURE else 0
    else:
        search_cfg = search_config_from_args(args)
        problem = IbProblem(joint, args.i, search_cfg.bottleneck_size)
        if args.beta is not None:
            report = ba_service.ba_solve(
                problem, args.beta, ba_max_iter(args), search_cfg.ba_tol, search_cfg.seed, search_cfg.jitter_scale
            )
        else:
            try:
                result = ba_service.slope_search(problem, args.i, search_cfg)
            except SearchFailedError as exc:
                warning(f"I={args.i}: slope search failed after {len(exc.trials)} trials")
                emit(_failure(args.i, SolverStatus.SEARCH_FAILED, str(exc)), args.out)
                return 0
            report = result.report
        report = report.model_copy(update={"threshold": args.i})

    emit(render_report(report, units), args.out)
    return 0
