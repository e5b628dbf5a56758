from __future__ import annotations

import argparse
from datetime import datetime, timezone
from typing import Any, Optional

from config.settings import settings
from enums.solver_enum import InfoUnits, OutputFormat, ProblemKind, SolverKind
from models.distribution_model import JointDistribution
from schemas.ba_schema import SlopeSearchConfig
from schemas.curve_schema import RunManifest
from schemas.gas_schema import GasConfig
from schemas.problem_schema import ProblemSpec
from services.problem_service import build_problem
from utils.errors import DomainError


# ============================================================
# 🧩 SHARED FLAGS
# ============================================================


def parse_float_list(text: str) -> list[float]:
    """'0.1,0.2, 0.3' -> [0.1, 0.2, 0.3]"""
    values = []
    for token in text.split(","):
        token = token.strip()
        if not token:
            continue
        try:
            values.append(float(token))
        except ValueError:
            raise argparse.ArgumentTypeError(f"not a number: {token!r}") from None
    if not values:
        raise argparse.ArgumentTypeError("empty list")
    return values


def add_problem_args(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("problem")
    g.add_argument("--problem", choices=[k.value for k in ProblemKind], default=ProblemKind.BERNOULLI.value)
    g.add_argument("--e", type=float, default=0.15, help="Bernoulli flip probability")
    g.add_argument("--snr", type=float, default=1.0)
    g.add_argument("--half-width", type=float, default=10.0)
    g.add_argument("--step", type=float, default=0.2)
    g.add_argument("--data", type=str, default=None, help="labeled CSV for --problem empirical")
    g.add_argument("--label-col", type=int, default=4)
    g.add_argument("--header", action="store_true", help="skip the first CSV row")
    g.add_argument("--bottleneck-size", type=int, default=None, help="|T| (default |X|)")


def add_gas_args(p: argparse.ArgumentParser) -> None:
    defaults = GasConfig()
    g = p.add_argument_group("solver")
    g.add_argument("--solver", choices=[k.value for k in SolverKind], default=SolverKind.GAS.value)
    g.add_argument("--max-iter", type=int, default=None, help=f"GAS default {defaults.max_iter}, BA default 5000")
    g.add_argument("--rate-tol", type=float, default=defaults.rate_tol)
    g.add_argument("--constraint-tol", type=float, default=defaults.constraint_tol)
    g.add_argument("--marginal-tol", type=float, default=defaults.marginal_tol)
    g.add_argument("--newton-tol", type=float, default=defaults.newton_tol)
    g.add_argument("--zeta-cap", type=float, default=defaults.zeta_cap)
    g.add_argument("--jitter", type=float, default=defaults.jitter_scale)
    g.add_argument("--seed", type=int, default=settings.DEFAULT_SEED)
    g.add_argument("--unstabilized", action="store_true", help="plain (non log-domain) kernel")
    g.add_argument("--ba-tol", type=float, default=1e-12, help="BA successive I(X;T) tolerance")


def add_output_args(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("output")
    g.add_argument("--format", choices=[k.value for k in OutputFormat], default=OutputFormat.CSV.value)
    g.add_argument("--units", choices=[k.value for k in InfoUnits], default=InfoUnits.NATS.value)
    g.add_argument("--out", type=str, default=None, help="output path (default stdout)")


# ============================================================
# 🔁 FLAGS -> MODELS
# ============================================================


def problem_spec_from_args(args: argparse.Namespace) -> ProblemSpec:
    return ProblemSpec(
        kind=args.problem,
        e=args.e,
        snr=args.snr,
        half_width=args.half_width,
        step=args.step,
        data=args.data,
        label_col=args.label_col,
        header=args.header,
    )


def joint_from_args(args: argparse.Namespace) -> tuple[ProblemSpec, JointDistribution]:
    spec = problem_spec_from_args(args)
    return spec, build_problem(spec)


def gas_config_from_args(args: argparse.Namespace, *, record_history: bool = False) -> GasConfig:
    extra: dict[str, Any] = {}
    if args.max_iter is not None:
        extra["max_iter"] = args.max_iter
    return GasConfig(
        bottleneck_size=args.bottleneck_size,
        rate_tol=args.rate_tol,
        constraint_tol=args.constraint_tol,
        marginal_tol=args.marginal_tol,
        newton_tol=args.newton_tol,
        zeta_cap=args.zeta_cap,
        jitter_scale=args.jitter,
        rng_seed=args.seed,
        stabilized=not args.unstabilized,
        record_history=record_history,
        **extra,
    )


def search_config_from_args(args: argparse.Namespace) -> SlopeSearchConfig:
    extra: dict[str, Any] = {}
    if args.max_iter is not None:
        extra["max_iter"] = args.max_iter
    return SlopeSearchConfig(
        ba_tol=args.ba_tol,
        seed=args.seed,
        jitter_scale=args.jitter,
        bottleneck_size=args.bottleneck_size,
        **extra,
    )


def ba_max_iter(args: argparse.Namespace) -> int:
    return args.max_iter if args.max_iter is not None else SlopeSearchConfig().max_iter


def check_workers(workers: Optional[int]) -> int:
    workers = settings.CURVE_WORKERS if workers is None else workers
    if workers < 1:
        raise DomainError(f"--workers must be ≥ 1, got {workers}")
    return workers


def build_manifest(
    command: str,
    argv: list[str],
    spec: ProblemSpec,
    joint: JointDistribution,
    solver: SolverKind,
    config: dict[str, Any],
    args: argparse.Namespace,
) -> RunManifest:
    return RunManifest(
        command=command,
        argv=list(argv),
        problem=spec,
        problem_fingerprint=joint.fingerprint(),
        solver=solver,
        config=config,
        seed=args.seed,
        units=args.units,
        format=args.format,
        tool_version=settings.APP_VERSION,
        created_at=datetime.now(timezone.utc),
    )


def output_options(args: argparse.Namespace) -> tuple[OutputFormat, InfoUnits]:
    return OutputFormat(args.format), InfoUnits(args.units)


def solver_kind(args: argparse.Namespace) -> SolverKind:
    return SolverKind(args.solver)
