from __future__ import annotations

import argparse

from enums.solver_enum import SolverKind
from routes.common import (
    add_gas_args,
    add_output_args,
    add_problem_args,
    ba_max_iter,
    build_manifest,
    check_workers,
    gas_config_from_args,
    joint_from_args,
    output_options,
    parse_float_list,
    search_config_from_args,
    solver_kind,
)
from services.curve_service import (
    all_failed,
    parse_beta_sweep,
    parse_threshold_range,
    search_thresholds,
    sweep_betas,
    sweep_thresholds,
)
from services.output_service import read_manifest, write_curve, write_manifest
from utils.errors import DomainError
from utils.logger import error, info, success


# ============================================================
# 📈 CURVE — one row per threshold (or per β)
# ============================================================


def register(subparsers) -> argparse.ArgumentParser:
    p = subparsers.add_parser("curve", help="sweep thresholds and emit the IB curve")
    add_problem_args(p)
    add_gas_args(p)
    add_output_args(p)

    g = p.add_argument_group("sweep")
    g.add_argument("--i-min", type=float, default=0.0)
    g.add_argument("--i-max", type=float, default=None)
    g.add_argument("--i-steps", type=int, default=None)
    g.add_argument("--i-list", type=parse_float_list, default=None, help="comma-separated thresholds (nats)")
    g.add_argument("--beta-sweep", type=str, default=None, help="a:b:n fixed multipliers (BA only)")
    g.add_argument("--workers", type=int, default=None)
    g.add_argument("--rerun", type=str, default=None, help="replay the flags stored in a manifest")

    p.set_defaults(handler=cmd_curve, parser=p)
    return p


def thresholds_from_args(args: argparse.Namespace) -> list[float]:
    if args.i_list is not None:
        if args.i_max is not None or args.i_steps is not None:
            raise DomainError("use either --i-list or --i-min/--i-max/--i-steps")
        return list(args.i_list)
    if args.i_max is None or args.i_steps is None:
        raise DomainError("give --i-list or --i-max with --i-steps")
    return parse_threshold_range(args.i_min, args.i_max, args.i_steps)


def replay(args: argparse.Namespace) -> int:
    manifest = read_manifest(args.rerun)
    if manifest.command != "curve":
        raise DomainError(f"manifest was written by {manifest.command!r}, not 'curve'")

    replayed = args.parser.parse_args(manifest.argv)
    replayed.raw_argv = list(manifest.argv)
    if args.out is not None:
        replayed.out = args.out
    info(f"replaying {args.rerun} ({len(manifest.argv)} args)")
    return cmd_curve(replayed)


def cmd_curve(args: argparse.Namespace) -> int:
    if args.rerun:
        return replay(args)

    spec, joint = joint_from_args(args)
    fmt, units = output_options(args)
    workers = check_workers(args.workers)
    solver = solver_kind(args)

    if args.beta_sweep is not None:
        if solver != SolverKind.BA:
            raise DomainError("--beta-sweep requires --solver ba")
        curve = sweep_betas(
            joint,
            parse_beta_sweep(args.beta_sweep),
            max_iter=ba_max_iter(args),
            tol=args.ba_tol,
            seed=args.seed,
            jitter_scale=args.jitter,
            bottleneck_size=args.bottleneck_size,
            workers=workers,
        )
    elif solver == SolverKind.GAS:
        curve = sweep_thresholds(joint, thresholds_from_args(args), gas_config_from_args(args), workers)
    else:
        curve = search_thresholds(joint, thresholds_from_args(args), search_config_from_args(args), workers)

    path = write_curve(curve, args.out, fmt, units)
    if path is not None:
        argv = getattr(args, "raw_argv", [])
        manifest = build_manifest("curve", argv, spec, joint, curve.solver, curve.config, args)
        sidecar = write_manifest(manifest, path)
        success(f"{len(curve.records)} rows -> {path} (manifest {sidecar.name})")

    if all_failed(curve):
        error("every point failed")
        return 4
    return 0
