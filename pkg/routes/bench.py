from __future__ import annotations

import argparse

from routes.common import (
    add_gas_args,
    add_output_args,
    add_problem_args,
    gas_config_from_args,
    joint_from_args,
    output_options,
    parse_float_list,
    search_config_from_args,
)
from services.bench_service import bench
from services.output_service import emit, render_bench
from utils.logger import info


# ============================================================
# ⏱️ BENCH — GAS solve vs BA slope search
# ============================================================


def register(subparsers) -> argparse.ArgumentParser:
    p = subparsers.add_parser("bench", help="time GAS against BA slope search per target I")
    add_problem_args(p)
    add_gas_args(p)
    add_output_args(p)
    p.add_argument("--target-i-list", type=parse_float_list, required=True)
    p.add_argument("--repeats", type=int, default=1)
    p.set_defaults(handler=cmd_bench)
    return p


def cmd_bench(args: argparse.Namespace) -> int:
    _, joint = joint_from_args(args)
    fmt, units = output_options(args)
    info(f"bench: {len(args.target_i_list)} targets x {args.repeats} repeats (timings are hardware dependent)")
    rows = bench(joint, args.target_i_list, args.repeats, gas_config_from_args(args), search_config_from_args(args))
    emit(render_bench(rows, fmt, units), args.out)
    return 0
