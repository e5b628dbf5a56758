from __future__ import annotations

import argparse

from enums.solver_enum import OracleModel
from routes.common import add_output_args, output_options, parse_float_list
from schemas.curve_schema import CurveSample
from services.oracle_service import evaluate
from services.output_service import emit, render_samples


# ============================================================
# 📐 ORACLE — closed-form R(I)
# ============================================================


def register(subparsers) -> argparse.ArgumentParser:
    p = subparsers.add_parser("oracle", help="evaluate an analytic relevance-compression curve")
    p.add_argument("--model", choices=[m.value for m in OracleModel], required=True)
    p.add_argument("--e", type=float, default=0.15)
    p.add_argument("--snr", type=float, default=1.0)
    p.add_argument("--i-list", type=parse_float_list, required=True)
    add_output_args(p)
    p.set_defaults(handler=cmd_oracle)
    return p


def cmd_oracle(args: argparse.Namespace) -> int:
    model = OracleModel(args.model)
    fmt, units = output_options(args)
    samples = [
        CurveSample(threshold=i, rate=evaluate(model, i, e=args.e, snr=args.snr))
        for i in args.i_list
    ]
    emit(render_samples(samples, fmt, units, model=model.value), args.out)
    return 0
