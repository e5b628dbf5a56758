# ============================================================
# 🚀 IBGAS — command-line entry point
#   python main.py {curve,point,oracle,bench} ...
#
# Exit codes: 0 ok (per-row infeasibility included),
#             2 argument / domain errors, 3 input-file errors,
#             4 every point failed.
# ============================================================

from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from pydantic import ValidationError

from config.settings import settings
from routes import bench, curve, oracle, point
from utils.errors import DomainError, InputFileError, SearchFailedError, SolverError
from utils.logger import error, set_level

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INPUT = 3
EXIT_FAILED = 4

COMMANDS = (curve, point, oracle, bench)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ibgas",
        description="Information-bottleneck curves by generalized alternating Sinkhorn.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {settings.APP_VERSION}")
    parser.add_argument("--log-level", default=None, help=f"default {settings.LOG_LEVEL} (IBGAS_LOG_LEVEL)")

    subparsers = parser.add_subparsers(dest="command", required=True)
    for module in COMMANDS:
        module.register(subparsers)
    return parser


def _command_argv(raw: list[str], command: str) -> list[str]:
    """Arguments after the sub-command name, as recorded in manifests."""
    try:
        return raw[raw.index(command) + 1 :]
    except ValueError:
        return []


def main(argv: Optional[Sequence[str]] = None) -> int:
    raw = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(raw)
    args.raw_argv = _command_argv(raw, args.command)

    try:
        if args.log_level:
            set_level(args.log_level)
        return args.handler(args)
    except ValidationError as exc:
        first = exc.errors()[0]
        error(f"invalid {'.'.join(str(p) for p in first['loc']) or 'value'}: {first['msg']}")
        return EXIT_USAGE
    except DomainError as exc:
        error(str(exc))
        return EXIT_USAGE
    except InputFileError as exc:
        error(str(exc))
        return EXIT_INPUT
    except (SolverError, SearchFailedError) as exc:
        error(str(exc))
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
