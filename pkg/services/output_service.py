from __future__ import annotations

import csv
import io
import json
import math
import sys
from pathlib import Path
from typing import IO, Any, Iterable, Optional, Union

from pydantic import ValidationError

from enums.solver_enum import InfoUnits, OutputFormat
from schemas.curve_schema import CSV_COLUMNS, BenchRow, CurveSample, IbCurve, RunManifest
from schemas.gas_schema import SolverReport
from utils.errors import InputFileError

# ======================================================
# IBGAS — OUTPUT WRITERS
# Internal quantities are nats; --units bits converts the
# information columns on output only.
# ======================================================

LN2 = math.log(2.0)
INFO_FIELDS = {"threshold_I", "rate_R", "relevance", "rate", "objective", "target_I", "gas_rate"}

PathLike = Union[str, Path]


def to_units(value: Optional[float], units: InfoUnits) -> Optional[float]:
    if value is None or units == InfoUnits.NATS:
        return value
    return value / LN2


def _fmt(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    if hasattr(value, "value"):
        return str(value.value)
    return str(value)


def _convert_row(row: dict[str, Any], units: InfoUnits) -> dict[str, Any]:
    return {k: to_units(v, units) if k in INFO_FIELDS else v for k, v in row.items()}


# ------------------------------------------------------
# curves
# ------------------------------------------------------


def render_curve(curve: IbCurve, fmt: OutputFormat = OutputFormat.CSV, units: InfoUnits = InfoUnits.NATS) -> str:
    rows = [_convert_row(rec.model_dump(mode="json"), units) for rec in curve.records]

    if fmt == OutputFormat.JSON:
        payload = {
            "solver": curve.solver.value,
            "units": units.value,
            "problem_fingerprint": curve.problem_fingerprint,
            "records": rows,
        }
        return json.dumps(payload, indent=2) + "\n"

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        writer.writerow([_fmt(row[col]) for col in CSV_COLUMNS])
    return buf.getvalue()


def emit(text: str, out: Optional[PathLike] = None, stream: Optional[IO[str]] = None) -> Optional[Path]:
    """Write to `out` if given, else to `stream` (default stdout)."""
    if out is None:
        (stream or sys.stdout).write(text)
        return None
    path = Path(out)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8", newline="")
    return path


def write_curve(
    curve: IbCurve,
    out: Optional[PathLike] = None,
    fmt: OutputFormat = OutputFormat.CSV,
    units: InfoUnits = InfoUnits.NATS,
    stream: Optional[IO[str]] = None,
) -> Optional[Path]:
    return emit(render_curve(curve, fmt, units), out, stream)


def read_curve_csv(text: str) -> list[dict[str, str]]:
    reader = csv.DictReader(io.StringIO(text))
    if tuple(reader.fieldnames or ()) != CSV_COLUMNS:
        raise InputFileError(f"unexpected curve header {reader.fieldnames!r}")
    return list(reader)


# ------------------------------------------------------
# oracle samples, single reports, bench tables
# ------------------------------------------------------


def render_samples(
    samples: Iterable[CurveSample],
    fmt: OutputFormat = OutputFormat.CSV,
    units: InfoUnits = InfoUnits.NATS,
    model: Optional[str] = None,
) -> str:
    rows = [
        {"threshold_I": to_units(s.threshold, units), "rate_R": to_units(s.rate, units)}
        for s in samples
    ]
    if fmt == OutputFormat.JSON:
        return json.dumps({"model": model, "units": units.value, "samples": rows}, indent=2) + "\n"

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(("threshold_I", "rate_R"))
    for row in rows:
        writer.writerow([_fmt(row["threshold_I"]), _fmt(row["rate_R"])])
    return buf.getvalue()


def render_report(report: SolverReport, units: InfoUnits = InfoUnits.NATS) -> str:
    data = report.model_dump(mode="json", exclude_none=True)
    for key in ("threshold", "rate", "relevance", "objective"):
        if key in data:
            data[key] = to_units(data[key], units)
    data["units"] = units.value
    return json.dumps(data, indent=2) + "\n"


def render_bench(rows: Iterable[BenchRow], fmt: OutputFormat = OutputFormat.CSV, units: InfoUnits = InfoUnits.NATS) -> str:
    dumped = [_convert_row(row.model_dump(mode="json"), units) for row in rows]
    if fmt == OutputFormat.JSON:
        return json.dumps({"units": units.value, "rows": dumped}, indent=2) + "\n"

    columns = list(BenchRow.model_fields)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in dumped:
        writer.writerow([_fmt(row[col]) for col in columns])
    return buf.getvalue()


# ------------------------------------------------------
# manifests
# ------------------------------------------------------


def manifest_path(out: PathLike) -> Path:
    out = Path(out)
    return out.with_name(out.name + ".manifest.json")


def write_manifest(manifest: RunManifest, out: PathLike) -> Path:
    """Sidecar `<out>.manifest.json` next to the data file."""
    path = manifest_path(out)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(manifest.model_dump_json(indent=2) + "\n", encoding="utf-8")
    return path


def read_manifest(path: PathLike) -> RunManifest:
    p = Path(path)
    if not p.is_file():
        raise InputFileError(f"manifest not found: {p}")
    try:
        return RunManifest.model_validate_json(p.read_text(encoding="utf-8"))
    except ValidationError as exc:
        raise InputFileError(f"invalid manifest {p}: {exc.error_count()} error(s)") from None
