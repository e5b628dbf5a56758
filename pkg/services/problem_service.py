from __future__ import annotations

import csv
import io
import math
from pathlib import Path
from typing import IO, Iterable, Optional, Union

import numpy as np
from scipy.stats import norm

from config.settings import settings
from enums.solver_enum import ProblemKind
from models.distribution_model import IbProblem, JointDistribution
from schemas.problem_schema import GaussianGridSpec, LabeledSample, ProblemSpec
from utils.errors import DomainError, InputFileError
from utils.logger import get_logger

log = get_logger("problems")


# ======================================================
# IBGAS — PROBLEM GENERATORS
# Four experimental joints: jointly Bernoulli, discretized
# Gaussian channel, constant-slope block matrix, empirical data.
# ======================================================


def bernoulli_joint(e: float) -> JointDistribution:
    """X, Y ~ Bernoulli(1/2) with P(X xor Y = 1) = e."""
    if not (0.0 <= e <= 0.5):
        raise DomainError(f"flip probability e={e!r} outside [0, 1/2]")
    return JointDistribution(
        np.array(
            [
                [(1.0 - e) / 2.0, e / 2.0],
                [e / 2.0, (1.0 - e) / 2.0],
            ]
        )
    )


def gaussian_grid(spec: GaussianGridSpec) -> np.ndarray:
    """x_i = −half_width + (i−1)·step, i = 1..N (half-open [−M, M−δ])."""
    return -spec.half_width + np.arange(spec.n_grid) * spec.step


def gaussian_discretized(spec: GaussianGridSpec) -> JointDistribution:
    """Channel X = √snr·Y + S on a shared grid, cell (i, k) ∝ ρ(y_k)·ρ(x_i − √snr·y_k)·δ²."""
    grid = gaussian_grid(spec)
    x = grid[:, None]
    y = grid[None, :]
    cells = norm.pdf(y) * norm.pdf(x - math.sqrt(spec.snr) * y) * spec.step**2
    total = cells.sum()
    log.debug("gaussian grid N=%d, raw mass %.12f", spec.n_grid, total)
    return JointDistribution(cells / total)


def constant_slope_joint() -> JointDistribution:
    """4×4 block matrix with 1/8 on the two 2×2 diagonal blocks."""
    block = np.ones((2, 2))
    zeros = np.zeros((2, 2))
    return JointDistribution(np.block([[block, zeros], [zeros, block]]) / 8.0)


def empirical_joint(samples: Iterable[LabeledSample]) -> JointDistribution:
    """Empirical P(X, Y): X = distinct feature vectors, Y = distinct labels.

    Supports are ordered by first appearance; identical parsed feature
    vectors are merged.
    """
    x_index: dict[tuple[float, ...], int] = {}
    y_index: dict[str, int] = {}
    counts: dict[tuple[int, int], int] = {}
    total = 0

    for sample in samples:
        i = x_index.setdefault(tuple(sample.features), len(x_index))
        k = y_index.setdefault(sample.label, len(y_index))
        counts[(i, k)] = counts.get((i, k), 0) + 1
        total += 1

    if total == 0:
        raise DomainError("empirical_joint needs at least one sample")

    pxy = np.zeros((len(x_index), len(y_index)))
    for (i, k), c in counts.items():
        pxy[i, k] = c
    log.debug("empirical joint: %d samples, |X|=%d, |Y|=%d", total, *pxy.shape)
    return JointDistribution(pxy / total)


def load_labeled_csv(
    source: IO[bytes],
    label_column: int,
    *,
    header: bool = False,
    encoding: str = "utf-8-sig",
) -> list[LabeledSample]:
    """Parse comma-separated rows; every non-label column must be a real number."""
    raw = source.read()
    try:
        text = io.StringIO(raw.decode(encoding), newline="")
    except UnicodeDecodeError as exc:
        raise InputFileError(f"cannot decode data file as {encoding}: {exc}") from None
    samples: list[LabeledSample] = []
    width: Optional[int] = None

    for row_no, row in enumerate(csv.reader(text), start=1):
        if header and row_no == 1:
            continue
        if not row or all(not cell.strip() for cell in row):
            continue

        if width is None:
            width = len(row)
        elif len(row) != width:
            raise InputFileError(f"expected {width} columns, found {len(row)}", row=row_no)

        if not (-len(row) <= label_column < len(row)):
            raise InputFileError(
                f"label column {label_column} out of range for {len(row)} columns", row=row_no
            )
        label_idx = label_column % len(row)

        features = []
        for col, cell in enumerate(row):
            if col == label_idx:
                continue
            token = cell.strip()
            try:
                value = float(token)
            except ValueError:
                raise InputFileError(
                    f"cannot parse {token!r} as a number", row=row_no, token=token
                ) from None
            if not math.isfinite(value):
                raise InputFileError(f"non-finite value {token!r}", row=row_no, token=token)
            features.append(value)

        label = row[label_idx].strip()
        if not label:
            raise InputFileError("empty label", row=row_no, token=row[label_idx])
        if not features:
            raise InputFileError("row has no feature columns", row=row_no)

        samples.append(LabeledSample(features=tuple(features), label=label))

    if not samples:
        raise InputFileError("empty file: no data rows")
    return samples


def load_labeled_path(path: Union[str, Path], label_column: int, *, header: bool = False) -> list[LabeledSample]:
    p = Path(path)
    if not p.is_file():
        raise InputFileError(f"data file not found: {p}")
    with p.open("rb") as fh:
        return load_labeled_csv(fh, label_column, header=header)


def resolve_data_path(data: str) -> Path:
    """`data` as given, or relative to settings.DATA_DIR when only that exists."""
    path = Path(data)
    if not path.is_file() and not path.is_absolute():
        candidate = Path(settings.DATA_DIR) / path
        if candidate.is_file():
            return candidate
    return path


def build_problem(spec: ProblemSpec) -> JointDistribution:
    if spec.kind == ProblemKind.BERNOULLI:
        return bernoulli_joint(spec.e)
    if spec.kind == ProblemKind.GAUSSIAN:
        return gaussian_discretized(spec.grid())
    if spec.kind == ProblemKind.CONSTANT_SLOPE:
        return constant_slope_joint()
    if spec.kind == ProblemKind.EMPIRICAL:
        return empirical_joint(load_labeled_path(resolve_data_path(spec.data), spec.label_col, header=spec.header))
    raise DomainError(f"unknown problem kind {spec.kind!r}")


def ib_problem(joint: JointDistribution, threshold: float, bottleneck_size: Optional[int] = None) -> IbProblem:
    return IbProblem(joint=joint, threshold=float(threshold), bottleneck_size=bottleneck_size)
