from __future__ import annotations

import csv
from pathlib import Path

import numpy as np
import pytest

from models.distribution_model import JointDistribution
from schemas.gas_schema import GasConfig
from schemas.problem_schema import GaussianGridSpec
from services.problem_service import (
    bernoulli_joint,
    constant_slope_joint,
    gaussian_discretized,
)

ROOT = Path(__file__).resolve().parents[1]
FIXTURES = Path(__file__).resolve().parent / "fixtures"
IRIS_PATH = ROOT / "data" / "iris.csv"

# benchmark thresholds with their published curve slopes
BERNOULLI_TABLE = [(0.0823, 2.1906), (0.1308, 2.3299), (0.1927, 2.6432)]
GAUSSIAN_TABLE = [(0.1, 2.5687), (0.2, 3.9357), (0.3, 11.2435)]


def load_golden() -> list[dict]:
    rows = []
    with (FIXTURES / "golden_curves.tsv").open(encoding="utf-8") as fh:
        lines = [line for line in fh if line.strip() and not line.startswith("#")]
    for row in csv.DictReader(lines, delimiter="\t"):
        params = {}
        if row["params"] != "-":
            for pair in row["params"].split(";"):
                key, value = pair.split("=")
                params[key] = float(value)
        rows.append(
            {
                "problem": row["problem"],
                "params": params,
                "threshold_I": float(row["threshold_I"]),
                "rate_R": float(row["rate_R"]),
                "source": row["source"],
            }
        )
    return rows


def random_joint(rng: np.random.Generator, m: int, k: int) -> JointDistribution:
    pxy = rng.uniform(0.05, 1.0, size=(m, k))
    return JointDistribution(pxy / pxy.sum())


@pytest.fixture(scope="session")
def golden() -> list[dict]:
    return load_golden()


@pytest.fixture(scope="session")
def bernoulli() -> JointDistribution:
    return bernoulli_joint(0.15)


@pytest.fixture(scope="session")
def constant_slope() -> JointDistribution:
    return constant_slope_joint()


@pytest.fixture(scope="session")
def gaussian() -> JointDistribution:
    return gaussian_discretized(GaussianGridSpec(snr=1.0, half_width=10.0, step=0.2))


@pytest.fixture
def gas_cfg() -> GasConfig:
    return GasConfig(max_iter=5000)
