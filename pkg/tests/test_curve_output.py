import json
from datetime import datetime, timezone

import pytest

from enums.solver_enum import InfoUnits, OutputFormat, ProblemKind, SolverKind, SolverStatus
from schemas.ba_schema import SlopeSearchConfig
from schemas.curve_schema import CSV_COLUMNS, CurveRecord, CurveSample, IbCurve, RunManifest
from schemas.gas_schema import GasConfig
from schemas.problem_schema import ProblemSpec
from services.bench_service import bench
from services.curve_service import (
    all_failed,
    cluster_points,
    parse_beta_sweep,
    parse_threshold_range,
    search_thresholds,
    sweep_thresholds,
)
from services.oracle_service import LOG2, bernoulli_R
from services.output_service import (
    manifest_path,
    read_curve_csv,
    read_manifest,
    render_curve,
    render_samples,
    write_curve,
    write_manifest,
)
from utils.errors import DomainError, InputFileError


def _curve(*records):
    return IbCurve(solver=SolverKind.GAS, problem_fingerprint="abc", records=list(records))


def _row(threshold, rate=None, status=SolverStatus.CONVERGED, relevance=None):
    return CurveRecord(
        threshold_I=threshold,
        rate_R=rate,
        relevance=threshold if relevance is None and rate is not None else relevance,
        zeta=1.0 if rate is not None else None,
        iterations=10 if rate is not None else 0,
        status=status,
        marginal_residual=1e-12 if rate is not None else None,
    )


# -------------------------
# parsing helpers
# -------------------------
def test_parse_threshold_range_is_inclusive():
    assert parse_threshold_range(0.0, 0.2, 3) == pytest.approx([0.0, 0.1, 0.2])
    assert parse_threshold_range(0.3, 0.3, 1) == [0.3]
    with pytest.raises(DomainError):
        parse_threshold_range(0.0, 0.2, 0)
    with pytest.raises(DomainError):
        parse_threshold_range(0.5, 0.2, 4)


def test_parse_beta_sweep():
    betas = parse_beta_sweep("0.5:5:50")
    assert len(betas) == 50
    assert betas[0] == 0.5 and betas[-1] == pytest.approx(5.0)
    for bad in ("1:2", "a:b:c", "3:1:5", "-1:2:3"):
        with pytest.raises(DomainError):
            parse_beta_sweep(bad)


# -------------------------
# rendering
# -------------------------
def test_csv_header_and_empty_failure_cells():
    text = render_curve(_curve(_row(0.1, 0.2), _row(0.9, status=SolverStatus.INFEASIBLE)))
    lines = text.splitlines()
    assert lines[0] == ",".join(CSV_COLUMNS)
    assert lines[2] == "0.9,,,,0,Infeasible,"
    rows = read_curve_csv(text)
    assert rows[0]["rate_R"] == "0.2"
    assert rows[1]["status"] == "Infeasible"


def test_read_curve_csv_checks_header():
    with pytest.raises(InputFileError):
        read_curve_csv("a,b\n1,2\n")


def test_bits_convert_information_columns_only():
    curve = _curve(_row(LOG2, 2 * LOG2))
    rows = read_curve_csv(render_curve(curve, units=InfoUnits.BITS))
    assert float(rows[0]["threshold_I"]) == pytest.approx(1.0, abs=1e-15)
    assert float(rows[0]["rate_R"]) == pytest.approx(2.0, abs=1e-15)
    assert float(rows[0]["zeta"]) == 1.0


def test_json_curve_carries_units_and_fingerprint():
    data = json.loads(render_curve(_curve(_row(0.1, 0.2)), OutputFormat.JSON, InfoUnits.BITS))
    assert data["units"] == "bits"
    assert data["problem_fingerprint"] == "abc"
    assert data["records"][0]["status"] == "Converged"


def test_render_samples():
    text = render_samples([CurveSample(threshold=0.2, rate=0.5)])
    assert text == "threshold_I,rate_R\n0.2,0.5\n"


def test_write_curve_to_file_and_stream(tmp_path, capsys):
    curve = _curve(_row(0.1, 0.2))
    assert write_curve(curve) is None
    assert capsys.readouterr().out == render_curve(curve)
    path = write_curve(curve, tmp_path / "sub" / "c.csv")
    assert path.read_text(encoding="utf-8") == render_curve(curve)


# -------------------------
# manifests
# -------------------------
def test_manifest_round_trip(tmp_path):
    manifest = RunManifest(
        command="curve",
        argv=["--problem", "bernoulli", "--i-list", "0.1"],
        problem=ProblemSpec(kind=ProblemKind.BERNOULLI, e=0.15),
        problem_fingerprint="abc",
        solver=SolverKind.GAS,
        config=GasConfig().model_dump(),
        seed=0,
        tool_version="1.0.0",
        created_at=datetime(2024, 1, 2, tzinfo=timezone.utc),
    )
    out = tmp_path / "curve.csv"
    path = write_manifest(manifest, out)
    assert path == manifest_path(out)
    assert path.name == "curve.csv.manifest.json"
    assert read_manifest(path) == manifest


def test_read_manifest_errors(tmp_path):
    with pytest.raises(InputFileError, match="not found"):
        read_manifest(tmp_path / "missing.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{}", encoding="utf-8")
    with pytest.raises(InputFileError, match="invalid manifest"):
        read_manifest(bad)


# -------------------------
# sweeps
# -------------------------
def test_cluster_points():
    curve = _curve(
        _row(0.0, 0.0),
        _row(0.0004, 0.0003),
        _row(0.69, 0.69),
        _row(0.35, status=SolverStatus.SEARCH_FAILED),
    )
    assert cluster_points(curve, 1e-3) == 2
    assert cluster_points(curve, 1e-5) == 3


def test_all_failed_counts_numerical_failures_only():
    assert all_failed(_curve(_row(0.1, status=SolverStatus.NUMERICAL_FAILURE)))
    assert not all_failed(_curve(_row(0.9, status=SolverStatus.INFEASIBLE)))
    assert not all_failed(_curve())


def test_sweep_sorts_and_keeps_infeasible_rows(bernoulli, gas_cfg):
    curve = sweep_thresholds(bernoulli, [0.9, 0.1308], gas_cfg)
    assert [r.threshold_I for r in curve.records] == [0.1308, 0.9]
    good, bad = curve.records
    assert good.status == SolverStatus.CONVERGED
    assert good.rate_R == pytest.approx(bernoulli_R(0.1308, 0.15), abs=1e-6)
    assert bad.status == SolverStatus.INFEASIBLE
    assert bad.rate_R is None and bad.message
    assert curve.failed == [bad]
    assert curve.problem_fingerprint == bernoulli.fingerprint()
    assert curve.config["max_iter"] == 5000


def test_sweep_rejects_negative_threshold(bernoulli, gas_cfg):
    with pytest.raises(DomainError):
        sweep_thresholds(bernoulli, [-0.1], gas_cfg)


def test_parallel_sweep_matches_serial(bernoulli, gas_cfg):
    thresholds = [0.0823, 0.1308, 0.1927, 0.9]
    serial = sweep_thresholds(bernoulli, thresholds, gas_cfg, workers=1)
    parallel = sweep_thresholds(bernoulli, thresholds, gas_cfg, workers=2)
    assert serial.model_dump() == parallel.model_dump()


def test_search_thresholds_marks_out_of_range_targets(bernoulli):
    curve = search_thresholds(bernoulli, [0.9], SlopeSearchConfig())
    assert curve.solver == SolverKind.BA
    assert curve.records[0].status == SolverStatus.INFEASIBLE


def test_bench_infeasible_target(bernoulli, gas_cfg):
    (row,) = bench(bernoulli, [0.9], 1, gas_cfg)
    assert row.gas_status == SolverStatus.INFEASIBLE
    assert row.ba_status == SolverStatus.INFEASIBLE
    assert row.speedup is None
    with pytest.raises(DomainError):
        bench(bernoulli, [0.1], 0, gas_cfg)


@pytest.mark.slow
def test_bench_times_both_solvers(bernoulli, gas_cfg):
    (row,) = bench(bernoulli, [0.1308], 2, gas_cfg)
    assert row.gas_status == SolverStatus.CONVERGED
    assert row.ba_status == SolverStatus.CONVERGED
    assert row.gas_rate == pytest.approx(bernoulli_R(0.1308, 0.15), abs=1e-6)
    assert row.ba_beta == pytest.approx(2.3299, abs=1e-2)
    assert row.speedup > 0
