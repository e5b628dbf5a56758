import numpy as np
import pytest

from enums.solver_enum import SolverKind, SolverStatus
from models.distribution_model import IbProblem
from schemas.ba_schema import SlopeSearchConfig
from services.ba_service import ba_solve, ba_step, information_plane, init_ba_state, slope_search
from services.curve_service import cluster_points, sweep_betas
from services.information_service import mutual_information
from services.oracle_service import bernoulli_R
from utils.errors import DomainError, SearchFailedError
from tests.conftest import BERNOULLI_TABLE


# -------------------------
# single iteration
# -------------------------
def test_ba_step_keeps_encoder_row_stochastic(bernoulli):
    problem = IbProblem(bernoulli, 0.0)
    state = init_ba_state(problem, 2.5)
    for _ in range(20):
        state = ba_step(state, problem)
        np.testing.assert_allclose(state.u.sum(axis=1), 1.0, atol=1e-12)
        assert state.r.sum() == pytest.approx(1.0, abs=1e-12)
        np.testing.assert_allclose(state.py_t.sum(axis=0), 1.0, atol=1e-12)


def test_init_ba_state_is_seeded(constant_slope):
    problem = IbProblem(constant_slope, 0.0)
    a = init_ba_state(problem, 1.0, seed=3)
    b = init_ba_state(problem, 1.0, seed=3)
    np.testing.assert_array_equal(a.u, b.u)
    flat = init_ba_state(problem, 1.0, jitter_scale=0.0)
    np.testing.assert_array_equal(flat.u, 0.25)


def test_information_plane_of_identity_encoder(bernoulli):
    problem = IbProblem(bernoulli, 0.0)
    state = init_ba_state(problem, 1.0)
    state.u = np.eye(2)
    rel, rate = information_plane(state, problem)
    assert rel == pytest.approx(mutual_information(bernoulli), abs=1e-14)
    assert rate == pytest.approx(np.log(2), abs=1e-14)


# -------------------------
# fixed-β solves
# -------------------------
def test_zero_beta_collapses_to_the_origin(bernoulli):
    report = ba_solve(IbProblem(bernoulli, 0.0), 0.0)
    assert report.solver == SolverKind.BA
    assert report.status == SolverStatus.CONVERGED
    assert report.rate == pytest.approx(0.0, abs=1e-10)
    assert report.relevance == pytest.approx(0.0, abs=1e-10)


def test_large_beta_reaches_capacity(bernoulli):
    report = ba_solve(IbProblem(bernoulli, 0.0), 1e4)
    assert report.relevance == pytest.approx(mutual_information(bernoulli), abs=1e-3)


def test_fixed_point_lies_on_the_curve(bernoulli):
    report = ba_solve(IbProblem(bernoulli, 0.0), 2.3299)
    assert report.converged
    assert report.relevance > 0.05
    assert report.rate == pytest.approx(bernoulli_R(report.relevance, 0.15), abs=1e-5)
    assert report.zeta == 2.3299
    assert report.threshold is None


def test_ba_solve_is_deterministic(bernoulli):
    problem = IbProblem(bernoulli, 0.0)
    assert ba_solve(problem, 2.5).model_dump() == ba_solve(problem, 2.5).model_dump()


def test_ba_solve_rejects_negative_beta(bernoulli):
    with pytest.raises(DomainError):
        ba_solve(IbProblem(bernoulli, 0.0), -1.0)


# -------------------------
# slope search
# -------------------------
def test_slope_search_rejects_targets_outside_range(bernoulli):
    problem = IbProblem(bernoulli, 0.0)
    with pytest.raises(DomainError):
        slope_search(problem, 0.0)
    with pytest.raises(DomainError):
        slope_search(problem, 0.5)


def test_slope_search_reports_trial_cap(bernoulli):
    with pytest.raises(SearchFailedError) as info:
        slope_search(IbProblem(bernoulli, 0.0), 0.1308, SlopeSearchConfig(max_trials=2))
    assert len(info.value.trials) == 3


@pytest.mark.slow
@pytest.mark.parametrize("target,slope", [BERNOULLI_TABLE[0], BERNOULLI_TABLE[2]])
def test_slope_search_recovers_published_slopes(bernoulli, target, slope):
    result = slope_search(IbProblem(bernoulli, 0.0), target)
    assert result.beta == pytest.approx(slope, abs=1e-2)
    assert result.report.relevance == pytest.approx(target, abs=1e-6)
    assert result.trial_count == len(result.trials) >= 2


@pytest.mark.slow
def test_constant_slope_sweep_yields_two_points(constant_slope):
    curve = sweep_betas(constant_slope, np.linspace(0.5, 5.0, 50).tolist(), max_iter=5000, tol=1e-12)
    converged = [r for r in curve.records if r.status == SolverStatus.CONVERGED]
    assert converged
    assert cluster_points(curve.model_copy(update={"records": converged}), 1e-3) <= 2


@pytest.mark.slow
def test_slope_search_fails_on_constant_slope_segment(constant_slope):
    with pytest.raises(SearchFailedError):
        slope_search(IbProblem(constant_slope, 0.0), 0.35)
