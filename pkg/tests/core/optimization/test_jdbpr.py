"""
Tests for the two-stage joint design.
"""

import numpy as np
import pytest

from aether.core.channels.generator import complex_normal
from aether.core.channels.streams import Stage, stream
from aether.core.exceptions import ScenarioInfeasibleError, SolverFailureError
from aether.core.experiments.scenario import default_config, draw_scenario
from aether.core.model.config import SystemConfig
from aether.core.model.feasibility import check_feasibility
from aether.core.model.trace import BlockStatus
from aether.core.model.types import ChannelSet, Termination
from aether.core.model.units import dbm_to_watts
from aether.core.optimization.jdbpr import complexity_estimate, run_jdbpr
from aether.utils.config.settings import settings

SEED = 1
DRAWS = 6


@pytest.fixture(scope="module")
def config():
    """Small IRS scenario that solves in a few seconds."""
    return default_config(
        num_users=2, num_antennas=3, num_elements=4,
        randomization_count=200, max_iters=8, energy_threshold=dbm_to_watts(-20.0),
    )


@pytest.fixture(scope="module")
def solved(config):
    """JDBPR solutions for the feasible draws among the first few."""
    results = []
    for draw in range(DRAWS):
        _, channels = draw_scenario(config, SEED, draw)
        try:
            solution = run_jdbpr(config, channels, stream(SEED, draw, Stage.ALGORITHM))
        except (ScenarioInfeasibleError, SolverFailureError):
            continue
        results.append((draw, channels, solution))
    assert results, "no feasible draw among the first few"
    return results


def single_user_powers(config, gain, rho):
    """Minimum transmit power of one user at each split ratio"""
    qos = config.sinr_threshold * (config.noise_antenna_var + config.noise_id_var / rho)
    energy = config.energy_threshold / (config.eh_efficiency * (1.0 - rho)) - config.noise_antenna_var
    return np.maximum(qos, energy) / gain


def test_solutions_pass_feasibility(config, solved):
    """Test every returned design satisfies the original constraints."""
    for _, channels, solution in solved:
        report = check_feasibility(channels, solution, config)
        assert report.passed, [c for c in report.failed]
        assert solution.objective == pytest.approx(float(np.sum(np.abs(solution.beams.w) ** 2)))


def test_trace_is_monotone(solved):
    """Test the per-iteration objective never increases."""
    for _, _, solution in solved:
        trace = solution.trace
        assert len(trace) >= 1
        assert trace.initial_objective is not None
        assert trace.is_monotone(atol=1e-6 * trace.initial_objective)


def test_beams_are_rank_one(solved):
    """Test every optimal covariance solve is numerically rank one."""
    for _, _, solution in solved:
        for record in solution.trace.records:
            if record.beam_status == BlockStatus.OPTIMAL:
                assert record.max_rank_ratio <= settings.rank_ratio_tol


def test_termination_and_order(config, solved):
    """Test termination reasons and that the order covers every user."""
    for _, _, solution in solved:
        assert solution.termination in (Termination.CONVERGED, Termination.MAX_ITERS, Termination.STALLED)
        assert solution.iterations <= config.max_iters
        assert sorted(solution.order.sequence) == [0, 1]
        assert solution.phases.num_elements == 4


def test_runs_are_deterministic(config, solved):
    """Test a repeated run on the same streams reproduces the design."""
    draw, channels, solution = solved[0]
    again = run_jdbpr(config, channels, stream(SEED, draw, Stage.ALGORITHM))
    assert again.objective == solution.objective
    assert np.array_equal(again.phases.theta, solution.phases.theta)
    assert again.order == solution.order


@pytest.mark.parametrize("seed", range(50))
def test_single_user_without_irs_matches_closed_form(seed):
    """Test one user without IRS reaches the split-optimized closed-form power."""
    config = SystemConfig(num_users=1, num_antennas=2, num_elements=0, randomization_count=10)
    rng = np.random.default_rng(seed)
    channels = ChannelSet(
        G=np.zeros((0, 2)), h_r=np.zeros((1, 0)), h_d=1e-3 * complex_normal((1, 2), rng),
        d_direct=[60.0], d_reflect=[60.0], d_bs_irs=70.0,
    )
    gain = float(np.sum(np.abs(channels.h_d) ** 2))
    grid = np.geomspace(1e-6, 1.0 - 1e-6, 10000)
    best = float(np.min(single_user_powers(config, gain, grid)))

    solution = run_jdbpr(config, channels, np.random.default_rng(seed))
    assert abs(solution.objective - best) <= 5e-3 * best
    assert solution.iterations >= 2
    assert solution.phases.num_elements == 0


def test_alternation_improves_on_single_pass(config, solved):
    """Test later iterations use the updated splits and phases to lower the power."""
    gains = []
    for draw, channels, solution in solved:
        single = run_jdbpr(config, channels, stream(SEED, draw, Stage.ALGORITHM), max_iters=1)
        assert solution.objective <= single.objective * (1 + 1e-6)
        gains.append(1.0 - solution.objective / single.objective)
    assert max(gains) > 0.01


def test_single_iteration_cap(config, solved):
    """Test a cap of one iteration reports a single pass."""
    draw, channels, _ = solved[0]
    solution = run_jdbpr(config, channels, stream(SEED, draw, Stage.ALGORITHM), max_iters=1)
    assert solution.termination == Termination.SINGLE_PASS
    assert solution.iterations == 1


def test_complexity_estimate():
    """Test the interior-point cost model terms."""
    config = default_config(num_users=4, num_antennas=4, num_elements=30)
    estimate = complexity_estimate(config, iterations=10)
    assert estimate.beamforming_term == pytest.approx(4 * 4 ** 3.5)
    assert estimate.phase_term == pytest.approx(31 ** 3.5)
    assert estimate.split_term == 4.0
    assert estimate.total == pytest.approx(10 * (4 * 4 ** 3.5 + 31 ** 3.5 + 4))
    assert complexity_estimate(config).iterations == 1
