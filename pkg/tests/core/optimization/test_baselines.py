"""
Tests for the comparison algorithms.
"""

import numpy as np
import pytest

from aether.core.channels.streams import Stage, stream
from aether.core.exceptions import AetherException, OrderSearchLimitError, ScenarioInfeasibleError
from aether.core.experiments.scenario import default_config, draw_scenario
from aether.core.model.feasibility import check_feasibility
from aether.core.model.types import AlgorithmId, Termination
from aether.core.model.units import dbm_to_watts
from aether.core.optimization import baselines
from aether.core.optimization.baselines import (
    ALGORITHMS,
    evaluation_channels,
    evaluation_config,
    run_algorithm,
    run_exhaustive_order,
)

SEED = 2
DRAWS = 6


@pytest.fixture(scope="module")
def config():
    return default_config(
        num_users=2, num_antennas=3, num_elements=4,
        randomization_count=200, max_iters=6, energy_threshold=dbm_to_watts(-20.0),
    )


@pytest.fixture(scope="module")
def runs(config):
    """Every algorithm on the first draw where the joint design succeeds."""
    for draw in range(DRAWS):
        _, channels = draw_scenario(config, SEED, draw)
        results = {}
        for algorithm in AlgorithmId:
            try:
                results[algorithm] = run_algorithm(
                    algorithm, config, channels, stream(SEED, draw, Stage.ALGORITHM)
                )
            except AetherException:
                continue
        if AlgorithmId.JDBPR_OPT in results:
            return draw, channels, results
    pytest.fail("no draw admitted a joint design")


def test_every_algorithm_registered():
    """Test the dispatch table covers every identifier."""
    assert set(ALGORITHMS) == set(AlgorithmId)


def test_exhaustive_search_limit():
    """Test exhaustive order search refuses more than six users before solving anything."""
    config = default_config(num_users=7, num_antennas=8, num_elements=2)
    _, channels = draw_scenario(config, 0, 0)
    with pytest.raises(OrderSearchLimitError):
        run_exhaustive_order(config, channels, np.random.default_rng(0))


def test_results_are_feasible(config, runs):
    """Test every successful baseline passes the feasibility check on its own channels."""
    _, channels, results = runs
    for algorithm, solution in results.items():
        assert solution.algorithm == algorithm
        report = check_feasibility(
            evaluation_channels(solution, channels), solution, evaluation_config(solution, config)
        )
        assert report.passed, algorithm


def test_exhaustive_search_not_worse(runs):
    """Test the exhaustive order search never loses to the gain-sorted order."""
    _, _, results = runs
    if AlgorithmId.EX_JBPR_OPT not in results:
        pytest.skip("exhaustive search found no feasible order")
    joint = results[AlgorithmId.JDBPR_OPT].objective
    assert results[AlgorithmId.EX_JBPR_OPT].objective <= joint * (1 + 1e-9)


def test_no_irs_drops_phases(config, runs):
    """Test the no-IRS baseline carries no phases and is evaluated without the IRS."""
    _, channels, results = runs
    if AlgorithmId.NO_IRS not in results:
        pytest.skip("no-IRS design infeasible on this draw")
    solution = results[AlgorithmId.NO_IRS]
    assert solution.phases.num_elements == 0
    assert evaluation_channels(solution, channels).num_elements == 0
    assert evaluation_config(solution, config).num_elements == 0


def test_single_pass_baseline(runs):
    """Test the non-alternating baseline stops after one pass."""
    _, _, results = runs
    if AlgorithmId.JDBPR_COM not in results:
        pytest.skip("non-alternating design infeasible on this draw")
    solution = results[AlgorithmId.JDBPR_COM]
    assert solution.iterations == 1
    assert solution.termination == Termination.SINGLE_PASS


def test_alternation_not_worse_than_single_pass(runs):
    """Test the alternating design needs no more power than its first pass."""
    _, _, results = runs
    if AlgorithmId.JDBPR_COM not in results:
        pytest.skip("non-alternating design infeasible on this draw")
    single = results[AlgorithmId.JDBPR_COM].objective
    assert results[AlgorithmId.JDBPR_OPT].objective <= single * (1 + 1e-6)


def test_zero_forcing_not_better_than_joint_design(runs):
    """Test zero-forcing beams need at least the power of the covariance design."""
    _, _, results = runs
    if AlgorithmId.JDBPR_ZF not in results:
        pytest.skip("zero-forcing design infeasible on this draw")
    joint = results[AlgorithmId.JDBPR_OPT].objective
    assert results[AlgorithmId.JDBPR_ZF].objective >= joint * (1 - 1e-3)


def test_random_phase_without_irs_equals_no_irs():
    """Test random phases on an empty surface reduce to the no-IRS design."""
    config = default_config(
        num_users=2, num_antennas=3, num_elements=0,
        randomization_count=20, max_iters=6, energy_threshold=dbm_to_watts(-20.0),
    )
    for draw in range(DRAWS):
        _, channels = draw_scenario(config, SEED, draw)
        try:
            no_irs = run_algorithm(AlgorithmId.NO_IRS, config, channels, stream(SEED, draw, Stage.ALGORITHM))
        except AetherException:
            continue
        random_phase = run_algorithm(AlgorithmId.JDBP_RAN, config, channels, stream(SEED, draw, Stage.ALGORITHM))
        assert random_phase.objective == pytest.approx(no_irs.objective, rel=1e-9)
        assert random_phase.order == no_irs.order
        assert random_phase.phases.num_elements == 0
        return
    pytest.fail("no draw admitted a no-IRS design")


def test_random_phase_is_reproducible(config, runs):
    """Test the random-phase baseline repeats its phases and power on the same stream."""
    draw, channels, results = runs
    if AlgorithmId.JDBP_RAN not in results:
        pytest.skip("random-phase design infeasible on this draw")
    first = results[AlgorithmId.JDBP_RAN]
    again = run_algorithm(AlgorithmId.JDBP_RAN, config, channels, stream(SEED, draw, Stage.ALGORITHM))
    assert np.array_equal(again.phases.theta, first.phases.theta)
    assert again.objective == first.objective


def test_exhaustive_search_runs_every_order(monkeypatch):
    """Test three users lead to exactly six alternating runs, one per decoding order."""
    config = default_config(num_users=3, num_antennas=3, num_elements=2, randomization_count=20)
    _, channels = draw_scenario(config, 0, 0)
    seen = []

    def record(config, channels, order, phases, rng, **kwargs):
        seen.append(order.sequence)
        raise ScenarioInfeasibleError("recorded")

    monkeypatch.setattr(baselines, "run_stage2", record)
    with pytest.raises(ScenarioInfeasibleError):
        run_exhaustive_order(config, channels, np.random.default_rng(0))
    assert len(seen) == 6
    assert len({tuple(s) for s in seen}) == 6
