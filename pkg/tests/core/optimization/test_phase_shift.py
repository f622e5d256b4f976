"""
Tests for the IRS phase block.
"""

import numpy as np
import pytest

from aether.core.channels.generator import complex_normal
from aether.core.conic.solver import SdpSolution, SolveStatus
from aether.core.model.config import SystemConfig
from aether.core.model.feasibility import check_feasibility
from aether.core.model.physics import effective_rows
from aether.core.model.trace import BlockStatus
from aether.core.model.types import Beamformers, ChannelSet, PhaseShift, PowerSplit, Solution
from aether.core.optimization import phase_shift
from aether.core.optimization.phase_shift import (
    SLACK,
    U_BAR,
    PhaseSubproblemInput,
    build_phase_problem,
    solve_phase_shift,
)
from aether.core.optimization.stage1 import order_from_gains
from aether.core.optimization.zero_forcing import zf_beamforming


@pytest.fixture
def config():
    return SystemConfig(
        num_users=2, num_antennas=2, num_elements=3,
        sinr_threshold=1.0, energy_threshold=1e-7, randomization_count=100,
    )


@pytest.fixture
def channels():
    rng = np.random.default_rng(8)
    return ChannelSet(
        G=1e-2 * complex_normal((3, 2), rng),
        h_r=1e-1 * complex_normal((2, 3), rng),
        h_d=1e-3 * complex_normal((2, 2), rng),
        d_direct=[80.0, 60.0], d_reflect=[50.0, 40.0], d_bs_irs=70.0,
    )


@pytest.fixture
def incumbent(config, channels):
    """Zero-forcing design at zero phases with ten times the needed power."""
    phases = PhaseShift.zeros(3)
    rho = np.full(2, 0.5)
    beams = zf_beamforming(effective_rows(channels, phases), rho, config)
    w = np.sqrt(10.0) * np.asarray(beams.beams.w)
    order = order_from_gains(channels, phases)
    return PhaseSubproblemInput(
        channels=channels, w=w, rho=rho, order=order, phases_ref=phases, config=config
    )


def test_program_layout(incumbent):
    """Test unit-diagonal, QoS, energy and ordering constraints are present."""
    problem = build_phase_problem(incumbent)
    labels = [c.label for c in problem.constraints]
    assert sum(label.startswith("unit_diagonal_") for label in labels) == 4
    assert sum(label.startswith("qos_") for label in labels) == 2
    assert sum(label.startswith("energy_") for label in labels) == 2
    k, k_bar = incumbent.order.sequence
    assert f"order_{k}_{k_bar}" in labels
    assert problem.matrix_vars[0].dim == 4


def test_step_returns_feasible_phases(config, channels, incumbent):
    """Test the chosen phases pass the exact constraints or the incumbent is kept."""
    result = solve_phase_shift(incumbent, config.randomization_count, np.random.default_rng(0))
    if result.status != BlockStatus.OPTIMAL:
        assert np.array_equal(result.phases.theta, incumbent.phases_ref.theta)
        return
    beams = Beamformers(w=result.w)
    solution = Solution(
        order=incumbent.order,
        beams=beams,
        split=PowerSplit(rho=incumbent.rho),
        phases=result.phases,
        objective=float(beams.powers.sum()),
    )
    report = check_feasibility(channels, solution, config)
    assert report.passed
    assert result.min_margin >= -config.feasibility_tol


def test_step_is_deterministic(config, incumbent):
    """Test equal streams give equal phases."""
    a = solve_phase_shift(incumbent, 50, np.random.default_rng(3))
    b = solve_phase_shift(incumbent, 50, np.random.default_rng(3))
    assert a.status == b.status
    assert np.array_equal(a.phases.theta, b.phases.theta)


def test_incumbent_kept_when_no_candidate_is_feasible(monkeypatch):
    """Test an identity lifted matrix with tight constraints keeps the incumbent phases and flags a stall."""
    config = SystemConfig(
        num_users=1, num_antennas=1, num_elements=1,
        sinr_threshold=1.0, energy_threshold=1e-10, randomization_count=20,
    )
    # direct and reflected paths of equal strength, aligned at zero phase
    channels = ChannelSet(
        G=np.array([[1e-2]]), h_r=np.array([[1e-1]]), h_d=np.array([[1e-3]]),
        d_direct=[60.0], d_reflect=[40.0], d_bs_irs=70.0,
    )
    phases = PhaseShift.zeros(1)
    rho = np.array([0.5])
    gain = float(np.abs(effective_rows(channels, phases)[0, 0]) ** 2)
    needed = config.noise_antenna_var + config.noise_id_var / rho[0]
    w = np.array([[np.sqrt(needed * (1 + 1e-9) / gain)]], dtype=complex)
    inp = PhaseSubproblemInput(
        channels=channels, w=w, rho=rho, order=order_from_gains(channels, phases),
        phases_ref=phases, config=config,
    )
    monkeypatch.setattr(
        phase_shift,
        "solve",
        lambda problem: SdpSolution(status=SolveStatus.OPTIMAL, matrices={U_BAR: np.eye(2)}, scalars={SLACK: 0.0}),
    )

    result = solve_phase_shift(inp, config.randomization_count, np.random.default_rng(5))
    assert result.status == BlockStatus.STALLED
    assert np.array_equal(result.phases.theta, phases.theta)
    assert np.array_equal(result.w, w)
