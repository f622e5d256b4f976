"""
Tests for the feasibility checker.
"""

import numpy as np
import pytest

from aether.core.model.config import SystemConfig
from aether.core.model.feasibility import ConstraintKind, check_feasibility, screen_phase_candidates
from aether.core.model.types import (
    Beamformers,
    ChannelSet,
    DecodingOrder,
    PhaseShift,
    PowerSplit,
    Solution,
)


@pytest.fixture
def config():
    """Two-user scenario without IRS and loose thresholds."""
    return SystemConfig(
        num_users=2, num_antennas=2, num_elements=0,
        sinr_threshold=1.0, energy_threshold=1e-6,
        noise_antenna_var=1e-10, noise_id_var=1e-8,
    )


@pytest.fixture
def channels():
    """Orthogonal users; user 1 has the stronger channel."""
    return ChannelSet(
        G=np.zeros((0, 2)), h_r=np.zeros((2, 0)), h_d=[[1e-3, 0.0], [0.0, 2e-3]],
        d_direct=[100.0, 80.0], d_reflect=[100.0, 80.0], d_bs_irs=70.0,
    )


def make_solution(w, rho, order=(1, 2)):
    beams = Beamformers(w=w)
    return Solution(
        order=DecodingOrder(positions=order),
        beams=beams,
        split=PowerSplit(rho=rho),
        phases=PhaseShift.zeros(0),
        objective=float(beams.powers.sum()),
    )


def test_feasible_point_passes(config, channels):
    """Test a comfortably feasible design."""
    solution = make_solution([[10.0, 0.0], [0.0, 10.0]], [0.5, 0.5])
    report = check_feasibility(channels, solution, config)
    assert report.passed
    assert report.min_margin > 0
    # orthogonal beams null the cross links, so the SIC condition is vacuous
    assert all(np.isinf(c.margin) for c in report.by_kind(ConstraintKind.SIC))
    assert len(report.by_kind(ConstraintKind.QOS)) == 2
    assert len(report.by_kind(ConstraintKind.ENERGY)) == 2


def test_zero_beams_fail_qos(config, channels):
    """Test that zero beams violate QoS with negative margin."""
    report = check_feasibility(channels, make_solution(np.zeros((2, 2)), [0.5, 0.5]), config)
    assert not report.passed
    qos = report.by_kind(ConstraintKind.QOS)
    assert all(not c.passed and c.margin < 0 for c in qos)


def test_single_violation_flagged(config, channels):
    """Test that one violated constraint is reported alone."""
    # user 1 keeps everything for decoding and harvests nothing
    solution = make_solution([[10.0, 0.0], [0.0, 10.0]], [0.5, 1.0])
    report = check_feasibility(channels, solution, config)
    failed = report.failed
    assert len(failed) == 1
    assert failed[0].kind == ConstraintKind.ENERGY
    assert failed[0].users == (1,)


def test_sic_condition_checked(config):
    """Test a violated decoding condition on a shared channel."""
    channels = ChannelSet(
        G=np.zeros((0, 2)), h_r=np.zeros((2, 0)), h_d=[[1e-3, 1e-3], [1e-4, 1e-4]],
        d_direct=[50.0, 150.0], d_reflect=[50.0, 150.0], d_bs_irs=70.0,
    )
    # user 0 decoded first, but user 1 sees user 0's signal much weaker than user 0 does
    solution = make_solution([[10.0, 10.0], [1.0, 1.0]], [0.9, 0.9], order=(1, 2))
    report = check_feasibility(channels, solution, config)
    sic = report.by_kind(ConstraintKind.SIC)
    assert len(sic) == 1
    assert sic[0].users == (0, 1)
    assert not sic[0].passed


def test_order_consistency_is_informational(config, channels):
    """Test that a gain-inconsistent order is reported but does not fail."""
    solution = make_solution([[10.0, 0.0], [0.0, 10.0]], [0.5, 0.5], order=(2, 1))
    report = check_feasibility(channels, solution, config)
    consistency = report.by_kind(ConstraintKind.ORDER_CONSISTENCY)
    assert len(consistency) == 1 and consistency[0].informational
    assert not consistency[0].passed
    assert report.passed


def test_wrong_order_size(config, channels):
    """Test an order for the wrong number of users."""
    beams = Beamformers(w=np.ones((2, 2)))
    solution = Solution(
        order=DecodingOrder(positions=(1, 2, 3)), beams=beams, split=PowerSplit(rho=[0.5, 0.5]),
        phases=PhaseShift.zeros(0), objective=4.0,
    )
    report = check_feasibility(channels, solution, config)
    assert not report.passed
    assert report.failed[0].kind == ConstraintKind.ORDER


def test_screen_phase_candidates_batch():
    """Test batched screening against the single-solution checker."""
    rng = np.random.default_rng(3)
    cn = lambda *shape: rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    config = SystemConfig(num_users=2, num_antennas=2, num_elements=3, sinr_threshold=0.5, energy_threshold=1e-9)
    channels = ChannelSet(G=cn(3, 2), h_r=cn(2, 3), h_d=cn(2, 2),
                          d_direct=[1.0, 1.0], d_reflect=[1.0, 1.0], d_bs_irs=1.0)
    w = cn(2, 2) * 1e-2
    rho = np.array([0.6, 0.4])
    order = DecodingOrder.identity(2)
    thetas = rng.uniform(0, 2 * np.pi, (5, 3))

    worst, feasible = screen_phase_candidates(channels, thetas, w, rho, order, config, require_order=False)
    assert worst.shape == (5,) and feasible.shape == (5,)
    for t in range(5):
        solution = Solution(order=order, beams=Beamformers(w=w), split=PowerSplit(rho=rho),
                            phases=PhaseShift(theta=thetas[t]), objective=1.0)
        report = check_feasibility(channels, solution, config)
        assert bool(feasible[t]) == report.passed
