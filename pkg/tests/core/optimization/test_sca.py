"""
Tests for the first-order bounds and the linearized SIC constraints built from them.
"""

import numpy as np
import pytest

from aether.core.channels.generator import complex_normal
from aether.core.exceptions import LinearizationError
from aether.core.model.config import SystemConfig
from aether.core.model.types import ChannelSet, DecodingOrder, PhaseShift
from aether.core.optimization.beamforming import BeamformingInput, build_beamforming_problem, quadratic_forms
from aether.core.optimization.lifting import signal_lifts
from aether.core.optimization.phase_shift import U_BAR, PhaseSubproblemInput, build_phase_problem
from aether.core.optimization.power_split import PowerSplitInput, build_power_split_problem
from aether.core.optimization.sca import log_tangent, neg_inverse_tangent

SAMPLES = 10_000


@pytest.fixture
def rng():
    return np.random.default_rng(11)


@pytest.fixture
def config():
    return SystemConfig(num_users=2, num_antennas=3, num_elements=3, sinr_threshold=10.0, energy_threshold=1e-6)


@pytest.fixture
def order():
    return DecodingOrder.from_sequence([0, 1])


def random_psd(rng, count, dim):
    F = complex_normal((count, dim, dim), rng)
    return np.einsum("tij,tkj->tik", F, np.conj(F)) / dim


def sic_constraints(problem):
    return [c for c in problem.constraints if c.label.startswith("sic_")]


def log_gap(own, cross_interference, own_interference, cross):
    """Exact SIC log gap; non-positive when the cross SINR is at least the own SINR"""
    return np.log(own) + np.log(cross_interference) - np.log(own_interference) - np.log(cross)


def test_log_tangent_is_tight_upper_bound(rng):
    """Test ln(x) <= slope x + intercept with equality at the reference."""
    for reference in rng.uniform(0.01, 10.0, 200):
        slope, intercept = log_tangent(reference)
        x = rng.uniform(0.01, 10.0, 100)
        assert np.all(np.log(x) <= slope * x + intercept + 1e-12)
        assert slope * reference + intercept == pytest.approx(np.log(reference))


def test_neg_inverse_tangent_is_tight_upper_bound(rng):
    """Test -1/rho <= slope rho + intercept with equality at the reference."""
    for reference in rng.uniform(1e-3, 1.0, 200):
        slope, intercept = neg_inverse_tangent(reference)
        rho = rng.uniform(1e-3, 1.0, 100)
        assert np.all(-1.0 / rho <= slope * rho + intercept + 1e-9)
        assert slope * reference + intercept == pytest.approx(-1.0 / reference)


def test_non_positive_expansion_point_rejected():
    """Test that tangents refuse a non-positive expansion point."""
    with pytest.raises(LinearizationError):
        log_tangent(0.0)
    with pytest.raises(LinearizationError):
        log_tangent(float("nan"))
    with pytest.raises(LinearizationError):
        neg_inverse_tangent(-0.1)


def test_beamforming_sic_constraint_majorizes_exact_gap(config, order, rng):
    """Test the built SIC constraint is tight at the expansion point and an upper bound elsewhere."""
    rows = 1e-3 * complex_normal((2, 3), rng)
    w = complex_normal((2, 3), rng)
    W_ref = np.einsum("ki,kj->kij", w, np.conj(w))
    inp = BeamformingInput(rows=rows, rho=np.array([0.4, 0.7]), order=order, W_ref=W_ref, config=config)
    problem = build_beamforming_problem(inp)
    (constraint,) = sic_constraints(problem)
    k, k_bar = next(iter(order.pairs()))
    after = order.decoded_after(k)
    A = inp.A
    scale = float(np.mean(np.real(np.trace(W_ref, axis1=1, axis2=2))))

    def surrogate_and_exact(W):
        matrices = {f"W{j}": W[j] / scale for j in range(2)}
        Q = quadratic_forms(rows, W)
        exact = log_gap(
            Q[k, k],
            sum(Q[k_bar, j] for j in after) + A[k_bar],
            sum(Q[k, j] for j in after) + A[k],
            Q[k_bar, k],
        )
        return constraint.lhs(matrices, {}) - constraint.rhs, exact

    surrogate, exact = surrogate_and_exact(W_ref)
    assert surrogate == pytest.approx(exact, abs=1e-9)

    powers = random_psd(rng, 2 * SAMPLES, 3).reshape(SAMPLES, 2, 3, 3)
    for W in powers * rng.uniform(0.1, 10.0, (SAMPLES, 2, 1, 1)):
        surrogate, exact = surrogate_and_exact(W)
        assert surrogate >= exact - 1e-9


def test_phase_sic_constraint_majorizes_exact_gap(config, order, rng):
    """Test the lifted SIC constraint is tight at the incumbent phases and an upper bound elsewhere."""
    channels = ChannelSet(
        G=1e-2 * complex_normal((3, 3), rng),
        h_r=1e-1 * complex_normal((2, 3), rng),
        h_d=1e-3 * complex_normal((2, 3), rng),
        d_direct=[80.0, 60.0], d_reflect=[50.0, 40.0], d_bs_irs=70.0,
    )
    phases = PhaseShift(theta=rng.uniform(0.0, 2 * np.pi, 3))
    inp = PhaseSubproblemInput(
        channels=channels, w=complex_normal((2, 3), rng), rho=np.array([0.4, 0.7]),
        order=order, phases_ref=phases, config=config,
    )
    problem = build_phase_problem(inp)
    (constraint,) = sic_constraints(problem)
    k, k_bar = next(iter(order.pairs()))
    after = order.decoded_after(k)
    C = inp.C
    S, q2 = signal_lifts(channels, inp.w)

    def surrogate_and_exact(U):
        P = np.real(np.einsum("jkab,ba->jk", S, U)) + q2
        exact = log_gap(
            P[k, k],
            sum(P[k_bar, j] for j in after) + C[k_bar],
            sum(P[k, j] for j in after) + C[k],
            P[k_bar, k],
        )
        return constraint.lhs({U_BAR: U}, {"s": 0.0}) - constraint.rhs, exact

    u = phases.lifted
    surrogate, exact = surrogate_and_exact(np.outer(u, np.conj(u)))
    assert surrogate == pytest.approx(exact, abs=1e-9)

    for U in random_psd(rng, SAMPLES, 4):
        surrogate, exact = surrogate_and_exact(U)
        assert surrogate >= exact - 1e-9


def test_power_split_sic_constraint_majorizes_exact_condition(config, order, rng):
    """Test the split SIC constraint is tight at the incumbent ratios and an upper bound elsewhere."""
    P = rng.uniform(1e-7, 1e-5, (2, 2))
    rho_ref = np.array([0.3, 0.6])
    inp = PowerSplitInput(P=P, rho_ref=rho_ref, order=order, config=config)
    (constraint,) = sic_constraints(build_power_split_problem(inp))
    k, k_bar = next(iter(order.pairs()))
    sigma2, delta2 = config.noise_antenna_var, config.noise_id_var
    own_noise = inp.interference(k, k) + sigma2
    cross_noise = inp.interference(k_bar, k) + sigma2
    norm = P[k, k] * cross_noise

    def surrogate_and_exact(rho):
        scalars = {"rho0": rho[0], "rho1": rho[1], "tau0": 1.0 / rho[0], "tau1": 1.0 / rho[1], "s": 0.0}
        exact = (P[k, k] * (cross_noise + delta2 / rho[k_bar]) - P[k_bar, k] * (own_noise + delta2 / rho[k])) / norm
        return constraint.lhs({}, scalars) - constraint.rhs, exact

    surrogate, exact = surrogate_and_exact(rho_ref)
    assert surrogate == pytest.approx(exact, rel=1e-9, abs=1e-12)

    for rho in rng.uniform(1e-3, 1.0 - 1e-3, (SAMPLES, 2)):
        surrogate, exact = surrogate_and_exact(rho)
        assert surrogate >= exact - 1e-9 * max(1.0, abs(exact))
