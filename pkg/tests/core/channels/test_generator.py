"""
Tests for topology sampling and channel generation.
"""

import numpy as np
import pytest

from aether.core.channels.generator import array_response, generate_channels, path_gain, rician_matrix
from aether.core.channels.geometry import Topology, azimuth, sample_topology
from aether.core.channels.streams import Stage, stream
from aether.core.exceptions import DomainError
from aether.core.model.config import SystemConfig


def test_array_response():
    """Test ULA steering vectors."""
    assert np.allclose(array_response(5, 0.5, 0.0), np.ones(5))
    assert np.allclose(array_response(2, 0.5, np.pi / 2), [1.0, -1.0])
    a = array_response(7, 0.5, 0.9)
    assert np.linalg.norm(a) == pytest.approx(np.sqrt(7))
    assert array_response(0, 0.5, 0.3).shape == (0,)


def test_path_gain():
    """Test the distance power law."""
    assert path_gain(1.0, 3.0, 1e-3) == pytest.approx(1e-3)
    assert path_gain(100.0, 2.0, 1e-3) == pytest.approx(1e-7)
    assert path_gain(50.0, 2.0, 1.0) / path_gain(100.0, 2.0, 1.0) == pytest.approx(4.0)
    gains = path_gain(np.array([1.0, 1e4]), 3.0, 1e-3)
    assert np.all(gains > 0) and np.all(np.isfinite(gains))
    with pytest.raises(DomainError):
        path_gain(0.0, 2.0, 1.0)
    with pytest.raises(DomainError):
        path_gain(np.array([1.0, -2.0]), 2.0, 1.0)


def test_rician_limits():
    """Test the pure LoS and pure scattering limits."""
    rng = np.random.default_rng(0)
    los = np.outer(array_response(3, 0.5, 0.4), np.conj(array_response(2, 0.5, 1.1)))
    assert np.allclose(rician_matrix(3, 2, 1e12, los, rng), los, atol=1e-5)
    with pytest.raises(DomainError):
        rician_matrix(3, 2, -1.0, los, rng)

    samples = rician_matrix(100000, 1, 0.0, np.zeros((100000, 1)), rng)
    assert np.mean(np.abs(samples) ** 2) == pytest.approx(1.0, rel=0.03)


def test_rician_second_moment():
    """Test the mean Frobenius norm against its closed form."""
    rng = np.random.default_rng(1)
    kappa = 2.0
    los = np.outer(array_response(4, 0.5, 0.3), np.conj(array_response(3, 0.5, -0.7)))
    draws = 25000
    total = sum(np.linalg.norm(rician_matrix(4, 3, kappa, los, rng)) ** 2 for _ in range(draws)) / draws
    expected = 12 * (kappa / (1 + kappa) * np.mean(np.abs(los) ** 2) + 1 / (1 + kappa))
    assert total == pytest.approx(expected, rel=0.03)


def test_los_rank_one():
    """Test that the BS-IRS line-of-sight component has rank one."""
    los = np.outer(array_response(6, 0.5, 0.2), np.conj(array_response(4, 0.5, -1.3)))
    s = np.linalg.svd(los, compute_uv=False)
    assert s[1] / s[0] < 1e-12


def test_topology_sampling():
    """Test that users land inside the disc at ground level."""
    config = SystemConfig(num_users=50)
    topology = sample_topology(config, stream(3, 0, Stage.TOPOLOGY))
    assert topology.within(config.user_radius)
    assert np.all(topology.user_positions[:, 2] == 0.0)
    assert np.all(topology.d_direct > 0) and np.all(topology.d_reflect > 0)
    assert topology.d_bs_irs == pytest.approx(np.hypot(50.0, 50.0))
    assert topology.bs_departure_angle == pytest.approx(np.pi / 4)
    assert topology.irs_arrival_angle == pytest.approx(-3 * np.pi / 4)


def test_azimuth_vertical_link():
    """Test the angle convention for vertical links."""
    assert float(azimuth([0.0, 0.0, 0.0], [0.0, 0.0, 10.0])) == 0.0


def test_topology_rejects_colocated_user():
    """Test that a user on top of the BS is rejected."""
    with pytest.raises(ValueError):
        Topology(user_positions=[[0.0, 0.0, 15.0]], bs_position=(0.0, 0.0, 15.0), irs_position=(50.0, 50.0, 15.0))


def _draw(config, seed=11, draw=0):
    topology = sample_topology(config, stream(seed, draw, Stage.TOPOLOGY))
    return generate_channels(config, topology, stream(seed, draw, Stage.CHANNEL), seed=seed)


def test_generation_deterministic():
    """Test that a fixed seed reproduces the channels bit for bit."""
    config = SystemConfig(num_users=3, num_antennas=2, num_elements=5)
    a, b = _draw(config), _draw(config)
    assert np.array_equal(a.G, b.G) and np.array_equal(a.h_r, b.h_r) and np.array_equal(a.h_d, b.h_d)
    c = _draw(config, draw=1)
    assert not np.array_equal(a.h_d, c.h_d)


def test_generation_without_irs():
    """Test the degenerate IRS-free draw."""
    channels = _draw(SystemConfig(num_users=2, num_antennas=3, num_elements=0))
    assert channels.G.shape == (0, 3)
    assert channels.h_r.shape == (2, 0)
    assert channels.h_d.shape == (2, 3)
    assert np.all(channels.h_d != 0)


def test_direct_link_second_moment():
    """Test E||h_d||^2 = N C0 d^-alpha over many channel draws of one topology."""
    config = SystemConfig(num_users=1, num_antennas=4, num_elements=0)
    topology = Topology(user_positions=[[30.0, 40.0, 0.0]], bs_position=(0.0, 0.0, 15.0), irs_position=(50.0, 50.0, 15.0))
    rng = np.random.default_rng(5)
    draws = 20000
    total = np.mean([np.linalg.norm(generate_channels(config, topology, rng).h_d) ** 2 for _ in range(draws)])
    expected = 4 * path_gain(topology.d_direct[0], 3.0, 1e-3)
    assert total == pytest.approx(expected, rel=0.03)


def test_nested_draws_are_prefix_consistent():
    """Test that truncating a large draw equals the leading sub-array."""
    big = _draw(SystemConfig(num_users=2, num_antennas=4, num_elements=8))
    small = big.subset(3, 2)
    assert np.array_equal(small.G, big.G[:3, :2])
    assert np.array_equal(small.h_d, big.h_d[:, :2])
