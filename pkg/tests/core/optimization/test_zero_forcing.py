"""
Tests for zero-forcing beams and their power allocation.
"""

import numpy as np
import pytest

from aether.core.channels.generator import complex_normal
from aether.core.exceptions import RankDeficientError
from aether.core.model.config import SystemConfig
from aether.core.model.feasibility import constraint_margins
from aether.core.model.physics import power_matrix_from_rows
from aether.core.model.types import DecodingOrder
from aether.core.optimization.beamforming import energy_level
from aether.core.optimization.zero_forcing import (
    zf_beamforming,
    zf_directions,
    zf_directions_batch,
    zf_powers,
)


@pytest.fixture
def config():
    return SystemConfig(
        num_users=3, num_antennas=4, num_elements=0,
        sinr_threshold=10.0, energy_threshold=1e-6,
    )


@pytest.fixture
def rows():
    return 1e-3 * complex_normal((3, 4), np.random.default_rng(4))


def test_directions_null_cross_links(rows):
    """Test h_j^H w_k = 0 for j != k with unit-norm beams."""
    directions = zf_directions(rows)
    cross = rows @ directions.T
    assert np.allclose(np.linalg.norm(directions, axis=1), 1.0)
    off_diagonal = cross[~np.eye(3, dtype=bool)]
    assert np.max(np.abs(off_diagonal)) < 1e-12 * np.max(np.abs(np.diagonal(cross)))


def test_more_users_than_antennas():
    """Test zero forcing refuses K > N."""
    with pytest.raises(RankDeficientError):
        zf_directions(complex_normal((3, 2), np.random.default_rng(0)))


def test_dependent_channels():
    """Test zero forcing refuses linearly dependent users."""
    row = complex_normal((1, 3), np.random.default_rng(0))
    with pytest.raises(RankDeficientError):
        zf_directions(np.vstack([row, 2.0 * row]))


def test_batch_directions_match_single(rows):
    """Test the batched directions span the same beams up to phase."""
    single = zf_directions(rows)
    batch = zf_directions_batch(np.stack([rows, rows]))
    assert batch.shape == (2, 3, 4)
    for k in range(3):
        assert abs(np.vdot(single[k], batch[1, k])) == pytest.approx(1.0)


def test_powers_meet_binding_constraint(config, rows):
    """Test each power sits exactly on the tighter of its QoS and energy levels."""
    directions = zf_directions(rows)
    gains = np.abs(np.sum(rows * directions, axis=1)) ** 2
    rho = np.array([0.3, 0.5, 0.8])
    powers = zf_powers(gains, rho, config)
    A = config.noise_antenna_var + config.noise_id_var / rho
    levels = np.maximum(config.sinr_threshold * A, [energy_level(config, r) for r in rho])
    assert np.allclose(powers * gains, levels, rtol=1e-6)


def test_zf_beamforming_is_feasible(config, rows):
    """Test zero-forcing beams satisfy QoS and energy with vacuous SIC."""
    rho = np.full(3, 0.5)
    result = zf_beamforming(rows, rho, config)
    w = np.asarray(result.beams.w)
    assert result.objective == pytest.approx(float(np.sum(np.abs(w) ** 2)))
    assert result.max_rank_ratio == 0.0

    P = power_matrix_from_rows(rows, w)
    nulled = ~np.eye(3, dtype=bool)
    margins = constraint_margins(P, rho, DecodingOrder.identity(3), config, nulled)
    assert np.all(margins["qos"] >= -1e-6)
    assert np.all(margins["energy"] >= -1e-6)
