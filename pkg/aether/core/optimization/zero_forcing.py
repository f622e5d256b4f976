"""
Zero-forcing beam directions with linear-program power allocation.
"""

import logging
from typing import Callable

import numpy as np
from scipy.optimize import linprog

from aether.core.exceptions import RankDeficientError, ScenarioInfeasibleError
from aether.core.model.config import SystemConfig
from aether.core.model.physics import effective_rows_batch
from aether.core.model.trace import BlockStatus
from aether.core.model.types import Beamformers, ChannelSet
from aether.core.optimization.beamforming import BeamformingResult, energy_level
from aether.utils.config.settings import settings

logger = logging.getLogger(__name__)
logger.setLevel(getattr(logging, settings.log_level.value))

CONDITION_LIMIT = 1e12


def zf_directions(rows: np.ndarray) -> np.ndarray:
    """
    Unit-norm zero-forcing beams as rows of a (K, N) array.

    Columns of H (H^H H)^{-1} with H = [h_1 ... h_K], so h_j^H w_k = 0 for j != k.

    Raises:
        RankDeficientError: K > N or the effective channels are linearly dependent
    """
    K, N = rows.shape
    if K > N:
        raise RankDeficientError(f"zero forcing needs K <= N, got K={K}, N={N}")
    gram = rows @ rows.conj().T
    if np.linalg.cond(gram) > CONDITION_LIMIT:
        raise RankDeficientError("effective channel matrix is rank deficient")
    directions = (rows.conj().T @ np.linalg.inv(gram)).T
    return directions / np.linalg.norm(directions, axis=1, keepdims=True)


def zf_directions_batch(rows: np.ndarray) -> np.ndarray:
    """Zero-forcing directions for a (T, K, N) stack; singular entries come out as pseudo-inverse beams"""
    pseudo = np.linalg.pinv(rows)  # (T, N, K)
    directions = np.swapaxes(pseudo, 1, 2)
    norms = np.linalg.norm(directions, axis=2, keepdims=True)
    return directions / np.where(norms > 0, norms, 1.0)


def zf_powers(gains: np.ndarray, rho: np.ndarray, config: SystemConfig) -> np.ndarray:
    """
    Minimum-sum powers for beams with no cross terms.

    Solves min sum p s.t. p_k g_k >= gamma A_k (QoS) and
    p_k g_k >= e / (eta (1 - rho_k)) - sigma^2 (energy), p >= 0, as a linear
    program with each row scaled by its right-hand side.
    """
    K = gains.shape[0]
    A = config.noise_antenna_var + config.noise_id_var / np.asarray(rho)
    qos = config.sinr_threshold * A
    energy = np.array([energy_level(config, float(r)) for r in rho])
    reference = float(np.max(np.maximum(qos, energy) / gains))

    A_ub, b_ub = [], []
    for k in range(K):
        for level in (qos[k], energy[k]):
            if level <= 0:
                continue
            row = np.zeros(K)
            row[k] = -gains[k] * reference / level
            A_ub.append(row)
            b_ub.append(-1.0)
    result = linprog(
        c=np.ones(K),
        A_ub=np.array(A_ub),
        b_ub=np.array(b_ub),
        bounds=[(0, None)] * K,
        method="highs",
    )
    if result.status != 0:
        raise ScenarioInfeasibleError(f"zero-forcing power allocation failed: {result.message}")
    return np.asarray(result.x) * reference


def zf_beamforming(rows: np.ndarray, rho: np.ndarray, config: SystemConfig) -> BeamformingResult:
    """Zero-forcing beams at fixed splitting ratios and phases"""
    directions = zf_directions(rows)
    gains = np.abs(np.sum(rows * directions, axis=1)) ** 2
    powers = zf_powers(gains, rho, config)
    w = np.sqrt(powers)[:, None] * directions
    beams = Beamformers(w=w, W=np.einsum("ki,kj->kij", w, np.conj(w)))
    return BeamformingResult(
        status=BlockStatus.OPTIMAL,
        beams=beams,
        objective=float(powers.sum()),
        rank_ratios=[0.0] * rows.shape[0],
    )


def zf_candidate_beams(channels: ChannelSet, powers: np.ndarray) -> Callable[[np.ndarray], np.ndarray]:
    """Recompute zero-forcing beams at fixed per-user powers for each candidate phase vector"""
    amplitudes = np.sqrt(np.asarray(powers))

    def beams(thetas: np.ndarray) -> np.ndarray:
        directions = zf_directions_batch(effective_rows_batch(channels, thetas))
        return amplitudes[None, :, None] * directions

    return beams
