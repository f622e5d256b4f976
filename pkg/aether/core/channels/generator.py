"""
Channel synthesis.

BS-IRS and IRS-user links are Rician with ULA line-of-sight components,
BS-user links are Rayleigh, and every link is scaled by the amplitude of a
distance power-law path gain.
"""

import logging
from typing import Optional, Union

import numpy as np

from aether.core.channels.geometry import Topology
from aether.core.exceptions import DimensionMismatchError, DomainError
from aether.core.model.config import SystemConfig
from aether.core.model.types import ChannelSet
from aether.utils.config.settings import settings

logger = logging.getLogger(__name__)
logger.setLevel(getattr(logging, settings.log_level.value))

REFERENCE_DISTANCE = 1.0  # meters
LOS_ONLY_KAPPA = 1e12


def array_response(n: int, spacing_ratio: float, angle: float) -> np.ndarray:
    """ULA steering vector with entries exp(-j 2 pi (d/lambda) i sin(angle)), i = 0..n-1"""
    if n < 0:
        raise DomainError(f"array size must be non-negative, got {n}")
    return np.exp(-2j * np.pi * spacing_ratio * np.arange(n) * np.sin(angle))


def path_gain(d: Union[float, np.ndarray], exponent: float, c0: float) -> Union[float, np.ndarray]:
    """Linear power gain c0 (d / D0)^(-exponent) with D0 = 1 m"""
    d_arr = np.asarray(d, dtype=float)
    if np.any(~np.isfinite(d_arr)) or np.any(d_arr <= 0):
        raise DomainError(f"distance must be positive and finite, got {d}")
    gain = c0 * (d_arr / REFERENCE_DISTANCE) ** (-exponent)
    return float(gain) if gain.ndim == 0 else gain


def complex_normal(shape, rng: np.random.Generator) -> np.ndarray:
    """I.i.d. CN(0, 1) entries"""
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


def rician_matrix(rows: int, cols: int, kappa: float, los: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """sqrt(kappa/(1+kappa)) LoS + sqrt(1/(1+kappa)) NLoS with unit-variance scattering"""
    if kappa < 0:
        raise DomainError(f"Rician factor must be non-negative, got {kappa}")
    los = np.asarray(los, dtype=complex)
    if los.shape != (rows, cols):
        raise DimensionMismatchError(f"LoS component has shape {los.shape}, expected {(rows, cols)}")
    nlos = complex_normal((rows, cols), rng)
    if kappa >= LOS_ONLY_KAPPA:
        return los.copy()
    return np.sqrt(kappa / (1.0 + kappa)) * los + np.sqrt(1.0 / (1.0 + kappa)) * nlos


def generate_channels(
    config: SystemConfig, topology: Topology, rng: np.random.Generator, seed: Optional[int] = None
) -> ChannelSet:
    """
    Draw one channel realization.

    Random draws are consumed in a fixed order (G, then h_r, then h_d), so the
    realization is a deterministic function of (config, topology, rng state).
    """
    K, N, M = config.num_users, config.num_antennas, config.num_elements
    if topology.num_users != K:
        raise DimensionMismatchError(f"topology has {topology.num_users} users, scenario has {K}")
    alpha_direct, alpha_bs_irs, alpha_irs_user = config.path_loss_exponents
    kappa_bs_irs, kappa_irs_user = config.rician_factors
    spacing = config.element_spacing_ratio
    c0 = config.path_loss_ref

    los_G = np.outer(
        array_response(M, spacing, topology.irs_arrival_angle),
        np.conj(array_response(N, spacing, topology.bs_departure_angle)),
    )
    G = np.sqrt(path_gain(topology.d_bs_irs, alpha_bs_irs, c0)) * rician_matrix(M, N, kappa_bs_irs, los_G, rng)

    los_r = np.stack([array_response(M, spacing, a) for a in topology.irs_departure_angles])
    h_r = rician_matrix(K, M, kappa_irs_user, los_r.reshape(K, M), rng)
    h_r = np.sqrt(path_gain(topology.d_reflect, alpha_irs_user, c0))[:, None] * h_r

    h_d = np.sqrt(path_gain(topology.d_direct, alpha_direct, c0))[:, None] * complex_normal((K, N), rng)

    logger.debug(f"Generated channels K={K} N={N} M={M}")
    return ChannelSet(
        G=G,
        h_r=h_r,
        h_d=h_d,
        d_direct=topology.d_direct,
        d_reflect=topology.d_reflect,
        d_bs_irs=topology.d_bs_irs,
        seed=seed,
    )
