"""
Closed-form physical-layer quantities.

Channels are handled in row form: row k of the effective channel matrix is
h_k^H = h_{r,k}^H Theta G + h_{d,k}^H. Received powers are collected in a
matrix ``P`` with ``P[i, j] = |h_i^H w_j|^2``; every function below that ends
in ``_from_powers`` accepts arbitrary leading batch dimensions so phase
candidates can be screened in one call.
"""

from typing import Optional

import numpy as np

from aether.core.exceptions import ContractError, DimensionMismatchError
from aether.core.model.config import SystemConfig
from aether.core.model.types import Beamformers, ChannelSet, DecodingOrder, PhaseShift, PowerSplit


def _check_phases(channels: ChannelSet, phases: PhaseShift) -> None:
    if phases.num_elements != channels.num_elements:
        raise DimensionMismatchError(
            f"{phases.num_elements} phases for an IRS with {channels.num_elements} elements"
        )


def _check_beams(channels: ChannelSet, beams: Beamformers) -> None:
    if beams.w.shape != (channels.num_users, channels.num_antennas):
        raise DimensionMismatchError(
            f"beams have shape {beams.w.shape}, expected {(channels.num_users, channels.num_antennas)}"
        )


def effective_rows(channels: ChannelSet, phases: PhaseShift) -> np.ndarray:
    """(K, N) matrix whose row k is h_k^H"""
    _check_phases(channels, phases)
    rows = np.conj(channels.h_d)
    if channels.num_elements:
        rows = rows + (np.conj(channels.h_r) * phases.u) @ channels.G
    return rows


def effective_rows_batch(channels: ChannelSet, thetas: np.ndarray) -> np.ndarray:
    """(T, K, N) effective rows for T phase vectors given as a (T, M) array"""
    thetas = np.atleast_2d(thetas)
    if thetas.shape[1] != channels.num_elements:
        raise DimensionMismatchError(f"phase candidates have {thetas.shape[1]} entries, expected {channels.num_elements}")
    base = np.conj(channels.h_d)[None, :, :]
    if not channels.num_elements:
        return np.repeat(base, thetas.shape[0], axis=0)
    weighted = np.conj(channels.h_r)[None, :, :] * np.exp(1j * thetas)[:, None, :]
    return base + weighted @ channels.G


def effective_channel(channels: ChannelSet, phases: PhaseShift, k: int) -> np.ndarray:
    """Column vector h_k = (h_{r,k}^H Theta G + h_{d,k}^H)^H"""
    return np.conj(effective_rows(channels, phases)[k])


def combined_gains(channels: ChannelSet, phases: PhaseShift) -> np.ndarray:
    """Per-user combined channel gains ||h_k||^2"""
    return np.sum(np.abs(effective_rows(channels, phases)) ** 2, axis=1)


def power_matrix_from_rows(rows: np.ndarray, w: np.ndarray) -> np.ndarray:
    """P[..., i, j] = |rows[..., i, :] . w[..., j, :]|^2"""
    return np.abs(np.einsum("...in,...jn->...ij", rows, w)) ** 2


def received_powers(channels: ChannelSet, phases: PhaseShift, beams: Beamformers) -> np.ndarray:
    """(K, K) received power matrix at the current phases"""
    _check_beams(channels, beams)
    return power_matrix_from_rows(effective_rows(channels, phases), beams.w)


def cross_sinr_from_powers(
    P: np.ndarray, rho: np.ndarray, order: DecodingOrder, noise_antenna_var: float, noise_id_var: float
) -> np.ndarray:
    """
    Matrix of decoding SINRs.

    Entry ``[..., i, k]`` is the SINR at user i when decoding user k's message,
    with interference from every user decoded after k. The diagonal holds the
    users' own SINRs.
    """
    mask = order.after_mask().astype(float)
    interference = P @ mask.T  # [..., i, k] = sum_{s(j)>s(k)} P[..., i, j]
    rho_i = np.asarray(rho)[..., :, None]
    numerator = rho_i * P
    denominator = rho_i * interference + rho_i * noise_antenna_var + noise_id_var
    return numerator / denominator


def sinr_from_powers(P: np.ndarray, rho: np.ndarray, order: DecodingOrder, noise_antenna_var: float, noise_id_var: float) -> np.ndarray:
    return np.diagonal(cross_sinr_from_powers(P, rho, order, noise_antenna_var, noise_id_var), axis1=-2, axis2=-1)


def harvested_from_powers(P: np.ndarray, rho: np.ndarray, eh_efficiency: float, noise_antenna_var: float) -> np.ndarray:
    return eh_efficiency * (1.0 - np.asarray(rho)) * (np.sum(P, axis=-1) + noise_antenna_var)


def sinr(
    channels: ChannelSet,
    phases: PhaseShift,
    beams: Beamformers,
    split: PowerSplit,
    order: DecodingOrder,
    k: int,
    config: SystemConfig,
) -> float:
    """SINR of user k decoding its own message"""
    P = received_powers(channels, phases, beams)
    values = sinr_from_powers(P, split.rho, order, config.noise_antenna_var, config.noise_id_var)
    return float(values[k])


def cross_sinr(
    channels: ChannelSet,
    phases: PhaseShift,
    beams: Beamformers,
    split: PowerSplit,
    order: DecodingOrder,
    k: int,
    k_bar: int,
    config: SystemConfig,
) -> float:
    """SINR at user k_bar when decoding user k's message; requires s(k) <= s(k_bar)"""
    if order.positions[k] > order.positions[k_bar]:
        raise ContractError(
            f"user {k_bar} (position {order.positions[k_bar]}) cannot decode user {k} "
            f"(position {order.positions[k]})"
        )
    P = received_powers(channels, phases, beams)
    values = cross_sinr_from_powers(P, split.rho, order, config.noise_antenna_var, config.noise_id_var)
    return float(values[k_bar, k])


def harvested_power(
    channels: ChannelSet,
    phases: PhaseShift,
    beams: Beamformers,
    split: PowerSplit,
    k: int,
    config: SystemConfig,
) -> float:
    """Power harvested by user k's energy branch (watts)"""
    P = received_powers(channels, phases, beams)
    values = harvested_from_powers(P, split.rho, config.eh_efficiency, config.noise_antenna_var)
    return float(values[k])


def total_power(beams: Beamformers, lifted: Optional[bool] = False) -> float:
    """
    BS transmit power sum_k ||w_k||^2.

    With ``lifted=True`` and lifted matrices present, returns sum_k Tr(W_k).
    """
    if lifted and beams.W is not None:
        return float(np.real(np.trace(beams.W, axis1=1, axis2=2)).sum())
    return float(beams.powers.sum())
