"""
Lifted quadratic forms in the IRS phase vector.

For an affine map x(u) = A^T u + c of the reflection coefficients u, the
energy ||x||^2 equals u_bar^H R u_bar + ||c||^2 with u_bar = [u; 1] and

    R = [[conj(A) A^T, conj(A) c],
         [(conj(A) c)^H, 0]].

Gains use A = diag(conj(h_{r,k})) G and c = conj(h_{d,k}); received signal
powers use the same construction with a single column.
"""

from typing import Tuple

import numpy as np

from aether.core.exceptions import ContractError
from aether.core.model.types import ChannelSet


def lift_affine(A: np.ndarray, c: np.ndarray) -> np.ndarray:
    """Hermitian (M+1)x(M+1) lift of x(u) = A^T u + c, A of shape (M, L), c of length L"""
    A = np.asarray(A, dtype=complex)
    c = np.asarray(c, dtype=complex)
    M = A.shape[0]
    side = np.conj(A) @ c
    R = np.zeros((M + 1, M + 1), dtype=complex)
    R[:M, :M] = np.conj(A) @ A.T
    R[:M, M] = side
    R[M, :M] = np.conj(side)
    return R


def _require_irs(channels: ChannelSet) -> None:
    if channels.num_elements == 0:
        raise ContractError("lifted forms need at least one IRS element")


def build_gain_matrix(channels: ChannelSet, k: int) -> np.ndarray:
    """R_k with u_bar^H R_k u_bar + ||h_{d,k}||^2 = combined gain of user k"""
    _require_irs(channels)
    A = np.conj(channels.h_r[k])[:, None] * channels.G
    return lift_affine(A, np.conj(channels.h_d[k]))


def gain_matrices(channels: ChannelSet) -> Tuple[np.ndarray, np.ndarray]:
    """(K, M+1, M+1) stack of R_k and the direct-path gains ||h_{d,k}||^2"""
    R = np.stack([build_gain_matrix(channels, k) for k in range(channels.num_users)])
    direct = np.sum(np.abs(channels.h_d) ** 2, axis=1)
    return R, direct


def build_signal_lift(channels: ChannelSet, w: np.ndarray, k: int, j: int) -> Tuple[np.ndarray, complex]:
    """
    Lift of the power of beam k received by user j.

    Returns (S_{k,j}, q_{k,j}) with u_bar^H S u_bar + |q|^2 = |h_j^H w_k|^2,
    where p_{k,j} = diag(h_{r,j}^H) G w_k and q_{k,j} = h_{d,j}^H w_k.
    """
    _require_irs(channels)
    w_k = np.asarray(w, dtype=complex)[k]
    p = np.conj(channels.h_r[j]) * (channels.G @ w_k)
    q = complex(np.conj(channels.h_d[j]) @ w_k)
    return lift_affine(p[:, None], np.array([q])), q


def signal_lifts(channels: ChannelSet, w: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    Every signal lift at once.

    Returns S of shape (K, K, M+1, M+1) and |q|^2 of shape (K, K), both indexed
    [user, beam] like the received power matrix.
    """
    _require_irs(channels)
    w = np.asarray(w, dtype=complex)
    K, M = channels.num_users, channels.num_elements
    Gw = w @ channels.G.T  # [beam, m] = (G w_beam)[m]
    p = np.conj(channels.h_r)[:, None, :] * Gw[None, :, :]  # [user, beam, m]
    q = np.conj(channels.h_d) @ w.T  # [user, beam]
    S = np.zeros((K, K, M + 1, M + 1), dtype=complex)
    S[:, :, :M, :M] = np.einsum("jkm,jkn->jkmn", np.conj(p), p)
    side = np.conj(p) * q[:, :, None]
    S[:, :, :M, M] = side
    S[:, :, M, :M] = np.conj(side)
    return S, np.abs(q) ** 2


def lifted_quadratic(R: np.ndarray, u_bar: np.ndarray) -> float:
    """u_bar^H R u_bar (real part)"""
    return float(np.real(np.conj(u_bar) @ R @ u_bar))


def unit_diagonal_basis(dim: int) -> np.ndarray:
    """Stack of E_mm selectors for the unit-diagonal constraints"""
    basis = np.zeros((dim, dim, dim), dtype=complex)
    basis[np.arange(dim), np.arange(dim), np.arange(dim)] = 1.0
    return basis
