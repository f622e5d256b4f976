"""
Rank-one recovery from PSD solutions.
"""

from typing import Optional, Tuple

import numpy as np

from aether.utils.config.settings import settings


def _hermitian(X: np.ndarray) -> np.ndarray:
    X = np.asarray(X, dtype=complex)
    return 0.5 * (X + X.conj().T)


def extract_rank_one(X: np.ndarray, ratio_tol: Optional[float] = None) -> Tuple[np.ndarray, float]:
    """
    Principal rank-one factor of a Hermitian PSD matrix.

    Returns sqrt(lambda_1) v_1 and the ratio lambda_2 / lambda_1. Whether the
    ratio certifies a rank-one solution is left to the caller (see
    ``is_rank_one``); ``ratio_tol`` is accepted for symmetry with that check.
    A zero matrix gives a zero vector and ratio 0.
    """
    X = _hermitian(X)
    n = X.shape[0]
    if n == 0:
        return np.zeros(0, dtype=complex), 0.0
    eigvals, eigvecs = np.linalg.eigh(X)
    top = max(float(eigvals[-1]), 0.0)
    if top <= 0.0:
        return np.zeros(n, dtype=complex), 0.0
    second = max(float(eigvals[-2]), 0.0) if n > 1 else 0.0
    vector = np.sqrt(top) * eigvecs[:, -1]
    return vector, second / top


def is_rank_one(ratio: float, ratio_tol: Optional[float] = None) -> bool:
    tol = settings.rank_ratio_tol if ratio_tol is None else ratio_tol
    return ratio <= tol


def psd_factor(X: np.ndarray, clamp: Optional[float] = None) -> np.ndarray:
    """
    Factor F with X ~ F F^H, F = V Sigma^{1/2}.

    Eigenvalues below ``clamp`` (relative to the largest) are set to zero.
    """
    clamp = settings.psd_clamp if clamp is None else clamp
    eigvals, eigvecs = np.linalg.eigh(_hermitian(X))
    floor = clamp * max(float(eigvals[-1]), 1.0) if eigvals.size else 0.0
    eigvals = np.where(eigvals < floor, 0.0, eigvals)
    return eigvecs * np.sqrt(eigvals)[None, :]


def reconstruction_error(X: np.ndarray, vector: np.ndarray) -> float:
    """||X - v v^H||_F / ||X||_F"""
    X = _hermitian(X)
    norm = np.linalg.norm(X)
    if norm == 0:
        return 0.0
    return float(np.linalg.norm(X - np.outer(vector, np.conj(vector))) / norm)
