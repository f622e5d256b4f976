"""
First-order bounds used by the successive convex approximation steps.

Each tangent is returned as (slope, intercept) so builders can place it
directly into a linear expression. Both majorize the concave function they
replace and are tight at the expansion point.
"""

from typing import Tuple

import numpy as np

from aether.core.exceptions import LinearizationError


def log_tangent(reference: float) -> Tuple[float, float]:
    """
    Tangent of ln(x) at ``reference``.

    ln(x) <= slope * x + intercept for all x > 0, with equality at the
    reference.

    Raises:
        LinearizationError: if the reference is not positive and finite
    """
    reference = float(reference)
    if not np.isfinite(reference) or reference <= 0:
        raise LinearizationError(f"log expansion point must be positive, got {reference}")
    return 1.0 / reference, float(np.log(reference)) - 1.0


def neg_inverse_tangent(rho_ref: float) -> Tuple[float, float]:
    """Tangent of -1/rho at ``rho_ref``: slope 1/rho_ref^2, intercept -2/rho_ref"""
    rho_ref = float(rho_ref)
    if not np.isfinite(rho_ref) or rho_ref <= 0:
        raise LinearizationError(f"splitting ratio expansion point must be positive, got {rho_ref}")
    return 1.0 / rho_ref ** 2, -2.0 / rho_ref
