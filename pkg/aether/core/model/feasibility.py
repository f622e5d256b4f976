"""
Constraint evaluation on the original (unrelaxed, unlinearized) problem.

Every constraint is put in g(x) >= 0 form and divided by its right-hand side,
so margins are dimensionless and comparable across constraint kinds.
"""

import logging
from enum import Enum
from typing import Dict, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, Field

from aether.core.model.config import SystemConfig
from aether.core.model.physics import (
    cross_sinr_from_powers,
    effective_rows,
    effective_rows_batch,
    harvested_from_powers,
    power_matrix_from_rows,
)
from aether.core.model.types import TWO_PI, ChannelSet, DecodingOrder, Solution
from aether.utils.config.settings import settings

logger = logging.getLogger(__name__)
logger.setLevel(getattr(logging, settings.log_level.value))


class ConstraintKind(str, Enum):
    QOS = "qos"
    SIC = "sic"
    ENERGY = "energy"
    SPLIT = "split"
    PHASE = "phase"
    ORDER = "order"
    ORDER_CONSISTENCY = "order_consistency"  # informational


class ConstraintCheck(BaseModel):
    """Signed, normalized margin of one constraint"""
    kind: ConstraintKind
    users: Tuple[int, ...]
    margin: float
    passed: bool
    informational: bool = False


class FeasibilityReport(BaseModel):
    """Per-constraint results; ``passed`` ignores informational entries"""
    tol: float
    checks: List[ConstraintCheck] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks if not c.informational)

    @property
    def failed(self) -> List[ConstraintCheck]:
        return [c for c in self.checks if not c.passed and not c.informational]

    @property
    def min_margin(self) -> float:
        margins = [c.margin for c in self.checks if not c.informational and np.isfinite(c.margin)]
        return min(margins) if margins else float("inf")

    def by_kind(self, kind: ConstraintKind) -> List[ConstraintCheck]:
        return [c for c in self.checks if c.kind == kind]


def nulled_links(rows: np.ndarray, w: np.ndarray, P: np.ndarray, null_tol: float) -> np.ndarray:
    """Entry [..., i, k] set when |h_i^H w_k| <= null_tol ||h_i|| ||w_k||"""
    row_norms = np.sum(np.abs(rows) ** 2, axis=-1)
    beam_norms = np.sum(np.abs(w) ** 2, axis=-1)
    bound = null_tol ** 2 * row_norms[..., :, None] * beam_norms[..., None, :]
    return P <= bound


def constraint_margins(
    P: np.ndarray,
    rho: np.ndarray,
    order: DecodingOrder,
    config: SystemConfig,
    nulled: Optional[np.ndarray] = None,
) -> Dict[str, np.ndarray]:
    """
    Normalized margins of the QoS, SIC and energy constraints.

    Returns arrays keyed by kind; ``sic[..., k_bar, k]`` holds the decoding
    condition of user k's message at user k_bar and is +inf for entries that
    are not constrained pairs or whose cross link is nulled.
    """
    gamma = config.sinr_threshold
    cross = cross_sinr_from_powers(P, rho, order, config.noise_antenna_var, config.noise_id_var)
    own = np.diagonal(cross, axis1=-2, axis2=-1)
    qos = (own - gamma) / gamma

    mask = order.after_mask().T  # [k_bar, k] set when s(k_bar) > s(k)
    own_ref = np.maximum(own[..., None, :], np.finfo(float).tiny)
    sic = (cross - own[..., None, :]) / own_ref
    active = np.broadcast_to(mask, sic.shape)
    if nulled is not None:
        active = active & ~nulled
    sic = np.where(active, sic, np.inf)

    harvested = harvested_from_powers(P, rho, config.eh_efficiency, config.noise_antenna_var)
    energy = (harvested - config.energy_threshold) / config.energy_threshold
    return {"qos": qos, "sic": sic, "energy": energy}


def min_margin(margins: Dict[str, np.ndarray]) -> np.ndarray:
    """Smallest margin per batch entry"""
    qos = np.min(margins["qos"], axis=-1)
    energy = np.min(margins["energy"], axis=-1)
    sic = np.min(margins["sic"], axis=(-2, -1))
    return np.minimum(np.minimum(qos, energy), sic)


def order_consistent(gains: np.ndarray, order: DecodingOrder, tol: float = 0.0) -> np.ndarray:
    """Whether combined gains are ascending along the decoding sequence"""
    seq = order.sequence
    ordered = gains[..., seq]
    diffs = ordered[..., 1:] - ordered[..., :-1]
    scale = np.maximum(np.abs(ordered[..., 1:]), np.finfo(float).tiny)
    return np.all(diffs >= -tol * scale, axis=-1)


def screen_phase_candidates(
    channels: ChannelSet,
    thetas: np.ndarray,
    w: np.ndarray,
    rho: np.ndarray,
    order: DecodingOrder,
    config: SystemConfig,
    require_order: bool = True,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Evaluate T phase candidates at fixed splitting ratios.

    Args:
        channels: Channel realization
        thetas: (T, M) candidate phases
        w: (K, N) beams shared by all candidates, or (T, K, N) per-candidate beams
        rho: Splitting ratios
        order: Decoding order the candidates must respect
        config: Scenario
        require_order: Reject candidates whose combined gains break the order

    Returns:
        Tuple of (min_margin per candidate, feasible mask)
    """
    rows = effective_rows_batch(channels, thetas)
    P = power_matrix_from_rows(rows, w)
    nulled = nulled_links(rows, w, P, settings.sic_null_tol)
    margins = constraint_margins(P, rho, order, config, nulled)
    worst = min_margin(margins)
    feasible = worst >= -config.feasibility_tol
    if require_order:
        gains = np.sum(np.abs(rows) ** 2, axis=-1)
        feasible &= order_consistent(gains, order, config.feasibility_tol)
    return worst, feasible


def check_feasibility(
    channels: ChannelSet,
    solution: Solution,
    config: SystemConfig,
    tol: Optional[float] = None,
) -> FeasibilityReport:
    """
    Evaluate every constraint of the original problem at a solution.

    Reports, never raises. The overall verdict passes iff every
    non-informational margin is at least ``-tol``.
    """
    tol = config.feasibility_tol if tol is None else tol
    report = FeasibilityReport(tol=tol)
    K = channels.num_users

    order = solution.order
    valid_order = order.num_users == K
    report.checks.append(
        ConstraintCheck(kind=ConstraintKind.ORDER, users=tuple(range(order.num_users)),
                        margin=0.0 if valid_order else -1.0, passed=valid_order)
    )
    if not valid_order:
        logger.info(f"Decoding order covers {order.num_users} users, scenario has {K}")
        return report

    rows = effective_rows(channels, solution.phases)
    w = np.asarray(solution.beams.w)
    rho = np.asarray(solution.split.rho)
    P = power_matrix_from_rows(rows, w)
    nulled = nulled_links(rows, w, P, settings.sic_null_tol)
    margins = constraint_margins(P, rho, order, config, nulled)

    for k in range(K):
        m = float(margins["qos"][k])
        report.checks.append(ConstraintCheck(kind=ConstraintKind.QOS, users=(k,), margin=m, passed=m >= -tol))
    for k, k_bar in order.pairs():
        m = float(margins["sic"][k_bar, k])
        report.checks.append(ConstraintCheck(kind=ConstraintKind.SIC, users=(k, k_bar), margin=m, passed=m >= -tol))
    for k in range(K):
        m = float(margins["energy"][k])
        report.checks.append(ConstraintCheck(kind=ConstraintKind.ENERGY, users=(k,), margin=m, passed=m >= -tol))
    for k in range(K):
        m = float(min(rho[k], 1.0 - rho[k]))
        report.checks.append(ConstraintCheck(kind=ConstraintKind.SPLIT, users=(k,), margin=m, passed=m >= -tol))

    theta = np.asarray(solution.phases.theta)
    unit = np.abs(np.abs(solution.phases.u) - 1.0)
    for m_idx in range(theta.shape[0]):
        m = float(min(theta[m_idx], TWO_PI - theta[m_idx]) - unit[m_idx])
        report.checks.append(ConstraintCheck(kind=ConstraintKind.PHASE, users=(m_idx,), margin=m, passed=m >= -tol))

    gains = np.sum(np.abs(rows) ** 2, axis=1)
    consistent = bool(order_consistent(gains, order, tol))
    report.checks.append(
        ConstraintCheck(kind=ConstraintKind.ORDER_CONSISTENCY, users=tuple(order.sequence),
                        margin=0.0 if consistent else -1.0, passed=consistent, informational=True)
    )
    return report
