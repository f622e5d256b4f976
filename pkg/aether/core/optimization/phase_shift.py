"""
IRS phase block.

At fixed beams and splitting ratios, solves a max-slack program over the
lifted phase matrix U_bar (unit diagonal, PSD), with the SIC condition
convexified around the incumbent phases and the combined-gain ordering kept
along the decoding sequence. Unit-modulus phases are then recovered by
Gaussian randomization, screening every candidate on the exact constraints.
"""

import logging
from typing import Callable, List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict

from aether.core.conic.problem import (
    Constraint,
    HermitianSdpProblem,
    LinearExpression,
    LogTerm,
    MatrixVar,
    Objective,
    ObjectiveSense,
    ScalarVar,
    Sense,
)
from aether.core.conic.solver import SolveStatus, solve
from aether.core.model.config import SystemConfig
from aether.core.model.feasibility import screen_phase_candidates
from aether.core.model.trace import BlockStatus
from aether.core.model.types import ChannelSet, DecodingOrder, PhaseShift
from aether.core.optimization.lifting import gain_matrices, lifted_quadratic, signal_lifts, unit_diagonal_basis
from aether.core.optimization.sca import log_tangent
from aether.core.optimization.stage1 import randomization_candidates
from aether.utils.config.settings import settings

logger = logging.getLogger(__name__)
logger.setLevel(getattr(logging, settings.log_level.value))

U_BAR = "U_bar"
SLACK = "s"

CandidateBeams = Callable[[np.ndarray], np.ndarray]


class PhaseSubproblemInput(BaseModel):
    """Lifted signal powers at fixed beams and splitting ratios"""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    channels: ChannelSet
    w: np.ndarray
    rho: np.ndarray
    order: DecodingOrder
    phases_ref: PhaseShift
    config: SystemConfig
    nulled: Optional[np.ndarray] = None

    @property
    def C(self) -> np.ndarray:
        """sigma^2 + delta^2 / rho_k"""
        return self.config.noise_antenna_var + self.config.noise_id_var / np.asarray(self.rho)

    def pair_active(self, k: int, k_bar: int) -> bool:
        return self.nulled is None or not bool(self.nulled[k_bar, k])


class PhaseStepResult(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    status: BlockStatus
    phases: PhaseShift
    w: Optional[np.ndarray] = None  # beams matching the chosen phases
    min_margin: float = float("nan")
    slack: float = float("nan")


def build_phase_problem(inp: PhaseSubproblemInput) -> HermitianSdpProblem:
    """Max-slack program over U_bar, linearized at the incumbent phases"""
    channels = inp.channels
    K = channels.num_users
    dim = channels.num_elements + 1
    cfg = inp.config
    gamma = cfg.sinr_threshold
    C = inp.C

    S, q2 = signal_lifts(channels, inp.w)  # [user, beam]
    u_ref = inp.phases_ref.lifted
    P_ref = np.array([[lifted_quadratic(S[j, k], u_ref) + q2[j, k] for k in range(K)] for j in range(K)])

    def power(j: int, beams: List[int], weight: float) -> LinearExpression:
        """weight * sum_{k in beams} P[j, k](U_bar)"""
        if not beams:
            return LinearExpression()
        return LinearExpression(
            matrix_coeffs={U_BAR: weight * sum(S[j, k] for k in beams)},
            constant=weight * float(sum(q2[j, k] for k in beams)),
        )

    constraints: List[Constraint] = [
        Constraint(expr=LinearExpression(matrix_coeffs={U_BAR: E}), sense=Sense.EQ, rhs=1.0, label=f"unit_diagonal_{m}")
        for m, E in enumerate(unit_diagonal_basis(dim))
    ]
    slack = LinearExpression(scalar_coeffs={SLACK: -1.0})

    for k in range(K):
        after = inp.order.decoded_after(k)
        expr = power(k, [k], 1.0 / (gamma * C[k])) + power(k, after, -1.0 / C[k]) + slack
        constraints.append(Constraint(expr=expr, sense=Sense.GE, rhs=1.0, label=f"qos_{k}"))

    for k in range(K):
        weight = cfg.eh_efficiency * (1.0 - float(inp.rho[k])) / cfg.energy_threshold
        expr = power(k, list(range(K)), weight) + slack
        expr.constant += weight * cfg.noise_antenna_var
        constraints.append(Constraint(expr=expr, sense=Sense.GE, rhs=1.0, label=f"energy_{k}"))

    for k, k_bar in inp.order.pairs():
        if not inp.pair_active(k, k_bar):
            continue
        after = inp.order.decoded_after(k)
        r1 = P_ref[k, k]
        r2 = float(sum(P_ref[k_bar, j] for j in after)) + C[k_bar]
        r3 = float(sum(P_ref[k, j] for j in after)) + C[k]
        r4 = P_ref[k_bar, k]
        if r1 <= 0 or r4 <= 0:
            logger.debug(f"Skipping SIC pair ({k}, {k_bar}) with a vanishing reference power")
            continue
        own_slope, own_intercept = log_tangent(r1)
        cross_slope, cross_intercept = log_tangent(r2)
        expr = power(k, [k], own_slope) + power(k_bar, after, cross_slope)
        expr.constant += cross_slope * C[k_bar]
        expr = expr + LinearExpression(scalar_coeffs={SLACK: 1.0})
        own_interference = power(k, after, 1.0 / r3)
        own_interference.constant += C[k] / r3
        constraints.append(
            Constraint(
                expr=expr,
                sense=Sense.LE,
                rhs=float(np.log(r3 * r4)) - own_intercept - cross_intercept,
                logs=[
                    LogTerm(coefficient=-1.0, argument=own_interference, reference=1.0),
                    LogTerm(coefficient=-1.0, argument=power(k_bar, [k], 1.0 / r4), reference=1.0),
                ],
                label=f"sic_{k}_{k_bar}",
            )
        )

    R, direct = gain_matrices(channels)
    gains_ref = np.array([lifted_quadratic(R[k], u_ref) for k in range(K)]) + direct
    gain_scale = float(np.max(gains_ref)) if np.max(gains_ref) > 0 else 1.0
    for k, k_bar in inp.order.consecutive_pairs():
        constraints.append(
            Constraint(
                expr=LinearExpression(
                    matrix_coeffs={U_BAR: (R[k] - R[k_bar]) / gain_scale},
                    constant=float(direct[k] - direct[k_bar]) / gain_scale,
                ),
                sense=Sense.LE,
                rhs=0.0,
                label=f"order_{k}_{k_bar}",
            )
        )

    return HermitianSdpProblem(
        name="phase_shift",
        matrix_vars=[MatrixVar(name=U_BAR, dim=dim)],
        scalar_vars=[ScalarVar(name=SLACK, lower=0.0, upper=1.0)],
        objective=Objective(sense=ObjectiveSense.MAXIMIZE, expr=LinearExpression(scalar_coeffs={SLACK: 1.0})),
        constraints=constraints,
    )


def solve_phase_shift(
    inp: PhaseSubproblemInput,
    count: int,
    rng: np.random.Generator,
    candidate_beams: Optional[CandidateBeams] = None,
) -> PhaseStepResult:
    """
    Max-slack phases followed by screened Gaussian randomization.

    Args:
        inp: Fixed quantities and incumbent phases
        count: Number of random candidates
        rng: Stream for the candidates
        candidate_beams: Maps (T, M) candidate phases to (T, K, N) beams; by
            default every candidate is screened with the fixed beams

    Returns:
        PhaseStepResult with the feasible candidate of largest minimum margin,
        or the incumbent with a non-optimal status
    """
    incumbent = PhaseStepResult(status=BlockStatus.STALLED, phases=inp.phases_ref, w=inp.w)
    result = solve(build_phase_problem(inp))
    if result.status != SolveStatus.OPTIMAL:
        logger.info(f"Phase shift: {result.status.value}, keeping incumbent")
        status = BlockStatus.INFEASIBLE if result.status == SolveStatus.INFEASIBLE else BlockStatus.NUMERICAL_FAILURE
        return incumbent.model_copy(update={"status": status})

    thetas = randomization_candidates(result.matrices[U_BAR], count, rng)
    w = candidate_beams(thetas) if candidate_beams is not None else inp.w
    worst, feasible = screen_phase_candidates(inp.channels, thetas, w, inp.rho, inp.order, inp.config)
    if not np.any(feasible):
        logger.info("Phase shift: no feasible randomized candidate, keeping incumbent")
        return incumbent.model_copy(update={"slack": result.scalars[SLACK]})

    best = int(np.argmax(np.where(feasible, worst, -np.inf)))
    chosen_w = w[best] if np.ndim(w) == 3 else inp.w
    return PhaseStepResult(
        status=BlockStatus.OPTIMAL,
        phases=PhaseShift(theta=thetas[best]),
        w=chosen_w,
        min_margin=float(worst[best]),
        slack=result.scalars[SLACK],
    )
