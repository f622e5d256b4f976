"""
Decoding-order stage.

Maximizes the sum of combined channel gains over the IRS phases with a
semidefinite relaxation, recovers unit-modulus phases by Gaussian
randomization and sorts users by their combined gains (weakest decoded
first).
"""

import logging
from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict

from aether.core.channels.generator import complex_normal
from aether.core.conic.problem import (
    Constraint,
    HermitianSdpProblem,
    LinearExpression,
    MatrixVar,
    Objective,
    ObjectiveSense,
    Sense,
)
from aether.core.conic.rank import psd_factor
from aether.core.conic.solver import SdpSolution, SolveStatus, solve
from aether.core.exceptions import ContractError, SolverFailureError
from aether.core.model.physics import combined_gains, effective_rows_batch
from aether.core.model.types import ChannelSet, DecodingOrder, PhaseShift
from aether.core.optimization.lifting import gain_matrices, unit_diagonal_basis
from aether.utils.config.settings import settings

logger = logging.getLogger(__name__)
logger.setLevel(getattr(logging, settings.log_level.value))

U_BAR = "U_bar"


class Stage1Result(BaseModel):
    """Phases and decoding order produced by the first stage"""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    phases: PhaseShift
    order: DecodingOrder
    sdp_objective: Optional[float] = None
    randomized_objective: float
    U_bar: Optional[np.ndarray] = None


def _gain_scale(R: np.ndarray) -> float:
    scale = float(np.max(np.abs(R.sum(axis=0))))
    return scale if scale > 0 else 1.0


def build_sum_gain_problem(channels: ChannelSet) -> HermitianSdpProblem:
    """Sum-gain SDP over the lifted phase matrix, objective scaled to O(1)"""
    if channels.num_elements == 0:
        raise ContractError("the sum-gain relaxation needs at least one IRS element")
    R, _ = gain_matrices(channels)
    dim = channels.num_elements + 1
    total = R.sum(axis=0) / _gain_scale(R)
    diagonal = [
        Constraint(
            expr=LinearExpression(matrix_coeffs={U_BAR: E}),
            sense=Sense.EQ,
            rhs=1.0,
            label=f"unit_diagonal_{m}",
        )
        for m, E in enumerate(unit_diagonal_basis(dim))
    ]
    return HermitianSdpProblem(
        name="sum_gain",
        matrix_vars=[MatrixVar(name=U_BAR, dim=dim)],
        objective=Objective(sense=ObjectiveSense.MAXIMIZE, expr=LinearExpression(matrix_coeffs={U_BAR: total})),
        constraints=diagonal,
    )


def solve_sum_gain_relaxation(channels: ChannelSet) -> SdpSolution:
    """
    Solve the sum-gain relaxation.

    The returned objective is in physical units: sum_k Tr(R_k U_bar) plus the
    direct-path gains, an upper bound on the best unit-modulus sum gain.
    """
    R, direct = gain_matrices(channels)
    result = solve(build_sum_gain_problem(channels))
    if result.status != SolveStatus.OPTIMAL:
        raise SolverFailureError(f"sum-gain relaxation failed with status {result.status.value}")
    U_bar = result.matrices[U_BAR]
    result.objective = float(np.real(np.einsum("kij,ji->", R, U_bar))) + float(direct.sum())
    return result


def sum_gain(channels: ChannelSet, thetas: np.ndarray) -> np.ndarray:
    """Sum of combined gains for each row of a (T, M) phase array"""
    rows = effective_rows_batch(channels, thetas)
    return np.sum(np.abs(rows) ** 2, axis=(1, 2))


def randomization_candidates(U_bar: np.ndarray, count: int, rng: np.random.Generator) -> np.ndarray:
    """
    Draw ``count`` phase vectors from the lifted solution.

    u_t = F r_t with U_bar ~ F F^H and r_t ~ CN(0, I); each candidate's phase
    is arg(u_t[m] / u_t[M]).
    """
    if count < 1:
        raise ContractError(f"randomization count must be at least 1, got {count}")
    F = psd_factor(U_bar)
    draws = complex_normal((count, F.shape[1]), rng)
    lifted = draws @ F.T
    reference = lifted[:, -1:]
    reference = np.where(np.abs(reference) > 0, reference, 1.0)
    return np.mod(np.angle(lifted[:, :-1] / reference), 2.0 * np.pi)


def gaussian_randomization(U_bar: np.ndarray, channels: ChannelSet, count: int, rng: np.random.Generator) -> PhaseShift:
    """Best-of-``count`` unit-modulus phases by sum of combined gains"""
    thetas = randomization_candidates(U_bar, count, rng)
    gains = sum_gain(channels, thetas)
    return PhaseShift(theta=thetas[int(np.argmax(gains))])


def order_from_gains(channels: ChannelSet, phases: PhaseShift) -> DecodingOrder:
    """Ascending combined gain, ties broken by user index"""
    gains = combined_gains(channels, phases)
    return DecodingOrder.from_sequence([int(k) for k in np.argsort(gains, kind="stable")])


def run_stage1(channels: ChannelSet, count: int, rng: np.random.Generator) -> Stage1Result:
    """Phases from the relaxation plus randomization, then the decoding order"""
    if channels.num_elements == 0:
        phases = PhaseShift.zeros(0)
        order = order_from_gains(channels, phases)
        objective = float(combined_gains(channels, phases).sum())
        return Stage1Result(phases=phases, order=order, randomized_objective=objective)

    relaxed = solve_sum_gain_relaxation(channels)
    U_bar = relaxed.matrices[U_BAR]
    phases = gaussian_randomization(U_bar, channels, count, rng)
    objective = float(combined_gains(channels, phases).sum())
    order = order_from_gains(channels, phases)
    logger.debug(
        f"Stage 1: relaxation {relaxed.objective:.4e}, randomized {objective:.4e}, "
        f"order {order.sequence}"
    )
    return Stage1Result(
        phases=phases,
        order=order,
        sdp_objective=relaxed.objective,
        randomized_objective=objective,
        U_bar=U_bar,
    )
