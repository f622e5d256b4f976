"""
Two-stage joint design of decoding order, beams, splitting ratios and phases.

Stage 1 fixes the decoding order from the sum-gain phases. Stage 2 alternates
beamforming, power splitting and phase shifting until the fractional decrease
of the transmit power falls below the convergence threshold, keeping the best
feasible iterate seen.
"""

import logging
import time
from typing import Optional

import numpy as np
from pydantic import BaseModel

from aether.core.channels.streams import split_algorithm_stream
from aether.core.exceptions import ScenarioInfeasibleError, SolverFailureError
from aether.core.model.config import SystemConfig
from aether.core.model.feasibility import check_feasibility, nulled_links
from aether.core.model.physics import effective_rows, power_matrix_from_rows
from aether.core.model.trace import BlockStatus, IterationRecord, IterationTrace
from aether.core.model.types import (
    AlgorithmId,
    Beamformers,
    ChannelSet,
    DecodingOrder,
    PhaseShift,
    PowerSplit,
    Solution,
    Termination,
)
from aether.core.optimization.beamforming import (
    BeamformingInput,
    BeamformingResult,
    lifted_margins,
    padded_mrt,
    restore_feasibility,
    solve_beamforming,
)
from aether.core.optimization.phase_shift import PhaseSubproblemInput, solve_phase_shift
from aether.core.optimization.power_split import PowerSplitInput, solve_power_split
from aether.core.optimization.stage1 import run_stage1
from aether.core.optimization.zero_forcing import zf_beamforming, zf_candidate_beams
from aether.utils.config.settings import settings
from aether.utils.logging import log_iteration, log_run_stall

logger = logging.getLogger(__name__)
logger.setLevel(getattr(logging, settings.log_level.value))

INITIAL_SPLIT = 0.5


def _beam_step(
    config: SystemConfig,
    rows: np.ndarray,
    rho: np.ndarray,
    order: DecodingOrder,
    W_ref: Optional[np.ndarray],
    zero_forcing: bool,
) -> BeamformingResult:
    if zero_forcing:
        return zf_beamforming(rows, rho, config)
    inp = BeamformingInput(rows=rows, rho=rho, order=order, W_ref=W_ref, config=config)
    result = solve_beamforming(inp)
    if not config.sca_inner_loop:
        return result
    for _ in range(config.sca_inner_max - 1):
        if result.status != BlockStatus.OPTIMAL:
            break
        inp = inp.model_copy(update={"W_ref": result.beams.outer()})
        refined = solve_beamforming(inp)
        if refined.status != BlockStatus.OPTIMAL:
            break
        decrease = (result.objective - refined.objective) / result.objective
        result = refined
        if decrease < config.convergence_eps:
            break
    return result


def initial_covariances(
    config: SystemConfig, channels: ChannelSet, order: DecodingOrder, phases: PhaseShift, rho: np.ndarray
) -> np.ndarray:
    """
    Expansion point for the first beamforming solve.

    Padded MRT, moved into the feasible set by restoration passes when it
    violates any constraint.
    """
    rows = effective_rows(channels, phases)
    W = padded_mrt(rows, rho, order, config)
    inp = BeamformingInput(rows=rows, rho=rho, order=order, W_ref=W, config=config)
    if lifted_margins(inp, W) < 0:
        W = restore_feasibility(inp, config.restoration_passes)
    return W


def run_stage2(
    config: SystemConfig,
    channels: ChannelSet,
    order: DecodingOrder,
    phases: PhaseShift,
    rng: np.random.Generator,
    algorithm: AlgorithmId = AlgorithmId.JDBPR_OPT,
    optimize_phase: bool = True,
    zero_forcing: bool = False,
    max_iters: Optional[int] = None,
) -> Solution:
    """
    Alternating optimization at a fixed decoding order.

    Args:
        config: Scenario
        channels: Channel realization matching the scenario's dimensions
        order: Decoding order
        phases: Initial phases
        rng: Stream for the phase randomization
        algorithm: Identifier stored on the solution
        optimize_phase: Run the phase block (skipped anyway without an IRS)
        zero_forcing: Use zero-forcing beams instead of the covariance program
        max_iters: Outer iteration cap, defaults to config.max_iters

    Returns:
        Best feasible iterate with its convergence trace

    Raises:
        ScenarioInfeasibleError: The first beamforming solve is infeasible or
            no feasible iterate was found
        SolverFailureError: The first beamforming solve failed numerically
    """
    channels.check_against(config.num_users, config.num_antennas, config.num_elements)
    max_iters = config.max_iters if max_iters is None else max_iters
    optimize_phase = optimize_phase and channels.num_elements > 0
    K = config.num_users

    rho = np.full(K, INITIAL_SPLIT)
    theta = phases
    trace = IterationTrace()
    W_ref = None
    if not zero_forcing:
        W_ref = initial_covariances(config, channels, order, theta, rho)
        trace.initial_objective = float(np.real(np.trace(W_ref, axis1=1, axis2=2)).sum())

    best: Optional[Solution] = None
    termination = Termination.MAX_ITERS if max_iters > 1 else Termination.SINGLE_PASS
    # only beamforming objectives from the loop are compared; the restored
    # starting point is already optimal at (rho^(0), theta^(0))
    previous: Optional[float] = None

    for r in range(1, max_iters + 1):
        start = time.time()
        rows = effective_rows(channels, theta)
        beam = _beam_step(config, rows, rho, order, W_ref, zero_forcing)
        if beam.status != BlockStatus.OPTIMAL:
            if r == 1 and beam.status == BlockStatus.INFEASIBLE:
                raise ScenarioInfeasibleError("beamforming is infeasible at the initial splitting ratios and phases")
            if r == 1:
                raise SolverFailureError(f"beamforming failed: {beam.status.value}")
            log_run_stall(algorithm.value, r, "beamforming", beam.status.value)
            termination = Termination.STALLED
            break
        if beam.max_rank_ratio > settings.rank_ratio_tol:
            logger.warning(f"Iteration {r}: covariance rank ratio {beam.max_rank_ratio:.2e}")

        w = np.asarray(beam.beams.w)
        P = power_matrix_from_rows(rows, w)
        nulled = nulled_links(rows, w, P, settings.sic_null_tol)
        split = solve_power_split(PowerSplitInput(P=P, rho_ref=rho, order=order, config=config, nulled=nulled))
        rho = np.asarray(split.split.rho)

        phase_status = BlockStatus.SKIPPED
        if optimize_phase:
            candidates = zf_candidate_beams(channels, beam.beams.powers) if zero_forcing else None
            phase = solve_phase_shift(
                PhaseSubproblemInput(
                    channels=channels, w=w, rho=rho, order=order, phases_ref=theta, config=config, nulled=nulled
                ),
                config.randomization_count,
                rng,
                candidates,
            )
            phase_status = phase.status
            theta = phase.phases
            if phase.w is not None:
                w = np.asarray(phase.w)

        beams = Beamformers(w=w)
        candidate = Solution(
            order=order,
            beams=beams,
            split=PowerSplit(rho=rho),
            phases=theta,
            objective=float(beams.powers.sum()),
            algorithm=algorithm,
        )
        report = check_feasibility(channels, candidate, config)
        record = IterationRecord(
            iteration=r,
            objective=beam.objective,
            beam_status=beam.status,
            split_status=split.status,
            phase_status=phase_status,
            min_margin=report.min_margin,
            max_rank_ratio=beam.max_rank_ratio,
            elapsed_ms=1000.0 * (time.time() - start),
        )
        trace.append(record)
        log_iteration(algorithm.value, r, beam.objective, record.status_triple, report.min_margin)

        if report.passed and (best is None or candidate.objective < best.objective):
            best = candidate
        W_ref = beams.outer()

        if previous is not None and previous > 0 and (previous - beam.objective) / previous < config.convergence_eps:
            termination = Termination.CONVERGED if max_iters > 1 else Termination.SINGLE_PASS
            break
        previous = beam.objective

    if best is None:
        raise ScenarioInfeasibleError("no feasible iterate was found")
    return best.model_copy(update={"trace": trace, "termination": termination})


def run_jdbpr(
    config: SystemConfig, channels: ChannelSet, rng: np.random.Generator, max_iters: Optional[int] = None
) -> Solution:
    """Decoding order from the sum-gain phases, then alternating optimization"""
    stage1_rng, stage2_rng = split_algorithm_stream(rng)
    stage1 = run_stage1(channels, config.randomization_count, stage1_rng)
    return run_stage2(config, channels, stage1.order, stage1.phases, stage2_rng, max_iters=max_iters)


class ComplexityEstimate(BaseModel):
    """Interior-point cost terms per outer iteration, scaled by the iteration count"""
    iterations: int
    beamforming_term: float  # K N^3.5
    phase_term: float  # (M+1)^3.5
    split_term: float  # K

    @property
    def per_iteration(self) -> float:
        return self.beamforming_term + self.phase_term + self.split_term

    @property
    def total(self) -> float:
        return self.iterations * self.per_iteration


def complexity_estimate(
    config: SystemConfig, iterations: Optional[int] = None, trace: Optional[IterationTrace] = None
) -> ComplexityEstimate:
    """
    Cost model r (K N^3.5 + (M+1)^3.5 + K) instantiated for a scenario.

    The iteration count is taken from ``iterations``, else from the length of
    ``trace``, else 1.
    """
    if iterations is None:
        iterations = len(trace) if trace is not None and len(trace) else 1
    K, N, M = config.num_users, config.num_antennas, config.num_elements
    return ComplexityEstimate(
        iterations=iterations,
        beamforming_term=K * N ** 3.5,
        phase_term=(M + 1) ** 3.5,
        split_term=float(K),
    )
