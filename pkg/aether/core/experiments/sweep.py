"""
Monte-Carlo parameter sweeps.

Every (value, draw) cell shares one topology and channel realization across
all algorithms, and every algorithm gets the same algorithm stream, so
results are paired. Streams are keyed by (seed, draw, stage) only; channels
for array-size sweeps are drawn once at the largest size and truncated.
"""

import logging
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from enum import Enum
from pathlib import Path
from typing import Any, Callable, Dict, Iterator, List, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, Field, ValidationError, field_validator

from aether.core.channels.streams import Stage, stream
from aether.core.exceptions import AetherException, ConfigError
from aether.core.experiments.scenario import draw_scenario
from aether.core.model.config import SystemConfig, config_from_mapping
from aether.core.model.feasibility import check_feasibility
from aether.core.model.types import AlgorithmId
from aether.core.model.units import db_to_linear, dbm_to_watts, watts_to_dbm
from aether.core.optimization.baselines import evaluation_channels, evaluation_config, run_algorithm
from aether.utils.config.settings import settings

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

logger = logging.getLogger(__name__)
logger.setLevel(getattr(logging, settings.log_level.value))


class SweepParameter(str, Enum):
    GAMMA_DB = "gamma_db"
    E_DBM = "e_dbm"
    M = "M"
    N = "N"


class SweepSpec(BaseModel):
    """What to sweep, over which algorithms and how many draws"""
    parameter: SweepParameter
    values: List[float]
    algorithms: List[AlgorithmId] = Field(default_factory=lambda: [AlgorithmId.JDBPR_OPT])
    num_draws: int = Field(20, ge=1)
    base: SystemConfig = Field(default_factory=SystemConfig)
    seed: int = Field(0, ge=0)
    max_iters: Optional[int] = Field(None, ge=1)

    @field_validator("values")
    def validate_values(cls, v):
        if not v:
            raise ValueError("sweep needs at least one value")
        return v

    @field_validator("algorithms")
    def validate_algorithms(cls, v):
        if not v:
            raise ValueError("sweep needs at least one algorithm")
        return v

    def config_for(self, value: float) -> SystemConfig:
        """Base scenario with the swept parameter set to ``value``"""
        if self.parameter == SweepParameter.GAMMA_DB:
            return self.base.updated(sinr_threshold=db_to_linear(value))
        if self.parameter == SweepParameter.E_DBM:
            return self.base.updated(energy_threshold=dbm_to_watts(value))
        if self.parameter == SweepParameter.M:
            return self.base.updated(num_elements=int(value))
        return self.base.updated(num_antennas=int(value))

    def channel_config(self) -> SystemConfig:
        """Scenario channels are drawn at: the largest swept array sizes"""
        if self.parameter == SweepParameter.M:
            return self.base.updated(num_elements=int(max(self.values)))
        if self.parameter == SweepParameter.N:
            return self.base.updated(num_antennas=int(max(self.values)))
        return self.base


class ResultRow(BaseModel):
    """One (value, algorithm, draw) outcome"""
    value: float
    algorithm: AlgorithmId
    draw: int
    objective_w: Optional[float] = None
    objective_dbm: Optional[float] = None
    iterations: int = 0
    termination: Optional[str] = None
    feasible: bool = False
    wall_ms: float = 0.0
    error: Optional[str] = None


class AggregateRow(BaseModel):
    """Statistics over the feasible draws of one (value, algorithm)"""
    value: float
    algorithm: AlgorithmId
    median_w: Optional[float] = None
    mean_w: Optional[float] = None
    median_dbm: Optional[float] = None
    mean_dbm: Optional[float] = None
    feasible: int = 0
    infeasible: int = 0


class SweepResult(BaseModel):
    spec: SweepSpec
    rows: List[ResultRow] = Field(default_factory=list)
    aggregates: List[AggregateRow] = Field(default_factory=list)


def load_sweep_spec(path: Union[str, Path]) -> SweepSpec:
    """
    Read a sweep description from TOML.

    Top-level keys are the SweepSpec fields except ``base``; the scenario is
    given as a flat ``[scenario]`` table with SystemConfig keys (unit
    suffixes allowed).
    """
    path = Path(path)
    try:
        with open(path, "rb") as f:
            data: Dict[str, Any] = tomllib.load(f)
    except FileNotFoundError as e:
        raise ConfigError(f"Sweep file not found: {path}") from e
    except tomllib.TOMLDecodeError as e:
        raise ConfigError(f"Invalid sweep file {path}: {e}") from e

    scenario = data.pop("scenario", {})
    if not isinstance(scenario, dict):
        raise ConfigError("'scenario' must be a table")
    unknown = set(data) - (set(SweepSpec.model_fields) - {"base"})
    if unknown:
        raise ConfigError(f"Unknown sweep keys: {', '.join(sorted(unknown))}")
    try:
        return SweepSpec(base=config_from_mapping(scenario), **data)
    except ValidationError as e:
        raise ConfigError(str(e)) from e


def run_cell(spec: SweepSpec, draw: int, values: Optional[List[float]] = None) -> List[ResultRow]:
    """
    Every algorithm on one draw, for each swept value.

    Errors are recorded on the rows; they never propagate.
    """
    values = spec.values if values is None else values
    _, channels_full = draw_scenario(spec.channel_config(), spec.seed, draw)
    rows: List[ResultRow] = []
    for value in values:
        try:
            config = spec.config_for(value)
        except AetherException as e:
            rows += [ResultRow(value=value, algorithm=a, draw=draw, error=str(e)) for a in spec.algorithms]
            continue
        channels = channels_full.subset(config.num_elements, config.num_antennas)
        for algorithm in spec.algorithms:
            start = time.time()
            rng = stream(spec.seed, draw, Stage.ALGORITHM)
            try:
                solution = run_algorithm(algorithm, config, channels, rng, max_iters=spec.max_iters)
            except Exception as e:
                if not isinstance(e, AetherException):
                    logger.warning(f"{algorithm.value} failed on draw {draw}: {type(e).__name__}: {e}")
                rows.append(
                    ResultRow(
                        value=value, algorithm=algorithm, draw=draw,
                        wall_ms=1000.0 * (time.time() - start), error=f"{type(e).__name__}: {e}",
                    )
                )
                continue
            report = check_feasibility(
                evaluation_channels(solution, channels), solution, evaluation_config(solution, config)
            )
            rows.append(
                ResultRow(
                    value=value,
                    algorithm=algorithm,
                    draw=draw,
                    objective_w=solution.objective,
                    objective_dbm=watts_to_dbm(solution.objective) if solution.objective > 0 else None,
                    iterations=solution.iterations,
                    termination=solution.termination.value,
                    feasible=report.passed,
                    wall_ms=1000.0 * (time.time() - start),
                )
            )
    return rows


def _cell_task(args: Tuple[SweepSpec, int, float]) -> List[ResultRow]:
    spec, draw, value = args
    return run_cell(spec, draw, [value])


def _cells(spec: SweepSpec) -> Iterator[Tuple[SweepSpec, int, float]]:
    for value in spec.values:
        for draw in range(spec.num_draws):
            yield spec, draw, value


def aggregate(spec: SweepSpec, rows: List[ResultRow]) -> List[AggregateRow]:
    """Median and mean over feasible rows per (value, algorithm), with counts"""
    aggregates = []
    for value in spec.values:
        for algorithm in spec.algorithms:
            cell = [r for r in rows if r.value == value and r.algorithm == algorithm]
            powers = np.array([r.objective_w for r in cell if r.feasible and r.objective_w])
            entry = AggregateRow(
                value=value,
                algorithm=algorithm,
                feasible=int(powers.size),
                infeasible=len(cell) - int(powers.size),
            )
            if powers.size:
                entry.median_w = float(np.median(powers))
                entry.mean_w = float(np.mean(powers))
                entry.median_dbm = watts_to_dbm(entry.median_w)
                entry.mean_dbm = watts_to_dbm(entry.mean_w)
            aggregates.append(entry)
    return aggregates


def run_sweep(
    spec: SweepSpec,
    workers: Optional[int] = None,
    on_row: Optional[Callable[[ResultRow], None]] = None,
) -> SweepResult:
    """
    Run every (value, draw) cell and aggregate.

    Cells run in a process pool when ``workers`` > 1; rows are handed to
    ``on_row`` in (value, draw, algorithm) order from the calling process.
    """
    workers = settings.workers if workers is None else workers
    logger.info(
        f"Sweep over {spec.parameter.value} = {spec.values}, {spec.num_draws} draws, "
        f"algorithms {[a.value for a in spec.algorithms]}"
    )
    result = SweepResult(spec=spec)

    def emit(rows: List[ResultRow]) -> None:
        for row in rows:
            result.rows.append(row)
            if on_row is not None:
                on_row(row)

    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for rows in pool.map(_cell_task, _cells(spec)):
                emit(rows)
    else:
        for cell in _cells(spec):
            emit(_cell_task(cell))

    result.aggregates = aggregate(spec, result.rows)
    failed = sum(1 for r in result.rows if r.error)
    logger.info(f"Sweep finished: {len(result.rows)} rows, {failed} with errors")
    return result
