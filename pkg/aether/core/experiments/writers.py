"""
Result files: results.csv, summary.json and stored solutions.
"""

import csv
import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from aether.core.exceptions import ConfigError
from aether.core.experiments.sweep import ResultRow, SweepResult
from aether.core.model.config import SystemConfig
from aether.core.model.trace import IterationTrace
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
from aether.utils.config.settings import settings

logger = logging.getLogger(__name__)
logger.setLevel(getattr(logging, settings.log_level.value))

RESULT_COLUMNS = list(ResultRow.model_fields)


def _complex_to_pairs(arr: np.ndarray) -> Any:
    """Nested lists with each complex entry as [re, im]"""
    arr = np.asarray(arr, dtype=complex)
    return np.stack([arr.real, arr.imag], axis=-1).tolist()


def _pairs_to_complex(data: Any) -> np.ndarray:
    arr = np.asarray(data, dtype=float)
    if arr.shape[-1:] != (2,):
        raise ConfigError("complex arrays must be stored as [re, im] pairs")
    return arr[..., 0] + 1j * arr[..., 1]


class ResultWriter:
    """
    Appends ResultRows to a CSV file as they arrive.

    Usable as a context manager; the header is written on open.
    """

    def __init__(self, path: Union[str, Path]):
        self.path = Path(path)
        self._file = None
        self._writer = None
        self.count = 0

    def __enter__(self) -> "ResultWriter":
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self._file = open(self.path, "w", newline="", encoding="utf-8")
        self._writer = csv.DictWriter(self._file, fieldnames=RESULT_COLUMNS)
        self._writer.writeheader()
        return self

    def write(self, row: ResultRow) -> None:
        values = row.model_dump(mode="json")
        self._writer.writerow({k: "" if v is None else v for k, v in values.items()})
        self._file.flush()
        self.count += 1

    def __exit__(self, exc_type, exc, tb) -> None:
        if self._file is not None:
            self._file.close()
            self._file = None


def write_results_csv(rows: List[ResultRow], path: Union[str, Path]) -> Path:
    """Write all rows at once"""
    with ResultWriter(path) as writer:
        for row in rows:
            writer.write(row)
    return writer.path


def read_results_csv(path: Union[str, Path]) -> List[ResultRow]:
    """Read rows written by ResultWriter"""
    with open(path, newline="", encoding="utf-8") as f:
        return [
            ResultRow.model_validate({k: (None if v == "" else v) for k, v in record.items()})
            for record in csv.DictReader(f)
        ]


def write_summary(result: SweepResult, path: Union[str, Path]) -> Path:
    """Write the sweep description and aggregates as JSON"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    failed = [r for r in result.rows if r.error]
    summary: Dict[str, Any] = {
        "spec": result.spec.model_dump(mode="json"),
        "rows": len(result.rows),
        "errors": len(failed),
        "aggregates": [a.model_dump(mode="json") for a in result.aggregates],
    }
    path.write_text(json.dumps(summary, indent=2), encoding="utf-8")
    logger.debug(f"Wrote summary to {path}")
    return path


class SolutionRecord(BaseModel):
    """
    A solution stored together with the scenario and channels it was
    computed for, so it can be re-validated later.
    """
    model_config = ConfigDict(ser_json_inf_nan="constants")

    algorithm: AlgorithmId
    termination: Termination
    objective: float
    positions: List[int]
    rho: List[float]
    theta: List[float]
    w: List[Any]
    config: Dict[str, Any]
    channels: Dict[str, Any]
    trace: IterationTrace = Field(default_factory=IterationTrace)

    @classmethod
    def from_solution(cls, solution: Solution, config: SystemConfig, channels: ChannelSet) -> "SolutionRecord":
        return cls(
            algorithm=solution.algorithm,
            termination=solution.termination,
            objective=solution.objective,
            positions=list(solution.order.positions),
            rho=solution.split.rho.tolist(),
            theta=solution.phases.theta.tolist(),
            w=_complex_to_pairs(solution.beams.w),
            config=config.model_dump(mode="json"),
            channels={
                "G": _complex_to_pairs(channels.G),
                "h_r": _complex_to_pairs(channels.h_r),
                "h_d": _complex_to_pairs(channels.h_d),
                "d_direct": channels.d_direct.tolist(),
                "d_reflect": channels.d_reflect.tolist(),
                "d_bs_irs": channels.d_bs_irs,
                "seed": channels.seed,
            },
            trace=solution.trace,
        )

    def to_config(self) -> SystemConfig:
        return SystemConfig.model_validate(self.config)

    def to_channels(self) -> ChannelSet:
        data = self.channels
        M = len(data["G"])
        N = len(data["h_d"][0]) if data["h_d"] else 0
        G = _pairs_to_complex(data["G"]) if M else np.zeros((0, N), dtype=complex)
        h_r = _pairs_to_complex(data["h_r"]) if M else np.zeros((len(data["h_d"]), 0), dtype=complex)
        return ChannelSet(
            G=G,
            h_r=h_r,
            h_d=_pairs_to_complex(data["h_d"]),
            d_direct=data["d_direct"],
            d_reflect=data["d_reflect"],
            d_bs_irs=data["d_bs_irs"],
            seed=data.get("seed"),
        )

    def to_solution(self) -> Solution:
        return Solution(
            order=DecodingOrder(positions=tuple(self.positions)),
            beams=Beamformers(w=_pairs_to_complex(self.w)),
            split=PowerSplit(rho=self.rho),
            phases=PhaseShift(theta=self.theta),
            objective=self.objective,
            trace=self.trace,
            termination=self.termination,
            algorithm=self.algorithm,
        )


def save_solution(
    solution: Solution, config: SystemConfig, channels: ChannelSet, path: Union[str, Path]
) -> Path:
    """Store a solution with its scenario as JSON"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    record = SolutionRecord.from_solution(solution, config, channels)
    path.write_text(record.model_dump_json(indent=2), encoding="utf-8")
    return path


def load_solution(path: Union[str, Path]) -> SolutionRecord:
    """
    Read a stored solution.

    Raises:
        ConfigError: if the file is missing or malformed
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except FileNotFoundError as e:
        raise ConfigError(f"Solution file not found: {path}") from e
    try:
        return SolutionRecord.model_validate_json(text)
    except ValueError as e:
        raise ConfigError(f"Invalid solution file {path}: {e}") from e


def trace_path(out_dir: Union[str, Path], label: str, suffix: Optional[str] = None) -> Path:
    """``trace_<label>[_<suffix>].csv`` under ``out_dir``"""
    name = f"trace_{label}" + (f"_{suffix}" if suffix else "") + ".csv"
    return Path(out_dir) / name
