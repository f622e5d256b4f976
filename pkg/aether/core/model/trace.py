"""
Convergence trace of the alternating optimization.
"""

import csv
import math
from enum import Enum
from pathlib import Path
from typing import List, Optional, Union

from pydantic import BaseModel, ConfigDict, Field

from aether.core.model.units import watts_to_dbm


class BlockStatus(str, Enum):
    """Outcome of one optimization block within an outer iteration"""
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    NUMERICAL_FAILURE = "numerical_failure"
    STALLED = "stalled"  # solved, but no usable point; incumbent kept
    SKIPPED = "skipped"  # block not part of the algorithm


class IterationRecord(BaseModel):
    """One outer iteration"""
    model_config = ConfigDict(ser_json_inf_nan="constants")

    iteration: int
    objective: float  # watts, sum of traces from the beamforming block
    beam_status: BlockStatus
    split_status: BlockStatus
    phase_status: BlockStatus
    min_margin: float
    max_rank_ratio: float = 0.0
    elapsed_ms: float = 0.0

    @property
    def status_triple(self) -> str:
        return f"{self.beam_status.value}/{self.split_status.value}/{self.phase_status.value}"


CSV_COLUMNS = ["r", "objective_W", "objective_dBm", "status", "min_margin", "max_rank_ratio", "ms"]


class IterationTrace(BaseModel):
    """Per-iteration objective values and block statuses"""
    initial_objective: Optional[float] = None
    records: List[IterationRecord] = Field(default_factory=list)

    def append(self, record: IterationRecord) -> None:
        self.records.append(record)

    def __len__(self) -> int:
        return len(self.records)

    @property
    def objectives(self) -> List[float]:
        return [r.objective for r in self.records]

    def is_monotone(self, atol: float = 1e-9) -> bool:
        """Check P(r+1) <= P(r) + atol along the trace"""
        values = self.objectives
        if self.initial_objective is not None:
            values = [self.initial_objective] + values
        return all(b <= a + atol for a, b in zip(values, values[1:]))

    def to_rows(self) -> List[List[Union[int, float, str]]]:
        rows = []
        for record in self.records:
            dbm = watts_to_dbm(record.objective) if record.objective > 0 else -math.inf
            rows.append([
                record.iteration,
                f"{record.objective:.12e}",
                f"{dbm:.6f}",
                record.status_triple,
                f"{record.min_margin:.6e}",
                f"{record.max_rank_ratio:.3e}",
                f"{record.elapsed_ms:.1f}",
            ])
        return rows

    def to_csv(self, path: Union[str, Path]) -> Path:
        """Write the trace as CSV and return the path"""
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", newline="", encoding="utf-8") as f:
            writer = csv.writer(f)
            writer.writerow(CSV_COLUMNS)
            writer.writerows(self.to_rows())
        return path
