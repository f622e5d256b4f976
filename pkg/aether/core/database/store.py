"""
Persist sweep results to the results database.
"""

import logging
from typing import List

from pydantic import BaseModel

from aether.core.database.engine import get_db_session, init_db
from aether.core.database.models import ResultRecord, SweepRecord
from aether.core.experiments.sweep import AggregateRow, ResultRow, SweepResult
from aether.utils.config.settings import settings

logger = logging.getLogger(__name__)
logger.setLevel(getattr(logging, settings.log_level.value))


class SweepSummary(BaseModel):
    """Listing entry for a stored sweep"""
    id: int
    created_at: str
    parameter: str
    values: List[float]
    algorithms: List[str]
    num_draws: int
    seed: int
    rows: int


def store_sweep(result: SweepResult) -> int:
    """Store a finished sweep with all its rows; returns the sweep id"""
    init_db()
    spec = result.spec
    with get_db_session() as db:
        record = SweepRecord(
            parameter=spec.parameter.value,
            values=list(spec.values),
            algorithms=[a.value for a in spec.algorithms],
            num_draws=spec.num_draws,
            seed=spec.seed,
            config=spec.base.model_dump(mode="json"),
            aggregates=[a.model_dump(mode="json") for a in result.aggregates],
        )
        record.results = [
            ResultRecord(
                value=row.value,
                algorithm=row.algorithm.value,
                draw=row.draw,
                objective_w=row.objective_w,
                objective_dbm=row.objective_dbm,
                iterations=row.iterations,
                termination=row.termination,
                feasible=row.feasible,
                wall_ms=row.wall_ms,
                error=row.error,
            )
            for row in result.rows
        ]
        db.add(record)
        db.commit()
        sweep_id = record.id
    logger.info(f"Stored sweep {sweep_id} with {len(result.rows)} rows")
    return sweep_id


def list_sweeps() -> List[SweepSummary]:
    """All stored sweeps, newest first"""
    init_db()
    with get_db_session() as db:
        records = db.query(SweepRecord).order_by(SweepRecord.id.desc()).all()
        return [
            SweepSummary(
                id=r.id,
                created_at=r.created_at.isoformat(timespec="seconds"),
                parameter=r.parameter,
                values=r.values,
                algorithms=r.algorithms,
                num_draws=r.num_draws,
                seed=r.seed,
                rows=len(r.results),
            )
            for r in records
        ]


def load_rows(sweep_id: int) -> List[ResultRow]:
    """Rows of a stored sweep in insertion order; empty if the id is unknown"""
    init_db()
    with get_db_session() as db:
        records = (
            db.query(ResultRecord).filter(ResultRecord.sweep_id == sweep_id).order_by(ResultRecord.id).all()
        )
        return [
            ResultRow(
                value=r.value,
                algorithm=r.algorithm,
                draw=r.draw,
                objective_w=r.objective_w,
                objective_dbm=r.objective_dbm,
                iterations=r.iterations,
                termination=r.termination,
                feasible=r.feasible,
                wall_ms=r.wall_ms,
                error=r.error,
            )
            for r in records
        ]


def load_aggregates(sweep_id: int) -> List[AggregateRow]:
    """Aggregates stored with a sweep; empty if the id is unknown"""
    init_db()
    with get_db_session() as db:
        record = db.get(SweepRecord, sweep_id)
        if record is None or not record.aggregates:
            return []
        return [AggregateRow.model_validate(a) for a in record.aggregates]
