"""
Tests for the sweep results store.
"""

import os
import shutil
import tempfile

import pytest

from aether.core.database.engine import get_db_session, init_db
from aether.core.database.models import ResultRecord, SweepRecord
from aether.core.database.store import list_sweeps, load_aggregates, load_rows, store_sweep
from aether.core.experiments.sweep import AggregateRow, ResultRow, SweepResult, SweepSpec
from aether.core.model.types import AlgorithmId
from aether.utils.config.settings import settings


@pytest.fixture
def temp_dir():
    """Create a temporary directory."""
    temp_dir = tempfile.mkdtemp()
    yield temp_dir
    shutil.rmtree(temp_dir)


@pytest.fixture
def temp_db(temp_dir):
    """Create a temporary database."""
    # Save original database URL
    original_db_url = settings.database_url

    temp_db_path = os.path.join(temp_dir, "test.db")
    settings.database_url = f"sqlite:///{temp_db_path}"
    init_db()

    yield temp_db_path

    # Reset database URL
    settings.database_url = original_db_url


@pytest.fixture
def result():
    spec = SweepSpec(parameter="M", values=[10.0, 20.0], algorithms=["jdbpr-opt"], num_draws=1, seed=7)
    rows = [
        ResultRow(value=10.0, algorithm=AlgorithmId.JDBPR_OPT, draw=0, objective_w=4.0, objective_dbm=36.02,
                  iterations=3, termination="converged", feasible=True, wall_ms=30.0),
        ResultRow(value=20.0, algorithm=AlgorithmId.JDBPR_OPT, draw=0, error="SolverFailureError: failed"),
    ]
    aggregates = [
        AggregateRow(value=10.0, algorithm=AlgorithmId.JDBPR_OPT, median_w=4.0, mean_w=4.0, feasible=1),
        AggregateRow(value=20.0, algorithm=AlgorithmId.JDBPR_OPT, infeasible=1),
    ]
    return SweepResult(spec=spec, rows=rows, aggregates=aggregates)


def test_tables_created(temp_db):
    """Test database initialization creates both tables."""
    with get_db_session() as db:
        assert db.query(SweepRecord).count() == 0
        assert db.query(ResultRecord).count() == 0


def test_store_and_load(temp_db, result):
    """Test a stored sweep returns the same rows and aggregates."""
    sweep_id = store_sweep(result)
    assert load_rows(sweep_id) == result.rows
    assert load_aggregates(sweep_id) == result.aggregates


def test_list_sweeps_newest_first(temp_db, result):
    """Test the listing order and summary fields."""
    first = store_sweep(result)
    second = store_sweep(result)
    sweeps = list_sweeps()
    assert [s.id for s in sweeps] == [second, first]
    assert sweeps[0].parameter == "M"
    assert sweeps[0].values == [10.0, 20.0]
    assert sweeps[0].algorithms == ["jdbpr-opt"]
    assert sweeps[0].seed == 7
    assert sweeps[0].rows == 2


def test_unknown_sweep(temp_db):
    """Test an unknown id loads nothing."""
    assert load_rows(99) == []
    assert load_aggregates(99) == []


def test_database_url_switch(temp_dir, result):
    """Test the store follows a changed database URL."""
    original_db_url = settings.database_url
    try:
        settings.database_url = f"sqlite:///{os.path.join(temp_dir, 'a.db')}"
        store_sweep(result)
        settings.database_url = f"sqlite:///{os.path.join(temp_dir, 'b.db')}"
        assert list_sweeps() == []
    finally:
        settings.database_url = original_db_url
