"""Results database."""
from aether.core.database.engine import get_db_session, init_db
from aether.core.database.store import list_sweeps, load_aggregates, load_rows, store_sweep

__all__ = ["get_db_session", "init_db", "list_sweeps", "load_aggregates", "load_rows", "store_sweep"]
