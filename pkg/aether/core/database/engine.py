"""
Database engine and session management for the results store.

The engine follows ``settings.database_url``; changing the URL (tests point
it at a temporary file) rebinds the session factory on next use.
"""

import os
from contextlib import contextmanager
from typing import Iterator, Optional

from sqlalchemy import create_engine
from sqlalchemy.engine import Engine
from sqlalchemy.orm import Session, scoped_session, sessionmaker

from aether.core.database.base import Base
from aether.utils.config.settings import settings

_engine: Optional[Engine] = None
_url: Optional[str] = None
SessionLocal = sessionmaker(autocommit=False, autoflush=False)
ScopedSession = scoped_session(SessionLocal)


def get_engine() -> Engine:
    """Engine for the current ``settings.database_url``"""
    global _engine, _url
    if _engine is None or _url != settings.database_url:
        if _engine is not None:
            ScopedSession.remove()
            _engine.dispose()
        _url = settings.database_url
        _engine = create_engine(
            _url,
            echo=settings.debug,
            connect_args={"check_same_thread": False} if _url.startswith("sqlite") else {},
        )
        SessionLocal.configure(bind=_engine)
    return _engine


@contextmanager
def get_db_session() -> Iterator[Session]:
    """Context manager for database session."""
    get_engine()
    session = ScopedSession()
    try:
        yield session
    finally:
        session.close()
        ScopedSession.remove()


def init_db() -> None:
    """Initialize the database, creating all tables."""
    if settings.database_url.startswith("sqlite"):
        db_path = settings.database_url.replace("sqlite:///", "")
        os.makedirs(os.path.dirname(os.path.abspath(db_path)), exist_ok=True)

    # Register models with Base
    from aether.core.database.models import ResultRecord, SweepRecord  # noqa: F401

    Base.metadata.create_all(bind=get_engine())
