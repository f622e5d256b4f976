"""Database models for stored sweeps."""
from datetime import datetime

from sqlalchemy import JSON, Boolean, Column, DateTime, Float, ForeignKey, Integer, String, Text
from sqlalchemy.orm import relationship

from aether.core.database.base import Base


class SweepRecord(Base):
    """One sweep: what was swept and the scenario it started from."""
    __tablename__ = "sweeps"

    id = Column(Integer, primary_key=True)
    created_at = Column(DateTime, default=datetime.now)
    parameter = Column(String(32), nullable=False)
    values = Column(JSON, nullable=False)
    algorithms = Column(JSON, nullable=False)
    num_draws = Column(Integer, nullable=False)
    seed = Column(Integer, nullable=False)
    config = Column(JSON, nullable=False)
    aggregates = Column(JSON, nullable=True)

    results = relationship("ResultRecord", back_populates="sweep", cascade="all, delete-orphan")


class ResultRecord(Base):
    """One (value, algorithm, draw) outcome."""
    __tablename__ = "results"

    id = Column(Integer, primary_key=True)
    sweep_id = Column(Integer, ForeignKey("sweeps.id"), nullable=False, index=True)
    value = Column(Float, nullable=False)
    algorithm = Column(String(32), nullable=False)
    draw = Column(Integer, nullable=False)
    objective_w = Column(Float, nullable=True)
    objective_dbm = Column(Float, nullable=True)
    iterations = Column(Integer, default=0)
    termination = Column(String(32), nullable=True)
    feasible = Column(Boolean, default=False)
    wall_ms = Column(Float, default=0.0)
    error = Column(Text, nullable=True)

    sweep = relationship("SweepRecord", back_populates="results")
