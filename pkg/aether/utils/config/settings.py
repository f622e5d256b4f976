"""Unified runtime configuration for Aether."""

from typing import List, Optional
from pathlib import Path
from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict
import os
from enum import Enum


class LogLevel(str, Enum):
    DEBUG = "DEBUG"
    INFO = "INFO"
    WARNING = "WARNING"
    ERROR = "ERROR"
    CRITICAL = "CRITICAL"


# Solvers that accept both the PSD cone and the exponential cone
EXP_CONE_SOLVERS = {"CLARABEL", "SCS", "MOSEK"}


class Settings(BaseSettings):
    """
    Runtime settings loaded from environment variables or .env file.

    Scenario constants do not live here; see ``aether.core.model.config``.
    """
    # Application settings
    log_level: LogLevel = LogLevel.INFO
    debug: bool = False
    dump_dir: Optional[str] = None  # write every conic problem here as text

    # Conic backend
    solver: str = "CLARABEL"
    fallback_solver: str = "SCS"
    solver_tol: float = 1e-8
    rank_solver_tol: float = 1e-10  # backend tolerance for re-solving a beamforming block that is not rank-one
    residual_tol: float = 1e-6
    regularization: float = 1e-9

    # Numerical tolerances shared by the optimization blocks
    rank_ratio_tol: float = 1e-6
    psd_clamp: float = 1e-12
    sic_null_tol: float = 1e-9

    # Experiment harness
    workers: int = 1

    # Storage
    data_dir: str = Field(default_factory=lambda: str(Path.home() / ".aether"))
    database_url: str = Field(default_factory=lambda: f"sqlite:///{Path.home() / '.aether' / 'results.db'}")

    model_config = SettingsConfigDict(
        env_prefix="AETHER_",
        # Priority order: .env.local, .env
        env_file=[".env.local", ".env"],
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore"
    )

    @field_validator('database_url')
    def validate_db_url(cls, v):
        """Make database URL absolute if it's a relative SQLite database"""
        if v.startswith('sqlite:///') and not v.startswith('sqlite:////'):
            path = v.replace('sqlite:///', '')
            if not os.path.isabs(path):
                return f"sqlite:///{os.path.abspath(path)}"
        return v

    @field_validator('data_dir')
    def validate_data_dir(cls, v):
        """Make data directory absolute and ensure it exists"""
        if not os.path.isabs(v):
            v = os.path.abspath(v)
        os.makedirs(v, exist_ok=True)
        return v

    @field_validator('solver', 'fallback_solver')
    def normalize_solver(cls, v):
        return v.upper()

    @field_validator('workers')
    def validate_workers(cls, v):
        if v < 1:
            raise ValueError("workers must be at least 1")
        return v

    @property
    def available_solvers(self) -> List[str]:
        """Conic solvers cvxpy reports as installed"""
        try:
            import cvxpy as cp
            return list(cp.installed_solvers())
        except ImportError:
            return []

    @property
    def has_exponential_cone(self) -> bool:
        """Whether the selected solver can take the exact -ln terms"""
        return self.solver in EXP_CONE_SOLVERS and self.solver in self.available_solvers


# Create global settings instance
settings = Settings()
