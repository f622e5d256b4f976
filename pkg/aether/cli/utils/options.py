"""
Option parsing shared by the commands.
"""

from pathlib import Path
from typing import List, Optional

import typer

from aether.core.experiments.scenario import default_config
from aether.core.model.config import SystemConfig, load_system_config
from aether.core.model.types import AlgorithmId


def parse_algorithms(value: Optional[str]) -> Optional[List[AlgorithmId]]:
    """Comma separated algorithm ids; None when not given"""
    if value is None:
        return None
    names = [name.strip().lower() for name in value.split(",") if name.strip()]
    if not names:
        raise typer.BadParameter("no algorithm given")
    try:
        return [AlgorithmId(name) for name in names]
    except ValueError:
        valid = ", ".join(a.value for a in AlgorithmId)
        raise typer.BadParameter(f"unknown algorithm in '{value}'; valid: {valid}")


def resolve_config(path: Optional[Path]) -> SystemConfig:
    """Scenario from a file, or the reference scenario"""
    return load_system_config(path) if path is not None else default_config()
