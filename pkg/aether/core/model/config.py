"""
Scenario configuration.

``SystemConfig`` holds every scenario constant (geometry, powers, thresholds,
path loss and fading parameters) together with the knobs of the alternating
optimization. Values are linear (watts, ratios); dB/dBm inputs are converted
when a configuration file is loaded.
"""

import logging
import sys
from pathlib import Path
from typing import Any, Dict, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from aether.core.exceptions import ConfigError
from aether.core.model.units import db_to_linear, dbm_to_watts
from aether.utils.config.settings import settings

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

logger = logging.getLogger(__name__)
logger.setLevel(getattr(logging, settings.log_level.value))

Point3 = Tuple[float, float, float]

# Keys accepted in configuration files in place of the linear field, with the
# converter that maps them back to the field value
UNIT_KEYS = {
    "sinr_threshold_db": ("sinr_threshold", db_to_linear),
    "energy_threshold_dbm": ("energy_threshold", dbm_to_watts),
    "noise_antenna_var_dbm": ("noise_antenna_var", dbm_to_watts),
    "noise_id_var_dbm": ("noise_id_var", dbm_to_watts),
    "path_loss_ref_db": ("path_loss_ref", db_to_linear),
    "rician_factors_db": ("rician_factors", lambda v: tuple(db_to_linear(x) for x in v)),
}


class SystemConfig(BaseModel):
    """Scenario constants and algorithm knobs. Immutable once built."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    # Dimensions
    num_users: int = Field(4, ge=1)
    num_antennas: int = Field(4, ge=1)
    num_elements: int = Field(30, ge=0)  # 0 means no IRS

    # Geometry (meters)
    bs_position: Point3 = (0.0, 0.0, 15.0)
    irs_position: Point3 = (50.0, 50.0, 15.0)
    user_radius: float = Field(200.0, gt=0)

    # Powers and thresholds (watts / linear)
    noise_antenna_var: float = Field(1e-10, gt=0)
    noise_id_var: float = Field(1e-8, gt=0)
    eh_efficiency: float = Field(0.7, gt=0, le=1)
    sinr_threshold: float = Field(10.0, gt=0)
    energy_threshold: float = Field(1e-4, gt=0)

    # Propagation
    path_loss_ref: float = Field(1e-3, gt=0)
    path_loss_exponents: Tuple[float, float, float] = (3.0, 2.2, 2.5)
    rician_factors: Tuple[float, float] = (10 ** 0.3, 10 ** 0.3)
    element_spacing_ratio: float = Field(0.5, gt=0)

    # Algorithm
    randomization_count: int = Field(1000, ge=1)
    convergence_eps: float = Field(1e-3, gt=0)
    rng_seed: int = Field(0, ge=0)
    max_iters: int = Field(50, ge=1)
    sca_inner_loop: bool = False
    sca_inner_max: int = Field(10, ge=1)
    restoration_passes: int = Field(8, ge=0)
    feasibility_tol: float = Field(1e-6, gt=0)

    @field_validator("rician_factors")
    def validate_rician(cls, v):
        if any(x < 0 for x in v):
            raise ValueError("Rician factors must be non-negative")
        return v

    @field_validator("path_loss_exponents")
    def validate_exponents(cls, v):
        if any(x <= 0 for x in v):
            raise ValueError("path loss exponents must be positive")
        return v

    @model_validator(mode="after")
    def validate_geometry(self):
        if self.bs_position == self.irs_position:
            raise ValueError("BS and IRS cannot share a position")
        return self

    @property
    def has_irs(self) -> bool:
        return self.num_elements > 0

    def updated(self, **changes: Any) -> "SystemConfig":
        """Return a validated copy with the given fields replaced."""
        data = self.model_dump()
        data.update(changes)
        try:
            return SystemConfig.model_validate(data)
        except ValidationError as e:
            raise ConfigError(str(e)) from e

    def to_toml(self) -> str:
        """Serialize as flat TOML key/value text."""
        lines = []
        for key, value in self.model_dump().items():
            if isinstance(value, bool):
                lines.append(f"{key} = {'true' if value else 'false'}")
            elif isinstance(value, (tuple, list)):
                lines.append(f"{key} = [{', '.join(repr(float(x)) for x in value)}]")
            else:
                lines.append(f"{key} = {value!r}")
        return "\n".join(lines) + "\n"


def config_from_mapping(data: Dict[str, Any]) -> SystemConfig:
    """
    Build a SystemConfig from a flat mapping.

    Keys must be SystemConfig field names or one of the unit-suffixed aliases
    in ``UNIT_KEYS``.

    Raises:
        ConfigError: on unknown keys, duplicate unit aliases or invalid values
    """
    values: Dict[str, Any] = {}
    for key, value in data.items():
        if key in UNIT_KEYS:
            field, convert = UNIT_KEYS[key]
            if field in data:
                raise ConfigError(f"'{key}' and '{field}' both given")
            values[field] = convert(value)
        elif key in SystemConfig.model_fields:
            values[key] = value
        else:
            raise ConfigError(f"Unknown configuration key '{key}'")
    try:
        return SystemConfig.model_validate(values)
    except ValidationError as e:
        raise ConfigError(str(e)) from e


def load_system_config(path: Union[str, Path]) -> SystemConfig:
    """
    Load a scenario from a flat TOML file.

    Args:
        path: Path to the configuration file

    Returns:
        Validated SystemConfig
    """
    path = Path(path)
    try:
        with open(path, "rb") as f:
            data = tomllib.load(f)
    except FileNotFoundError as e:
        raise ConfigError(f"Configuration file not found: {path}") from e
    except tomllib.TOMLDecodeError as e:
        raise ConfigError(f"Invalid configuration file {path}: {e}") from e

    nested = [k for k, v in data.items() if isinstance(v, dict)]
    if nested:
        raise ConfigError(f"Configuration must be flat, found tables: {', '.join(nested)}")

    config = config_from_mapping(data)
    logger.debug(f"Loaded scenario from {path}")
    return config
