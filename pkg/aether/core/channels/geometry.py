"""
Deployment geometry: node positions, link distances and array angles.

Angles follow one fixed convention: the azimuth (x-y plane projection) of the
link direction measured from the array broadside, which is the x-axis. A
departure angle at node A toward node B is atan2(yB - yA, xB - xA); the
arrival angle at B from A is the departure angle at B toward A. Purely
vertical links have angle 0.
"""

from typing import Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from aether.core.exceptions import DimensionMismatchError, DomainError
from aether.core.model.config import SystemConfig


def azimuth(origin: np.ndarray, target: np.ndarray) -> np.ndarray:
    """Azimuth of the direction origin -> target (vectorized over leading axes)"""
    delta = np.asarray(target, dtype=float) - np.asarray(origin, dtype=float)
    return np.arctan2(delta[..., 1], delta[..., 0])


class Topology(BaseModel):
    """User drop plus fixed BS and IRS positions"""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    user_positions: np.ndarray
    bs_position: Tuple[float, float, float]
    irs_position: Tuple[float, float, float]

    @field_validator("user_positions", mode="before")
    def as_points(cls, v):
        arr = np.array(v, dtype=float, copy=True)
        if arr.ndim != 2 or arr.shape[1] != 3:
            raise DimensionMismatchError(f"user positions must be a (K, 3) array, got {arr.shape}")
        arr.flags.writeable = False
        return arr

    @model_validator(mode="after")
    def validate_distances(self):
        if np.any(self.d_direct <= 0) or np.any(self.d_reflect <= 0) or self.d_bs_irs <= 0:
            raise DomainError("every link distance must be positive")
        return self

    @property
    def num_users(self) -> int:
        return self.user_positions.shape[0]

    @property
    def d_direct(self) -> np.ndarray:
        """BS-user distances d_{d,k}"""
        return np.linalg.norm(self.user_positions - np.asarray(self.bs_position), axis=1)

    @property
    def d_reflect(self) -> np.ndarray:
        """IRS-user distances d_{r,k}"""
        return np.linalg.norm(self.user_positions - np.asarray(self.irs_position), axis=1)

    @property
    def d_bs_irs(self) -> float:
        return float(np.linalg.norm(np.asarray(self.irs_position) - np.asarray(self.bs_position)))

    @property
    def irs_arrival_angle(self) -> float:
        """Angle of arrival at the IRS from the BS"""
        return float(azimuth(self.irs_position, self.bs_position))

    @property
    def bs_departure_angle(self) -> float:
        """Angle of departure at the BS toward the IRS"""
        return float(azimuth(self.bs_position, self.irs_position))

    @property
    def irs_departure_angles(self) -> np.ndarray:
        """Angles of departure at the IRS toward each user"""
        return azimuth(np.asarray(self.irs_position), self.user_positions)

    def within(self, radius: float) -> bool:
        return bool(np.all(np.hypot(self.user_positions[:, 0], self.user_positions[:, 1]) <= radius + 1e-9))


def sample_topology(config: SystemConfig, rng: np.random.Generator) -> Topology:
    """Drop users uniformly in the disc of radius ``user_radius`` around the origin, at ground level"""
    K = config.num_users
    radius = config.user_radius * np.sqrt(rng.uniform(0.0, 1.0, K))
    angle = rng.uniform(0.0, 2.0 * np.pi, K)
    points = np.column_stack([radius * np.cos(angle), radius * np.sin(angle), np.zeros(K)])
    return Topology(user_positions=points, bs_position=config.bs_position, irs_position=config.irs_position)
