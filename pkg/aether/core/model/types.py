"""
Domain types shared by every Aether module.

Array-valued types are pydantic models over numpy arrays; arrays are made
read-only at construction so values can be shared across workers.
"""

from enum import Enum
from itertools import combinations
from typing import List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from aether.core.exceptions import DimensionMismatchError
from aether.core.model.trace import IterationTrace

TWO_PI = 2.0 * np.pi


def _frozen_array(value, dtype) -> np.ndarray:
    arr = np.array(value, dtype=dtype, copy=True)
    arr.flags.writeable = False
    return arr


class _ArrayModel(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)


class ChannelSet(_ArrayModel):
    """
    Channels of one topology draw.

    ``G`` is the BS-IRS matrix (M x N). Row k of ``h_r`` holds the IRS-user
    vector h_{r,k} (length M) and row k of ``h_d`` the BS-user vector h_{d,k}
    (length N); the links seen by user k are h_{r,k}^H and h_{d,k}^H.
    """
    G: np.ndarray
    h_r: np.ndarray
    h_d: np.ndarray
    d_direct: np.ndarray
    d_reflect: np.ndarray
    d_bs_irs: float
    seed: Optional[int] = None

    @field_validator("G", "h_r", "h_d", mode="before")
    def as_complex(cls, v):
        return _frozen_array(v, complex)

    @field_validator("d_direct", "d_reflect", mode="before")
    def as_real(cls, v):
        return _frozen_array(v, float)

    @model_validator(mode="after")
    def validate_shapes(self):
        if self.h_d.ndim != 2 or self.h_r.ndim != 2 or self.G.ndim != 2:
            raise DimensionMismatchError("G, h_r and h_d must be 2-D arrays")
        K, N = self.h_d.shape
        M = self.G.shape[0]
        if self.h_r.shape != (K, M):
            raise DimensionMismatchError(f"h_r has shape {self.h_r.shape}, expected {(K, M)}")
        if self.G.shape != (M, N):
            raise DimensionMismatchError(f"G has shape {self.G.shape}, expected {(M, N)}")
        if self.d_direct.shape != (K,) or self.d_reflect.shape != (K,):
            raise DimensionMismatchError("distance vectors must have one entry per user")
        for name in ("G", "h_r", "h_d"):
            if not np.all(np.isfinite(getattr(self, name))):
                raise ValueError(f"{name} has non-finite entries")
        return self

    @property
    def num_users(self) -> int:
        return self.h_d.shape[0]

    @property
    def num_antennas(self) -> int:
        return self.h_d.shape[1]

    @property
    def num_elements(self) -> int:
        return self.G.shape[0]

    def check_against(self, num_users: int, num_antennas: int, num_elements: int) -> None:
        """Raise if the dimensions differ from the given scenario"""
        actual = (self.num_users, self.num_antennas, self.num_elements)
        expected = (num_users, num_antennas, num_elements)
        if actual != expected:
            raise DimensionMismatchError(f"channels are (K, N, M)={actual}, scenario expects {expected}")

    def subset(self, num_elements: int, num_antennas: int) -> "ChannelSet":
        """Leading sub-arrays of this realization (first M elements, first N antennas)"""
        if num_elements > self.num_elements or num_antennas > self.num_antennas:
            raise DimensionMismatchError("subset cannot grow the arrays")
        return ChannelSet(
            G=self.G[:num_elements, :num_antennas],
            h_r=self.h_r[:, :num_elements],
            h_d=self.h_d[:, :num_antennas],
            d_direct=self.d_direct,
            d_reflect=self.d_reflect,
            d_bs_irs=self.d_bs_irs,
            seed=self.seed,
        )

    def without_irs(self) -> "ChannelSet":
        """Same draw with the reflected path removed"""
        return self.subset(0, self.num_antennas)


class PhaseShift(_ArrayModel):
    """IRS phases; every element reflects with unit amplitude"""
    theta: np.ndarray

    @field_validator("theta", mode="before")
    def wrap(cls, v):
        arr = np.mod(np.asarray(v, dtype=float).reshape(-1), TWO_PI)
        return _frozen_array(arr, float)

    @property
    def num_elements(self) -> int:
        return self.theta.shape[0]

    @property
    def u(self) -> np.ndarray:
        """Reflection coefficients e^{j theta}"""
        return np.exp(1j * self.theta)

    @property
    def lifted(self) -> np.ndarray:
        """u_bar = [u; 1]"""
        return np.append(self.u, 1.0)

    @classmethod
    def zeros(cls, num_elements: int) -> "PhaseShift":
        return cls(theta=np.zeros(num_elements))

    @classmethod
    def from_lifted(cls, u_bar: np.ndarray) -> "PhaseShift":
        """Project a lifted vector onto unit-modulus phases"""
        u_bar = np.asarray(u_bar, dtype=complex)
        return cls(theta=np.angle(u_bar[:-1] / u_bar[-1]))


class Beamformers(_ArrayModel):
    """Per-user beams w_k (rows of ``w``) and optional lifted covariances W_k"""
    w: np.ndarray
    W: Optional[np.ndarray] = None

    @field_validator("w", mode="before")
    def as_matrix(cls, v):
        return _frozen_array(np.atleast_2d(np.asarray(v, dtype=complex)), complex)

    @field_validator("W", mode="before")
    def as_stack(cls, v):
        if v is None:
            return None
        return _frozen_array(v, complex)

    @model_validator(mode="after")
    def validate_lifted(self):
        if self.W is None:
            return self
        K, N = self.w.shape
        if self.W.shape != (K, N, N):
            raise DimensionMismatchError(f"W has shape {self.W.shape}, expected {(K, N, N)}")
        scale = max(1.0, float(np.max(np.abs(self.W))))
        if not np.allclose(self.W, np.conj(np.swapaxes(self.W, 1, 2)), atol=1e-9 * scale):
            raise ValueError("lifted beamforming matrices must be Hermitian")
        return self

    @property
    def num_users(self) -> int:
        return self.w.shape[0]

    @property
    def num_antennas(self) -> int:
        return self.w.shape[1]

    @property
    def powers(self) -> np.ndarray:
        """Per-user transmit powers ||w_k||^2"""
        return np.sum(np.abs(self.w) ** 2, axis=1)

    def outer(self) -> np.ndarray:
        """Rank-one covariances w_k w_k^H as a (K, N, N) stack"""
        return np.einsum("ki,kj->kij", self.w, np.conj(self.w))

    @classmethod
    def zeros(cls, num_users: int, num_antennas: int) -> "Beamformers":
        return cls(w=np.zeros((num_users, num_antennas), dtype=complex))


class PowerSplit(_ArrayModel):
    """Fractions of received power routed to the information decoders"""
    rho: np.ndarray

    @field_validator("rho", mode="before")
    def as_vector(cls, v):
        arr = np.asarray(v, dtype=float).reshape(-1)
        if not np.all(np.isfinite(arr)) or np.any(arr < 0) or np.any(arr > 1):
            raise ValueError(f"power splitting ratios must lie in [0, 1], got {arr}")
        return _frozen_array(arr, float)

    @classmethod
    def uniform(cls, num_users: int, value: float = 0.5) -> "PowerSplit":
        return cls(rho=np.full(num_users, value))


class DecodingOrder(BaseModel):
    """
    SIC decoding order.

    ``positions[k]`` is s(k), the 1-based position of user k (0-based index)
    in the decoding sequence.
    """
    model_config = ConfigDict(frozen=True)

    positions: Tuple[int, ...]

    @field_validator("positions")
    def validate_permutation(cls, v):
        if sorted(v) != list(range(1, len(v) + 1)):
            raise ValueError(f"decoding order must be a permutation of 1..K, got {v}")
        return tuple(int(x) for x in v)

    @property
    def num_users(self) -> int:
        return len(self.positions)

    @property
    def sequence(self) -> List[int]:
        """Users in decoding order (first decoded first)"""
        return sorted(range(self.num_users), key=lambda k: self.positions[k])

    def decoded_after(self, k: int) -> List[int]:
        """Users j with s(j) > s(k); their signals interfere at user k"""
        return [j for j in range(self.num_users) if self.positions[j] > self.positions[k]]

    def after_mask(self) -> np.ndarray:
        """Boolean (K, K) matrix, entry [k, j] set when s(j) > s(k)"""
        pos = np.asarray(self.positions)
        return pos[None, :] > pos[:, None]

    def pairs(self) -> List[Tuple[int, int]]:
        """All (k, k_bar) with s(k) < s(k_bar)"""
        seq = self.sequence
        return [(seq[a], seq[b]) for a, b in combinations(range(len(seq)), 2)]

    def consecutive_pairs(self) -> List[Tuple[int, int]]:
        """(k, k_bar) for neighbours in the decoding sequence"""
        seq = self.sequence
        return list(zip(seq, seq[1:]))

    @classmethod
    def identity(cls, num_users: int) -> "DecodingOrder":
        return cls(positions=tuple(range(1, num_users + 1)))

    @classmethod
    def from_sequence(cls, sequence: Sequence[int]) -> "DecodingOrder":
        """Build from users listed in decoding order"""
        positions = [0] * len(sequence)
        for position, user in enumerate(sequence, start=1):
            positions[user] = position
        return cls(positions=tuple(positions))


class AlgorithmId(str, Enum):
    """Algorithms the harness can run"""
    JDBPR_OPT = "jdbpr-opt"
    EX_JBPR_OPT = "ex-jbpr-opt"
    JDBPR_COM = "jdbpr-com"
    JDBPR_ZF = "jdbpr-zf"
    JDBP_RAN = "jdbp-ran"
    NO_IRS = "no-irs"


class Termination(str, Enum):
    """Why the alternating loop stopped"""
    CONVERGED = "converged"
    MAX_ITERS = "max_iters"
    STALLED = "stalled"
    SINGLE_PASS = "single_pass"


class Solution(_ArrayModel):
    """A joint design: order, beams, splitting ratios and phases"""
    order: DecodingOrder
    beams: Beamformers
    split: PowerSplit
    phases: PhaseShift
    objective: float
    trace: IterationTrace = Field(default_factory=IterationTrace)
    termination: Termination = Termination.CONVERGED
    algorithm: AlgorithmId = AlgorithmId.JDBPR_OPT

    @property
    def iterations(self) -> int:
        return len(self.trace)
