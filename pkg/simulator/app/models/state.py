"""
Gaussian moment state, trajectories and moment-dynamics results
"""
from typing import List, Optional, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from app.config import tolerances
from app.exceptions import UnstableSystemError
from app.utils.linalg import asymmetry, max_abs, readonly, symmetrize


class GaussianMomentState(BaseModel):
    """
    Mean vector ⟨x̂⟩ and covariance V = ½⟨Δx̂Δx̂ᵀ + (Δx̂Δx̂ᵀ)ᵀ⟩ at one time

    The covariance is symmetrized on construction, so V = Vᵀ holds exactly.
    Vacuum convention: V = I/2 (ℏ = 1, [q̂, p̂] = i).
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    time: float = 0.0
    mean: np.ndarray
    covariance: np.ndarray

    @field_validator("mean", mode="before")
    @classmethod
    def _mean_vector(cls, value) -> np.ndarray:
        array = np.array(value, dtype=np.float64)
        if array.ndim != 1 or array.size == 0 or array.size % 2:
            raise ValueError(f"mean must be a vector of even length 2N, got shape {array.shape}")
        return readonly(array)

    @field_validator("covariance", mode="before")
    @classmethod
    def _symmetric_covariance(cls, value) -> np.ndarray:
        array = np.array(value, dtype=np.float64)
        if array.ndim != 2 or array.shape[0] != array.shape[1]:
            raise ValueError(f"covariance must be square, got shape {array.shape}")
        if asymmetry(array) > tolerances.SYM_TOL * max(1.0, max_abs(array)):
            raise ValueError(f"covariance is not symmetric (asymmetry {asymmetry(array):.3e})")
        return readonly(symmetrize(array))

    @model_validator(mode="after")
    def _dimensions_agree(self) -> "GaussianMomentState":
        if self.covariance.shape != (self.mean.size, self.mean.size):
            raise ValueError(
                f"covariance shape {self.covariance.shape} does not match mean length {self.mean.size}"
            )
        return self

    @property
    def n_modes(self) -> int:
        return self.mean.size // 2

    @property
    def dimension(self) -> int:
        return self.mean.size


class PhysicalityReport(BaseModel):
    """Uncertainty-relation check V + (i/2)Σ ⪰ 0"""
    physical: bool
    min_eigenvalue: float


class SteadyStateResult(BaseModel):
    """Stationary covariance of a Hurwitz drift, or the unstable diagnosis"""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    stable: bool
    eigenvalues: np.ndarray
    covariance: Optional[np.ndarray] = None
    residual: Optional[float] = None
    hurwitz_tol: float = tolerances.HURWITZ_TOL

    @property
    def offending_eigenvalues(self) -> List[complex]:
        """Eigenvalues of A whose real part is not below -hurwitz_tol"""
        return [complex(z) for z in self.eigenvalues if z.real >= -self.hurwitz_tol]

    def require_covariance(self) -> np.ndarray:
        """Return V_ss or raise UnstableSystemError"""
        if not self.stable or self.covariance is None:
            raise UnstableSystemError(self.offending_eigenvalues)
        return self.covariance


class TrajectoryMetadata(BaseModel):
    """How a trajectory was produced"""
    integrator: str
    step_size: float
    system_fingerprint: str
    n_modes: int = Field(..., ge=1)


class Trajectory(BaseModel):
    """
    Time-ordered samples of GaussianMomentState

    Samples are stored as stacked arrays; `samples` materializes them.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    times: np.ndarray
    means: np.ndarray
    covariances: np.ndarray
    metadata: TrajectoryMetadata

    @field_validator("times", mode="before")
    @classmethod
    def _times(cls, value) -> np.ndarray:
        return readonly(np.array(value, dtype=np.float64).reshape(-1))

    @field_validator("means", mode="before")
    @classmethod
    def _means(cls, value) -> np.ndarray:
        return readonly(np.array(value, dtype=np.float64))

    @field_validator("covariances", mode="before")
    @classmethod
    def _covariances(cls, value) -> np.ndarray:
        array = np.array(value, dtype=np.float64)
        if array.ndim != 3:
            raise ValueError(f"covariances must be stacked matrices, got shape {array.shape}")
        return readonly(0.5 * (array + array.transpose(0, 2, 1)))

    @model_validator(mode="after")
    def _consistent(self) -> "Trajectory":
        size = 2 * self.metadata.n_modes
        count = self.times.size
        if self.means.shape != (count, size):
            raise ValueError(f"means shape {self.means.shape} != ({count}, {size})")
        if self.covariances.shape != (count, size, size):
            raise ValueError(f"covariances shape {self.covariances.shape} != ({count}, {size}, {size})")
        if count > 1 and not np.all(np.diff(self.times) > 0.0):
            raise ValueError("trajectory times must be strictly increasing")
        return self

    @classmethod
    def from_states(cls, states: Sequence[GaussianMomentState], metadata: TrajectoryMetadata) -> "Trajectory":
        size = 2 * metadata.n_modes
        return cls(
            times=[s.time for s in states],
            means=np.array([s.mean for s in states]).reshape(len(states), size),
            covariances=np.array([s.covariance for s in states]).reshape(len(states), size, size),
            metadata=metadata,
        )

    def __len__(self) -> int:
        return self.times.size

    def __getitem__(self, index: int) -> GaussianMomentState:
        return GaussianMomentState(
            time=float(self.times[index]),
            mean=self.means[index],
            covariance=self.covariances[index],
        )

    @property
    def samples(self) -> List[GaussianMomentState]:
        return [self[i] for i in range(len(self))]

    @property
    def final(self) -> GaussianMomentState:
        if len(self) == 0:
            raise IndexError("empty trajectory")
        return self[len(self) - 1]
