"""
System data model: symplectic form, linear open system, drift/diffusion pair
"""
import hashlib
from typing import List

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from app.config import tolerances
from app.utils.linalg import asymmetry, max_abs, readonly, symmetrize


def _fingerprint(*arrays: np.ndarray) -> str:
    digest = hashlib.sha256()
    for array in arrays:
        digest.update(str(array.shape).encode())
        digest.update(np.ascontiguousarray(array).tobytes())
    return digest.hexdigest()[:16]


class SymplecticForm(BaseModel):
    """Block matrix [[0, I_N], [-I_N, 0]] in (q₁…q_N, p₁…p_N) ordering"""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    n_modes: int = Field(..., ge=1)
    matrix: np.ndarray

    @field_validator("matrix", mode="before")
    @classmethod
    def _real_matrix(cls, value) -> np.ndarray:
        return readonly(np.array(value, dtype=np.float64))

    @model_validator(mode="after")
    def _check_block_form(self) -> "SymplecticForm":
        n = self.n_modes
        expected = np.zeros((2 * n, 2 * n))
        expected[:n, n:] = np.eye(n)
        expected[n:, :n] = -np.eye(n)
        if self.matrix.shape != expected.shape or not np.array_equal(self.matrix, expected):
            raise ValueError("matrix is not the canonical block symplectic form")
        return self

    @property
    def dimension(self) -> int:
        return 2 * self.n_modes


class LinearOpenSystem(BaseModel):
    """
    Quadratic Hamiltonian Ĥ = ½ x̂ᵀMx̂ with Lindblad operators ĉ = Cx̂

    Construction only coerces dtypes; consistency is checked by
    core_model.validate_model so that failures can be reported, not raised.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    n_modes: int
    hamiltonian: np.ndarray
    coupling: np.ndarray
    labels: List[str] = Field(default_factory=list)

    @field_validator("hamiltonian", mode="before")
    @classmethod
    def _real_matrix(cls, value) -> np.ndarray:
        array = np.array(value, dtype=np.float64)
        if array.ndim != 2:
            raise ValueError(f"hamiltonian must be a 2-D matrix, got {array.ndim}-D")
        return readonly(array)

    @field_validator("coupling", mode="before")
    @classmethod
    def _complex_matrix(cls, value) -> np.ndarray:
        array = np.array(value, dtype=np.complex128)
        if array.ndim != 2:
            raise ValueError(f"coupling must be a 2-D matrix (K rows), got {array.ndim}-D")
        return readonly(array)

    @property
    def n_channels(self) -> int:
        return self.coupling.shape[0]

    @property
    def dimension(self) -> int:
        return 2 * self.n_modes

    def fingerprint(self) -> str:
        """Stable identifier of (N, M, C)"""
        return _fingerprint(np.array([self.n_modes]), self.hamiltonian, self.coupling)


class DriftDiffusion(BaseModel):
    """Drift matrix A and diffusion matrix D of the moment equations"""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    drift: np.ndarray
    diffusion: np.ndarray

    @field_validator("drift", mode="before")
    @classmethod
    def _real_drift(cls, value) -> np.ndarray:
        array = np.array(value, dtype=np.float64)
        if array.ndim != 2 or array.shape[0] != array.shape[1] or array.shape[0] % 2:
            raise ValueError(f"drift must be a square 2N×2N matrix, got shape {array.shape}")
        return readonly(array)

    @field_validator("diffusion", mode="before")
    @classmethod
    def _symmetric_psd_diffusion(cls, value) -> np.ndarray:
        array = np.array(value, dtype=np.float64)
        if array.ndim != 2 or array.shape[0] != array.shape[1]:
            raise ValueError(f"diffusion must be square, got shape {array.shape}")
        scale = max(1.0, max_abs(array))
        if asymmetry(array) > tolerances.SYM_TOL * scale:
            raise ValueError(f"diffusion is not symmetric (asymmetry {asymmetry(array):.3e})")
        array = symmetrize(array)
        if array.size:
            lowest = float(np.linalg.eigvalsh(array)[0])
            if lowest < -tolerances.PSD_TOL * scale:
                raise ValueError(f"diffusion is not positive semidefinite (min eigenvalue {lowest:.3e})")
        return readonly(array)

    @model_validator(mode="after")
    def _same_shape(self) -> "DriftDiffusion":
        if self.drift.shape != self.diffusion.shape:
            raise ValueError(
                f"drift {self.drift.shape} and diffusion {self.diffusion.shape} shapes differ"
            )
        return self

    @property
    def dimension(self) -> int:
        return self.drift.shape[0]

    @property
    def n_modes(self) -> int:
        return self.drift.shape[0] // 2

    def fingerprint(self) -> str:
        return _fingerprint(self.drift, self.diffusion)


class ValidationCheck(BaseModel):
    """Outcome of one validate_model check"""
    name: str
    passed: bool
    detail: str = ""


class ValidationReport(BaseModel):
    """Pass/fail report produced by validate_model"""
    checks: List[ValidationCheck] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    @property
    def failures(self) -> List[ValidationCheck]:
        return [check for check in self.checks if not check.passed]
