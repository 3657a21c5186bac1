"""
Truncated Fock-space representations used by the master-equation oracle
"""
from typing import List

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from app.config import tolerances
from app.utils.linalg import non_hermiticity, readonly


class FockRig(BaseModel):
    """Quadrature, Hamiltonian and Lindblad operators at a fixed cutoff"""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    n_modes: int = Field(..., ge=1)
    cutoff: int = Field(..., ge=2)
    quadratures: List[np.ndarray]
    hamiltonian_op: np.ndarray
    lindblad_ops: List[np.ndarray]
    # Ĥ - (i/2) Σ ĉ†ĉ, so the master equation needs one commutator-like product
    effective_hamiltonian: np.ndarray

    @field_validator("quadratures", "lindblad_ops", mode="before")
    @classmethod
    def _operator_list(cls, value) -> List[np.ndarray]:
        return [readonly(np.array(op, dtype=np.complex128)) for op in value]

    @field_validator("hamiltonian_op", "effective_hamiltonian", mode="before")
    @classmethod
    def _operator(cls, value) -> np.ndarray:
        return readonly(np.array(value, dtype=np.complex128))

    @model_validator(mode="after")
    def _check_operators(self) -> "FockRig":
        size = self.hilbert_dimension
        if len(self.quadratures) != 2 * self.n_modes:
            raise ValueError(f"expected {2 * self.n_modes} quadratures, got {len(self.quadratures)}")
        for op in [*self.quadratures, self.hamiltonian_op, self.effective_hamiltonian, *self.lindblad_ops]:
            if op.shape != (size, size):
                raise ValueError(f"operator shape {op.shape} != ({size}, {size})")
        for index, op in enumerate(self.quadratures):
            if non_hermiticity(op) > tolerances.OPERATOR_HERMITIAN_TOL:
                raise ValueError(f"quadrature {index + 1} is not Hermitian")
        if non_hermiticity(self.hamiltonian_op) > tolerances.OPERATOR_HERMITIAN_TOL:
            raise ValueError("Hamiltonian operator is not Hermitian")
        return self

    @property
    def hilbert_dimension(self) -> int:
        return self.cutoff**self.n_modes

    @property
    def n_channels(self) -> int:
        return len(self.lindblad_ops)


class DensityMatrix(BaseModel):
    """Density matrix ρ̂ on the truncated space at one time"""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    matrix: np.ndarray
    time: float = 0.0
    n_modes: int = Field(1, ge=1)
    cutoff: int = Field(..., ge=2)

    @field_validator("matrix", mode="before")
    @classmethod
    def _complex_matrix(cls, value) -> np.ndarray:
        array = np.array(value, dtype=np.complex128)
        if array.ndim != 2 or array.shape[0] != array.shape[1]:
            raise ValueError(f"density matrix must be square, got shape {array.shape}")
        return readonly(array)

    @model_validator(mode="after")
    def _check_density(self) -> "DensityMatrix":
        size = self.cutoff**self.n_modes
        if self.matrix.shape != (size, size):
            raise ValueError(f"density matrix shape {self.matrix.shape} != ({size}, {size})")
        if non_hermiticity(self.matrix) > tolerances.DENSITY_HERMITIAN_TOL:
            raise ValueError("density matrix is not Hermitian")
        trace = np.trace(self.matrix)
        if abs(trace - 1.0) > tolerances.DENSITY_TRACE_TOL:
            raise ValueError(f"density matrix trace {trace.real:.10f} is not 1")
        lowest = float(np.linalg.eigvalsh(self.matrix)[0])
        if lowest < -tolerances.DENSITY_EIG_TOL:
            raise ValueError(f"density matrix has negative eigenvalue {lowest:.3e}")
        return self

    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.matrix)[0])

    def populations(self) -> np.ndarray:
        """Diagonal in the Fock basis, shaped (d,)*N"""
        return np.real(np.diag(self.matrix)).reshape((self.cutoff,) * self.n_modes)
