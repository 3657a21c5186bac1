"""Core model service - symplectic form, validation and drift/diffusion construction"""
from typing import List, Optional, Tuple

import numpy as np
from loguru import logger
from numpy.typing import NDArray

from app.config import tolerances
from app.exceptions import ModelValidationError, RealCastError
from app.models.system import (
    DriftDiffusion,
    LinearOpenSystem,
    SymplecticForm,
    ValidationCheck,
    ValidationReport,
)
from app.utils.linalg import hermitize, max_abs, non_hermiticity, readonly, symmetrize


def symplectic_form(n_modes: int) -> SymplecticForm:
    """
    Build Σ = [[0, I_N], [-I_N, 0]]

    Args:
        n_modes: Number of modes N (≥ 1)

    Returns:
        SymplecticForm for the (q₁…q_N, p₁…p_N) ordering

    Raises:
        ValueError: If n_modes < 1
    """
    if n_modes < 1:
        raise ValueError(f"n_modes must be at least 1, got {n_modes}")
    matrix = np.zeros((2 * n_modes, 2 * n_modes))
    matrix[:n_modes, n_modes:] = np.eye(n_modes)
    matrix[n_modes:, :n_modes] = -np.eye(n_modes)
    return SymplecticForm(n_modes=n_modes, matrix=matrix)


def validate_model(system: LinearOpenSystem, sym_tol: Optional[float] = None) -> ValidationReport:
    """
    Check a system's dimensions, symmetry and finiteness

    Failures are reported, never raised.
    """
    sym_tol = tolerances.SYM_TOL if sym_tol is None else sym_tol
    checks: List[ValidationCheck] = []
    n = system.n_modes
    size = 2 * n
    M = system.hamiltonian
    C = system.coupling

    checks.append(ValidationCheck(
        name="n_modes",
        passed=n >= 1,
        detail="" if n >= 1 else f"n_modes must be at least 1, got {n}",
    ))

    m_shape_ok = n >= 1 and M.shape == (size, size)
    checks.append(ValidationCheck(
        name="hamiltonian_shape",
        passed=m_shape_ok,
        detail="" if m_shape_ok else f"dimension mismatch: M has shape {M.shape}, expected ({size}, {size})",
    ))

    if m_shape_ok and np.all(np.isfinite(M)):
        gap = np.abs(M - M.T)
        worst = float(gap.max())
        symmetric = worst <= sym_tol
        detail = ""
        if not symmetric:
            i, j = np.unravel_index(int(np.argmax(gap)), gap.shape)
            detail = (
                f"asymmetric Hamiltonian: M[{i + 1},{j + 1}]={M[i, j]!r} vs "
                f"M[{j + 1},{i + 1}]={M[j, i]!r} (difference {worst:.3e} > {sym_tol:.1e})"
            )
        checks.append(ValidationCheck(name="hamiltonian_symmetric", passed=symmetric, detail=detail))

    c_shape_ok = n >= 1 and C.shape[1] == size and C.shape[0] >= 1
    if c_shape_ok:
        c_detail = ""
    elif C.shape[0] < 1:
        c_detail = "coupling needs at least one channel (use a zero row for a closed system)"
    else:
        c_detail = f"dimension mismatch: C has {C.shape[1]} columns, expected {size}"
    checks.append(ValidationCheck(name="coupling_shape", passed=c_shape_ok, detail=c_detail))

    finite = bool(np.all(np.isfinite(M)) and np.all(np.isfinite(C)))
    checks.append(ValidationCheck(
        name="finite_entries",
        passed=finite,
        detail="" if finite else "M or C contains NaN or infinite entries",
    ))

    report = ValidationReport(checks=checks)
    if not report.passed:
        logger.debug(f"Validation failed for system {system.fingerprint()}: {len(report.failures)} checks")
    return report


def prepare_system(system: LinearOpenSystem, sym_tol: Optional[float] = None) -> LinearOpenSystem:
    """
    Validate a system and return a copy with M symmetrized exactly

    Raises:
        ModelValidationError: With the full report if any check fails
    """
    report = validate_model(system, sym_tol=sym_tol)
    if not report.passed:
        raise ModelValidationError(report)
    return system.model_copy(update={"hamiltonian": readonly(symmetrize(system.hamiltonian))})


def split_gram(gram: NDArray[np.complex128]) -> Tuple[NDArray[np.float64], NDArray[np.float64]]:
    """
    Re and Im of a Gram matrix C†C

    Raises:
        RealCastError: If the matrix is not Hermitian within REAL_CAST_TOL
            relative to its largest entry, so that Re is not symmetric or Im
            is not antisymmetric
    """
    residue = non_hermiticity(gram)
    if residue > tolerances.REAL_CAST_TOL * max(1.0, max_abs(gram)):
        raise RealCastError(
            f"C†C deviates from Hermitian by {residue:.3e}; the input is numerically inconsistent"
        )
    gram = hermitize(gram)
    return np.ascontiguousarray(gram.real), np.ascontiguousarray(gram.imag)


def _gram_parts(system: LinearOpenSystem) -> Tuple[NDArray[np.float64], NDArray[np.float64]]:
    C = system.coupling
    return split_gram(C.conj().T @ C)


def build_drift(system: LinearOpenSystem) -> NDArray[np.float64]:
    """
    Drift matrix A = Σ(M + Im(C†C))

    Raises:
        ModelValidationError: If the system fails validation
        RealCastError: If C†C is not Hermitian within tolerance
    """
    system = prepare_system(system)
    sigma = symplectic_form(system.n_modes).matrix
    _, gram_imag = _gram_parts(system)
    return sigma @ (system.hamiltonian + gram_imag)


def build_diffusion(system: LinearOpenSystem) -> NDArray[np.float64]:
    """
    Diffusion matrix D = Σ Re(C†C) Σᵀ, symmetrized after the congruence

    Raises:
        ModelValidationError: If the system fails validation
        RealCastError: If C†C is not Hermitian within tolerance
    """
    system = prepare_system(system)
    sigma = symplectic_form(system.n_modes).matrix
    gram_real, _ = _gram_parts(system)
    return symmetrize(sigma @ gram_real @ sigma.T)


def build_drift_diffusion(system: LinearOpenSystem) -> DriftDiffusion:
    """Build the (A, D) pair consumed by moment-dynamics"""
    ad = DriftDiffusion(drift=build_drift(system), diffusion=build_diffusion(system))
    logger.debug(f"Built drift/diffusion for system {system.fingerprint()} (N={system.n_modes}, K={system.n_channels})")
    return ad


def drift_contributions(system: LinearOpenSystem) -> Tuple[NDArray[np.float64], NDArray[np.float64]]:
    """
    Split A into its Hamiltonian part ΣM and dissipative part Σ·Im(C†C)
    """
    system = prepare_system(system)
    sigma = symplectic_form(system.n_modes).matrix
    _, gram_imag = _gram_parts(system)
    return sigma @ system.hamiltonian, sigma @ gram_imag


def channel_contributions(system: LinearOpenSystem) -> List[DriftDiffusion]:
    """
    Per-channel (A_j, D_j) with M set to zero

    Summing the drifts and adding ΣM reproduces build_drift; summing the
    diffusions reproduces build_diffusion.
    """
    system = prepare_system(system)
    zero_hamiltonian = np.zeros_like(system.hamiltonian)
    contributions = []
    for row in system.coupling:
        single = LinearOpenSystem(
            n_modes=system.n_modes,
            hamiltonian=zero_hamiltonian,
            coupling=row.reshape(1, -1),
        )
        contributions.append(build_drift_diffusion(single))
    return contributions
