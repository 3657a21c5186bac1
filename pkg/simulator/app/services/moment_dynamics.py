"""Moment dynamics service - integrates d⟨x̂⟩/dt = A⟨x̂⟩ and dV/dt = AV + VAᵀ + D"""
from typing import Optional, Tuple

import numpy as np
from loguru import logger
from numpy.typing import NDArray
from scipy.linalg import expm

from app.config import tolerances
from app.exceptions import DimensionMismatchError, IntegrationError, UnphysicalStateError
from app.models.state import (
    GaussianMomentState,
    PhysicalityReport,
    SteadyStateResult,
    Trajectory,
    TrajectoryMetadata,
)
from app.models.system import DriftDiffusion, SymplecticForm
from app.services.core_model import symplectic_form
from app.utils.linalg import max_abs, symmetrize
from app.utils.time_grid import fixed_step_grid, sample_indices

INTEGRATOR_NAME = "rk4"


def _check_dimensions(ad: DriftDiffusion, state: GaussianMomentState) -> None:
    if ad.dimension != state.dimension:
        raise DimensionMismatchError(
            f"drift/diffusion are {ad.dimension}x{ad.dimension} but the state has dimension {state.dimension}"
        )


def _rhs(
    A: NDArray[np.float64], D: NDArray[np.float64], mean: NDArray[np.float64], cov: NDArray[np.float64]
) -> Tuple[NDArray[np.float64], NDArray[np.float64]]:
    return A @ mean, A @ cov + cov @ A.T + D


def moment_rhs(ad: DriftDiffusion, state: GaussianMomentState) -> Tuple[NDArray[np.float64], NDArray[np.float64]]:
    """
    Right-hand side of the moment equations

    Returns:
        (A⟨x̂⟩, AV + VAᵀ + D) with the covariance derivative symmetrized

    Raises:
        DimensionMismatchError: If the state and (A, D) disagree in size
    """
    _check_dimensions(ad, state)
    mean_dot, cov_dot = _rhs(ad.drift, ad.diffusion, state.mean, state.covariance)
    return mean_dot, symmetrize(cov_dot)


def integrate(
    ad: DriftDiffusion,
    initial: GaussianMomentState,
    t_final: float,
    dt: float,
    sample_every: int = 1,
) -> Trajectory:
    """
    Fixed-step classical RK4 on the coupled (mean, V) system

    V is symmetrized after every completed step. The last step is shortened so
    the final sample lands exactly on t_final.

    Raises:
        ValueError: If dt ≤ 0, t_final ≤ initial.time or sample_every < 1
        DimensionMismatchError: If the state and (A, D) disagree in size
        IntegrationError: If the state becomes non-finite
    """
    _check_dimensions(ad, initial)
    if not t_final > initial.time:
        raise ValueError(f"t_final ({t_final}) must exceed the initial time ({initial.time})")
    times, steps = fixed_step_grid(initial.time, t_final, dt)
    n_steps = steps.size
    keep = sample_indices(n_steps, sample_every)
    logger.info(f"Integrating moments: {n_steps} RK4 steps of dt={dt:g} to t={t_final:g}")

    A, D = ad.drift, ad.diffusion
    size = ad.dimension
    means = np.empty((keep.size, size))
    covs = np.empty((keep.size, size, size))

    mean = np.array(initial.mean)
    cov = np.array(initial.covariance)
    means[0], covs[0] = mean, cov
    slot = 1

    for k in range(n_steps):
        h = steps[k]
        k1m, k1v = _rhs(A, D, mean, cov)
        k2m, k2v = _rhs(A, D, mean + 0.5 * h * k1m, cov + 0.5 * h * k1v)
        k3m, k3v = _rhs(A, D, mean + 0.5 * h * k2m, cov + 0.5 * h * k2v)
        k4m, k4v = _rhs(A, D, mean + h * k3m, cov + h * k3v)
        mean = mean + (h / 6.0) * (k1m + 2.0 * k2m + 2.0 * k3m + k4m)
        cov = symmetrize(cov + (h / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v))

        if not (np.all(np.isfinite(mean)) and np.all(np.isfinite(cov))):
            logger.error(f"Moment integration went non-finite at t={times[k + 1]:g}")
            raise IntegrationError(
                f"non-finite moments at t={times[k + 1]:g}; the run is unstable, try a smaller dt "
                f"(suggested ≤ {suggested_step(ad):.3g})"
            )
        if slot < keep.size and keep[slot] == k + 1:
            means[slot], covs[slot] = mean, cov
            slot += 1

    metadata = TrajectoryMetadata(
        integrator=INTEGRATOR_NAME,
        step_size=dt,
        system_fingerprint=ad.fingerprint(),
        n_modes=ad.n_modes,
    )
    logger.info(f"Moment integration complete: {keep.size} samples")
    return Trajectory(times=times[keep], means=means, covariances=covs, metadata=metadata)


def mean_closed_form(ad: DriftDiffusion, mean0: NDArray[np.float64], t: float) -> NDArray[np.float64]:
    """
    Exact mean exp(A·t)·⟨x̂⟩₀ via scaling-and-squaring Padé (scipy.linalg.expm)
    """
    if t < 0.0:
        raise ValueError(f"t must be non-negative, got {t}")
    mean0 = np.asarray(mean0, dtype=np.float64)
    if mean0.shape != (ad.dimension,):
        raise DimensionMismatchError(f"mean0 must have length {ad.dimension}, got shape {mean0.shape}")
    if t == 0.0:
        return mean0.copy()
    return expm(ad.drift * t) @ mean0


def steady_state(ad: DriftDiffusion, hurwitz_tol: Optional[float] = None) -> SteadyStateResult:
    """
    Solve AV + VAᵀ + D = 0 when A is Hurwitz

    Uses the dense Kronecker form (I⊗A + A⊗I)·vec(V) = -vec(D) with
    column-major vec. Returns an unstable result, without a covariance, if
    some eigenvalue of A has real part ≥ -hurwitz_tol.
    """
    hurwitz_tol = tolerances.HURWITZ_TOL if hurwitz_tol is None else hurwitz_tol
    A, D = ad.drift, ad.diffusion
    eigenvalues = np.linalg.eigvals(A)
    if np.max(eigenvalues.real) >= -hurwitz_tol:
        result = SteadyStateResult(stable=False, eigenvalues=eigenvalues, hurwitz_tol=hurwitz_tol)
        logger.warning(f"Drift is not Hurwitz: {len(result.offending_eigenvalues)} offending eigenvalues")
        return result

    size = ad.dimension
    identity = np.eye(size)
    lyapunov = np.kron(identity, A) + np.kron(A, identity)
    vec_cov = np.linalg.solve(lyapunov, -D.reshape(-1, order="F"))
    cov = symmetrize(vec_cov.reshape((size, size), order="F"))
    residual = max_abs(A @ cov + cov @ A.T + D)
    logger.debug(f"Lyapunov residual {residual:.3e}")
    return SteadyStateResult(
        stable=True,
        eigenvalues=eigenvalues,
        covariance=cov,
        residual=residual,
        hurwitz_tol=hurwitz_tol,
    )


def purity(state: GaussianMomentState) -> float:
    """
    Gaussian purity 1/(2^N·√det V)

    Vacuum V = I/2 has purity 1 under [q̂, p̂] = i.

    Raises:
        UnphysicalStateError: If det V ≤ 0
    """
    det = float(np.linalg.det(state.covariance))
    if det <= 0.0:
        raise UnphysicalStateError(f"covariance determinant {det:.3e} is not positive")
    return 1.0 / (2.0**state.n_modes * np.sqrt(det))


def check_physical(
    state: GaussianMomentState,
    sym: Optional[SymplecticForm] = None,
    phys_tol: Optional[float] = None,
) -> PhysicalityReport:
    """Minimum eigenvalue of V + (i/2)Σ and whether it clears -phys_tol"""
    phys_tol = tolerances.PHYS_TOL if phys_tol is None else phys_tol
    sym = sym or symplectic_form(state.n_modes)
    if sym.dimension != state.dimension:
        raise DimensionMismatchError(
            f"symplectic form is {sym.dimension}x{sym.dimension} but the state has dimension {state.dimension}"
        )
    uncertainty = state.covariance + 0.5j * sym.matrix
    lowest = float(np.linalg.eigvalsh(uncertainty)[0])
    return PhysicalityReport(physical=lowest >= -phys_tol, min_eigenvalue=lowest)


def vacuum_state(n_modes: int, time: float = 0.0) -> GaussianMomentState:
    """Default initial state: zero mean, V = I/2"""
    return GaussianMomentState(
        time=time,
        mean=np.zeros(2 * n_modes),
        covariance=0.5 * np.eye(2 * n_modes),
    )


def det_covariance(state: GaussianMomentState) -> float:
    return float(np.linalg.det(state.covariance))


def drift_norm(ad: DriftDiffusion) -> float:
    """Spectral norm ‖A‖₂"""
    return float(np.linalg.norm(ad.drift, 2))


def suggested_step(ad: DriftDiffusion) -> float:
    """Starting step dt = 0.1/max(1, ‖A‖₂)"""
    return 0.1 / max(1.0, drift_norm(ad))
