"""Fock oracle service - brute-force Lindblad master equation on a truncated Fock space"""
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from loguru import logger
from numpy.typing import NDArray
from scipy.linalg import expm, logm, polar, schur

from app.config import tolerances
from app.exceptions import DimensionMismatchError, IntegrationError, UnphysicalStateError
from app.models.fock import DensityMatrix, FockRig
from app.models.state import GaussianMomentState
from app.models.system import LinearOpenSystem
from app.services.core_model import prepare_system, symplectic_form
from app.utils.linalg import checked_real, hermitize, lift, max_abs, readonly, symmetrize
from app.utils.time_grid import fixed_step_grid, sample_indices

Operator = NDArray[np.complex128]


def annihilation(cutoff: int) -> Operator:
    """
    Truncated ladder operator with a[n-1, n] = √n

    Raises:
        ValueError: If cutoff < 2
    """
    if cutoff < 2:
        raise ValueError(f"cutoff must be at least 2, got {cutoff}")
    return np.diag(np.sqrt(np.arange(1, cutoff, dtype=np.float64)), k=1).astype(np.complex128)


def _quadratic_operator(quadratures: Sequence[Operator], matrix: NDArray) -> Operator:
    """½ Σ_jk G_jk x̂_j x̂_k for a real symmetric G"""
    size = quadratures[0].shape[0]
    result = np.zeros((size, size), dtype=np.complex128)
    for j, x_j in enumerate(quadratures):
        for k, x_k in enumerate(quadratures):
            if matrix[j, k] != 0.0:
                result += 0.5 * matrix[j, k] * (x_j @ x_k)
    return hermitize(result)


def _ladders(rig: FockRig) -> List[Operator]:
    """Annihilation operators a_j = (q̂_j + i p̂_j)/√2 recovered from the rig"""
    n = rig.n_modes
    return [(rig.quadratures[j] + 1j * rig.quadratures[n + j]) / np.sqrt(2.0) for j in range(n)]


def build_rig(system: LinearOpenSystem, cutoff: int) -> FockRig:
    """
    Represent a linear open system at a per-mode Fock cutoff

    q̂ = (a + a†)/√2 and p̂ = (a - a†)/(i√2), so [q̂, p̂] = i away from the
    truncation boundary. Ĥ = ½ x̂ᵀMx̂ and ĉ_j = Σ_k C_jk x̂_k.

    Raises:
        ModelValidationError: If the system fails validation
        ValueError: If N or the cutoff exceed the oracle limits
    """
    system = prepare_system(system)
    n = system.n_modes
    if n > tolerances.ORACLE_MAX_MODES:
        raise ValueError(f"the Fock oracle supports at most {tolerances.ORACLE_MAX_MODES} modes, got {n}")
    if cutoff < 2 or cutoff > tolerances.ORACLE_MAX_CUTOFF:
        raise ValueError(f"cutoff must be between 2 and {tolerances.ORACLE_MAX_CUTOFF}, got {cutoff}")

    a = annihilation(cutoff)
    ladders = [lift(a, mode, n) for mode in range(n)]
    positions = [(op + op.conj().T) / np.sqrt(2.0) for op in ladders]
    momenta = [(op - op.conj().T) / (1j * np.sqrt(2.0)) for op in ladders]
    quadratures = [hermitize(op) for op in positions + momenta]

    hamiltonian_op = _quadratic_operator(quadratures, system.hamiltonian)
    lindblad_ops = [sum(c_jk * x_k for c_jk, x_k in zip(row, quadratures)) for row in system.coupling]
    damping = sum(c.conj().T @ c for c in lindblad_ops)

    logger.debug(f"Built Fock rig: N={n}, cutoff={cutoff}, dimension={cutoff**n}, K={len(lindblad_ops)}")
    return FockRig(
        n_modes=n,
        cutoff=cutoff,
        quadratures=quadratures,
        hamiltonian_op=hamiltonian_op,
        lindblad_ops=lindblad_ops,
        effective_hamiltonian=hamiltonian_op - 0.5j * damping,
    )


def commutator_defect(rig: FockRig) -> float:
    """
    Max |[x̂_ℓ, x̂_m] - iΣ_ℓm·I| over basis states with every mode below level cutoff-1
    """
    sigma = symplectic_form(rig.n_modes).matrix
    levels = np.indices((rig.cutoff,) * rig.n_modes).reshape(rig.n_modes, -1)
    interior = np.flatnonzero(np.all(levels <= rig.cutoff - 2, axis=0))
    block = np.ix_(interior, interior)
    identity = np.eye(interior.size)
    worst = 0.0
    for l, x_l in enumerate(rig.quadratures):
        for m, x_m in enumerate(rig.quadratures):
            commutator = (x_l @ x_m - x_m @ x_l)[block]
            worst = max(worst, max_abs(commutator - 1j * sigma[l, m] * identity))
    return worst


def _density_array(rig: FockRig, rho: Union[DensityMatrix, NDArray]) -> NDArray[np.complex128]:
    matrix = rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=np.complex128)
    size = rig.hilbert_dimension
    if matrix.shape != (size, size):
        raise DimensionMismatchError(f"density matrix shape {matrix.shape} does not match rig dimension {size}")
    return matrix


def _lindblad_action(rig: FockRig, matrix: NDArray[np.complex128]) -> NDArray[np.complex128]:
    effective = rig.effective_hamiltonian
    result = -1j * (effective @ matrix - matrix @ effective.conj().T)
    for c in rig.lindblad_ops:
        result += c @ matrix @ c.conj().T
    return result


def lindblad_rhs(rig: FockRig, rho: Union[DensityMatrix, NDArray]) -> NDArray[np.complex128]:
    """
    -i[Ĥ, ρ̂] + Σ_j (ĉ_j ρ̂ ĉ_j† - ½{ĉ_j†ĉ_j, ρ̂})

    Accepts a DensityMatrix or any square array of the rig's dimension.

    Raises:
        DimensionMismatchError: If ρ̂ does not match the rig
    """
    return _lindblad_action(rig, _density_array(rig, rho))


def _sample(matrix: NDArray[np.complex128], time: float, rig: FockRig) -> DensityMatrix:
    # Already Hermitized, renormalized and positivity-checked by the integrator
    return DensityMatrix.model_construct(
        matrix=readonly(matrix.copy()), time=float(time), n_modes=rig.n_modes, cutoff=rig.cutoff
    )


def integrate_master(
    rig: FockRig,
    rho0: DensityMatrix,
    t_final: float,
    dt: float,
    sample_every: int = 1,
) -> List[DensityMatrix]:
    """
    Fixed-step RK4 on the density matrix

    Each step is followed by re-Hermitization and trace renormalization; the
    trace drift seen before renormalization is monitored. Uses the same time
    grid as moment_dynamics.integrate.

    Raises:
        ValueError: If rho0 is not a valid density matrix or dt ≤ 0
        IntegrationError: On non-finite entries, trace drift above tolerance, or a
            kept sample with an eigenvalue below -DENSITY_EIG_TOL
    """
    matrix = _density_array(rig, rho0)
    lowest = rho0.min_eigenvalue()
    if lowest < -tolerances.DENSITY_EIG_TOL:
        raise ValueError(f"initial density matrix has negative eigenvalue {lowest:.3e}")
    if not t_final > rho0.time:
        raise ValueError(f"t_final ({t_final}) must exceed the initial time ({rho0.time})")

    times, steps = fixed_step_grid(rho0.time, t_final, dt)
    n_steps = steps.size
    keep = set(sample_indices(n_steps, sample_every).tolist())
    logger.info(
        f"Integrating master equation: {n_steps} RK4 steps of dt={dt:g}, "
        f"Hilbert dimension {rig.hilbert_dimension}"
    )

    samples = [_sample(matrix, times[0], rig)]
    worst_drift = 0.0
    worst_eigenvalue = lowest
    for k in range(n_steps):
        h = steps[k]
        k1 = _lindblad_action(rig, matrix)
        k2 = _lindblad_action(rig, matrix + 0.5 * h * k1)
        k3 = _lindblad_action(rig, matrix + 0.5 * h * k2)
        k4 = _lindblad_action(rig, matrix + h * k3)
        matrix = hermitize(matrix + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4))

        if not np.all(np.isfinite(matrix)):
            logger.error(f"Master equation went non-finite at t={times[k + 1]:g}")
            raise IntegrationError(f"non-finite density matrix at t={times[k + 1]:g}; try a smaller dt")
        trace = float(np.real(np.trace(matrix)))
        drift = abs(trace - 1.0)
        worst_drift = max(worst_drift, drift)
        if drift > tolerances.TRACE_DRIFT_TOL:
            logger.error(f"Trace drift {drift:.3e} at t={times[k + 1]:g}")
            raise IntegrationError(
                f"trace drifted by {drift:.3e} at t={times[k + 1]:g}; "
                f"reduce dt or increase the cutoff"
            )
        matrix = matrix / trace

        if k + 1 in keep:
            # RK4 does not preserve positivity
            lowest = float(np.linalg.eigvalsh(matrix)[0])
            worst_eigenvalue = min(worst_eigenvalue, lowest)
            if lowest < -tolerances.DENSITY_EIG_TOL:
                logger.error(f"Density matrix eigenvalue {lowest:.3e} at t={times[k + 1]:g}")
                raise IntegrationError(
                    f"density matrix lost positivity (eigenvalue {lowest:.3e}) at t={times[k + 1]:g}; reduce dt"
                )
            samples.append(_sample(matrix, times[k + 1], rig))

    logger.info(
        f"Master equation complete: {len(samples)} samples, max trace drift {worst_drift:.3e}, "
        f"min eigenvalue {worst_eigenvalue:.3e}"
    )
    return samples


def _moments(
    quadratures: Sequence[Operator], matrix: NDArray[np.complex128]
) -> Tuple[NDArray[np.complex128], NDArray[np.complex128]]:
    """tr(x̂_ℓ X) and ½ tr((x̂_ℓx̂_m + x̂_m x̂_ℓ) X) for an arbitrary matrix X"""
    count = len(quadratures)
    products = [x @ matrix for x in quadratures]
    first = np.array([np.trace(p) for p in products])
    ordered = np.empty((count, count), dtype=np.complex128)
    for l, x_l in enumerate(quadratures):
        for m in range(count):
            # tr(x̂_ℓ (x̂_m X)) without forming the triple product
            ordered[l, m] = np.sum(x_l * products[m].T)
    return first, 0.5 * (ordered + ordered.T)


def moments_from_density(rig: FockRig, rho: DensityMatrix) -> GaussianMomentState:
    """
    Mean and symmetrized covariance of the quadratures in state ρ̂

    Raises:
        RealCastError: If an imaginary residue above tolerance signals broken Hermiticity
    """
    first, second = _moments(rig.quadratures, _density_array(rig, rho))
    mean = checked_real(first, tolerances.MOMENT_RESIDUE_TOL, "quadrature means")
    symmetric = checked_real(second, tolerances.MOMENT_RESIDUE_TOL, "symmetrized second moments")
    return GaussianMomentState(
        time=rho.time,
        mean=mean,
        covariance=symmetrize(symmetric - np.outer(mean, mean)),
    )


def moment_derivatives(rig: FockRig, rho: DensityMatrix) -> Tuple[NDArray[np.float64], NDArray[np.float64]]:
    """
    Exact time derivatives of mean and covariance under the master equation

    Traces the quadrature moments against lindblad_rhs(ρ̂); for a linear open
    system these must equal A⟨x̂⟩ and AV + VAᵀ + D up to truncation error.
    """
    matrix = _density_array(rig, rho)
    first, _ = _moments(rig.quadratures, matrix)
    mean = checked_real(first, tolerances.MOMENT_RESIDUE_TOL, "quadrature means")
    first_dot, second_dot = _moments(rig.quadratures, _lindblad_action(rig, matrix))
    mean_dot = checked_real(first_dot, tolerances.MOMENT_RESIDUE_TOL, "mean derivative")
    second_dot = checked_real(second_dot, tolerances.MOMENT_RESIDUE_TOL, "second-moment derivative")
    cov_dot = second_dot - np.outer(mean_dot, mean) - np.outer(mean, mean_dot)
    return mean_dot, symmetrize(cov_dot)


def third_central_moment(rig: FockRig, rho: DensityMatrix, index: int = 0) -> float:
    """⟨(x̂_ℓ - ⟨x̂_ℓ⟩)³⟩; zero for Gaussian states"""
    matrix = _density_array(rig, rho)
    x = rig.quadratures[index]
    mean = float(np.real(np.trace(x @ matrix)))
    shifted = x - mean * np.eye(x.shape[0])
    return float(np.real(np.trace(shifted @ shifted @ shifted @ matrix)))


def cutoff_adequacy(rho: DensityMatrix, tail_levels: Optional[int] = None) -> float:
    """
    Population in the top tail_levels Fock levels, worst mode

    Raises:
        ValueError: If tail_levels is not below the cutoff
    """
    tail_levels = tolerances.TAIL_LEVELS if tail_levels is None else tail_levels
    if not 0 < tail_levels < rho.cutoff:
        raise ValueError(f"tail_levels must be in [1, {rho.cutoff - 1}], got {tail_levels}")
    populations = rho.populations()
    worst = 0.0
    for mode in range(rho.n_modes):
        others = tuple(axis for axis in range(rho.n_modes) if axis != mode)
        marginal = populations.sum(axis=others) if others else populations
        worst = max(worst, float(marginal[rho.cutoff - tail_levels:].sum()))
    return worst


def purity_exact(rho: DensityMatrix) -> float:
    """tr(ρ̂²)"""
    matrix = rho.matrix
    return float(np.real(np.sum(matrix * matrix.T)))


def _pure(vector: NDArray[np.complex128], cutoff: int, n_modes: int = 1) -> DensityMatrix:
    vector = vector / np.linalg.norm(vector)
    return DensityMatrix(matrix=np.outer(vector, vector.conj()), n_modes=n_modes, cutoff=cutoff)


def vacuum_density(cutoff: int, n_modes: int = 1) -> DensityMatrix:
    vector = np.zeros(cutoff**n_modes, dtype=np.complex128)
    vector[0] = 1.0
    return _pure(vector, cutoff, n_modes)


def fock_density(n: int, cutoff: int) -> DensityMatrix:
    """Single-mode number state |n⟩⟨n|"""
    if not 0 <= n < cutoff:
        raise ValueError(f"level {n} is outside the cutoff {cutoff}")
    vector = np.zeros(cutoff, dtype=np.complex128)
    vector[n] = 1.0
    return _pure(vector, cutoff)


def coherent_density(alpha: complex, cutoff: int) -> DensityMatrix:
    """Single-mode |α⟩ from the exponentiated displacement generator α a† - α* a"""
    a = annihilation(cutoff)
    displacement = expm(alpha * a.conj().T - np.conj(alpha) * a)
    return _pure(displacement[:, 0], cutoff)


def _thermal_populations(nbar: float, cutoff: int) -> NDArray[np.float64]:
    if nbar < 0.0:
        raise ValueError(f"mean occupation must be non-negative, got {nbar}")
    if nbar == 0.0:
        weights = np.zeros(cutoff)
        weights[0] = 1.0
        return weights
    weights = (nbar / (1.0 + nbar)) ** np.arange(cutoff)
    return weights / weights.sum()


def thermal_density(nbar: float, cutoff: int) -> DensityMatrix:
    """Single-mode Boltzmann-weighted diagonal state with mean occupation nbar"""
    return DensityMatrix(
        matrix=np.diag(_thermal_populations(nbar, cutoff)).astype(np.complex128), cutoff=cutoff
    )


def williamson(covariance: NDArray[np.float64]) -> Tuple[NDArray[np.float64], NDArray[np.float64]]:
    """
    Williamson normal form V = S·diag(ν, ν)·Sᵀ in block ordering

    Returns:
        (nu, S): symplectic eigenvalues ν_j (≥ ½ for physical V) and a symplectic S

    Raises:
        UnphysicalStateError: If V is not positive definite
    """
    n = covariance.shape[0] // 2
    eigenvalues, eigenvectors = np.linalg.eigh(covariance)
    if eigenvalues[0] <= 0.0:
        raise UnphysicalStateError(f"covariance is not positive definite (min eigenvalue {eigenvalues[0]:.3e})")
    root = (eigenvectors * np.sqrt(eigenvalues)) @ eigenvectors.T
    inverse_root = (eigenvectors / np.sqrt(eigenvalues)) @ eigenvectors.T

    sigma = symplectic_form(n).matrix
    generator = inverse_root @ sigma @ inverse_root
    blocks, basis = schur(0.5 * (generator - generator.T), output="real")

    rates = np.empty(n)
    for j in range(n):
        upper, lower = blocks[2 * j, 2 * j + 1], blocks[2 * j + 1, 2 * j]
        rates[j] = np.sqrt(abs(upper * lower))
        if upper < 0.0:
            basis[:, [2 * j, 2 * j + 1]] = basis[:, [2 * j + 1, 2 * j]]

    # interleaved Schur pairs -> (first of each pair..., second of each pair...)
    order = [2 * j for j in range(n)] + [2 * j + 1 for j in range(n)]
    scale = np.sqrt(np.concatenate([rates, rates]))
    symplectic = root @ basis[:, order] @ np.diag(scale)
    return 1.0 / rates, symplectic


def gaussian_density(rig: FockRig, state: GaussianMomentState) -> DensityMatrix:
    """
    Density matrix of the Gaussian state with the given mean and covariance

    V = S·diag(ν)·Sᵀ is prepared as D̂(μ)·Û_O·Û_P·ρ̂_th·Û_P†·Û_O†·D̂(μ)† where
    S = O·P is the polar split, Û_O is passive (a → u·a) and Û_P is generated
    by ½ x̂ᵀG x̂ with ΣG = log P. The result is renormalized on the truncated space.

    Raises:
        DimensionMismatchError: If the state does not match the rig
        UnphysicalStateError: If V violates the uncertainty relation
    """
    n = rig.n_modes
    if state.n_modes != n:
        raise DimensionMismatchError(f"state has {state.n_modes} modes, rig has {n}")
    nu, symplectic = williamson(state.covariance)
    if np.min(nu) < 0.5 - tolerances.PHYS_TOL:
        raise UnphysicalStateError(f"symplectic eigenvalue {np.min(nu):.6f} is below 1/2")

    thermal = np.ones(1)
    for value in nu:
        thermal = np.kron(thermal, _thermal_populations(max(value - 0.5, 0.0), rig.cutoff))
    matrix = np.diag(thermal).astype(np.complex128)

    orthogonal, positive = polar(symplectic)
    sigma = symplectic_form(n).matrix
    weights, vectors = np.linalg.eigh(symmetrize(positive))
    log_positive = (vectors * np.log(weights)) @ vectors.T
    squeezer = expm(-1j * _quadratic_operator(rig.quadratures, symmetrize(-sigma @ log_positive)))

    ladders = _ladders(rig)
    mixing = orthogonal[:n, :n] + 1j * orthogonal[n:, :n]
    passive_h = hermitize(1j * logm(mixing).reshape(n, n))
    passive_op = sum(passive_h[j, k] * (ladders[j].conj().T @ ladders[k]) for j in range(n) for k in range(n))
    rotation = expm(-1j * hermitize(passive_op))

    alphas = (state.mean[:n] + 1j * state.mean[n:]) / np.sqrt(2.0)
    displacement = expm(sum(alpha * a.conj().T - np.conj(alpha) * a for alpha, a in zip(alphas, ladders)))

    unitary = displacement @ rotation @ squeezer
    matrix = hermitize(unitary @ matrix @ unitary.conj().T)
    matrix = matrix / np.real(np.trace(matrix))
    return DensityMatrix(matrix=matrix, time=state.time, n_modes=n, cutoff=rig.cutoff)
