"""
Small dense linear-algebra helpers shared by the engines
"""
from typing import Sequence

import numpy as np
from numpy.typing import NDArray

from app.exceptions import RealCastError


def symmetrize(matrix: NDArray[np.float64]) -> NDArray[np.float64]:
    """Return (X + Xᵀ)/2, exactly symmetric"""
    return 0.5 * (matrix + matrix.T)


def hermitize(matrix: NDArray[np.complex128]) -> NDArray[np.complex128]:
    """Return (X + X†)/2, exactly Hermitian"""
    return 0.5 * (matrix + matrix.conj().T)


def max_abs(matrix: NDArray) -> float:
    """Max-norm; 0.0 for empty arrays"""
    if matrix.size == 0:
        return 0.0
    return float(np.max(np.abs(matrix)))


def asymmetry(matrix: NDArray) -> float:
    """Max-norm of X - Xᵀ"""
    return max_abs(matrix - matrix.T)


def non_hermiticity(matrix: NDArray) -> float:
    """Max-norm of X - X†"""
    return max_abs(matrix - matrix.conj().T)


def checked_real(matrix: NDArray, tol: float, what: str) -> NDArray[np.float64]:
    """
    Drop the imaginary part of a matrix that should be real

    Args:
        matrix: Possibly complex array
        tol: Largest imaginary residue allowed
        what: Name used in the error message

    Returns:
        Real part as float64

    Raises:
        RealCastError: If the imaginary residue exceeds tol
    """
    residue = max_abs(np.imag(matrix))
    if residue > tol:
        raise RealCastError(
            f"{what} has imaginary residue {residue:.3e} above {tol:.1e}; "
            f"the input is numerically inconsistent"
        )
    return np.ascontiguousarray(np.real(matrix), dtype=np.float64)



def lift(single: NDArray, mode: int, n_modes: int) -> NDArray:
    """
    Embed a single-mode operator into an n-mode tensor product

    Mode 0 is the leftmost Kronecker factor, so basis index = n_0·d^(N-1) + ... + n_{N-1}.
    """
    identity = np.eye(single.shape[0], dtype=single.dtype)
    factors: Sequence[NDArray] = [single if k == mode else identity for k in range(n_modes)]
    result = factors[0]
    for factor in factors[1:]:
        result = np.kron(result, factor)
    return result


def readonly(array: NDArray) -> NDArray:
    """Mark an array immutable and return it"""
    array.flags.writeable = False
    return array
