"""
Dense complex linear algebra for one- and two-qubit operators.

Matrices are plain ``numpy`` ``complex128`` arrays of size 1, 2 or 4. The
Hermitian eigensolver is a cyclic complex Jacobi iteration, which is exact
enough and simple at these sizes.
"""
import logging
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .error import DimensionMismatch, NonHermitianInput, EigenSolverDidNotConverge

log = logging.getLogger(__name__)

HERMITIAN_TOL = 1e-12
JACOBI_TOL = 1e-12
JACOBI_MAX_SWEEPS = 100
ALLOWED_SIZES = (1, 2, 4)

IDENTITY_2 = np.eye(2, dtype=complex)
IDENTITY_4 = np.eye(4, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = (PAULI_X, PAULI_Y, PAULI_Z)


def as_matrix(a, square: bool = False) -> np.ndarray:
    """
    Coerce ``a`` into a complex matrix with rows, cols in {1, 2, 4}.

    Parameters
    ----------
    a:
        Anything ``numpy.asarray`` accepts.
    square: :class:`bool`
        Whether to also require a square matrix.

    Returns
    -------
    :class:`numpy.ndarray` of dtype complex128.

    :raises: :class:`QSep.error.DimensionMismatch` on any other shape.
    """
    matrix = np.asarray(a, dtype=complex)
    if matrix.ndim != 2 or matrix.shape[0] not in ALLOWED_SIZES or matrix.shape[1] not in ALLOWED_SIZES:
        raise DimensionMismatch(f"Expected a matrix with sizes in {ALLOWED_SIZES}, got shape {matrix.shape}.")
    if square and matrix.shape[0] != matrix.shape[1]:
        raise DimensionMismatch(f"Expected a square matrix, got shape {matrix.shape}.")
    return matrix


def hermitian_deviation(a: np.ndarray) -> float:
    """Largest entry of |A - A^H|."""
    a = as_matrix(a, square=True)
    return float(np.max(np.abs(a - a.conj().T)))


def is_hermitian(a: np.ndarray, tolerance: float = HERMITIAN_TOL) -> bool:
    """Whether max |A_ij - conj(A_ji)| <= tolerance."""
    return hermitian_deviation(a) <= tolerance


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """
    Kronecker product with ``(A⊗B)[i*m + k, j*n + l] = A[i, j] * B[k, l]``.

    Parameters
    ----------
    a: :class:`numpy.ndarray`
        Left factor.
    b: :class:`numpy.ndarray`
        Right factor, of size m x n.

    Returns
    -------
    :class:`numpy.ndarray`
    """
    a = as_matrix(a)
    b = as_matrix(b)
    result = np.kron(a, b)
    if result.shape[0] not in ALLOWED_SIZES or result.shape[1] not in ALLOWED_SIZES:
        raise DimensionMismatch(f"kron of {a.shape} and {b.shape} leaves the supported sizes.")
    return result


def trace_product(a: np.ndarray, b: np.ndarray) -> complex:
    """
    Tr(AB) = sum_ij A_ij B_ji.

    For Hermitian A and B the imaginary part is rounding noise; it is returned
    untouched so callers can report it.

    :raises: :class:`QSep.error.DimensionMismatch` if the matrices are not square of one size.
    """
    a = as_matrix(a, square=True)
    b = as_matrix(b, square=True)
    if a.shape != b.shape:
        raise DimensionMismatch(f"trace_product needs equal shapes, got {a.shape} and {b.shape}.")
    return complex(np.einsum("ij,ji->", a, b))


def partial_transpose_second(rho: np.ndarray) -> np.ndarray:
    r"""
    Transpose on the second qubit: :math:`|i\rangle\langle j|\otimes|k\rangle\langle l| \mapsto
    |i\rangle\langle j|\otimes|l\rangle\langle k|`.

    Each 2x2 block of the 4x4 matrix is transposed in place; the map is
    involutive and preserves the trace and Hermiticity.

    :raises: :class:`QSep.error.DimensionMismatch` unless ``rho`` is 4x4.
    """
    rho = as_matrix(rho, square=True)
    if rho.shape != (4, 4):
        raise DimensionMismatch(f"partial_transpose_second needs a 4x4 matrix, got {rho.shape}.")
    # rho[(i, k), (j, l)] -> rho[(i, l), (j, k)]
    return rho.reshape(2, 2, 2, 2).transpose(0, 3, 2, 1).reshape(4, 4).copy()


@dataclass(frozen=True)
class HermitianSpectrum:
    r"""
    Eigen-decomposition of a Hermitian matrix.

    Attributes
    ----------
    eigenvalues: :class:`numpy.ndarray`
        Real eigenvalues sorted descending.
    eigenvectors: :class:`numpy.ndarray`
        Unit eigenvectors as columns, in the order of ``eigenvalues``.
    sweeps: :class:`int`
        Jacobi sweeps used.
    symmetrization_residual: :class:`float`
        max |H - H^H| of the input before it was symmetrised.
    """
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray = field(repr=False)
    sweeps: int = 0
    symmetrization_residual: float = 0.0

    @property
    def symmetrized(self) -> bool:
        """Whether symmetrisation changed the input by more than the Hermitian tolerance."""
        return self.symmetrization_residual > HERMITIAN_TOL

    @property
    def minimum(self) -> float:
        return float(self.eigenvalues[-1])

    @property
    def maximum(self) -> float:
        return float(self.eigenvalues[0])

    def __len__(self):
        return len(self.eigenvalues)


def _off_diagonal_norm(a: np.ndarray) -> float:
    off = a - np.diag(np.diag(a))
    return float(np.sqrt(np.sum(np.abs(off) ** 2)))


def _rotation(a: np.ndarray, p: int, q: int) -> Optional[np.ndarray]:
    """Unitary that zeroes a[p, q]: a phase on q makes the entry real, then a real Jacobi rotation."""
    apq = a[p, q]
    magnitude = abs(apq)
    if magnitude == 0.0:
        return None
    phase = apq / magnitude
    theta = (a[q, q].real - a[p, p].real) / (2.0 * magnitude)
    t = (1.0 if theta >= 0.0 else -1.0) / (abs(theta) + np.sqrt(theta * theta + 1.0))
    c = 1.0 / np.sqrt(t * t + 1.0)
    s = t * c
    g = np.eye(a.shape[0], dtype=complex)
    g[p, p] = c
    g[p, q] = s
    g[q, p] = -s * np.conj(phase)
    g[q, q] = c * np.conj(phase)
    return g


def hermitian_eigenvalues(h: np.ndarray, tolerance: float = HERMITIAN_TOL,
                          max_sweeps: int = JACOBI_MAX_SWEEPS) -> HermitianSpectrum:
    r"""
    Eigenvalues (descending) and eigenvectors of a Hermitian matrix by cyclic Jacobi rotations.

    The input is symmetrised as :math:`(H + H^\dagger)/2` first. Sweeps run
    until the off-diagonal Frobenius norm is at most 1e-12 (relative to the
    norm of ``h`` when that exceeds one).

    Parameters
    ----------
    h: :class:`numpy.ndarray`
        Hermitian matrix of size 1, 2 or 4.
    tolerance: :class:`float`
        Largest accepted max |H - H^H|.
    max_sweeps: :class:`int`
        Sweep budget.

    Returns
    -------
    :class:`HermitianSpectrum`

    :raises: :class:`QSep.error.NonHermitianInput` if ``h`` is not Hermitian within ``tolerance``.
    :raises: :class:`QSep.error.EigenSolverDidNotConverge` if the sweep budget runs out.
    """
    h = as_matrix(h, square=True)
    residual = hermitian_deviation(h)
    if residual > tolerance:
        raise NonHermitianInput(residual, tolerance)
    if residual > HERMITIAN_TOL:
        log.warning("Symmetrised a matrix with Hermitian residual %.3e.", residual)

    a = 0.5 * (h + h.conj().T)
    n = a.shape[0]
    vectors = np.eye(n, dtype=complex)
    threshold = JACOBI_TOL * max(1.0, float(np.linalg.norm(a)))

    sweeps = 0
    off = _off_diagonal_norm(a)
    while off > threshold:
        if sweeps >= max_sweeps:
            log.warning("Jacobi iteration stopped at the sweep cap with off-diagonal norm %.3e.", off)
            raise EigenSolverDidNotConverge(sweeps, off)
        for p in range(n - 1):
            for q in range(p + 1, n):
                g = _rotation(a, p, q)
                if g is None:
                    continue
                a = g.conj().T @ a @ g
                vectors = vectors @ g
        a = 0.5 * (a + a.conj().T)
        sweeps += 1
        off = _off_diagonal_norm(a)

    values = np.real(np.diag(a)).copy()
    order = np.argsort(-values, kind="stable")
    log.debug("Jacobi converged in %d sweeps.", sweeps)
    return HermitianSpectrum(eigenvalues=values[order], eigenvectors=vectors[:, order],
                             sweeps=sweeps, symmetrization_residual=residual)
