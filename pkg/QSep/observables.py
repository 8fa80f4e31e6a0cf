"""
Single-qubit projectors and the two-point functionals built from them.
"""
from typing import Tuple

import numpy as np

from .error import ImaginaryResidue, NonProjectorInput
from .linalg import kron, trace_product, IDENTITY_2, PAULI
from .models import DensityMatrix, Observable, UnitVector3
from .states import photon_qubit

IMAGINARY_TOL = 1e-10

IDENTITY = Observable(IDENTITY_2, "1")


def _direction(a) -> UnitVector3:
    return a if isinstance(a, UnitVector3) else UnitVector3.of(a)


def sigma_dot(a: UnitVector3) -> np.ndarray:
    """a·σ as a 2x2 matrix."""
    a = _direction(a)
    return a.x * PAULI[0] + a.y * PAULI[1] + a.z * PAULI[2]


def spin_observable(a: UnitVector3) -> Observable:
    """The spin component a·σ along a unit direction."""
    a = _direction(a)
    return Observable(sigma_dot(a), f"sigma.({a.x:.4g},{a.y:.4g},{a.z:.4g})")


def spin_projector(a: UnitVector3) -> Observable:
    """
    P(a) = (1 + a·σ)/2, the projector onto spin up along ``a``.

    :raises: :class:`QSep.error.NonUnitVector` if ``a`` is not a unit vector.
    """
    a = _direction(a)
    return Observable((IDENTITY_2 + sigma_dot(a)) / 2.0, f"P({a.x:.4g},{a.y:.4g},{a.z:.4g})")


def polarizer_geometric(theta: float) -> Observable:
    """
    Linear polarizer at angle θ: the projector onto (cos θ, sin θ).

    P(θ) and P(θ + π/2) are orthogonal complements. Its Bloch vector is
    (sin 2θ, 0, cos 2θ), the double cover that turns cos φ into cos 2φ.
    """
    return Observable(photon_qubit(theta, 0.0).projector(), f"P(theta={theta:.6g})")


def polarizer_hilbert(theta: float, phi: float) -> Observable:
    r"""
    Detector state |θ/2, φ⟩⟨θ/2, φ| reached with a rotated polarizer and a phase shifter.

    The projector is onto (cos(θ/2) e^{−iφ}, sin(θ/2)); its Bloch vector is
    (sin θ cos φ, sin θ sin φ, cos θ), i.e. n = (cos θ, sin θ cos φ, sin θ sin φ) in the
    photon frame. ``polarizer_hilbert(2θ, 0)`` is ``polarizer_geometric(θ)``.
    """
    return Observable(photon_qubit(theta / 2.0, phi).projector(), f"P(theta/2={theta / 2.0:.6g},phi={phi:.6g})")


def _expectation(rho: DensityMatrix, operator: np.ndarray) -> float:
    value = trace_product(rho.matrix, operator)
    if abs(value.imag) > IMAGINARY_TOL:
        raise ImaginaryResidue(abs(value.imag))
    return float(value.real)


def correlation(rho: DensityMatrix, a: Observable, b: Observable) -> float:
    """
    Tr ρ(A⊗B).

    :raises: :class:`QSep.error.ImaginaryResidue` if the trace has an imaginary part above 1e-10.
    """
    return _expectation(rho, kron(a.matrix, b.matrix))


def g_quantity(rho: DensityMatrix, a: Observable, b: Observable) -> float:
    """
    G = 4[Tr ρ(A⊗B) − Tr ρ(A⊗1)·Tr ρ(1⊗B)] for projectors A and B.

    Zero for every projector pair exactly when a pure state is a product state.

    :raises: :class:`QSep.error.NonProjectorInput` if A or B fails P² = P.
    """
    for observable in (a, b):
        if not observable.is_projector:
            raise NonProjectorInput(observable.label)
    joint = correlation(rho, a, b)
    left = correlation(rho, a, IDENTITY)
    right = correlation(rho, IDENTITY, b)
    return 4.0 * (joint - left * right)


def fano_decomposition(rho: DensityMatrix) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    r"""
    Local Bloch vectors and correlation tensor of a two-qubit state.

    :math:`\rho = \frac{1}{4}[1\otimes1 + r\cdot\sigma\otimes1 + 1\otimes s\cdot\sigma +
    \sum_{ij} T_{ij}\sigma_i\otimes\sigma_j]`.

    Returns
    -------
    (r, s, T): Tuple[:class:`numpy.ndarray`, :class:`numpy.ndarray`, :class:`numpy.ndarray`]
        r_i = Tr ρ(σ_i⊗1), s_j = Tr ρ(1⊗σ_j), T_ij = Tr ρ(σ_i⊗σ_j).
    """
    r = np.array([_expectation(rho, kron(sigma, IDENTITY_2)) for sigma in PAULI])
    s = np.array([_expectation(rho, kron(IDENTITY_2, sigma)) for sigma in PAULI])
    t = np.array([[_expectation(rho, kron(left, right)) for right in PAULI] for left in PAULI])
    return r, s, t
