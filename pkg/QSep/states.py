"""
Constructors for every state the analysis needs.

Basis convention: |+⟩ ≡ |H⟩ ≡ (1, 0), |−⟩ ≡ |V⟩ ≡ (0, 1); two-qubit indices are
left⊗right, row-major. Bloch vectors are in the (σ¹, σ², σ³) frame.
"""
from typing import Union

import numpy as np

from .error import UnknownStateKind
from .linalg import kron, IDENTITY_4
from .models import UnitVector3, QubitState, DensityMatrix, EnsembleSpec, EnsembleEntry, WernerParams, \
    NamedState, EnsembleMode, spherical_to_cartesian

_SQRT_HALF = 1.0 / np.sqrt(2.0)
_NAMED_VECTORS = {
    NamedState.SINGLET: np.array([0.0, _SQRT_HALF, -_SQRT_HALF, 0.0], dtype=complex),
    NamedState.SCALAR: np.array([_SQRT_HALF, 0.0, 0.0, _SQRT_HALF], dtype=complex),
    NamedState.PSEUDOSCALAR: np.array([0.0, _SQRT_HALF, -_SQRT_HALF, 0.0], dtype=complex),
}


def bloch_qubit(s: UnitVector3) -> QubitState:
    r"""
    The pure qubit with :math:`|s\rangle\langle s| = \frac{1}{2}(1 + s\cdot\sigma)`.

    The global phase makes the first non-zero amplitude real and non-negative.

    Parameters
    ----------
    s: :class:`QSep.models.UnitVector3`

    Returns
    -------
    :class:`QSep.models.QubitState`
    """
    if not isinstance(s, UnitVector3):
        s = UnitVector3.of(s)
    up = np.sqrt(max(0.0, (1.0 + s.z) / 2.0))
    if up < 1e-8:
        # Near the south pole the first amplitude vanishes and the second carries the ray.
        down = np.sqrt(max(0.0, (1.0 - s.z) / 2.0))
        transverse = complex(s.x, s.y)
        first = transverse.conjugate() / (2.0 * down)
        amplitudes = np.array([first, down], dtype=complex)
    else:
        amplitudes = np.array([up, complex(s.x, s.y) / (2.0 * up)], dtype=complex)
    amplitudes = amplitudes / np.linalg.norm(amplitudes)
    return QubitState(amplitudes).with_fixed_phase()


def photon_qubit(alpha: float, gamma: float) -> QubitState:
    r"""
    Single-photon polarization wavefunction :math:`\cos\alpha\, e^{-i\gamma} u_+ + \sin\alpha\, u_-`.

    The amplitudes are returned as written, with no phase normalisation.

    Parameters
    ----------
    alpha: :class:`float`
        Mixing angle between H and V, radians.
    gamma: :class:`float`
        Relative phase applied to the H component, radians.
    """
    return QubitState(np.array([np.cos(alpha) * np.exp(-1j * gamma), np.sin(alpha)], dtype=complex))


def photon_bloch_vector(theta: float, phi: float) -> UnitVector3:
    """Bloch vector of |θ/2, φ⟩: (sin θ cos φ, sin θ sin φ, cos θ)."""
    return UnitVector3.normalized(spherical_to_cartesian(theta, phi))


def photon_frame_to_pauli(n) -> UnitVector3:
    """
    Maps a photon-frame vector (H/V axis, linear ±45° axis, circular axis) to the Pauli frame.

    The photon frame orders components as (σ³, σ¹, σ²); a geometric polarizer at angle θ sits
    at (cos 2θ, sin 2θ, 0) in it.
    """
    values = np.asarray(n, dtype=float).reshape(-1)
    return UnitVector3.normalized([values[1], values[2], values[0]])


def pure_density(vector, label: str = "pure") -> DensityMatrix:
    """Density matrix of a normalised 4-component state vector."""
    vector = np.asarray(vector, dtype=complex).reshape(-1)
    vector = vector / np.linalg.norm(vector)
    return DensityMatrix(np.outer(vector, vector.conj()), label=label)


def product_density(left: QubitState, right: QubitState, label: str = "product") -> DensityMatrix:
    """:math:`|a\\rangle\\langle a| \\otimes |b\\rangle\\langle b|`."""
    return DensityMatrix(kron(left.projector(), right.projector()), label=label)


def named_two_qubit(kind: Union[NamedState, str]) -> DensityMatrix:
    r"""
    Pure density matrix of a named two-qubit state.

    SINGLET and PSEUDOSCALAR share the vector (0, 1, −1, 0)/√2 (spin ± basis vs photon HV
    basis); SCALAR is (1, 0, 0, 1)/√2.

    :raises: :class:`QSep.error.UnknownStateKind` for any other name.
    """
    kind = NamedState.parse(kind)
    vector = _NAMED_VECTORS.get(kind)
    if vector is None:
        raise UnknownStateKind(kind)
    return DensityMatrix(np.outer(vector, vector.conj()), label=kind.value)


def werner_state(params: WernerParams) -> DensityMatrix:
    r"""
    :math:`\rho_w = \frac{1-\beta}{4}\mathbf{1} + \beta|\psi\rangle\langle\psi|` over the chosen base state.

    Parameters
    ----------
    params: :class:`QSep.models.WernerParams`
    """
    base = named_two_qubit(params.base)
    matrix = (1.0 - params.beta) / 4.0 * IDENTITY_4 + params.beta * base.matrix
    return DensityMatrix(matrix, label=f"werner({params.beta:g},{params.base.value})")


def _component_state(mode: EnsembleMode, params) -> QubitState:
    if mode is EnsembleMode.SPIN:
        return bloch_qubit(params)
    theta, phi = params
    return photon_qubit(theta / 2.0, phi)


def ensemble_density(ensemble: EnsembleSpec) -> DensityMatrix:
    r"""
    :math:`\sum_k w_k\, \rho^{(1)}_k \otimes \rho^{(2)}_k` for a separable ensemble.

    The result is separable by construction. Weight validation happens when the
    :class:`QSep.models.EnsembleSpec` is built.
    """
    matrix = np.zeros((4, 4), dtype=complex)
    for entry in ensemble.entries:
        left = _component_state(ensemble.mode, entry.left)
        right = _component_state(ensemble.mode, entry.right)
        matrix += entry.weight * kron(left.projector(), right.projector())
    return DensityMatrix(matrix, label=ensemble.name)


def random_direction(rng: np.random.Generator) -> UnitVector3:
    """Uniform direction on the sphere."""
    z = rng.uniform(-1.0, 1.0)
    azimuth = rng.uniform(0.0, 2.0 * np.pi)
    radius = np.sqrt(max(0.0, 1.0 - z * z))
    return UnitVector3.normalized([radius * np.cos(azimuth), radius * np.sin(azimuth), z])


def random_ensemble(mode: Union[EnsembleMode, str], n_entries: int, rng: np.random.Generator,
                    symmetric: bool = False) -> EnsembleSpec:
    """
    A random separable ensemble with Dirichlet weights.

    Parameters
    ----------
    mode: :class:`QSep.models.EnsembleMode`
    n_entries: :class:`int`
    rng: :class:`numpy.random.Generator`
    symmetric: :class:`bool`
        Add the 1↔2 swapped copy of every entry (with the same weight), so that the
        ensemble is invariant under exchange of the particles.
    """
    mode = EnsembleMode.parse(mode)
    weights = rng.dirichlet(np.ones(n_entries))
    entries = []
    for weight in weights:
        if mode is EnsembleMode.SPIN:
            left, right = random_direction(rng), random_direction(rng)
        else:
            left = (float(np.arccos(rng.uniform(-1.0, 1.0))), float(rng.uniform(0.0, 2.0 * np.pi)))
            right = (float(np.arccos(rng.uniform(-1.0, 1.0))), float(rng.uniform(0.0, 2.0 * np.pi)))
        if symmetric:
            entries.append(EnsembleEntry(weight / 2.0, left, right))
            entries.append(EnsembleEntry(weight / 2.0, right, left))
        else:
            entries.append(EnsembleEntry(weight, left, right))
    # Dirichlet draws sum to 1 only to rounding; fold the remainder into the heaviest entry.
    total = sum(entry.weight for entry in entries)
    heaviest = max(range(len(entries)), key=lambda index: entries[index].weight)
    entries[heaviest] = EnsembleEntry(entries[heaviest].weight + (1.0 - total), entries[heaviest].left,
                                      entries[heaviest].right)
    return EnsembleSpec(mode, entries, name=f"random-{mode.value}-{n_entries}")


def random_pure_state(rng: np.random.Generator) -> DensityMatrix:
    """Haar-random two-qubit pure state (entangled with probability one)."""
    vector = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    return pure_density(vector, label="random-pure")


def random_product_state(rng: np.random.Generator) -> DensityMatrix:
    """Product of two uniformly random qubit states."""
    return product_density(bloch_qubit(random_direction(rng)), bloch_qubit(random_direction(rng)),
                           label="random-product")
