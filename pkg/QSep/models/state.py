from dataclasses import dataclass, field
from typing import Optional, Tuple, Union

import numpy as np

from . import BaseModel
from .enums import EnsembleMode, NamedState
from ..error import (NonUnitVector, InvalidDensityMatrix, UnnormalizedWeights, InvalidWernerParameter,
                     DimensionMismatch, MalformedInput)
from ..linalg import HermitianSpectrum, hermitian_deviation, hermitian_eigenvalues, as_matrix

UNIT_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_TOL = 1e-10
WEIGHT_TOL = 1e-12


def spherical_to_cartesian(theta, phi) -> np.ndarray:
    """(sin θ cos φ, sin θ sin φ, cos θ); broadcasts over arrays, last axis is the vector."""
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    return np.stack([np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)], axis=-1)


@dataclass(frozen=True)
class UnitVector3:
    r"""
    A direction in three dimensions, in the (σ¹, σ², σ³) frame of the Pauli matrices.

    .. container:: operations

        .. describe:: -x

            Returns the opposite direction.

    Parameters
    ----------
    x: :class:`float`
    y: :class:`float`
    z: :class:`float`

    :raises: :class:`QSep.error.NonUnitVector` if x² + y² + z² differs from 1 by more than 1e-12.
    """
    x: float
    y: float
    z: float

    def __post_init__(self):
        norm_sq = self.x * self.x + self.y * self.y + self.z * self.z
        if not np.isfinite(norm_sq) or abs(norm_sq - 1.0) > UNIT_TOL:
            raise NonUnitVector(float(np.sqrt(norm_sq)) if np.isfinite(norm_sq) else norm_sq)

    @classmethod
    def of(cls, vector) -> "UnitVector3":
        """Builds a unit vector from a length-3 sequence, without renormalising."""
        values = np.asarray(vector, dtype=float).reshape(-1)
        if values.size != 3:
            raise DimensionMismatch(f"A direction needs 3 components, got {values.size}.")
        return cls(float(values[0]), float(values[1]), float(values[2]))

    @classmethod
    def normalized(cls, vector) -> "UnitVector3":
        """Builds a unit vector from any non-zero length-3 sequence by scaling it."""
        values = np.asarray(vector, dtype=float).reshape(-1)
        norm = float(np.linalg.norm(values))
        if values.size != 3 or norm == 0.0:
            raise NonUnitVector(norm)
        values = values / norm
        return cls(float(values[0]), float(values[1]), float(values[2]))

    @classmethod
    def from_spherical(cls, theta: float, phi: float) -> "UnitVector3":
        """Polar angle θ from the σ³ axis, azimuth φ from σ¹ towards σ²."""
        return cls.normalized(spherical_to_cartesian(theta, phi))

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z], dtype=float)

    def dot(self, other: "UnitVector3") -> float:
        return float(self.x * other.x + self.y * other.y + self.z * other.z)

    def __neg__(self):
        return UnitVector3(-self.x, -self.y, -self.z)


@dataclass(frozen=True, eq=False)
class QubitState:
    r"""
    A single-qubit pure state written in the (|+⟩, |−⟩) = (|H⟩, |V⟩) basis.

    Parameters
    ----------
    amplitudes: :class:`numpy.ndarray`
        Two complex amplitudes of unit norm.

    :raises: :class:`QSep.error.NonUnitVector` if the norm differs from 1 by more than 1e-12.
    """
    amplitudes: np.ndarray

    def __post_init__(self):
        amplitudes = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if amplitudes.size != 2:
            raise DimensionMismatch(f"A qubit state needs 2 amplitudes, got {amplitudes.size}.")
        norm = float(np.linalg.norm(amplitudes))
        if abs(norm - 1.0) > UNIT_TOL:
            raise NonUnitVector(norm)
        amplitudes.setflags(write=False)
        object.__setattr__(self, "amplitudes", amplitudes)

    def projector(self) -> np.ndarray:
        r""":math:`|\psi\rangle\langle\psi|` as a 2x2 matrix."""
        return np.outer(self.amplitudes, self.amplitudes.conj())

    def bloch_vector(self) -> np.ndarray:
        """(⟨σ¹⟩, ⟨σ²⟩, ⟨σ³⟩) of the state."""
        a, b = self.amplitudes
        cross = 2.0 * np.conj(a) * b
        return np.array([cross.real, cross.imag, abs(a) ** 2 - abs(b) ** 2], dtype=float)

    def with_fixed_phase(self) -> "QubitState":
        """The same ray with its first non-zero amplitude made real and non-negative."""
        for amplitude in self.amplitudes:
            if abs(amplitude) > UNIT_TOL:
                return QubitState(self.amplitudes * (abs(amplitude) / amplitude))
        return self

    def overlap(self, other: "QubitState") -> complex:
        r""":math:`\langle self|other\rangle`."""
        return complex(np.vdot(self.amplitudes, other.amplitudes))


class DensityMatrix(BaseModel):
    r"""
    A two-qubit state: a Hermitian, trace-one, positive semidefinite 4x4 matrix.

    Inherits from :class:`BaseModel`

    .. warning:: It is not suggested to create a DensityMatrix from a raw array unless it comes
        from outside; use the constructors in :mod:`QSep.states` or :func:`QSep.objects.create_state`.

    .. container:: operations

        .. describe:: str(x)

            Returns the state's label.

        .. describe:: len(x)

            Returns the dimension (4).

    Parameters
    ----------
    matrix: :class:`numpy.ndarray`
        The 4x4 matrix, row-major in the left⊗right basis.
    label: Optional[:class:`str`]
        A descriptive name.

    Attributes
    ----------
    matrix: :class:`numpy.ndarray`
        Read-only complex128 copy of the input.
    label: :class:`str`
        The descriptive name.

    :raises: :class:`QSep.error.InvalidDensityMatrix` if an invariant fails.
    """
    def __init__(self, matrix, label: Optional[str] = None):
        super().__init__(label or "rho")
        matrix = as_matrix(matrix, square=True).copy()
        if matrix.shape != (4, 4):
            raise DimensionMismatch(f"A two-qubit density matrix is 4x4, got {matrix.shape}.")
        deviation = hermitian_deviation(matrix)
        if deviation > UNIT_TOL:
            raise InvalidDensityMatrix(f"Density matrix is not Hermitian (residual {deviation:.3e}).")
        trace = complex(np.trace(matrix))
        if abs(trace - 1.0) > TRACE_TOL:
            raise InvalidDensityMatrix(f"Density matrix trace is {trace.real:.15g}, expected 1.")
        matrix.setflags(write=False)
        self.matrix: np.ndarray = matrix
        self._spectrum: HermitianSpectrum = hermitian_eigenvalues(matrix)
        if self._spectrum.minimum < -PSD_TOL:
            raise InvalidDensityMatrix(
                f"Density matrix is not positive semidefinite (minimum eigenvalue {self._spectrum.minimum:.3e}).")

    def __len__(self):
        return self.matrix.shape[0]

    @property
    def label(self) -> str:
        return self.name

    @property
    def spectrum(self) -> HermitianSpectrum:
        return self._spectrum

    @property
    def largest_eigenvalue(self) -> float:
        return self._spectrum.maximum

    @property
    def purity(self) -> float:
        """Tr ρ²."""
        return float(np.real(np.trace(self.matrix @ self.matrix)))

    def to_dict(self) -> dict:
        return {"label": self.label,
                "matrix": [[[float(entry.real), float(entry.imag)] for entry in row] for row in self.matrix]}


@dataclass(frozen=True)
class EnsembleEntry:
    """
    One product component of a separable ensemble.

    Attributes
    ----------
    weight: :class:`float`
        Non-negative mixing weight.
    left: Union[:class:`UnitVector3`, Tuple[:class:`float`, :class:`float`]]
        Bloch vector (spin mode) or Bloch angles (θ, φ) of |θ/2, φ⟩ (photon mode).
    right: Union[:class:`UnitVector3`, Tuple[:class:`float`, :class:`float`]]
        Same for the second particle.
    """
    weight: float
    left: Union[UnitVector3, Tuple[float, float]]
    right: Union[UnitVector3, Tuple[float, float]]


class EnsembleSpec(BaseModel):
    r"""
    A finite separable mixture :math:`\sum_k w_k |a_k\rangle\langle a_k| \otimes |b_k\rangle\langle b_k|`.

    Inherits from :class:`BaseModel`

    Parameters
    ----------
    mode: :class:`EnsembleMode`
        SPIN (entries hold Bloch vectors) or PHOTON (entries hold Bloch angles (θ, φ)).
    entries: Sequence[:class:`EnsembleEntry`]
        The components.

    Attributes
    ----------
    mode: :class:`EnsembleMode`
    entries: Tuple[:class:`EnsembleEntry`, ...]

    :raises: :class:`QSep.error.UnnormalizedWeights` if a weight is negative or the weights do not sum to 1.
    """
    def __init__(self, mode: EnsembleMode, entries, name: str = "ensemble"):
        super().__init__(name)
        self.mode: EnsembleMode = EnsembleMode.parse(mode)
        self.entries: Tuple[EnsembleEntry, ...] = tuple(self.__check_entry(entry) for entry in entries)
        if not self.entries:
            raise MalformedInput("An ensemble needs at least one entry.")
        weights = self.weights
        if np.any(weights < 0.0):
            raise UnnormalizedWeights(float(1.0 - weights.sum()), "Ensemble weights must be non-negative.")
        deficit = float(1.0 - weights.sum())
        if abs(deficit) > WEIGHT_TOL:
            raise UnnormalizedWeights(deficit)

    def __len__(self):
        return len(self.entries)

    def __check_entry(self, entry: EnsembleEntry) -> EnsembleEntry:
        if self.mode is EnsembleMode.SPIN:
            left = entry.left if isinstance(entry.left, UnitVector3) else UnitVector3.of(entry.left)
            right = entry.right if isinstance(entry.right, UnitVector3) else UnitVector3.of(entry.right)
        else:
            left = self.__angles(entry.left)
            right = self.__angles(entry.right)
        return EnsembleEntry(float(entry.weight), left, right)

    @staticmethod
    def __angles(params) -> Tuple[float, float]:
        values = np.asarray(params, dtype=float).reshape(-1)
        if values.size != 2:
            raise DimensionMismatch(f"Photon parameters are (theta, phi), got {values.size} numbers.")
        return float(values[0]), float(values[1])

    @property
    def weights(self) -> np.ndarray:
        return np.array([entry.weight for entry in self.entries], dtype=float)

    def bloch_vectors(self) -> Tuple[np.ndarray, np.ndarray]:
        """Left and right Bloch vectors, each of shape (n, 3), in the Pauli frame."""
        if self.mode is EnsembleMode.SPIN:
            left = np.array([entry.left.as_array() for entry in self.entries])
            right = np.array([entry.right.as_array() for entry in self.entries])
            return left, right
        left = np.array([entry.left for entry in self.entries])
        right = np.array([entry.right for entry in self.entries])
        return spherical_to_cartesian(left[:, 0], left[:, 1]), spherical_to_cartesian(right[:, 0], right[:, 1])

    def swapped(self) -> "EnsembleSpec":
        """The ensemble with particles 1 and 2 exchanged."""
        return EnsembleSpec(self.mode, [EnsembleEntry(e.weight, e.right, e.left) for e in self.entries],
                            name=f"{self.name}-swapped")

    def to_dict(self) -> dict:
        def params(value):
            return list(value.as_array()) if isinstance(value, UnitVector3) else list(value)
        return {"kind": "ensemble", "mode": self.mode.value,
                "entries": [{"w": e.weight, "left": params(e.left), "right": params(e.right)}
                            for e in self.entries]}


@dataclass(frozen=True)
class WernerParams:
    r"""
    Parameters of :math:`\rho_w = \frac{1-\beta}{4}\mathbf{1} + \beta|\psi\rangle\langle\psi|`.

    Attributes
    ----------
    beta: :class:`float`
        Mixing parameter in [0, 1].
    base: :class:`NamedState`
        The pure state mixed with white noise.

    :raises: :class:`QSep.error.InvalidWernerParameter` if beta is outside [0, 1].
    """
    beta: float
    base: NamedState = field(default=NamedState.SINGLET)

    def __post_init__(self):
        if not (0.0 <= self.beta <= 1.0):
            raise InvalidWernerParameter(self.beta)
        object.__setattr__(self, "base", NamedState.parse(self.base))
