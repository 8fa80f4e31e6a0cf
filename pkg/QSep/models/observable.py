import numpy as np

from . import BaseModel
from ..error import NonHermitianInput, DimensionMismatch
from ..linalg import as_matrix, hermitian_deviation, HERMITIAN_TOL, PAULI

PROJECTOR_TOL = 1e-12


class Observable(BaseModel):
    r"""
    A single-qubit Hermitian observable (a projector, a spin component a·σ, the identity, ...).

    Inherits from :class:`BaseModel`

    .. container:: operations

        .. describe:: x + y

            Sum of two observables.

        .. describe:: c * x

            Observable scaled by a real number.

        .. describe:: str(x)

            Returns the observable's label.

    Parameters
    ----------
    matrix: :class:`numpy.ndarray`
        2x2 Hermitian matrix.
    label: :class:`str`
        Descriptive tag, e.g. ``P(theta=0.785)``.

    Attributes
    ----------
    matrix: :class:`numpy.ndarray`
        Read-only complex128 copy of the matrix.
    label: :class:`str`
        Descriptive tag.

    :raises: :class:`QSep.error.NonHermitianInput` if the matrix is not Hermitian within 1e-12.
    """
    def __init__(self, matrix, label: str = "observable"):
        super().__init__(label)
        matrix = as_matrix(matrix, square=True).copy()
        if matrix.shape != (2, 2):
            raise DimensionMismatch(f"A single-qubit observable is 2x2, got {matrix.shape}.")
        deviation = hermitian_deviation(matrix)
        if deviation > HERMITIAN_TOL:
            raise NonHermitianInput(deviation, HERMITIAN_TOL)
        matrix.setflags(write=False)
        self.matrix: np.ndarray = matrix

    @property
    def label(self) -> str:
        return self.name

    @property
    def is_projector(self) -> bool:
        """Whether P² = P within 1e-12 entrywise."""
        return bool(np.max(np.abs(self.matrix @ self.matrix - self.matrix)) <= PROJECTOR_TOL)

    @property
    def bloch_components(self) -> np.ndarray:
        """(c0, c1, c2, c3) with matrix = (c0 + c·σ)/2."""
        c0 = float(np.real(np.trace(self.matrix)))
        return np.array([c0] + [float(np.real(np.trace(self.matrix @ sigma))) for sigma in PAULI])

    def __add__(self, other: "Observable") -> "Observable":
        return Observable(self.matrix + other.matrix, f"{self.label}+{other.label}")

    def __mul__(self, scalar: float) -> "Observable":
        return Observable(float(scalar) * self.matrix, f"{scalar:g}*{self.label}")

    __rmul__ = __mul__
