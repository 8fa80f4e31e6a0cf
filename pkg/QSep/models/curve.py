from dataclasses import dataclass
from enum import Enum
from typing import Iterator, List, NamedTuple, Optional, Tuple

import numpy as np

from . import BaseModel
from .enums import Mode
from ..error import InsufficientCurve, MalformedInput

MIN_CURVE_POINTS = 8


class PairGeometry(Enum):
    """Where a fixed-relative-angle pair of directions lives."""
    SPHERE = "sphere"
    PLANE = "plane"


@dataclass(frozen=True, eq=False)
class DirectionPair:
    r"""
    A batch of direction pairs with one fixed relative angle.

    Attributes
    ----------
    geometry: :class:`PairGeometry`
        SPHERE: ``first``/``second`` are unit vectors of shape (n, 3) with n₁·n₂ = ``relative``.
        PLANE: ``first``/``second`` are polarizer angles of shape (n,) with cos(θ_a − θ_b) = ``relative``.
    first: :class:`numpy.ndarray`
    second: :class:`numpy.ndarray`
    relative: :class:`float`
        Cosine of the fixed relative angle.
    """
    geometry: PairGeometry
    first: np.ndarray
    second: np.ndarray
    relative: float

    def __len__(self):
        return len(self.first)

    def constraint_residual(self) -> float:
        """Largest deviation of a pair from its fixed relative angle."""
        if self.geometry is PairGeometry.SPHERE:
            actual = np.einsum("ij,ij->i", self.first, self.second)
        else:
            actual = np.cos(self.first - self.second)
        return float(np.max(np.abs(actual - self.relative)))


@dataclass(frozen=True)
class McEstimate:
    """
    A Monte Carlo mean with its standard error.

    Attributes
    ----------
    mean: :class:`float`
    stderr: :class:`float`
        Sample standard deviation over sqrt(samples).
    samples: :class:`int`
    seed: :class:`int`
        The 64-bit stream key the estimate was drawn with.
    """
    mean: float
    stderr: float
    samples: int
    seed: int

    def __post_init__(self):
        if self.stderr < 0.0 or self.samples < 2:
            raise MalformedInput(f"Invalid estimate: stderr={self.stderr}, samples={self.samples}.")

    def agrees_with(self, value: float, sigmas: float = 4.0, floor: float = 1e-12) -> bool:
        """Whether ``value`` lies within ``sigmas`` standard errors (or ``floor``) of the mean."""
        return abs(self.mean - value) <= max(sigmas * self.stderr, floor)


class CorrelationCurve(BaseModel):
    r"""
    A sampled function φ ↦ value, optionally with per-point standard errors.

    Inherits from :class:`BaseModel`

    .. container:: operations

        .. describe:: len(x)

            Returns the number of points.

        .. describe:: iter(x)

            Iterates (phi, value, stderr-or-None) triples.

    Parameters
    ----------
    name: :class:`str`
        The series name written to CSV.
    mode: :class:`Mode`
        The averaging protocol the values belong to. EXTERNAL curves (published fits) are accepted
        by every band check.
    phis: Sequence[:class:`float`]
        Strictly increasing angles in radians.
    values: Sequence[:class:`float`]
    stderrs: Optional[Sequence[:class:`float`]]

    :raises: :class:`QSep.error.InsufficientCurve` on fewer than 8 points or non-increasing angles.
    """
    def __init__(self, name: str, mode: Mode, phis, values, stderrs=None):
        super().__init__(name)
        self.mode: Mode = Mode.parse(mode)
        self.phis: np.ndarray = np.array(phis, dtype=float).reshape(-1)
        self.values: np.ndarray = np.array(values, dtype=float).reshape(-1)
        self.stderrs: Optional[np.ndarray] = None if stderrs is None else \
            np.array(stderrs, dtype=float).reshape(-1)

        if self.values.shape != self.phis.shape or (self.stderrs is not None and self.stderrs.shape != self.phis.shape):
            raise InsufficientCurve("Curve angles, values and errors must have the same length.")
        if len(self.phis) < MIN_CURVE_POINTS:
            raise InsufficientCurve(f"A curve needs at least {MIN_CURVE_POINTS} points, got {len(self.phis)}.")
        if np.any(np.diff(self.phis) <= 0.0):
            raise InsufficientCurve("Curve angles must be strictly increasing.")
        for array in (self.phis, self.values, self.stderrs):
            if array is not None:
                array.setflags(write=False)

    def __len__(self):
        return len(self.phis)

    def __iter__(self) -> Iterator[Tuple[float, float, Optional[float]]]:
        for index, phi in enumerate(self.phis):
            stderr = None if self.stderrs is None else float(self.stderrs[index])
            yield float(phi), float(self.values[index]), stderr

    @property
    def points(self) -> List[Tuple[float, float, Optional[float]]]:
        return list(self)

    @property
    def span(self) -> float:
        return float(self.phis[-1] - self.phis[0])

    @property
    def has_errors(self) -> bool:
        return self.stderrs is not None

    @classmethod
    def from_function(cls, name: str, mode: Mode, phis, function) -> "CorrelationCurve":
        """Samples ``function`` (vectorised over numpy arrays) on ``phis``."""
        phis = np.asarray(phis, dtype=float)
        return cls(name, mode, phis, np.broadcast_to(function(phis), phis.shape))

    def renamed(self, name: str) -> "CorrelationCurve":
        return CorrelationCurve(name, self.mode, self.phis, self.values, self.stderrs)

    def to_dict(self) -> dict:
        return {"name": self.name, "mode": self.mode.value,
                "phis": self.plain(self.phis), "values": self.plain(self.values),
                "stderrs": None if self.stderrs is None else self.plain(self.stderrs)}


@dataclass(frozen=True)
class FourierFit:
    """
    Least-squares fit value ≈ constant + amplitude·cos(kφ) [+ sine·sin(kφ)].

    Unpacks as ``constant, amplitude, residual_rms``.

    Attributes
    ----------
    constant: :class:`float`
    amplitude: :class:`float`
    residual_rms: :class:`float`
        RMS of value − fit over the grid.
    harmonic: :class:`int`
    sine: Optional[:class:`float`]
        Coefficient of sin(kφ) when it was part of the model.
    constant_stderr: :class:`float`
    amplitude_stderr: :class:`float`
    sine_stderr: Optional[:class:`float`]
    noise_rms: :class:`float`
        RMS of the per-point standard errors (0 for noiseless curves).
    """
    constant: float
    amplitude: float
    residual_rms: float
    harmonic: int
    sine: Optional[float] = None
    constant_stderr: float = 0.0
    amplitude_stderr: float = 0.0
    sine_stderr: Optional[float] = None
    noise_rms: float = 0.0

    def __iter__(self):
        return iter((self.constant, self.amplitude, self.residual_rms))


class ExperimentCurve(BaseModel):
    r"""
    A published fitted correlation curve c₀ + A·cos(kφ).

    Inherits from :class:`BaseModel`

    .. container:: operations

        .. describe:: x(phi)

            Evaluates the curve at ``phi`` (scalar or array).

    Parameters
    ----------
    name: :class:`str`
        Identifier, e.g. ``aspect-1981-c``.
    constant: :class:`float`
    amplitude: :class:`float`
        Must satisfy |A| <= 1.
    harmonic: :class:`int`
        1 or 2.
    source: :class:`str`
        Citation tag.
    """
    def __init__(self, name: str, constant: float, amplitude: float, harmonic: int, source: str = ""):
        super().__init__(name)
        if harmonic not in (1, 2):
            raise MalformedInput(f"Harmonic must be 1 or 2, got {harmonic!r}.")
        if abs(amplitude) > 1.0:
            raise MalformedInput(f"Experimental amplitude must satisfy |A| <= 1, got {amplitude!r}.")
        self.constant: float = float(constant)
        self.amplitude: float = float(amplitude)
        self.harmonic: int = int(harmonic)
        self.source: str = source

    def __call__(self, phi):
        return self.constant + self.amplitude * np.cos(self.harmonic * np.asarray(phi, dtype=float))

    def to_curve(self, phis, mode: Mode = Mode.EXTERNAL) -> CorrelationCurve:
        """Samples the fitted form on ``phis``; no per-point errors are attached."""
        return CorrelationCurve.from_function(self.name, mode, phis, self)

    def to_dict(self) -> dict:
        return {"name": self.name, "constant": self.constant, "amplitude": self.amplitude,
                "harmonic": self.harmonic, "source": self.source}


class FigureData(NamedTuple):
    """
    Curves and verdict of one reproduced comparison figure.

    Unpacks as ``curves, verdict``.
    """
    curves: List[CorrelationCurve]
    verdict: "Verdict"
    index: int = 0
    report: Optional["BandCheckReport"] = None
