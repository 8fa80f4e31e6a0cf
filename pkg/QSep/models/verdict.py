from dataclasses import dataclass
from typing import NamedTuple, Optional, Tuple

from . import BaseModel
from .enums import Mode, Status
from .curve import FourierFit
from .state import UnitVector3


class Verdict(BaseModel):
    r"""
    Outcome of one separability criterion.

    Inherits from :class:`BaseModel`

    .. container:: operations

        .. describe:: str(x)

            Returns ``criterion: STATUS (statistic vs bound)``.

        .. describe:: bool(x)

            Whether the criterion detected inseparability.

    Parameters
    ----------
    criterion: :class:`str`
        Name of the criterion, e.g. ``ppt``.
    status: :class:`Status`
    statistic: :class:`float`
        The tested quantity.
    bound: :class:`float`
        The threshold the separable states respect.
    margin: :class:`float`
        How far the statistic is past the bound (positive means violation).
    tolerance: :class:`float`
        The margin must exceed this before the status is INSEPARABLE.
    details: Optional[:class:`dict`]
        Free-form diagnostics.

    Attributes
    ----------
    criterion: :class:`str`
    status: :class:`Status`
    statistic: :class:`float`
    bound: :class:`float`
    margin: :class:`float`
    tolerance: :class:`float`
    details: :class:`dict`
    """
    def __init__(self, criterion: str, status: Status, statistic: float, bound: float, margin: float,
                 tolerance: float = 0.0, details: Optional[dict] = None):
        super().__init__(criterion)
        self.status: Status = status
        self.statistic: float = float(statistic)
        self.bound: float = float(bound)
        self.margin: float = float(margin)
        self.tolerance: float = float(tolerance)
        self.details: dict = dict(details or {})

    @classmethod
    def judge(cls, criterion: str, statistic: float, bound: float, margin: float, tolerance: float = 0.0,
              details: Optional[dict] = None) -> "Verdict":
        """INSEPARABLE iff margin > tolerance, CONSISTENT_WITH_SEPARABLE otherwise (the bound itself included)."""
        status = Status.INSEPARABLE if margin > tolerance else Status.CONSISTENT_WITH_SEPARABLE
        return cls(criterion, status, statistic, bound, margin, tolerance, details)

    @property
    def criterion(self) -> str:
        return self.name

    @property
    def inseparable(self) -> bool:
        return self.status is Status.INSEPARABLE

    def __bool__(self):
        return self.inseparable

    def __str__(self):
        return f"{self.criterion}: {self.status.value} (statistic {self.statistic:.6g} vs bound {self.bound:.6g})"

    def to_dict(self) -> dict:
        return {"criterion": self.criterion, "status": self.status.value,
                "statistic": self.plain(self.statistic), "bound": self.plain(self.bound),
                "margin": self.plain(self.margin), "tolerance": self.plain(self.tolerance),
                "details": self.plain(self.details)}


@dataclass(frozen=True)
class BandTolerance:
    """
    Tolerances of the band checks: ``max(floor, sigmas * stderr)`` per quantity.

    Attributes
    ----------
    amplitude_floor: :class:`float`
    constant_floor: :class:`float`
    residual_floor: :class:`float`
    sigmas: :class:`float`
    """
    amplitude_floor: float = 0.01
    constant_floor: float = 0.02
    residual_floor: float = 0.02
    sigmas: float = 3.0

    @classmethod
    def exact(cls) -> "BandTolerance":
        """Round-off floors only: for noiseless analytic curves where the bound itself is the question."""
        return cls(amplitude_floor=1e-12, constant_floor=1e-9, residual_floor=1e-9)


class BandCheckReport(BaseModel):
    """
    Result of fitting a correlation curve to its separable band form.

    Inherits from :class:`BaseModel`

    Attributes
    ----------
    mode: :class:`Mode`
    constant: :class:`float`
    amplitude: :class:`float`
    residual_rms: :class:`float`
    c_bound: :class:`float`
        1/3 (sphere averages) or 1/2 (planar average).
    verdict: :class:`Verdict`
    fit: :class:`FourierFit`
    """
    def __init__(self, mode: Mode, fit: FourierFit, c_bound: float, verdict: Verdict, curve_name: str = None):
        super().__init__(curve_name or f"band-{mode.value}")
        self.mode: Mode = mode
        self.fit: FourierFit = fit
        self.constant: float = fit.constant
        self.amplitude: float = fit.amplitude
        self.residual_rms: float = fit.residual_rms
        self.c_bound: float = c_bound
        self.verdict: Verdict = verdict

    def __str__(self):
        return (f"{self.mode.value} band: constant {self.constant:.6g}, amplitude {self.amplitude:.6g} "
                f"(bound {self.c_bound:.6g}), residual {self.residual_rms:.3g} -> {self.verdict.status.value}")

    def to_dict(self) -> dict:
        return {"mode": self.mode.value, "curve": self.name, "constant": self.plain(self.constant),
                "amplitude": self.plain(self.amplitude), "residual_rms": self.plain(self.residual_rms),
                "c_bound": self.plain(self.c_bound), "amplitude_stderr": self.plain(self.fit.amplitude_stderr),
                "verdict": self.verdict.to_dict()}


class ChshSettings(NamedTuple):
    """The four measurement directions of a CHSH combination."""
    a: UnitVector3
    a_prime: UnitVector3
    b: UnitVector3
    b_prime: UnitVector3


class ChshOptimum(NamedTuple):
    """
    Best CHSH value found by coordinate ascent.

    Attributes
    ----------
    settings: :class:`ChshSettings`
    value: :class:`float`
        Largest |S| found.
    history: Tuple[:class:`float`, ...]
        S after each ascent round of the winning restart (non-decreasing).
    """
    settings: ChshSettings
    value: float
    history: Tuple[float, ...] = ()
