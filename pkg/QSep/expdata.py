"""
Published correlation curves and the figures that compare them with the separable bands.

Curves are noiseless fitted forms; the absolute tolerance floors of
:func:`QSep.criteria.band_check` apply to them.
"""
import csv
import io
import logging
from typing import Iterable, List, Optional, TextIO, Union

import numpy as np

from .criteria import band_check, G_TOL
from .error import ZeroReferenceRate, NegativeRate, UnknownFigure, InvalidRunConfig
from .models import ExperimentCurve, CorrelationCurve, FigureData, Mode, Verdict
from .models.config import MIN_GRID

log = logging.getLogger(__name__)

CSV_HEADER = ("phi_rad", "value", "stderr", "series")

# polarizer transmissions (parallel, crossed) and the detector overlap correction
ASPECT_EFFICIENCIES = ((0.971, 0.029), (0.968, 0.028))
ASPECT_OVERLAP = 0.984


def aspect_g_curve() -> ExperimentCurve:
    """G(φ) measured with linear polarizers on calcium cascade photons: A·cos 2φ with A = 0.87131."""
    (t1, e1), (t2, e2) = ASPECT_EFFICIENCIES
    amplitude = (t1 - e1) * (t2 - e2) * ASPECT_OVERLAP
    return ExperimentCurve("aspect_g", 0.0, amplitude, 2, source="aspect-1981-g")


def aspect_c_curve() -> ExperimentCurve:
    """The same experiment as a normalised coincidence curve, 0.996 + 0.88 cos 2φ."""
    return ExperimentCurve("aspect_c", 0.996, 0.88, 2, source="aspect-1981-c")


def sakai_curve() -> ExperimentCurve:
    """Proton spin correlation with randomly rotated analysers, −cos φ."""
    return ExperimentCurve("sakai", 0.0, -1.0, 1, source="sakai-2006")


def scalar_curve() -> ExperimentCurve:
    """Quantum prediction for the scalar photon pair behind linear polarizers, 1 + cos 2φ."""
    return ExperimentCurve("scalar", 1.0, 1.0, 2, source="prediction")


def pseudoscalar_curve() -> ExperimentCurve:
    """Quantum prediction for the pseudo-scalar photon pair behind linear polarizers, 1 − cos 2φ."""
    return ExperimentCurve("pseudoscalar", 1.0, -1.0, 2, source="prediction")


def _check_rate(name: str, value) -> None:
    if np.any(np.asarray(value, dtype=float) < 0.0):
        raise NegativeRate(name, value)


def raw_rates_to_g(r_phi, r1: float, r2: float, r0: float):
    """
    G(φ) = 4[R(φ)/R₀ − R₁R₂/R₀²] from coincidence and single rates.

    Rates are counts per unit time; the units cancel.

    Parameters
    ----------
    r_phi: Union[:class:`float`, :class:`numpy.ndarray`]
        Coincidence rate with both polarizers in, at relative angle φ.
    r1: :class:`float`
        Coincidence rate with only the first polarizer in.
    r2: :class:`float`
        Coincidence rate with only the second polarizer in.
    r0: :class:`float`
        Coincidence rate with both polarizers removed.

    :raises: :class:`QSep.error.ZeroReferenceRate` if R₀ is zero.
    :raises: :class:`QSep.error.NegativeRate` if a rate is negative.
    """
    for name, value in (("R(phi)", r_phi), ("R1", r1), ("R2", r2), ("R0", r0)):
        _check_rate(name, value)
    if r0 == 0:
        raise ZeroReferenceRate()
    return 4.0 * (np.asarray(r_phi, dtype=float) / r0 - r1 * r2 / (r0 * r0))


def rates_from_g(curve: ExperimentCurve, phis, r1_ratio: float = 0.5, r2_ratio: float = 0.5) -> CorrelationCurve:
    """
    R(φ)/R₀ = G(φ)/4 + (R₁/R₀)(R₂/R₀), the inverse of :func:`raw_rates_to_g`.

    Returns
    -------
    :class:`QSep.models.CorrelationCurve`
        EXTERNAL curve named ``<curve>_rate``.
    """
    _check_rate("R1/R0", r1_ratio)
    _check_rate("R2/R0", r2_ratio)
    phis = np.asarray(phis, dtype=float)
    values = curve(phis) / 4.0 + r1_ratio * r2_ratio
    return CorrelationCurve(f"{curve.name}_rate", Mode.EXTERNAL, phis, values)


def figure_grid(index: int, grid: int) -> np.ndarray:
    """[0, π/2] for the polarizer figures (half a period of cos 2φ), [0, π] for the spin figure."""
    upper = np.pi if index == 2 else np.pi / 2.0
    return np.linspace(0.0, upper, grid)


def _band(mode: Mode, phis: np.ndarray) -> List[CorrelationCurve]:
    envelope = mode.coefficient * np.abs(np.cos(mode.harmonic * phis))
    return [CorrelationCurve("band_upper", Mode.EXTERNAL, phis, mode.offset + envelope),
            CorrelationCurve("band_lower", Mode.EXTERNAL, phis, mode.offset - envelope)]


def reproduce_figure(index: int, grid: int = 64) -> FigureData:
    """
    Curves and verdict of one comparison figure.

    1. The measured G(φ) against the zero line every product pure state must follow.
    2. The proton spin correlation against the spin band ±(1/3)|cos φ|.
    3. The photon coincidence curve against the polarizer band 1 ± (1/2)|cos 2φ|.

    Parameters
    ----------
    index: :class:`int`
        1, 2 or 3.
    grid: :class:`int`
        Number of angles, at least 32.

    Returns
    -------
    :class:`QSep.models.FigureData`

    :raises: :class:`QSep.error.UnknownFigure` for other indices.
    """
    if index not in (1, 2, 3):
        raise UnknownFigure(index)
    if grid < MIN_GRID:
        raise InvalidRunConfig(f"The grid needs at least {MIN_GRID} points, got {grid}.")
    phis = figure_grid(index, grid)

    if index == 1:
        curve = aspect_g_curve().to_curve(phis)
        zero = CorrelationCurve("zero", Mode.EXTERNAL, phis, np.zeros_like(phis))
        statistic = float(np.max(np.abs(curve.values)))
        verdict = Verdict.judge("pure_state_g", statistic, bound=0.0, margin=statistic, tolerance=G_TOL,
                                details={"source": "aspect-1981-g", "grid": grid})
        return FigureData([curve, zero], verdict, index)

    experiment, mode = (sakai_curve(), Mode.SPIN) if index == 2 else (aspect_c_curve(), Mode.PHOTON_GEOMETRIC)
    curve = experiment.to_curve(phis)
    report = band_check(curve, mode)
    log.info("Figure %d: %s", index, report)
    return FigureData([curve] + _band(mode, phis), report.verdict, index, report)


def format_number(value: Optional[float]) -> str:
    return "" if value is None else format(float(value), ".9g")


def write_curves_csv(curves: Iterable[CorrelationCurve], stream: TextIO) -> None:
    """Writes ``phi_rad,value,stderr,series`` rows; stderr is empty for noiseless curves."""
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for curve in curves:
        for phi, value, stderr in curve:
            writer.writerow((format_number(phi), format_number(value), format_number(stderr), curve.name))


def curves_to_csv(curves: Iterable[CorrelationCurve]) -> str:
    buffer = io.StringIO()
    write_curves_csv(curves, buffer)
    return buffer.getvalue()


def write_table_csv(header, rows, stream: TextIO, footer: Union[dict, None] = None) -> None:
    """Writes a numeric table; ``footer`` entries become ``# name=value`` lines after the rows."""
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_number(value) for value in row])
    for name, value in (footer or {}).items():
        stream.write(f"# threshold {name}={format_number(value)}\n")
