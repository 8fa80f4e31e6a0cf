"""
Separability verdicts for two-qubit states and correlation curves.

The averaged-band criteria and the diagonal sums are necessary conditions only: a state
that passes them is reported as CONSISTENT_WITH_SEPARABLE, never as separable. Only the
partial transpose test decides separability in 2x2 dimensions.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, Optional, Union

import numpy as np
from scipy.optimize import brentq

from .averaging import make_rng, derive_point_seed, fourier_project, exact_average_curve, AVERAGED_MODES, \
    sample_sphere
from .error import NotPure, InvalidMode, ModeMismatch, TsirelsonViolation
from .linalg import partial_transpose_second, hermitian_eigenvalues
from .models import DensityMatrix, CorrelationCurve, Mode, Status, Verdict, BandTolerance, BandCheckReport, \
    UnitVector3, ChshSettings, ChshOptimum, WernerParams, NamedState
from .observables import fano_decomposition
from .states import werner_state

log = logging.getLogger(__name__)

PURITY_TOL = 1e-6
G_TOL = 1e-6
PPT_TOL = 1e-10
DIAGONAL_TOL = 1e-10
CHSH_TOL = 1e-9
CHSH_CLASSICAL_BOUND = 2.0
TSIRELSON_BOUND = 2.0 * np.sqrt(2.0)
CHSH_MAX_ROUNDS = 500
CHSH_CONVERGENCE = 1e-14


def pure_state_check(rho: DensityMatrix, n_directions: int = 512, seed: int = 42) -> Verdict:
    r"""
    Tests G(a, b) = 0 over random pairs of spin projectors P(a), P(b).

    For a pure state this is necessary and sufficient: G vanishes for every pair of
    projectors exactly when the state is a product. With P = (1 + a·σ)/2 the quantity reduces
    to :math:`G = a^T T b - (a\cdot r)(b\cdot s)`.

    Parameters
    ----------
    rho: :class:`QSep.models.DensityMatrix`
        A state whose largest eigenvalue is at least 1 − 1e−6.
    n_directions: :class:`int`
        Number of random projector pairs.
    seed: :class:`int`

    Returns
    -------
    :class:`QSep.models.Verdict`
        ``pure_state_g`` with statistic max |G|; INSEPARABLE iff it exceeds 1e−6.

    :raises: :class:`QSep.error.NotPure` for mixed states.
    """
    largest = rho.largest_eigenvalue
    if largest < 1.0 - PURITY_TOL:
        raise NotPure(largest)
    r, s, t = fano_decomposition(rho)
    rng = make_rng(seed)
    a = sample_sphere(rng, n_directions)
    b = sample_sphere(rng, n_directions)
    g = np.einsum("ij,jk,ik->i", a, t, b) - (a @ r) * (b @ s)
    best = int(np.argmax(np.abs(g)))
    statistic = float(abs(g[best]))
    return Verdict.judge("pure_state_g", statistic, bound=0.0, margin=statistic, tolerance=G_TOL,
                         details={"pairs": n_directions, "seed": seed, "a": a[best], "b": b[best],
                                  "g": float(g[best])})


def band_check(curve: CorrelationCurve, mode: Union[Mode, str],
               tolerance: Optional[BandTolerance] = None) -> BandCheckReport:
    r"""
    Fits a correlation curve to its separable band and judges the amplitude.

    .. list-table::
        :header-rows: 1

        * - mode
          - separable form
          - harmonic
        * - SPIN
          - (1/3) C cos φ
          - 1
        * - PHOTON_GEOMETRIC
          - 1 + (1/2) C cos 2φ
          - 2
        * - PHOTON_HILBERT
          - 1 + (1/3) C cos φ̃
          - 1

    with \|C\| ≤ 1 for every separable state. The constant must match the form within
    ``max(constant_floor, sigmas·stderr)`` and the residual must stay below
    ``max(residual_floor, sigmas·rms stderr)``, otherwise the verdict is MODEL_MISMATCH.
    The PHOTON_GEOMETRIC fit includes the sin 2φ term, which vanishes only for states
    symmetric under particle exchange. An amplitude exactly at the bound is CONSISTENT.

    Parameters
    ----------
    curve: :class:`QSep.models.CorrelationCurve`
        Of the same mode, or EXTERNAL.
    mode: :class:`QSep.models.Mode`
    tolerance: Optional[:class:`QSep.models.BandTolerance`]
        Defaults to 3σ with floors 0.01 (amplitude) and 0.02 (constant, residual).

    Returns
    -------
    :class:`QSep.models.BandCheckReport`

    :raises: :class:`QSep.error.ModeMismatch` if the curve belongs to another averaged mode.
    """
    mode = Mode.parse(mode)
    if mode not in AVERAGED_MODES:
        raise InvalidMode(mode)
    if curve.mode not in (mode, Mode.EXTERNAL):
        raise ModeMismatch(mode.value, curve.mode.value)
    tolerance = tolerance or BandTolerance()

    fit = fourier_project(curve, mode.harmonic, include_sine=mode is Mode.PHOTON_GEOMETRIC)
    c_bound = mode.coefficient
    tol_const = max(tolerance.constant_floor, tolerance.sigmas * fit.constant_stderr)
    tol_res = max(tolerance.residual_floor, tolerance.sigmas * fit.noise_rms)
    tol_amp = max(tolerance.amplitude_floor, tolerance.sigmas * fit.amplitude_stderr)
    statistic = abs(fit.amplitude)
    margin = statistic - c_bound
    details = {"constant": fit.constant, "expected_constant": mode.offset, "constant_tolerance": tol_const,
               "residual_rms": fit.residual_rms, "residual_tolerance": tol_res, "amplitude": fit.amplitude,
               "amplitude_stderr": fit.amplitude_stderr, "harmonic": fit.harmonic, "sine": fit.sine,
               "implied_C": fit.amplitude / c_bound}

    criterion = f"band_{mode.value}"
    if abs(fit.constant - mode.offset) > tol_const:
        details["mismatch"] = "constant"
        verdict = Verdict(criterion, Status.MODEL_MISMATCH, statistic, c_bound, margin, tol_amp, details)
    elif fit.residual_rms >= tol_res:
        details["mismatch"] = "residual"
        verdict = Verdict(criterion, Status.MODEL_MISMATCH, statistic, c_bound, margin, tol_amp, details)
    else:
        verdict = Verdict.judge(criterion, statistic, c_bound, margin, tol_amp, details)
    log.info("Band check of %s under %s: %s", curve.name, mode.value, verdict.status.value)
    return BandCheckReport(mode, fit, c_bound, verdict, curve_name=curve.name)


def ppt_check(rho: DensityMatrix) -> Verdict:
    """
    Peres test: a two-qubit state is separable iff its partial transpose has no negative eigenvalue.

    The statistic is −λ_min(ρ^T₂); INSEPARABLE iff it exceeds 1e−10. A CONSISTENT verdict
    here does mean separable.
    """
    spectrum = hermitian_eigenvalues(partial_transpose_second(rho.matrix))
    statistic = -spectrum.minimum
    return Verdict.judge("ppt", statistic, bound=0.0, margin=statistic, tolerance=PPT_TOL,
                         details={"min_eigenvalue": spectrum.minimum, "eigenvalues": spectrum.eigenvalues,
                                  "sweeps": spectrum.sweeps})


def _diagonal_verdict(criterion: str, statistic: float, terms) -> Verdict:
    return Verdict.judge(criterion, statistic, bound=1.0, margin=abs(statistic) - 1.0, tolerance=DIAGONAL_TOL,
                         details={"terms": terms})


def diagonal_sum_spin(rho: DensityMatrix) -> Verdict:
    """⟨σ¹⊗σ¹⟩ + ⟨σ²⊗σ²⟩ + ⟨σ³⊗σ³⟩ lies in [−1, 1] for separable states."""
    _, _, t = fano_decomposition(rho)
    terms = np.diag(t)
    return _diagonal_verdict("diagonal_sum_spin", float(terms.sum()), terms)


def diagonal_sum_photon(rho: DensityMatrix) -> Verdict:
    """
    ⟨σ¹⊗σ¹⟩ + ⟨σ³⊗σ³⟩ lies in [−1, 1] for separable states.

    The two linear-polarization correlations, measurable with rotated polarizers alone.
    """
    _, _, t = fano_decomposition(rho)
    terms = np.array([t[0, 0], t[2, 2]])
    return _diagonal_verdict("diagonal_sum_photon", float(terms.sum()), terms)


def _vector(value) -> np.ndarray:
    return (value if isinstance(value, UnitVector3) else UnitVector3.of(value)).as_array()


def _chsh_from_tensor(t: np.ndarray, a, a_prime, b, b_prime) -> float:
    return float(a @ t @ (b + b_prime) + a_prime @ t @ (b - b_prime))


def chsh_value(rho: DensityMatrix, a: UnitVector3, a_prime: UnitVector3, b: UnitVector3,
               b_prime: UnitVector3) -> float:
    """
    S = E(a, b) + E(a, b') + E(a', b) − E(a', b') with E(a, b) = Tr ρ(a·σ⊗b·σ).

    :raises: :class:`QSep.error.NonUnitVector` if a direction is not a unit vector.
    :raises: :class:`QSep.error.TsirelsonViolation` if |S| exceeds 2√2.
    """
    _, _, t = fano_decomposition(rho)
    value = _chsh_from_tensor(t, _vector(a), _vector(a_prime), _vector(b), _vector(b_prime))
    if abs(value) > TSIRELSON_BOUND + CHSH_TOL:
        raise TsirelsonViolation(value)
    return value


def _unit_or(target: np.ndarray, fallback: np.ndarray) -> np.ndarray:
    norm = np.linalg.norm(target)
    return fallback if norm < 1e-15 else target / norm


def _ascend(t: np.ndarray, seed: int):
    rng = make_rng(seed)
    a, a_prime, b, b_prime = sample_sphere(rng, 4)
    history = []
    best_value = _chsh_from_tensor(t, a, a_prime, b, b_prime)
    best_vectors = (a, a_prime, b, b_prime)
    for _ in range(CHSH_MAX_ROUNDS):
        a = _unit_or(t @ (b + b_prime), a)
        a_prime = _unit_or(t @ (b - b_prime), a_prime)
        b = _unit_or(t.T @ (a + a_prime), b)
        b_prime = _unit_or(t.T @ (a - a_prime), b_prime)
        gain = _chsh_from_tensor(t, a, a_prime, b, b_prime) - best_value
        # the reported S always belongs to the reported settings
        if gain > 0.0:
            best_value, best_vectors = best_value + gain, (a, a_prime, b, b_prime)
        history.append(best_value)
        if gain <= CHSH_CONVERGENCE and len(history) > 1:
            break
    return best_vectors, best_value, tuple(history)


def chsh_optimize(rho: DensityMatrix, restarts: int = 16, seed: int = 42,
                  workers: Optional[int] = None) -> ChshOptimum:
    """
    Maximises the CHSH value over the four measurement directions.

    Coordinate ascent: each of a, a', b, b' in turn is set to the unit vector that maximises S
    with the other three fixed. Restart ``i`` starts from directions drawn with
    ``derive_point_seed(seed, i)``, so the outcome does not depend on ``workers``.

    Returns
    -------
    :class:`QSep.models.ChshOptimum`
        Best settings, their S and the non-decreasing per-round history of the winning restart.
    """
    _, _, t = fano_decomposition(rho)
    seeds = [derive_point_seed(seed, index) for index in range(max(1, restarts))]
    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            runs = list(executor.map(lambda restart_seed: _ascend(t, restart_seed), seeds))
    else:
        runs = [_ascend(t, restart_seed) for restart_seed in seeds]

    vectors, value, history = max(runs, key=lambda run: run[1])
    if value > TSIRELSON_BOUND + CHSH_TOL:
        raise TsirelsonViolation(value)
    settings = ChshSettings(*(UnitVector3.normalized(vector) for vector in vectors))
    log.info("CHSH optimum of %s after %d restarts: %.9f", rho.label, len(seeds), value)
    return ChshOptimum(settings, value, history)


def chsh_check(rho: DensityMatrix, restarts: int = 16, seed: int = 42, workers: Optional[int] = None) -> Verdict:
    """
    Optimised CHSH value against the local bound 2.

    A violation rules out local hidden variables and therefore implies entanglement, but most
    entangled mixed states do not violate it.
    """
    optimum = chsh_optimize(rho, restarts, seed, workers)
    settings = {name: value.as_array() for name, value in optimum.settings._asdict().items()}
    return Verdict.judge("chsh", optimum.value, bound=CHSH_CLASSICAL_BOUND,
                         margin=optimum.value - CHSH_CLASSICAL_BOUND, tolerance=CHSH_TOL,
                         details={"settings": settings, "rounds": len(optimum.history), "restarts": restarts})


def werner_thresholds(base: Union[NamedState, str] = NamedState.SINGLET, restarts: int = 16, seed: int = 42,
                      grid: int = 64) -> Dict[str, float]:
    r"""
    Mixing parameters at which each criterion starts to detect the Werner state.

    Every threshold is a root of ``margin − tolerance`` in β, found with Brent's method.
    Over the singlet: PPT, the spin diagonal sum and the spin and Hilbert bands flip at 1/3,
    the geometric photon band at 1/2 and CHSH at 1/√2.

    Returns
    -------
    Dict[:class:`str`, :class:`float`]
    """
    base = NamedState.parse(base)
    phis = np.linspace(0.0, 2.0 * np.pi, grid, endpoint=False)
    exact = BandTolerance.exact()

    def state(beta):
        return werner_state(WernerParams(float(beta), base))

    def slack(verdict: Verdict) -> float:
        return verdict.margin - verdict.tolerance

    def band(mode: Mode):
        return lambda beta: slack(band_check(exact_average_curve(state(beta), mode, phis), mode, exact).verdict)

    criteria = {
        "ppt": lambda beta: slack(ppt_check(state(beta))),
        "diagonal_sum_spin": lambda beta: slack(diagonal_sum_spin(state(beta))),
        "diagonal_sum_photon": lambda beta: slack(diagonal_sum_photon(state(beta))),
        "band_spin": band(Mode.SPIN),
        "band_photon_geometric": band(Mode.PHOTON_GEOMETRIC),
        "band_photon_hilbert": band(Mode.PHOTON_HILBERT),
    }
    thresholds = {}
    for name, function in criteria.items():
        low, high = function(0.0), function(1.0)
        if low > 0.0 or high <= 0.0:
            log.info("Criterion %s does not flip on [0, 1] for %s.", name, base.value)
            thresholds[name] = float("nan")
            continue
        thresholds[name] = float(brentq(function, 0.0, 1.0, xtol=1e-13))

    def chsh(beta):
        return chsh_optimize(state(beta), restarts, seed).value - CHSH_CLASSICAL_BOUND - CHSH_TOL

    thresholds["chsh"] = float(brentq(chsh, 0.5, 1.0, xtol=1e-10))
    return thresholds
