"""
Angular averages of two-point correlations at a fixed relative angle.

Three protocols share one code path and differ only in the sampler and in the
projector family:

* SPIN: Tr ρ(n₁·σ⊗n₂·σ) with n₁ uniform on the sphere and n₂ on the cone n₁·n₂ = cos φ.
* PHOTON_GEOMETRIC: 4 Tr ρ(P(θ_a)⊗P(θ_b)) with θ_a uniform and θ_b = θ_a − φ.
* PHOTON_HILBERT: 4 Tr ρ(P(n_a)⊗P(n_b)) over the same cone pairs as SPIN, n_a·n_b = cos φ̃.
"""
import hashlib
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Optional, Tuple, Union

import numpy as np

from .error import InvalidMode, InsufficientCurve, DegenerateFit, ModeMismatch, MalformedInput
from .models import Mode, EnsembleMode, EnsembleSpec, DensityMatrix, DirectionPair, PairGeometry, McEstimate, \
    CorrelationCurve, FourierFit, UnitVector3, spherical_to_cartesian
from .observables import fano_decomposition

log = logging.getLogger(__name__)

MIN_SAMPLES = 1_000
CHUNK_SIZE = 1 << 16
SPACING_TOL = 1e-9
AVERAGED_MODES = (Mode.SPIN, Mode.PHOTON_GEOMETRIC, Mode.PHOTON_HILBERT)


def make_rng(seed: int) -> np.random.Generator:
    """A Philox counter-based generator keyed by a 64-bit seed."""
    return np.random.Generator(np.random.Philox(key=int(seed) & 0xFFFFFFFFFFFFFFFF))


def derive_point_seed(seed: int, index: int) -> int:
    """Stream key of grid point ``index``: ``seed XOR blake2b(index)``, folded to 64 bits."""
    digest = hashlib.blake2b(int(index).to_bytes(8, "little", signed=False), digest_size=8).digest()
    return (int(seed) ^ int.from_bytes(digest, "little")) & 0xFFFFFFFFFFFFFFFF


def _averaged_mode(mode) -> Mode:
    mode = Mode.parse(mode)
    if mode not in AVERAGED_MODES:
        raise InvalidMode(mode)
    return mode


def sample_sphere(rng: np.random.Generator, size: int) -> np.ndarray:
    """``size`` uniform unit vectors, shape (size, 3): z uniform on [−1, 1], uniform azimuth."""
    z = rng.uniform(-1.0, 1.0, size)
    azimuth = rng.uniform(0.0, 2.0 * np.pi, size)
    radius = np.sqrt(np.clip(1.0 - z * z, 0.0, None))
    return np.column_stack((radius * np.cos(azimuth), radius * np.sin(azimuth), z))


def _orthonormal_frame(n: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    # Gram-Schmidt seeded with the axis of the smallest |component| never degenerates.
    seed_axis = np.zeros_like(n)
    seed_axis[np.arange(len(n)), np.argmin(np.abs(n), axis=1)] = 1.0
    e1 = seed_axis - np.einsum("ij,ij->i", seed_axis, n)[:, None] * n
    e1 /= np.linalg.norm(e1, axis=1)[:, None]
    e2 = np.cross(n, e1)
    return e1, e2


def sample_cone_pair(phi: float, rng: np.random.Generator, size: int = 1) -> DirectionPair:
    r"""
    Draws ``size`` direction pairs with n₁·n₂ = cos φ.

    n₁ is uniform on the sphere (z uniform on [−1, 1], uniform azimuth); n₂ is uniform on the
    cone about n₁, :math:`n_2 = \cos\phi\, n_1 + \sin\phi(\cos\psi\, e_1 + \sin\psi\, e_2)`.

    Parameters
    ----------
    phi: :class:`float`
        Relative angle in radians.
    rng: :class:`numpy.random.Generator`
    size: :class:`int`

    Returns
    -------
    :class:`QSep.models.DirectionPair`
        SPHERE pairs, each an array of shape (size, 3).
    """
    first = sample_sphere(rng, size)
    psi = rng.uniform(0.0, 2.0 * np.pi, size)
    e1, e2 = _orthonormal_frame(first)
    transverse = np.cos(psi)[:, None] * e1 + np.sin(psi)[:, None] * e2
    second = np.cos(phi) * first + np.sin(phi) * transverse
    return DirectionPair(PairGeometry.SPHERE, first, second, float(np.cos(phi)))


def sample_planar_pair(phi: float, rng: np.random.Generator, size: int = 1) -> DirectionPair:
    """
    Draws ``size`` polarizer angle pairs with θ_a uniform on [0, 2π) and θ_b = θ_a − φ.

    Returns
    -------
    :class:`QSep.models.DirectionPair`
        PLANE pairs, each an array of shape (size,).
    """
    theta_a = rng.uniform(0.0, 2.0 * np.pi, size)
    return DirectionPair(PairGeometry.PLANE, theta_a, theta_a - phi, float(np.cos(phi)))


def _geometric_bloch(theta: np.ndarray) -> np.ndarray:
    return np.column_stack((np.sin(2.0 * theta), np.zeros_like(theta), np.cos(2.0 * theta)))


def _kernel_values(fano, mode: Mode, pair: DirectionPair) -> np.ndarray:
    r, s, t = fano
    if pair.geometry is PairGeometry.PLANE:
        u, v = _geometric_bloch(pair.first), _geometric_bloch(pair.second)
    else:
        u, v = pair.first, pair.second
    correlation = np.einsum("ij,jk,ik->i", u, t, v)
    if mode is Mode.SPIN:
        return correlation
    # 4 Tr ρ(P_u⊗P_v) = 1 + r·u + s·v + uᵀTv
    return 1.0 + u @ r + v @ s + correlation


def _draw(mode: Mode, phi: float, rng: np.random.Generator, size: int) -> DirectionPair:
    if mode is Mode.PHOTON_GEOMETRIC:
        return sample_planar_pair(phi, rng, size)
    return sample_cone_pair(phi, rng, size)


def mc_average_correlation(rho: DensityMatrix, mode: Union[Mode, str], phi: float, n_samples: int,
                           seed: int) -> McEstimate:
    """
    Monte Carlo average of the mode's correlation kernel at relative angle ``phi``.

    Samples are drawn in chunks; chunk means and sums of squared deviations are merged
    pairwise, so a constant kernel reports a zero standard error.

    Parameters
    ----------
    rho: :class:`QSep.models.DensityMatrix`
    mode: :class:`QSep.models.Mode`
        SPIN, PHOTON_GEOMETRIC or PHOTON_HILBERT.
    phi: :class:`float`
        Relative angle in radians (φ̃ for PHOTON_HILBERT).
    n_samples: :class:`int`
        At least 1000.
    seed: :class:`int`
        Key of the Philox stream; equal seeds give bit-identical estimates.

    Returns
    -------
    :class:`QSep.models.McEstimate`

    :raises: :class:`QSep.error.InvalidMode` for EXTERNAL or unknown modes.
    """
    mode = _averaged_mode(mode)
    if n_samples < MIN_SAMPLES:
        raise MalformedInput(f"Monte Carlo averages need at least {MIN_SAMPLES} samples, got {n_samples}.")
    fano = fano_decomposition(rho)
    rng = make_rng(seed)

    count, mean, m2 = 0, 0.0, 0.0
    remaining = int(n_samples)
    while remaining > 0:
        size = min(CHUNK_SIZE, remaining)
        values = _kernel_values(fano, mode, _draw(mode, phi, rng, size))
        chunk_mean = float(values.mean())
        chunk_m2 = float(np.sum((values - chunk_mean) ** 2))
        delta = chunk_mean - mean
        total = count + size
        mean += delta * size / total
        m2 += chunk_m2 + delta * delta * count * size / total
        count = total
        remaining -= size

    variance = m2 / (count - 1)
    estimate = McEstimate(mean, float(np.sqrt(max(variance, 0.0) / count)), count, int(seed))
    log.debug("%s average at phi=%.6g: %.9f +- %.3g", mode.value, phi, estimate.mean, estimate.stderr)
    return estimate


def mc_average_curve(rho: DensityMatrix, mode: Union[Mode, str], phis, n_samples: int, seed: int,
                     workers: Optional[int] = None, name: str = "mc") -> CorrelationCurve:
    """
    Monte Carlo averages over a grid of relative angles.

    Point ``i`` draws from the stream keyed by ``derive_point_seed(seed, i)``, so the result
    does not depend on ``workers`` or on scheduling.

    Parameters
    ----------
    workers: Optional[:class:`int`]
        Size of the thread pool; the grid is evaluated serially when None or 1.
    """
    mode = _averaged_mode(mode)
    phis = np.asarray(phis, dtype=float).reshape(-1)
    seeds = [derive_point_seed(seed, index) for index in range(len(phis))]
    log.info("Averaging %s correlations of %s over %d angles with %d samples each.",
             mode.value, rho.label, len(phis), n_samples)

    def evaluate(arguments):
        phi, point_seed = arguments
        return mc_average_correlation(rho, mode, phi, n_samples, point_seed)

    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            estimates = list(executor.map(evaluate, zip(phis, seeds)))
    else:
        estimates = [evaluate(arguments) for arguments in zip(phis, seeds)]
    return CorrelationCurve(name, mode, phis, [e.mean for e in estimates], [e.stderr for e in estimates])


def _photon_vector(params) -> np.ndarray:
    theta, phi = np.asarray(params, dtype=float).reshape(-1)[:2]
    return spherical_to_cartesian(theta, phi)


def _spin_vector(params) -> np.ndarray:
    if isinstance(params, UnitVector3):
        return params.as_array()
    return UnitVector3.of(params).as_array()


def analytic_average(mode: Union[Mode, str], left, right, phi):
    r"""
    Closed-form angular average for one product component.

    Parameters
    ----------
    mode: :class:`QSep.models.Mode`
    left, right:
        SPIN: Bloch vectors (:class:`QSep.models.UnitVector3` or 3 numbers).
        Photon modes: Bloch angles (θ, φ) of the state |θ/2, φ⟩.
    phi: Union[:class:`float`, :class:`numpy.ndarray`]
        Relative angle(s) in radians.

    Returns
    -------
    SPIN: (1/3)(s₁·s₂) cos φ. PHOTON_HILBERT: 1 + (1/3)(s₁·s₂) cos φ̃.
    PHOTON_GEOMETRIC: 1 + ½(x₁x₂ + z₁z₂) cos 2φ + ½(x₁z₂ − z₁x₂) sin 2φ, with
    x = sin θ cos φ and z = cos θ of each component.
    """
    mode = _averaged_mode(mode)
    phi = np.asarray(phi, dtype=float)
    if mode is Mode.SPIN:
        dot = float(np.dot(_spin_vector(left), _spin_vector(right)))
        return dot / 3.0 * np.cos(phi)
    s1, s2 = _photon_vector(left), _photon_vector(right)
    if mode is Mode.PHOTON_HILBERT:
        return 1.0 + float(np.dot(s1, s2)) / 3.0 * np.cos(phi)
    even = s1[0] * s2[0] + s1[2] * s2[2]
    odd = s1[0] * s2[2] - s1[2] * s2[0]
    return 1.0 + 0.5 * even * np.cos(2.0 * phi) + 0.5 * odd * np.sin(2.0 * phi)


def exact_average(rho: DensityMatrix, mode: Union[Mode, str], phi):
    """
    Closed-form angular average for any density matrix, through its correlation tensor T.

    SPIN: (Tr T/3) cos φ. PHOTON_HILBERT: 1 + (Tr T/3) cos φ̃.
    PHOTON_GEOMETRIC: 1 + ½(T_xx + T_zz) cos 2φ + ½(T_xz − T_zx) sin 2φ.
    The local Bloch vectors average out in every protocol.
    """
    mode = _averaged_mode(mode)
    phi = np.asarray(phi, dtype=float)
    _, _, t = fano_decomposition(rho)
    if mode is Mode.SPIN:
        return np.trace(t) / 3.0 * np.cos(phi)
    if mode is Mode.PHOTON_HILBERT:
        return 1.0 + np.trace(t) / 3.0 * np.cos(phi)
    return 1.0 + 0.5 * (t[0, 0] + t[2, 2]) * np.cos(2.0 * phi) + 0.5 * (t[0, 2] - t[2, 0]) * np.sin(2.0 * phi)


def exact_average_curve(rho: DensityMatrix, mode: Union[Mode, str], phis, name: str = "exact") -> CorrelationCurve:
    mode = _averaged_mode(mode)
    return CorrelationCurve.from_function(name, mode, phis, lambda grid: exact_average(rho, mode, grid))


def _check_ensemble_mode(ensemble: EnsembleSpec, mode: Mode):
    expected = EnsembleMode.SPIN if mode is Mode.SPIN else EnsembleMode.PHOTON
    if ensemble.mode is not expected:
        raise ModeMismatch(expected.value, ensemble.mode.value)


def ensemble_C(ensemble: EnsembleSpec, mode: Union[Mode, str]) -> float:
    """
    Weighted sum of the mode's pair kernel over the ensemble, always in [−1, 1].

    SPIN and PHOTON_HILBERT use s₁·s₂; PHOTON_GEOMETRIC uses x₁x₂ + z₁z₂, the part of s₁·s₂
    the linear polarizers can see.

    :raises: :class:`QSep.error.ModeMismatch` if a spin ensemble is asked for a photon mode or vice versa.
    """
    mode = _averaged_mode(mode)
    _check_ensemble_mode(ensemble, mode)
    left, right = ensemble.bloch_vectors()
    if mode is Mode.PHOTON_GEOMETRIC:
        kernel = left[:, 0] * right[:, 0] + left[:, 2] * right[:, 2]
    else:
        kernel = np.einsum("ij,ij->i", left, right)
    return float(np.clip(ensemble.weights @ kernel, -1.0, 1.0))


def ensemble_analytic_curve(ensemble: EnsembleSpec, mode: Union[Mode, str], phis,
                            name: str = "analytic") -> CorrelationCurve:
    """Weighted sum of :func:`analytic_average` over the ensemble components."""
    mode = _averaged_mode(mode)
    _check_ensemble_mode(ensemble, mode)
    phis = np.asarray(phis, dtype=float)
    values = np.zeros_like(phis)
    for entry in ensemble.entries:
        values = values + entry.weight * analytic_average(mode, entry.left, entry.right, phis)
    return CorrelationCurve(name, mode, phis, values)


def fourier_project(curve: CorrelationCurve, harmonic: int, include_sine: bool = False) -> FourierFit:
    r"""
    Least-squares fit of ``value ≈ c₀ + A cos(kφ) [+ B sin(kφ)]``.

    Exact on noiseless trigonometric inputs. When the curve carries per-point standard errors
    they are propagated through the least-squares solution, Cov = M diag(σ²) Mᵀ with
    M = (XᵀX)⁻¹Xᵀ.

    Parameters
    ----------
    curve: :class:`QSep.models.CorrelationCurve`
        At least 8 equally spaced points spanning at least half a period, π/k.
    harmonic: :class:`int`
        k, 1 or 2.
    include_sine: :class:`bool`
        Fit the sin(kφ) component too.

    Returns
    -------
    :class:`QSep.models.FourierFit`

    :raises: :class:`QSep.error.InsufficientCurve` on a short span or an uneven grid.
    :raises: :class:`QSep.error.DegenerateFit` if the basis is rank deficient on the grid.
    """
    if harmonic not in (1, 2):
        raise MalformedInput(f"Harmonic must be 1 or 2, got {harmonic!r}.")
    phis, values = curve.phis, curve.values
    if curve.span < np.pi / harmonic - SPACING_TOL:
        raise InsufficientCurve(f"Curve spans {curve.span:.6g} rad; harmonic {harmonic} needs at least "
                                f"{np.pi / harmonic:.6g}.")
    steps = np.diff(phis)
    if np.max(np.abs(steps - steps.mean())) > SPACING_TOL * max(1.0, curve.span):
        raise InsufficientCurve("Fourier projection needs an equally spaced grid.")

    columns = [np.ones_like(phis), np.cos(harmonic * phis)]
    if include_sine:
        columns.append(np.sin(harmonic * phis))
    design = np.column_stack(columns)
    coefficients, _, rank, _ = np.linalg.lstsq(design, values, rcond=None)
    if rank < design.shape[1]:
        raise DegenerateFit(f"Fourier basis has rank {rank} on this grid, expected {design.shape[1]}.")
    residual = values - design @ coefficients
    residual_rms = float(np.sqrt(np.mean(residual ** 2)))

    stderrs = np.zeros(design.shape[1])
    noise_rms = 0.0
    if curve.has_errors:
        solver = np.linalg.solve(design.T @ design, design.T)
        covariance = solver @ np.diag(curve.stderrs ** 2) @ solver.T
        stderrs = np.sqrt(np.clip(np.diag(covariance), 0.0, None))
        noise_rms = float(np.sqrt(np.mean(curve.stderrs ** 2)))

    return FourierFit(constant=float(coefficients[0]), amplitude=float(coefficients[1]),
                      residual_rms=residual_rms, harmonic=harmonic,
                      sine=float(coefficients[2]) if include_sine else None,
                      constant_stderr=float(stderrs[0]), amplitude_stderr=float(stderrs[1]),
                      sine_stderr=float(stderrs[2]) if include_sine else None,
                      noise_rms=noise_rms)
