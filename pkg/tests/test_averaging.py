import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal

from QSep.averaging import make_rng, derive_point_seed, sample_sphere, sample_cone_pair, sample_planar_pair, \
    mc_average_correlation, mc_average_curve, analytic_average, exact_average, exact_average_curve, ensemble_C, \
    ensemble_analytic_curve, fourier_project
from QSep.error import InvalidMode, MalformedInput, ModeMismatch, InsufficientCurve
from QSep.models import Mode, CorrelationCurve, EnsembleSpec, EnsembleEntry, EnsembleMode, UnitVector3
from QSep.states import bloch_qubit, photon_qubit, product_density, random_ensemble, ensemble_density

UP = UnitVector3(0.0, 0.0, 1.0)


def test_streams_are_reproducible():
    assert_array_equal(make_rng(7).uniform(size=5), make_rng(7).uniform(size=5))
    assert not np.array_equal(make_rng(7).uniform(size=5), make_rng(8).uniform(size=5))


def test_point_seeds_are_distinct_64_bit():
    seeds = {derive_point_seed(42, index) for index in range(1000)}
    assert len(seeds) == 1000
    assert all(0 <= seed < 2 ** 64 for seed in seeds)
    assert derive_point_seed(2 ** 64 - 1, 3) == derive_point_seed(2 ** 64 - 1, 3)


def test_sphere_sampling_is_uniform(rng):
    n = 200_000
    points = sample_sphere(rng, n)
    assert_allclose(np.linalg.norm(points, axis=1), 1.0, atol=1e-12)
    # each component has variance 1/3
    assert np.all(np.abs(points.mean(axis=0)) < 4.0 * np.sqrt(1.0 / 3.0 / n))
    assert_allclose((points ** 2).mean(axis=0), 1.0 / 3.0, atol=0.005)


@pytest.mark.parametrize("phi", [0.0, 0.4, np.pi / 2, 2.5, np.pi])
def test_cone_pairs_keep_relative_angle(rng, phi):
    pair = sample_cone_pair(phi, rng, 10_000)
    assert pair.constraint_residual() <= 1e-12
    assert_allclose(np.linalg.norm(pair.second, axis=1), 1.0, atol=1e-12)


def test_cone_pair_limits(rng):
    same = sample_cone_pair(0.0, rng, 1000)
    assert_array_equal(same.first, same.second)
    opposite = sample_cone_pair(np.pi, rng, 1000)
    assert_allclose(opposite.second, -opposite.first, atol=1e-12)


def test_cone_second_direction_is_uniform(rng):
    n = 200_000
    pair = sample_cone_pair(1.0, rng, n)
    assert np.all(np.abs(pair.second.mean(axis=0)) < 4.0 * np.sqrt(1.0 / 3.0 / n))


def test_planar_pairs(rng):
    n = 200_000
    pair = sample_planar_pair(0.7, rng, n)
    assert_allclose(pair.first - pair.second, 0.7, atol=1e-12)
    assert pair.constraint_residual() <= 1e-12
    assert abs(np.cos(2.0 * pair.first).mean()) < 4.0 * np.sqrt(0.5 / n)


def test_singlet_spin_average_is_noiseless(singlet):
    for phi in (0.0, 1.0, np.pi):
        estimate = mc_average_correlation(singlet, Mode.SPIN, phi, 5000, seed=3)
        assert estimate.mean == pytest.approx(-np.cos(phi), abs=1e-12)
        assert estimate.stderr < 1e-12
        assert estimate.samples == 5000


def test_scalar_geometric_average_is_noiseless(scalar):
    estimate = mc_average_correlation(scalar, Mode.PHOTON_GEOMETRIC, 0.3, 2000, seed=1)
    assert estimate.mean == pytest.approx(1.0 + np.cos(0.6), abs=1e-12)


def test_mc_estimate_is_deterministic(rng):
    rho = ensemble_density(random_ensemble("spin", 4, rng))
    first = mc_average_correlation(rho, "spin", 0.5, 100_000, seed=99)
    second = mc_average_correlation(rho, "spin", 0.5, 100_000, seed=99)
    assert first == second


def test_mc_curve_does_not_depend_on_workers(rng, full_period):
    rho = ensemble_density(random_ensemble("photon", 4, rng))
    phis = full_period(1, 16)
    serial = mc_average_curve(rho, Mode.PHOTON_HILBERT, phis, 2000, seed=5)
    threaded = mc_average_curve(rho, Mode.PHOTON_HILBERT, phis, 2000, seed=5, workers=4)
    assert_array_equal(serial.values, threaded.values)
    assert_array_equal(serial.stderrs, threaded.stderrs)


def test_mc_rejects_bad_arguments(singlet):
    with pytest.raises(MalformedInput):
        mc_average_correlation(singlet, Mode.SPIN, 0.0, 999, seed=1)
    with pytest.raises(InvalidMode):
        mc_average_correlation(singlet, Mode.EXTERNAL, 0.0, 1000, seed=1)
    with pytest.raises(InvalidMode):
        mc_average_correlation(singlet, "sideways", 0.0, 1000, seed=1)


def test_product_spin_average_is_a_third():
    rho = product_density(bloch_qubit(UP), bloch_qubit(UP))
    estimate = mc_average_correlation(rho, Mode.SPIN, 0.0, 100_000, seed=11)
    assert estimate.agrees_with(1.0 / 3.0)


def test_analytic_examples():
    assert analytic_average(Mode.SPIN, UP, UP, 0.4) == pytest.approx(np.cos(0.4) / 3.0)
    assert analytic_average(Mode.PHOTON_GEOMETRIC, (0.0, 0.0), (0.0, 0.0), 0.4) == \
        pytest.approx(1.0 + 0.5 * np.cos(0.8))
    assert analytic_average(Mode.PHOTON_HILBERT, (0.0, 0.0), (np.pi, 0.0), 0.0) == pytest.approx(2.0 / 3.0)


@pytest.mark.parametrize("mode", [Mode.PHOTON_GEOMETRIC, Mode.PHOTON_HILBERT])
def test_analytic_matches_exact_for_photon_products(rng, mode):
    phis = np.linspace(0.0, np.pi, 9)
    for _ in range(10):
        left = tuple(rng.uniform(0.0, np.pi, 2))
        right = tuple(rng.uniform(0.0, np.pi, 2))
        rho = product_density(photon_qubit(left[0] / 2, left[1]), photon_qubit(right[0] / 2, right[1]))
        assert_allclose(analytic_average(mode, left, right, phis), exact_average(rho, mode, phis), atol=1e-12)


def test_analytic_matches_exact_for_spin_products(rng):
    from QSep.states import random_direction
    phis = np.linspace(0.0, np.pi, 9)
    left, right = random_direction(rng), random_direction(rng)
    rho = product_density(bloch_qubit(left), bloch_qubit(right))
    assert_allclose(analytic_average(Mode.SPIN, left, right, phis), exact_average(rho, Mode.SPIN, phis), atol=1e-12)


def test_geometric_monte_carlo_matches_closed_form():
    left, right = (1.1, 0.4), (2.0, 2.5)
    rho = product_density(photon_qubit(left[0] / 2, left[1]), photon_qubit(right[0] / 2, right[1]))
    for index, phi in enumerate((0.2, 0.9, 1.4)):
        estimate = mc_average_correlation(rho, Mode.PHOTON_GEOMETRIC, phi, 50_000, seed=index)
        assert estimate.agrees_with(analytic_average(Mode.PHOTON_GEOMETRIC, left, right, phi))


def test_ensemble_C_examples():
    down = UnitVector3(0.0, 0.0, -1.0)
    anti = EnsembleSpec(EnsembleMode.SPIN, [EnsembleEntry(0.5, UP, down), EnsembleEntry(0.5, down, UP)])
    assert ensemble_C(anti, Mode.SPIN) == pytest.approx(-1.0)
    photons = EnsembleSpec(EnsembleMode.PHOTON, [EnsembleEntry(1.0, (0.0, 0.0), (np.pi / 2, np.pi / 2))])
    assert ensemble_C(photons, Mode.PHOTON_HILBERT) == pytest.approx(0.0, abs=1e-15)
    assert ensemble_C(photons, Mode.PHOTON_GEOMETRIC) == pytest.approx(0.0, abs=1e-15)
    with pytest.raises(ModeMismatch):
        ensemble_C(anti, Mode.PHOTON_GEOMETRIC)
    with pytest.raises(ModeMismatch):
        ensemble_analytic_curve(photons, Mode.SPIN, np.linspace(0.0, 2 * np.pi, 16))


@pytest.mark.parametrize("mode, kind", [(Mode.SPIN, "spin"), (Mode.PHOTON_HILBERT, "photon"),
                                        (Mode.PHOTON_GEOMETRIC, "photon")])
def test_random_ensemble_C_is_bounded(rng, mode, kind):
    for _ in range(100):
        assert abs(ensemble_C(random_ensemble(kind, 5, rng), mode)) <= 1.0


@pytest.mark.parametrize("mode, kind", [(Mode.SPIN, "spin"), (Mode.PHOTON_HILBERT, "photon"),
                                        (Mode.PHOTON_GEOMETRIC, "photon")])
def test_monte_carlo_amplitude_recovers_ensemble_C(rng, full_period, mode, kind):
    ensemble = random_ensemble(kind, 50, rng)
    curve = mc_average_curve(ensemble_density(ensemble), mode, full_period(mode.harmonic, 16), 50_000, seed=17)
    fit = fourier_project(curve, mode.harmonic, include_sine=mode is Mode.PHOTON_GEOMETRIC)
    expected = mode.coefficient * ensemble_C(ensemble, mode)
    assert abs(fit.amplitude - expected) <= 4.0 * fit.amplitude_stderr + 1e-12
    assert_allclose(ensemble_analytic_curve(ensemble, mode, curve.phis).values,
                    exact_average(ensemble_density(ensemble), mode, curve.phis), atol=1e-12)


def test_symmetric_ensemble_has_no_sine_term(rng, full_period):
    ensemble = random_ensemble("photon", 20, rng, symmetric=True)
    phis = full_period(2, 16)
    analytic = fourier_project(ensemble_analytic_curve(ensemble, Mode.PHOTON_GEOMETRIC, phis), 2, include_sine=True)
    assert abs(analytic.sine) < 1e-12
    mc = mc_average_curve(ensemble_density(ensemble), Mode.PHOTON_GEOMETRIC, phis, 20_000, seed=23)
    fit = fourier_project(mc, 2, include_sine=True)
    assert abs(fit.sine) <= 4.0 * fit.sine_stderr + 1e-12


@pytest.mark.parametrize("mode", [Mode.SPIN, Mode.PHOTON_GEOMETRIC, Mode.PHOTON_HILBERT])
def test_averaging_coefficients(full_period, mode):
    horizontal = photon_qubit(0.0, 0.0)
    if mode is Mode.SPIN:
        rho = product_density(bloch_qubit(UP), bloch_qubit(UP))
    else:
        rho = product_density(horizontal, horizontal)
    curve = mc_average_curve(rho, mode, full_period(mode.harmonic, 16), 200_000, seed=2024)
    fit = fourier_project(curve, mode.harmonic)
    assert abs(fit.amplitude - mode.coefficient) <= 0.005
    assert abs(fit.amplitude - mode.coefficient) <= 4.0 * fit.amplitude_stderr


def test_fourier_examples():
    quarter = np.linspace(0.0, np.pi / 2, 256)
    fit = fourier_project(CorrelationCurve.from_function("c", Mode.EXTERNAL, quarter,
                                                         lambda p: 0.996 + 0.88 * np.cos(2 * p)), 2)
    assert fit.constant == pytest.approx(0.996)
    assert fit.amplitude == pytest.approx(0.88)
    assert fit.residual_rms <= 1e-12

    half = np.linspace(0.0, np.pi, 64)
    fit = fourier_project(CorrelationCurve.from_function("s", Mode.EXTERNAL, half, lambda p: -np.cos(p)), 1)
    assert fit.constant == pytest.approx(0.0, abs=1e-12)
    assert fit.amplitude == pytest.approx(-1.0)


def test_fourier_of_wrong_harmonic(full_period):
    phis = full_period(1, 64)
    fit = fourier_project(CorrelationCurve.from_function("c", Mode.EXTERNAL, phis, np.cos), 2)
    assert abs(fit.amplitude) < 1e-12
    assert fit.residual_rms == pytest.approx(np.sqrt(0.5))


def test_fourier_propagates_errors(full_period):
    phis = full_period(1, 32)
    curve = CorrelationCurve("noisy", Mode.EXTERNAL, phis, np.cos(phis), np.full(32, 0.01))
    fit = fourier_project(curve, 1)
    assert fit.amplitude_stderr == pytest.approx(0.01 * np.sqrt(2.0 / 32))
    assert fit.constant_stderr == pytest.approx(0.01 / np.sqrt(32))
    assert fit.noise_rms == pytest.approx(0.01)


def test_fourier_rejects_unsupported_curves():
    with pytest.raises(InsufficientCurve):
        fourier_project(CorrelationCurve.from_function("short", Mode.EXTERNAL, np.linspace(0.0, 1.0, 16), np.cos), 1)
    uneven = np.concatenate([np.linspace(0.0, 1.0, 8), np.linspace(1.5, np.pi, 8)])
    with pytest.raises(InsufficientCurve):
        fourier_project(CorrelationCurve.from_function("uneven", Mode.EXTERNAL, uneven, np.cos), 1)
    with pytest.raises(InsufficientCurve):
        CorrelationCurve("few", Mode.EXTERNAL, np.linspace(0.0, np.pi, 4), np.zeros(4))


def test_exact_curve_of_singlet(singlet, full_period):
    phis = full_period(1, 32)
    assert_allclose(exact_average_curve(singlet, Mode.SPIN, phis).values, -np.cos(phis), atol=1e-15)
    assert_allclose(exact_average(singlet, Mode.PHOTON_HILBERT, phis), 1.0 - np.cos(phis), atol=1e-15)
    assert_allclose(exact_average(singlet, Mode.PHOTON_GEOMETRIC, phis), 1.0 - np.cos(2 * phis), atol=1e-15)
