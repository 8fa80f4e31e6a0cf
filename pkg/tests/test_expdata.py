import io

import numpy as np
import pytest
from numpy.testing import assert_allclose

from QSep.averaging import fourier_project, exact_average
from QSep.error import ZeroReferenceRate, NegativeRate, UnknownFigure, InvalidRunConfig
from QSep.expdata import aspect_g_curve, aspect_c_curve, sakai_curve, scalar_curve, pseudoscalar_curve, \
    raw_rates_to_g, rates_from_g, reproduce_figure, figure_grid, format_number, write_curves_csv, curves_to_csv, \
    write_table_csv
from QSep.models import Mode, Status, CorrelationCurve

EXPERIMENT_CURVES = [aspect_g_curve(), aspect_c_curve(), sakai_curve(), scalar_curve(), pseudoscalar_curve()]


def test_measured_curves():
    assert aspect_g_curve().amplitude == pytest.approx(0.87131, abs=5e-6)
    assert aspect_g_curve()(np.pi / 4) == pytest.approx(0.0, abs=1e-12)
    assert aspect_c_curve()(0.0) == pytest.approx(1.876)
    assert aspect_c_curve()(np.pi / 2) == pytest.approx(0.116)
    assert sakai_curve()(0.0) == pytest.approx(-1.0)
    assert sakai_curve()(np.pi) == pytest.approx(1.0)


def test_predicted_curves_match_named_states(scalar, pseudoscalar):
    phis = np.linspace(0.0, np.pi, 17)
    assert_allclose(scalar_curve()(phis), exact_average(scalar, Mode.PHOTON_GEOMETRIC, phis), atol=1e-12)
    assert_allclose(pseudoscalar_curve()(phis), exact_average(pseudoscalar, Mode.PHOTON_GEOMETRIC, phis), atol=1e-12)


@pytest.mark.parametrize("curve", EXPERIMENT_CURVES, ids=lambda curve: curve.name)
def test_fourier_recovers_experiment_parameters(curve):
    phis = np.linspace(0.0, 2.0 * np.pi / curve.harmonic, 256, endpoint=False)
    fit = fourier_project(curve.to_curve(phis), curve.harmonic)
    assert fit.constant == pytest.approx(curve.constant, abs=1e-12)
    assert fit.amplitude == pytest.approx(curve.amplitude, abs=1e-12)
    assert fit.residual_rms <= 1e-12


def test_raw_rates_to_g():
    assert raw_rates_to_g(0.25, 0.5, 0.5, 1.0) == pytest.approx(0.0)
    assert raw_rates_to_g(0.5, 0.5, 0.5, 1.0) == pytest.approx(1.0)
    assert raw_rates_to_g(50.0, 50.0, 50.0, 100.0) == pytest.approx(1.0)
    assert_allclose(raw_rates_to_g(np.array([0.0, 0.25]), 0.5, 0.5, 1.0), [-1.0, 0.0])


def test_raw_rates_to_g_rejects_bad_rates():
    with pytest.raises(ZeroReferenceRate):
        raw_rates_to_g(0.25, 0.5, 0.5, 0.0)
    with pytest.raises(NegativeRate):
        raw_rates_to_g(-0.1, 0.5, 0.5, 1.0)
    with pytest.raises(NegativeRate):
        raw_rates_to_g(np.array([0.1, -0.1]), 0.5, 0.5, 1.0)


def test_rates_round_trip():
    phis = np.linspace(0.0, np.pi / 2, 32)
    curve = aspect_g_curve()
    rates = rates_from_g(curve, phis, 0.4, 0.6)
    assert rates.name == "aspect_g_rate"
    assert rates.mode is Mode.EXTERNAL
    assert_allclose(raw_rates_to_g(rates.values, 0.4, 0.6, 1.0), curve(phis), atol=1e-12)


def test_figure_one():
    data = reproduce_figure(1)
    assert [curve.name for curve in data.curves] == ["aspect_g", "zero"]
    assert data.verdict.criterion == "pure_state_g"
    assert data.verdict.status is Status.INSEPARABLE
    assert data.verdict.margin == pytest.approx(0.87131, abs=1e-3)
    assert data.report is None


@pytest.mark.parametrize("index, margin", [(2, 2.0 / 3.0), (3, 0.38)])
def test_band_figures(index, margin):
    data = reproduce_figure(index)
    assert [curve.name for curve in data.curves] == [data.curves[0].name, "band_upper", "band_lower"]
    assert data.verdict.status is Status.INSEPARABLE
    assert data.verdict.margin == pytest.approx(margin, abs=1e-3)
    assert data.report.verdict is data.verdict
    upper, lower = data.curves[1], data.curves[2]
    assert np.all(upper.values >= lower.values)


@pytest.mark.parametrize("index", [1, 2, 3])
def test_figure_verdicts_do_not_depend_on_grid(index):
    coarse, fine = reproduce_figure(index, 32), reproduce_figure(index, 1024)
    assert coarse.verdict.status is fine.verdict.status
    assert coarse.verdict.margin == pytest.approx(fine.verdict.margin, abs=1e-3)


def test_figure_guards():
    with pytest.raises(UnknownFigure):
        reproduce_figure(4)
    with pytest.raises(InvalidRunConfig):
        reproduce_figure(2, grid=16)


def test_figure_grids():
    assert figure_grid(2, 33)[-1] == pytest.approx(np.pi)
    assert figure_grid(3, 33)[-1] == pytest.approx(np.pi / 2)


def test_format_number():
    assert format_number(None) == ""
    assert format_number(0.5) == "0.5"
    assert format_number(1.0 / 3.0) == "0.333333333"
    assert format_number(np.float64(2.0)) == "2"


def test_curves_csv():
    phis = np.linspace(0.0, np.pi, 8)
    noisy = CorrelationCurve("mc", Mode.SPIN, phis, np.zeros(8), np.full(8, 0.125))
    exact = CorrelationCurve("exact", Mode.SPIN, phis, np.zeros(8))
    stream = io.StringIO()
    write_curves_csv([noisy, exact], stream)
    lines = stream.getvalue().splitlines()
    assert lines[0] == "phi_rad,value,stderr,series"
    assert len(lines) == 17
    assert lines[1] == "0,0,0.125,mc"
    assert lines[9] == "0,0,,exact"
    assert curves_to_csv([noisy, exact]) == stream.getvalue()


def test_table_csv_footer():
    stream = io.StringIO()
    write_table_csv(("beta", "value"), [[0.0, 0.25], [1.0, -0.5]], stream, footer={"ppt": 1.0 / 3.0})
    assert stream.getvalue() == "beta,value\n0,0.25\n1,-0.5\n# threshold ppt=0.333333333\n"
