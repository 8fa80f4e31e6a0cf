import json
from pathlib import Path

import jsonschema
import pytest

import QSep
from QSep import SeparabilityAnalyzer
from QSep.cli import main, build_parser, render_text, EXIT_OK, EXIT_MALFORMED, EXIT_INVARIANT
from QSep.error import InvalidRunConfig
from QSep.models import RunConfig, Mode

SCHEMA = json.loads((Path(QSep.__file__).parent / "schemas" / "report.schema.json").read_text(encoding="utf-8"))


def write_spec(tmp_path, spec, name="state.json"):
    path = tmp_path / name
    path.write_text(json.dumps(spec), encoding="utf-8")
    return str(path)


@pytest.fixture
def singlet_path(tmp_path):
    return write_spec(tmp_path, {"kind": "named", "name": "singlet"})


@pytest.fixture
def ensemble_path(tmp_path):
    return write_spec(tmp_path, {"kind": "ensemble", "mode": "photon", "entries": [
        {"w": 0.25, "left": [0, 0], "right": [0, 0]},
        {"w": 0.75, "left": [1.0, 0.5], "right": [2.0, 1.5]}]}, "ensemble.json")


def run_json(capsys, argv):
    code = main(argv + ["--json"])
    report = json.loads(capsys.readouterr().out)
    jsonschema.validate(report, SCHEMA)
    return code, report


def test_check_singlet(capsys, singlet_path):
    code, report = run_json(capsys, ["check", "--input", singlet_path, "--restarts", "4"])
    assert code == EXIT_OK
    statuses = {verdict["criterion"]: verdict["status"] for verdict in report["verdicts"]}
    assert statuses == {"pure_state_g": "INSEPARABLE", "ppt": "INSEPARABLE", "diagonal_sum_spin": "INSEPARABLE",
                        "diagonal_sum_photon": "INSEPARABLE", "chsh": "INSEPARABLE"}
    assert report["purity"] == pytest.approx(1.0)


def test_check_text_report(capsys, tmp_path):
    path = write_spec(tmp_path, {"kind": "werner", "beta": 0.5})
    assert main(["check", "--input", path, "--restarts", "2"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "ppt: INSEPARABLE" in out
    assert "chsh: CONSISTENT_WITH_SEPARABLE" in out
    assert "pure_state_g" not in out


def test_band_scan(capsys, tmp_path, ensemble_path):
    output = tmp_path / "curves.csv"
    argv = ["band-scan", "--input", ensemble_path, "--mode", "photon-hilbert", "--samples", "2000",
            "--grid", "32", "--output", str(output)]
    code, report = run_json(capsys, argv)
    assert code == EXIT_OK
    assert report["band"]["verdict"]["status"] == "CONSISTENT_WITH_SEPARABLE"
    assert -1.0 <= report["ensemble_C"] <= 1.0
    lines = output.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "phi_rad,value,stderr,series"
    assert {line.rsplit(",", 1)[1] for line in lines[1:]} == {"mc", "exact", "analytic"}
    assert len(lines) == 1 + 3 * 32


def test_band_scan_output_is_reproducible(capsys, tmp_path, ensemble_path):
    outputs = []
    for name in ("first.csv", "second.csv"):
        path = tmp_path / name
        assert main(["band-scan", "--input", ensemble_path, "--mode", "photon-geometric", "--samples", "1000",
                     "--grid", "32", "--seed", "0xDEADBEEF", "--output", str(path), "--workers", "2"]) == EXIT_OK
        outputs.append(path.read_bytes())
    assert outputs[0] == outputs[1]


def test_band_scan_without_output_splits_streams(capsys, singlet_path):
    assert main(["band-scan", "--input", singlet_path, "--mode", "spin", "--samples", "1000",
                 "--grid", "32"]) == EXIT_OK
    captured = capsys.readouterr()
    assert captured.out.startswith("phi_rad,value,stderr,series\n")
    assert "spin band" in captured.err


def test_werner_sweep(capsys, tmp_path):
    output = tmp_path / "werner.csv"
    code, report = run_json(capsys, ["werner-sweep", "--grid", "32", "--restarts", "2", "--output", str(output)])
    assert code == EXIT_OK
    assert report["thresholds"]["ppt"] == pytest.approx(1.0 / 3.0, abs=1e-9)
    lines = output.read_text(encoding="utf-8").splitlines()
    assert lines[0].startswith("beta,ppt_min_eigenvalue")
    rows = [line for line in lines[1:] if not line.startswith("#")]
    assert len(rows) == 32
    first = [float(value) for value in rows[0].split(",")]
    assert first[0] == 0.0
    assert first[1] == pytest.approx(0.25)
    assert "# threshold chsh=" in lines[-1]
    assert report["base"] == "singlet"


def test_werner_sweep_takes_the_base_from_its_input(capsys, tmp_path):
    path = write_spec(tmp_path, {"kind": "werner", "beta": 0.1, "base": "scalar"})
    code, report = run_json(capsys, ["werner-sweep", "--input", path, "--grid", "32", "--restarts", "2",
                                     "--output", str(tmp_path / "werner.csv")])
    assert code == EXIT_OK
    assert report["base"] == "scalar"
    assert report["thresholds"]["ppt"] == pytest.approx(1.0 / 3.0, abs=1e-9)
    # the scalar state's spin correlations average to β/3, which never leaves the band
    assert report["thresholds"]["band_spin"] is None


def test_werner_sweep_rejects_other_state_kinds(capsys, singlet_path):
    assert main(["werner-sweep", "--input", singlet_path, "--grid", "32"]) == EXIT_MALFORMED
    assert "field 'kind'" in capsys.readouterr().err


@pytest.mark.parametrize("index, status", [(1, "INSEPARABLE"), (2, "INSEPARABLE"), (3, "INSEPARABLE")])
def test_figure(capsys, tmp_path, index, status):
    output = tmp_path / "figure.csv"
    code, report = run_json(capsys, ["figure", str(index), "--output", str(output)])
    assert code == EXIT_OK
    assert report["verdict"]["status"] == status
    assert output.read_text(encoding="utf-8").startswith("phi_rad,value,stderr,series\n")


def test_mc_verify(capsys, tmp_path):
    code, report = run_json(capsys, ["mc-verify", "--samples", "20000", "--grid", "32",
                                     "--output", str(tmp_path / "verify.csv")])
    assert code == EXIT_OK
    assert report["passed"] is True
    assert [check["mode"] for check in report["checks"]] == ["spin", "photon-geometric", "photon-hilbert"]


@pytest.mark.parametrize("argv", [
    ["check"],
    ["band-scan", "--samples", "1000"],
    ["figure", "4"],
    ["mc-verify", "--samples", "10"],
    ["werner-sweep", "--grid", "8"],
])
def test_malformed_runs_exit_2(capsys, argv):
    assert main(argv) == EXIT_MALFORMED
    assert "qsep: error:" in capsys.readouterr().err


def test_malformed_spec_exits_2(capsys, tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{\"kind\": ", encoding="utf-8")
    assert main(["check", "--input", str(path)]) == EXIT_MALFORMED
    assert "line 1" in capsys.readouterr().err


def test_invalid_state_exits_3(capsys, tmp_path):
    matrix = [[[1.5, 0] if i == j == 0 else [-0.5, 0] if i == j == 1 else [0, 0] for j in range(4)] for i in range(4)]
    path = write_spec(tmp_path, {"kind": "matrix", "matrix": matrix})
    assert main(["check", "--input", path]) == EXIT_INVARIANT


@pytest.mark.parametrize("spec, field", [
    ({"kind": "werner", "beta": 1.5}, "beta"),
    ({"kind": "product", "mode": "spin", "left": [0, 0, 2], "right": [0, 0, 1]}, "left"),
])
def test_specs_breaking_a_range_exit_2(capsys, tmp_path, spec, field):
    assert main(["check", "--input", write_spec(tmp_path, spec)]) == EXIT_MALFORMED
    assert f"field '{field}'" in capsys.readouterr().err


def test_unwritable_output_exits_2(capsys, tmp_path):
    output = tmp_path / "missing" / "figure.csv"
    assert main(["figure", "1", "--output", str(output)]) == EXIT_MALFORMED
    err = capsys.readouterr().err
    assert err.startswith("qsep: error: cannot write")
    assert "Traceback" not in err


def test_parser_rejects_external_mode_and_bad_seed():
    parser = build_parser()
    with pytest.raises(SystemExit):
        parser.parse_args(["band-scan", "--mode", "external"])
    with pytest.raises(SystemExit):
        parser.parse_args(["check", "--seed", "-1"])
    args = parser.parse_args(["band-scan", "--mode", "photon-hilbert", "--seed", "0x10"])
    assert args.mode is Mode.PHOTON_HILBERT
    assert args.seed == 16


def test_run_config_invariants():
    with pytest.raises(InvalidRunConfig):
        RunConfig("band-scan", samples=999)
    with pytest.raises(InvalidRunConfig):
        RunConfig("check", seed=2 ** 64)
    assert RunConfig("check", samples=10).samples == 10
    with pytest.raises(InvalidRunConfig):
        RunConfig("check", samples=10).with_changes(command="mc-verify")


def test_analyzer_methods_follow_their_command():
    analyzer = SeparabilityAnalyzer(RunConfig("check", figure=2, grid=32))
    result = analyzer.figure()
    assert analyzer.config.command == "figure"
    assert result.report["figure"] == 2
    assert "band" in render_text(result.report)


def test_analyzer_needs_a_config():
    with pytest.raises(InvalidRunConfig):
        SeparabilityAnalyzer().figure()
