import json

import numpy as np
import pytest
from numpy.testing import assert_allclose

from QSep import create_state, create_ensemble, create_unit_vector, create_matrix, load_state_spec, state_from_spec
from QSep.error import MalformedStateSpec, MalformedInput, InvalidDensityMatrix, InvariantViolation, \
    UnnormalizedWeights
from QSep.models import EnsembleMode, WernerParams
from QSep.states import named_two_qubit, werner_state


def test_named_state():
    assert_allclose(create_state({"kind": "named", "name": "scalar"}).matrix, named_two_qubit("scalar").matrix)


def test_werner_state():
    rho = create_state({"kind": "werner", "beta": 0.5})
    assert_allclose(rho.matrix, werner_state(WernerParams(0.5)).matrix)
    scalar_based = create_state({"kind": "werner", "beta": 0.2, "base": "scalar"})
    assert scalar_based.matrix[0, 3] == pytest.approx(0.1)


def test_spin_product():
    rho = create_state({"kind": "product", "mode": "spin", "left": [0, 0, 1], "right": [0.6, 0.8, 0]})
    assert rho.purity == pytest.approx(1.0)
    assert np.trace(rho.matrix).real == pytest.approx(1.0)


def test_photon_angles_in_degrees():
    radians = create_state({"kind": "product", "mode": "photon", "left": [np.pi / 2, 0], "right": [0, 0]})
    degrees = create_state({"kind": "product", "mode": "photon", "left": [90, 0], "right": [0, 0]}, degrees=True)
    assert_allclose(degrees.matrix, radians.matrix, atol=1e-15)


def test_ensemble_spec():
    raw = {"kind": "ensemble", "mode": "spin", "label": "anti",
           "entries": [{"w": 0.5, "left": [0, 0, 1], "right": [0, 0, -1]},
                       {"w": 0.5, "left": [0, 0, -1], "right": [0, 0, 1]}]}
    ensemble = create_ensemble(raw)
    assert ensemble.mode is EnsembleMode.SPIN
    assert ensemble.name == "anti"
    rho, parsed = state_from_spec(raw)
    assert parsed is not None and len(parsed) == 2
    assert rho.label == "anti"
    assert_allclose(np.diag(rho.matrix).real, [0.0, 0.5, 0.5, 0.0], atol=1e-15)
    assert state_from_spec({"kind": "named", "name": "singlet"})[1] is None


def test_matrix_spec():
    raw = [[[0.25, 0.0] if i == j else [0.0, 0.0] for j in range(4)] for i in range(4)]
    assert_allclose(create_matrix(raw).matrix, np.eye(4) / 4)


@pytest.mark.parametrize("raw, field", [
    ({}, "kind"),
    ({"kind": "bell"}, "kind"),
    ({"kind": "named", "name": "triplet"}, "name"),
    ({"kind": "werner"}, "beta"),
    ({"kind": "werner", "beta": "half"}, "beta"),
    ({"kind": "product", "mode": "spin", "left": [0, 0, 1]}, "right"),
    ({"kind": "product", "mode": "qutrit", "left": [0, 0, 1], "right": [0, 0, 1]}, "mode"),
    ({"kind": "ensemble", "mode": "spin", "entries": []}, "entries"),
    ({"kind": "ensemble", "mode": "spin",
      "entries": [{"w": 0.5, "left": [0, 0, 1], "right": [0, 0, 1]},
                  {"w": 0.5, "left": [0, 1], "right": [0, 0, 1]}]}, "entries[1].left"),
    ({"kind": "matrix", "matrix": [[[0, 0]] * 4] * 3}, "matrix"),
    ({"kind": "werner", "beta": 2.0}, "beta"),
    ({"kind": "werner", "beta": -0.25, "base": "scalar"}, "beta"),
    ({"kind": "product", "mode": "spin", "left": [1, 1, 0], "right": [0, 0, 1]}, "left"),
    ({"kind": "ensemble", "mode": "spin",
      "entries": [{"w": 1.0, "left": [0, 0, 1], "right": [0, 0.5, 0.5]}]}, "entries[0].right"),
])
def test_malformed_specs_name_the_field(raw, field):
    with pytest.raises(MalformedStateSpec) as info:
        create_state(raw)
    assert info.value.field == field
    assert isinstance(info.value, MalformedInput)


def test_well_formed_specs_that_break_invariants():
    with pytest.raises(InvalidDensityMatrix):
        create_matrix([[[1.5, 0] if i == j == 0 else [-0.5, 0] if i == j == 1 else [0, 0] for j in range(4)]
                       for i in range(4)])
    with pytest.raises(UnnormalizedWeights):
        create_state({"kind": "ensemble", "mode": "spin",
                      "entries": [{"w": 0.7, "left": [0, 0, 1], "right": [0, 0, 1]}]})
    with pytest.raises(InvariantViolation):
        create_matrix([[[0.5 if i == j else 0.0, 0] for j in range(4)] for i in range(4)])


def test_load_state_spec(tmp_path):
    path = tmp_path / "state.json"
    path.write_text(json.dumps({"kind": "named", "name": "singlet"}), encoding="utf-8")
    assert load_state_spec(str(path)) == {"kind": "named", "name": "singlet"}


def test_load_state_spec_reports_syntax_position(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{\n  "kind": "named",\n  "name" "singlet"\n}\n', encoding="utf-8")
    with pytest.raises(MalformedStateSpec) as info:
        load_state_spec(str(path))
    assert (info.value.line, info.value.column) == (3, 10)


def test_load_state_spec_errors(tmp_path):
    with pytest.raises(MalformedStateSpec):
        load_state_spec(str(tmp_path / "missing.json"))
    path = tmp_path / "list.json"
    path.write_text("[1, 2]", encoding="utf-8")
    with pytest.raises(MalformedStateSpec):
        load_state_spec(str(path))
