import json
import math
from typing import Any, List, Tuple, Union

import numpy as np

from .error import MalformedStateSpec, UnknownStateKind, InvalidMode, NonUnitVector, InvalidWernerParameter
from .models import DensityMatrix, EnsembleSpec, EnsembleEntry, EnsembleMode, UnitVector3, WernerParams, NamedState
from .states import named_two_qubit, werner_state, product_density, ensemble_density, bloch_qubit, photon_qubit

STATE_KINDS = ("product", "named", "werner", "ensemble", "matrix")


def _field(raw: dict, name: str, path: str) -> Any:
    if not isinstance(raw, dict):
        raise MalformedStateSpec(path, "expected an object.")
    if name not in raw:
        raise MalformedStateSpec(f"{path}.{name}".lstrip("."), "missing field.")
    return raw[name]


def _number(value, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
        raise MalformedStateSpec(path, f"expected a finite number, got {value!r}.")
    return float(value)


def _numbers(value, count: int, path: str) -> List[float]:
    if not isinstance(value, list) or len(value) != count:
        raise MalformedStateSpec(path, f"expected a list of {count} numbers, got {value!r}.")
    return [_number(item, f"{path}[{index}]") for index, item in enumerate(value)]


def _ensemble_mode(raw: dict, path: str) -> EnsembleMode:
    try:
        return EnsembleMode.parse(_field(raw, "mode", path))
    except InvalidMode as e:
        raise MalformedStateSpec(f"{path}.mode".lstrip("."), str(e))


def create_unit_vector(raw, path: str = "vector") -> UnitVector3:
    """
    Parameters
    ----------
    raw: list
        Three numbers with unit norm.
    path: str
        Field path used in diagnostics.

    Returns
    -------
    A UnitVector3 Model: :class:`QSep.models.UnitVector3`
    """
    components = _numbers(raw, 3, path)
    try:
        return UnitVector3.of(components)
    except NonUnitVector as e:
        raise MalformedStateSpec(path, str(e))


def create_photon_params(raw, path: str = "angles", degrees: bool = False) -> Tuple[float, float]:
    """
    Parameters
    ----------
    raw: list
        Bloch angles (θ, φ) of the photon state |θ/2, φ⟩.
    degrees: bool
        Whether the angles are in degrees.

    Returns
    -------
    (θ, φ) in radians.
    """
    theta, phi = _numbers(raw, 2, path)
    if degrees:
        theta, phi = math.radians(theta), math.radians(phi)
    return theta, phi


def _component(mode: EnsembleMode, raw, path: str, degrees: bool):
    if mode is EnsembleMode.SPIN:
        return create_unit_vector(raw, path)
    return create_photon_params(raw, path, degrees)


def create_ensemble(raw_ensemble: dict, degrees: bool = False, path: str = "") -> EnsembleSpec:
    """

    Parameters
    ----------
    raw_ensemble: dict
        ``{"kind": "ensemble", "mode": "spin"|"photon", "entries": [{"w": ..., "left": ..., "right": ...}]}``.
    degrees: bool
        Whether photon angles are in degrees.

    Returns
    -------
    An EnsembleSpec Model: :class:`QSep.models.EnsembleSpec`
    """
    mode = _ensemble_mode(raw_ensemble, path)
    raw_entries = _field(raw_ensemble, "entries", path)
    entries_path = f"{path}.entries".lstrip(".")
    if not isinstance(raw_entries, list) or not raw_entries:
        raise MalformedStateSpec(entries_path, "expected a non-empty list of entries.")
    entries = []
    for index, raw_entry in enumerate(raw_entries):
        entry_path = f"{entries_path}[{index}]"
        weight = _number(_field(raw_entry, "w", entry_path), f"{entry_path}.w")
        left = _component(mode, _field(raw_entry, "left", entry_path), f"{entry_path}.left", degrees)
        right = _component(mode, _field(raw_entry, "right", entry_path), f"{entry_path}.right", degrees)
        entries.append(EnsembleEntry(weight, left, right))
    return EnsembleSpec(mode, entries, name=raw_ensemble.get("label", "ensemble"))


def create_matrix(raw_matrix, path: str = "matrix") -> DensityMatrix:
    """

    Parameters
    ----------
    raw_matrix: list
        4x4 nested list of ``[re, im]`` pairs.

    Returns
    -------
    A DensityMatrix Model: :class:`QSep.models.DensityMatrix`
    """
    if not isinstance(raw_matrix, list) or len(raw_matrix) != 4:
        raise MalformedStateSpec(path, "expected 4 rows.")
    matrix = np.zeros((4, 4), dtype=complex)
    for i, row in enumerate(raw_matrix):
        if not isinstance(row, list) or len(row) != 4:
            raise MalformedStateSpec(f"{path}[{i}]", "expected 4 entries.")
        for j, entry in enumerate(row):
            real, imag = _numbers(entry, 2, f"{path}[{i}][{j}]")
            matrix[i, j] = complex(real, imag)
    return DensityMatrix(matrix, label="matrix")


def create_state(raw_state: dict, degrees: bool = False) -> DensityMatrix:
    """
    Builds the density matrix a JSON state spec describes.

    Parameters
    ----------
    raw_state: dict
        An object whose ``kind`` is ``product``, ``named``, ``werner``, ``ensemble`` or ``matrix``.
    degrees: bool
        Whether photon angles are in degrees.

    Returns
    -------
    A DensityMatrix Model: :class:`QSep.models.DensityMatrix`

    :raises: :class:`QSep.error.MalformedStateSpec` with the path of the offending field.
    :raises: :class:`QSep.error.InvariantViolation` subclasses when well-formed numbers break an invariant.
    """
    kind = _field(raw_state, "kind", "")
    if kind not in STATE_KINDS:
        raise MalformedStateSpec("kind", f"expected one of {', '.join(STATE_KINDS)}, got {kind!r}.")

    if kind == "named":
        try:
            return named_two_qubit(_field(raw_state, "name", ""))
        except UnknownStateKind as e:
            raise MalformedStateSpec("name", str(e))
    if kind == "werner":
        beta = _number(_field(raw_state, "beta", ""), "beta")
        try:
            base = NamedState.parse(raw_state.get("base", NamedState.SINGLET.value))
        except UnknownStateKind as e:
            raise MalformedStateSpec("base", str(e))
        try:
            params = WernerParams(beta, base)
        except InvalidWernerParameter as e:
            raise MalformedStateSpec("beta", str(e))
        return werner_state(params)
    if kind == "product":
        mode = _ensemble_mode(raw_state, "")
        left = _component(mode, _field(raw_state, "left", ""), "left", degrees)
        right = _component(mode, _field(raw_state, "right", ""), "right", degrees)
        if mode is EnsembleMode.SPIN:
            return product_density(bloch_qubit(left), bloch_qubit(right))
        return product_density(photon_qubit(left[0] / 2.0, left[1]), photon_qubit(right[0] / 2.0, right[1]))
    if kind == "ensemble":
        return ensemble_density(create_ensemble(raw_state, degrees))
    return create_matrix(_field(raw_state, "matrix", ""))


def load_state_spec(path: str) -> dict:
    """
    Reads a JSON state spec from disk.

    :raises: :class:`QSep.error.MalformedStateSpec` with line and column on a syntax error.
    """
    try:
        with open(path, encoding="utf-8") as spec_file:
            text = spec_file.read()
    except OSError as e:
        raise MalformedStateSpec("", f"cannot read {path}: {e.strerror or e}.")
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise MalformedStateSpec("", e.msg, line=e.lineno, column=e.colno)
    if not isinstance(raw, dict):
        raise MalformedStateSpec("", "the top level must be an object.")
    return raw


def state_from_spec(raw_state: dict, degrees: bool = False) -> Tuple[DensityMatrix, Union[EnsembleSpec, None]]:
    """The density matrix of a spec, plus its ensemble when the spec lists one."""
    ensemble = create_ensemble(raw_state, degrees) if raw_state.get("kind") == "ensemble" else None
    rho = ensemble_density(ensemble) if ensemble is not None else create_state(raw_state, degrees)
    return rho, ensemble
