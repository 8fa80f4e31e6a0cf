from enum import Enum


class Mode(Enum):
    """Averaging protocol a correlation curve was produced under."""
    SPIN = "spin"
    PHOTON_GEOMETRIC = "photon-geometric"
    PHOTON_HILBERT = "photon-hilbert"
    EXTERNAL = "external"

    @classmethod
    def parse(cls, value) -> "Mode":
        """Accepts a Mode, its value (``photon-geometric``) or its name (``PHOTON_GEOMETRIC``)."""
        if isinstance(value, cls):
            return value
        text = str(value).strip()
        for member in cls:
            if text == member.value or text.upper().replace("-", "_") == member.name:
                return member
        from ..error import InvalidMode
        raise InvalidMode(value)

    @property
    def harmonic(self) -> int:
        """Harmonic of the band form: cos(kφ) with k = 2 for linear polarizers, 1 otherwise."""
        return 2 if self is Mode.PHOTON_GEOMETRIC else 1

    @property
    def coefficient(self) -> float:
        """Prefactor of C in the separable band: 1/2 for the planar average, 1/3 for sphere averages."""
        return 0.5 if self is Mode.PHOTON_GEOMETRIC else 1.0 / 3.0

    @property
    def offset(self) -> float:
        """Constant term of the band form: 0 for spin correlations, 1 for 4·Tr ρ(P⊗P)."""
        return 0.0 if self is Mode.SPIN else 1.0


class Status(Enum):
    """Outcome of a separability criterion."""
    INSEPARABLE = "INSEPARABLE"
    CONSISTENT_WITH_SEPARABLE = "CONSISTENT_WITH_SEPARABLE"
    MODEL_MISMATCH = "MODEL_MISMATCH"


class NamedState(Enum):
    """Named two-qubit pure states."""
    SINGLET = "singlet"
    SCALAR = "scalar"
    PSEUDOSCALAR = "pseudoscalar"

    @classmethod
    def parse(cls, value) -> "NamedState":
        if isinstance(value, cls):
            return value
        text = str(value).strip().lower()
        for member in cls:
            if text == member.value:
                return member
        from ..error import UnknownStateKind
        raise UnknownStateKind(value)


class EnsembleMode(Enum):
    """How the product-state parameters of an ensemble are written."""
    SPIN = "spin"  # Bloch vectors (x, y, z)
    PHOTON = "photon"  # Bloch angles (θ, φ) of the state |θ/2, φ⟩

    @classmethod
    def parse(cls, value) -> "EnsembleMode":
        if isinstance(value, cls):
            return value
        text = str(value).strip().lower()
        for member in cls:
            if text == member.value:
                return member
        from ..error import InvalidMode
        raise InvalidMode(value)
