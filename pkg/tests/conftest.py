import numpy as np
import pytest

from QSep.averaging import make_rng
from QSep.models import NamedState, WernerParams
from QSep.states import named_two_qubit, werner_state


@pytest.fixture
def rng():
    return make_rng(20240611)


@pytest.fixture
def singlet():
    return named_two_qubit(NamedState.SINGLET)


@pytest.fixture
def scalar():
    return named_two_qubit(NamedState.SCALAR)


@pytest.fixture
def pseudoscalar():
    return named_two_qubit(NamedState.PSEUDOSCALAR)


@pytest.fixture
def werner_half():
    return werner_state(WernerParams(0.5))


@pytest.fixture
def full_period():
    """Equally spaced angles over [0, 2π/k), endpoint excluded."""
    def grid(harmonic: int = 1, points: int = 64):
        return np.linspace(0.0, 2.0 * np.pi / harmonic, points, endpoint=False)
    return grid
