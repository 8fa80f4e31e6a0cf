from .base import BaseModel

from .enums import Mode, Status, NamedState, EnsembleMode
from .state import UnitVector3, QubitState, DensityMatrix, EnsembleEntry, EnsembleSpec, WernerParams, \
    spherical_to_cartesian
from .observable import Observable
from .curve import PairGeometry, DirectionPair, McEstimate, CorrelationCurve, FourierFit, ExperimentCurve, FigureData
from .verdict import Verdict, BandTolerance, BandCheckReport, ChshSettings, ChshOptimum
from .config import RunConfig, CommandResult
