from . import models

from .error import QSepError, MalformedInput, InvariantViolation, InvalidRunConfig, MalformedStateSpec, \
    NotPure, ModeMismatch, InsufficientCurve, UnknownFigure, TsirelsonViolation

from .objects import create_state, create_ensemble, create_unit_vector, create_matrix, load_state_spec, \
    state_from_spec
from functools import wraps

__title__ = 'QSep'
__author__ = 'MujyKun'
__license__ = 'MIT'
__version__ = '0.1.0'


def check_run_config(func):
    """Decorator to bring the run configuration in line with the command about to run."""
    command = func.__name__.replace("_", "-")

    @wraps(func)
    def wrap_function(self=None, *args, **kwargs):
        if self.config is None:
            raise InvalidRunConfig("No run configuration was supplied.")
        if self.config.command != command:
            # re-validates the invariants that depend on the command
            self.config = self.config.with_changes(command=command)
        return func(self, *args, **kwargs)
    return wrap_function


from .analyzer import SeparabilityAnalyzer
