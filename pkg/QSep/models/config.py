from dataclasses import dataclass, replace
from typing import NamedTuple, Optional

from . import BaseModel
from .enums import Mode
from ..error import InvalidRunConfig

DEFAULT_SEED = 42
DEFAULT_SAMPLES = 100_000
DEFAULT_GRID = 64
DEFAULT_RESTARTS = 16
MIN_SAMPLES = 1_000
MIN_GRID = 32
MC_COMMANDS = ("band-scan", "mc-verify")


@dataclass(frozen=True)
class RunConfig:
    """
    Settings of one command-line run.

    Attributes
    ----------
    command: :class:`str`
        ``check``, ``band-scan``, ``werner-sweep``, ``figure`` or ``mc-verify``.
    input_path: Optional[:class:`str`]
        JSON state spec.
    seed: :class:`int`
        64-bit master seed.
    samples: :class:`int`
        Monte Carlo samples per grid point.
    grid: :class:`int`
        Number of angle (or beta) grid points.
    output_path: Optional[:class:`str`]
        Where CSV output goes; standard output when absent.
    mode: Optional[:class:`Mode`]
    figure: Optional[:class:`int`]
    json: :class:`bool`
        Machine-readable report.
    degrees: :class:`bool`
        Angles in the state spec are degrees.
    verbose: :class:`bool`
    restarts: :class:`int`
        CHSH optimizer restarts.
    workers: Optional[:class:`int`]
        Thread pool size for per-point Monte Carlo; serial when None.

    :raises: :class:`QSep.error.InvalidRunConfig` if an invariant is broken.
    """
    command: str
    input_path: Optional[str] = None
    seed: int = DEFAULT_SEED
    samples: int = DEFAULT_SAMPLES
    grid: int = DEFAULT_GRID
    output_path: Optional[str] = None
    mode: Optional[Mode] = None
    figure: Optional[int] = None
    json: bool = False
    degrees: bool = False
    verbose: bool = False
    restarts: int = DEFAULT_RESTARTS
    workers: Optional[int] = None

    def __post_init__(self):
        if self.mode is not None:
            object.__setattr__(self, "mode", Mode.parse(self.mode))
        if not (0 <= int(self.seed) < 2 ** 64):
            raise InvalidRunConfig(f"Seed must be an unsigned 64-bit integer, got {self.seed}.")
        if self.command in MC_COMMANDS and self.samples < MIN_SAMPLES:
            raise InvalidRunConfig(f"Monte Carlo commands need at least {MIN_SAMPLES} samples, got {self.samples}.")
        if self.grid < MIN_GRID:
            raise InvalidRunConfig(f"The grid needs at least {MIN_GRID} points, got {self.grid}.")
        if self.restarts < 1:
            raise InvalidRunConfig("CHSH optimisation needs at least one restart.")
        if self.workers is not None and self.workers < 1:
            raise InvalidRunConfig("workers must be positive.")

    @classmethod
    def from_namespace(cls, args) -> "RunConfig":
        """Builds a config from an :mod:`argparse` namespace, ignoring unknown attributes."""
        names = cls.__dataclass_fields__.keys()
        values = {name: getattr(args, name) for name in names if getattr(args, name, None) is not None}
        return cls(**values)

    def with_changes(self, **changes) -> "RunConfig":
        return replace(self, **changes)

    def to_dict(self) -> dict:
        values = {name: getattr(self, name) for name in self.__dataclass_fields__}
        return BaseModel.plain(values)


class CommandResult(NamedTuple):
    """
    What a command produced.

    Attributes
    ----------
    report: :class:`dict`
        JSON-ready report, validated by ``schemas/report.schema.json``.
    csv: Optional[:class:`str`]
        CSV text, if the command emits curves or tables.
    exit_code: :class:`int`
        0 unless a self-test failed.
    """
    report: dict
    csv: Optional[str] = None
    exit_code: int = 0
