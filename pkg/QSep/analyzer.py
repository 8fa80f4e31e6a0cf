import io
import logging
from typing import Dict, List, Optional, Tuple

import numpy as np

from . import check_run_config, load_state_spec, state_from_spec
from .averaging import mc_average_curve, exact_average_curve, ensemble_analytic_curve, ensemble_C, fourier_project
from .criteria import pure_state_check, ppt_check, diagonal_sum_spin, diagonal_sum_photon, chsh_check, \
    chsh_optimize, band_check, werner_thresholds, PURITY_TOL
from .error import InvalidRunConfig, MalformedStateSpec, UnknownStateKind
from .expdata import reproduce_figure, curves_to_csv, write_table_csv
from .linalg import partial_transpose_second, hermitian_eigenvalues
from .models import RunConfig, CommandResult, DensityMatrix, EnsembleSpec, EnsembleMode, Mode, CorrelationCurve, \
    WernerParams, BaseModel, UnitVector3, NamedState
from .states import werner_state, product_density, bloch_qubit, photon_qubit

log = logging.getLogger(__name__)

WERNER_COLUMNS = ("beta", "ppt_min_eigenvalue", "diagonal_sum_spin", "amplitude_spin",
                  "amplitude_photon_geometric", "amplitude_photon_hilbert", "chsh_optimum")
MC_VERIFY_SIGMAS = 4.0


def full_period(mode: Mode, grid: int) -> np.ndarray:
    """``grid`` equally spaced angles covering [0, 2π/k) for the mode's harmonic k."""
    return np.linspace(0.0, 2.0 * np.pi / mode.harmonic, grid, endpoint=False)


class SeparabilityAnalyzer:
    r"""
    Runs the separability analyses behind each command-line command.

    Parameters
    ----------
    config: :class:`QSep.models.RunConfig`
        Settings of the run. Each command method brings ``config.command`` in line with itself
        before it starts, which re-checks the invariants that depend on the command.
    verbose: bool
        Whether to log progress messages at INFO level.

    Attributes
    -----------
    config: :class:`QSep.models.RunConfig`
    verbose: bool
    states: Dict[:class:`str`, :class:`QSep.models.DensityMatrix`]
        States loaded so far, keyed by input path.
    """
    def __init__(self, config: Optional[RunConfig] = None, verbose: bool = False):
        self.config = config
        self.verbose = verbose or bool(config and config.verbose)
        self.states: Dict[str, Tuple[DensityMatrix, Optional[EnsembleSpec]]] = {}
        if self.verbose:
            logging.getLogger("QSep").setLevel(logging.INFO)

    def _load_state(self) -> Tuple[DensityMatrix, Optional[EnsembleSpec]]:
        path = self.config.input_path
        if not path:
            raise InvalidRunConfig(f"The {self.config.command} command needs --input.")
        if path not in self.states:
            self.states[path] = state_from_spec(load_state_spec(path), self.config.degrees)
            log.info("Loaded state %s from %s.", self.states[path][0].label, path)
        return self.states[path]

    def _require_mode(self) -> Mode:
        mode = self.config.mode
        if mode is None or mode is Mode.EXTERNAL:
            raise InvalidRunConfig(f"The {self.config.command} command needs --mode "
                                   f"spin|photon-geometric|photon-hilbert.")
        return mode

    @check_run_config
    def check(self) -> CommandResult:
        """
        Runs every state criterion on the input state.

        The pure-state G test runs only on near-pure states; the CHSH optimum is reported next
        to the separability criteria as a locality comparison.
        """
        rho, _ = self._load_state()
        verdicts = []
        if rho.largest_eigenvalue >= 1.0 - PURITY_TOL:
            verdicts.append(pure_state_check(rho, seed=self.config.seed))
        verdicts += [ppt_check(rho), diagonal_sum_spin(rho), diagonal_sum_photon(rho),
                     chsh_check(rho, self.config.restarts, self.config.seed, self.config.workers)]
        report = {"command": "check", "state": rho.label, "purity": rho.purity,
                  "verdicts": [verdict.to_dict() for verdict in verdicts]}
        return CommandResult(BaseModel.plain(report))

    @check_run_config
    def band_scan(self) -> CommandResult:
        """
        Averaged correlation curve of the input state and its band check.

        Emits the Monte Carlo curve (``mc``), the closed form for the state (``exact``) and, for
        ensembles written in the matching mode, the sum of per-component closed forms
        (``analytic``). The verdict comes from the Monte Carlo curve.
        """
        mode = self._require_mode()
        rho, ensemble = self._load_state()
        phis = full_period(mode, self.config.grid)
        mc = mc_average_curve(rho, mode, phis, self.config.samples, self.config.seed, self.config.workers)
        exact = exact_average_curve(rho, mode, phis)
        curves: List[CorrelationCurve] = [mc, exact]
        report = band_check(mc, mode)
        result = {"command": "band-scan", "mode": mode.value, "state": rho.label, "seed": self.config.seed,
                  "samples": self.config.samples, "band": report.to_dict(),
                  "exact_band": band_check(exact, mode).to_dict()}
        expected = EnsembleMode.SPIN if mode is Mode.SPIN else EnsembleMode.PHOTON
        if ensemble is not None and ensemble.mode is expected:
            curves.append(ensemble_analytic_curve(ensemble, mode, phis))
            result["ensemble_C"] = ensemble_C(ensemble, mode)
        return CommandResult(BaseModel.plain(result), curves_to_csv(curves))

    def _werner_base(self) -> NamedState:
        if not self.config.input_path:
            return NamedState.SINGLET
        raw = load_state_spec(self.config.input_path)
        if raw.get("kind") != "werner":
            raise MalformedStateSpec("kind", f"werner-sweep needs a werner spec, got {raw.get('kind')!r}.")
        try:
            return NamedState.parse(raw.get("base", NamedState.SINGLET.value))
        except UnknownStateKind as e:
            raise MalformedStateSpec("base", str(e))

    @check_run_config
    def werner_sweep(self) -> CommandResult:
        """
        Tabulates every criterion's statistic over β in [0, 1] and refines the flip points.

        The mixed-in pure state is the singlet unless ``--input`` names a ``werner`` spec, whose
        ``base`` is used and whose ``beta`` is ignored. Band amplitudes come from the closed-form
        curves; thresholds are appended as footer lines.
        """
        base = self._werner_base()
        rows = []
        for beta in np.linspace(0.0, 1.0, self.config.grid):
            rho = werner_state(WernerParams(float(beta), base))
            pt_minimum = hermitian_eigenvalues(partial_transpose_second(rho.matrix)).minimum
            amplitudes = [fourier_project(exact_average_curve(rho, mode, full_period(mode, self.config.grid)),
                                          mode.harmonic).amplitude
                          for mode in (Mode.SPIN, Mode.PHOTON_GEOMETRIC, Mode.PHOTON_HILBERT)]
            chsh = chsh_optimize(rho, self.config.restarts, self.config.seed, self.config.workers).value
            rows.append([beta, pt_minimum, diagonal_sum_spin(rho).statistic, *amplitudes, chsh])
        thresholds = werner_thresholds(base, self.config.restarts, self.config.seed, self.config.grid)
        stream = io.StringIO()
        write_table_csv(WERNER_COLUMNS, rows, stream, footer=thresholds)
        report = {"command": "werner-sweep", "base": base.value, "grid": self.config.grid, "thresholds": thresholds}
        return CommandResult(BaseModel.plain(report), stream.getvalue())

    @check_run_config
    def figure(self) -> CommandResult:
        """Curves and verdict of one comparison figure (1, 2 or 3)."""
        if self.config.figure is None:
            raise InvalidRunConfig("The figure command needs a figure index (1, 2 or 3).")
        data = reproduce_figure(self.config.figure, self.config.grid)
        report = {"command": "figure", "figure": data.index, "series": [curve.name for curve in data.curves],
                  "verdict": data.verdict.to_dict()}
        if data.report is not None:
            report["band"] = data.report.to_dict()
        return CommandResult(BaseModel.plain(report), curves_to_csv(data.curves))

    def _coefficient_states(self) -> List[Tuple[Mode, DensityMatrix]]:
        # product states whose pair kernel is 1, so the fitted amplitude is the coefficient itself
        up = bloch_qubit(UnitVector3(0.0, 0.0, 1.0))
        horizontal = photon_qubit(0.0, 0.0)
        return [(Mode.SPIN, product_density(up, up, "z-z")),
                (Mode.PHOTON_GEOMETRIC, product_density(horizontal, horizontal, "H-H")),
                (Mode.PHOTON_HILBERT, product_density(horizontal, horizontal, "H-H"))]

    @check_run_config
    def mc_verify(self) -> CommandResult:
        """
        Self-test of the averaging coefficients: 1/3 (spin), 1/2 (polarizers), 1/3 (Hilbert space).

        Each check fits the Monte Carlo curve of a product state with C = 1 and passes when the
        amplitude lies within 4 standard errors of the coefficient. Exits 1 if any check fails.
        """
        checks, curves = [], []
        for mode, rho in self._coefficient_states():
            phis = full_period(mode, self.config.grid)
            curve = mc_average_curve(rho, mode, phis, self.config.samples, self.config.seed, self.config.workers,
                                     name=mode.value)
            fit = fourier_project(curve, mode.harmonic)
            deviation = abs(fit.amplitude - mode.coefficient)
            passed = bool(deviation <= MC_VERIFY_SIGMAS * fit.amplitude_stderr)
            log.info("%s coefficient %.6f +- %.6f (expected %.6f): %s", mode.value, fit.amplitude,
                     fit.amplitude_stderr, mode.coefficient, "pass" if passed else "FAIL")
            checks.append({"mode": mode.value, "expected": mode.coefficient, "estimate": fit.amplitude,
                           "stderr": fit.amplitude_stderr, "passed": passed})
            curves.append(curve)
        report = {"command": "mc-verify", "seed": self.config.seed, "samples": self.config.samples,
                  "checks": checks, "passed": all(check["passed"] for check in checks)}
        return CommandResult(BaseModel.plain(report), curves_to_csv(curves), 0 if report["passed"] else 1)

    def run(self) -> CommandResult:
        """Runs the command named by ``config.command``."""
        commands = {"check": self.check, "band-scan": self.band_scan, "werner-sweep": self.werner_sweep,
                    "figure": self.figure, "mc-verify": self.mc_verify}
        if self.config is None or self.config.command not in commands:
            raise InvalidRunConfig(f"Unknown command {getattr(self.config, 'command', None)!r}.")
        return commands[self.config.command]()
