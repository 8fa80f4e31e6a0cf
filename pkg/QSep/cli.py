"""
Command-line front end.

Verdicts are data: a run that reaches a verdict exits 0 whatever the verdict says.
Malformed input exits 2, inputs that break a numerical invariant exit 3 and a failed
``mc-verify`` self-test exits 1.
"""
import argparse
import json
import logging
import sys
from typing import List, Optional

from . import __version__, SeparabilityAnalyzer
from .error import QSepError, MalformedInput
from .models import RunConfig, Mode
from .models.config import DEFAULT_SEED, DEFAULT_SAMPLES, DEFAULT_GRID, DEFAULT_RESTARTS

EXIT_OK = 0
EXIT_SELF_TEST_FAILED = 1
EXIT_MALFORMED = 2
EXIT_INVARIANT = 3


def _seed(text: str) -> int:
    value = int(text, 0)
    if not 0 <= value < 2 ** 64:
        raise argparse.ArgumentTypeError(f"seed must be an unsigned 64-bit integer, got {text}")
    return value


def _mode(text: str) -> Mode:
    try:
        mode = Mode.parse(text)
    except MalformedInput as e:
        raise argparse.ArgumentTypeError(str(e))
    if mode is Mode.EXTERNAL:
        raise argparse.ArgumentTypeError("external curves cannot be averaged")
    return mode


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", dest="input_path", help="JSON state spec")
    common.add_argument("--seed", type=_seed, default=DEFAULT_SEED, help="64-bit master seed (default %(default)s)")
    common.add_argument("--samples", type=int, default=DEFAULT_SAMPLES,
                        help="Monte Carlo samples per angle (default %(default)s)")
    common.add_argument("--grid", type=int, default=DEFAULT_GRID, help="grid points (default %(default)s)")
    common.add_argument("--mode", type=_mode, help="spin|photon-geometric|photon-hilbert")
    common.add_argument("--output", dest="output_path", help="CSV destination (default: standard output)")
    common.add_argument("--json", action="store_true", help="machine-readable report")
    common.add_argument("--degrees", action="store_true", help="photon angles in the state spec are degrees")
    common.add_argument("--restarts", type=int, default=DEFAULT_RESTARTS, help="CHSH optimizer restarts")
    common.add_argument("--workers", type=int, help="threads for per-angle Monte Carlo")
    common.add_argument("-v", "--verbose", action="store_true", help="log progress")

    parser = argparse.ArgumentParser(prog="qsep", description="Two-qubit separability criteria.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True, metavar="command")
    commands.add_parser("check", parents=[common], help="run every criterion on a state")
    commands.add_parser("band-scan", parents=[common], help="averaged correlation curve and its band check")
    commands.add_parser("werner-sweep", parents=[common], help="criteria across the Werner family")
    figure = commands.add_parser("figure", parents=[common], help="reproduce a comparison figure")
    figure.add_argument("figure", type=int, help="figure index: 1, 2 or 3")
    commands.add_parser("mc-verify", parents=[common], help="Monte Carlo check of the averaging coefficients")
    return parser


def _verdict_line(verdict: dict) -> str:
    return (f"{verdict['criterion']}: {verdict['status']} "
            f"(statistic {_number(verdict['statistic'])}, bound {_number(verdict['bound'])}, "
            f"margin {_number(verdict['margin'])})")


def _number(value) -> str:
    return "n/a" if value is None else f"{value:.6g}"


def render_text(report: dict) -> str:
    """Human-readable form of a command report."""
    command = report["command"]
    lines = []
    if command == "check":
        lines.append(f"state {report['state']} (purity {_number(report['purity'])})")
        lines += [_verdict_line(verdict) for verdict in report["verdicts"]]
    elif command in ("band-scan", "figure"):
        if command == "figure":
            lines.append(f"figure {report['figure']}: series {', '.join(report['series'])}")
        band = report.get("band")
        if band is not None:
            lines.append(f"{band['mode']} band: constant {_number(band['constant'])}, amplitude "
                         f"{_number(band['amplitude'])} +- {_number(band['amplitude_stderr'])} "
                         f"(bound {_number(band['c_bound'])}), residual {_number(band['residual_rms'])}")
            lines.append(_verdict_line(band["verdict"]))
        else:
            lines.append(_verdict_line(report["verdict"]))
        if "ensemble_C" in report:
            lines.append(f"ensemble C = {_number(report['ensemble_C'])}")
    elif command == "werner-sweep":
        lines += [f"threshold {name} = {_number(value)}" for name, value in report["thresholds"].items()]
    elif command == "mc-verify":
        for check in report["checks"]:
            lines.append(f"{check['mode']}: {check['estimate']:.6f} +- {check['stderr']:.6f} "
                         f"(expected {check['expected']:.6f}) {'pass' if check['passed'] else 'FAIL'}")
    return "\n".join(lines)


def emit(result, config: RunConfig, stdout=None, stderr=None) -> None:
    """
    Writes the CSV and the report.

    With ``--output`` the CSV goes to that file and the report to standard output; without it
    the CSV goes to standard output and the report to standard error.
    """
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    report = json.dumps(result.report, indent=2) if config.json else render_text(result.report)
    report_stream = stdout
    if result.csv is not None:
        if config.output_path:
            with open(config.output_path, "w", encoding="utf-8", newline="") as output:
                output.write(result.csv)
        else:
            stdout.write(result.csv)
            report_stream = stderr
    report_stream.write(report + "\n")


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        config = RunConfig.from_namespace(args)
        result = SeparabilityAnalyzer(config).run()
        emit(result, config)
    except MalformedInput as e:
        print(f"qsep: error: {e}", file=sys.stderr)
        return EXIT_MALFORMED
    except OSError as e:
        print(f"qsep: error: cannot write {e.filename or args.output_path}: {e.strerror or e}.", file=sys.stderr)
        return EXIT_MALFORMED
    except QSepError as e:
        print(f"qsep: error: {e}", file=sys.stderr)
        return EXIT_INVARIANT
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
