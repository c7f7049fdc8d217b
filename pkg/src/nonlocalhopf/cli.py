"""
Command-line entry point.

    nonlocalhopf {analyze,hopf,normalform,simulate,sweep} --config FILE [--out DIR]
                 [--set key=value ...] [--verbose | --quiet]

Exit codes: 0 on success, 1 for unexpected errors, 2 for configuration errors, 3 for
analysis errors and 4 for a simulation blow-up. Every failure prints one JSON object on
standard error.
"""

import argparse
import json
import logging
import sys
from typing import Any, Dict, List, NoReturn, Optional, Sequence

from nonlocalhopf import __version__
from nonlocalhopf.commands import COMMANDS, NoHopfPointsError
from nonlocalhopf.hopf import DegenerateHopfError
from nonlocalhopf.model import ParameterError
from nonlocalhopf.parser import load_run_config
from nonlocalhopf.simulator import BlowUpError, SimConfigError
from nonlocalhopf.validator import ValidationError

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_CONFIG = 2
EXIT_ANALYSIS = 3
EXIT_BLOWUP = 4

LOG_FORMAT = "%(asctime)s [%(levelname)s] %(name)s: %(message)s"


class _JsonErrorParser(argparse.ArgumentParser):
    """Argument parser that reports usage errors as JSON."""

    def error(self, message: str) -> NoReturn:
        usage = {"usage": self.format_usage().strip()}
        payload = {"error": "UsageError", "message": message, "details": usage}
        print(json.dumps(payload, sort_keys=True), file=sys.stderr)
        sys.exit(EXIT_CONFIG)


def build_parser() -> argparse.ArgumentParser:
    """Build the argument parser with one subcommand per command."""
    parser = _JsonErrorParser(
        prog="nonlocalhopf",
        description="Stability, Hopf bifurcation and simulation of a nonlocal prey-predator model",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub = subparsers.add_parser(name, help=f"run the {name} command")
        sub.add_argument("--config", required=True, help="JSON run configuration")
        sub.add_argument("--out", help="output directory; overrides output.dir")
        sub.add_argument(
            "--set",
            dest="overrides",
            action="append",
            default=[],
            metavar="KEY=VALUE",
            help="override a configuration value by dotted path, e.g. params.ell=20",
        )
        verbosity = sub.add_mutually_exclusive_group()
        verbosity.add_argument("--verbose", action="store_true", help="log debug messages")
        verbosity.add_argument("--quiet", action="store_true", help="log warnings only")
    return parser


def _configure_logging(verbose: bool, quiet: bool) -> None:
    level = logging.DEBUG if verbose else logging.WARNING if quiet else logging.INFO
    logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr, force=True)


def _report_error(error: BaseException, details: Optional[Dict[str, Any]] = None) -> None:
    payload = {"error": type(error).__name__, "message": str(error), "details": details or {}}
    print(json.dumps(payload, sort_keys=True), file=sys.stderr)


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Run the command-line tool.

    Args:
        argv: Arguments without the program name; defaults to sys.argv[1:].

    Returns:
        The process exit code.
    """
    args = build_parser().parse_args(argv)
    _configure_logging(args.verbose, args.quiet)

    overrides: List[str] = list(args.overrides)
    if args.out:
        overrides.append(f"output.dir={json.dumps(args.out)}")

    try:
        config = load_run_config(args.config, overrides, command=args.command)
        COMMANDS[config.command](config)
    except (ValidationError, SimConfigError, FileNotFoundError) as e:
        _report_error(e)
        return EXIT_CONFIG
    except BlowUpError as e:
        _report_error(e, {"time": e.time, "step": e.step, "u_min": e.u_min})
        return EXIT_BLOWUP
    except (NoHopfPointsError, ParameterError, DegenerateHopfError, ArithmeticError) as e:
        _report_error(e)
        return EXIT_ANALYSIS
    except Exception as e:
        logger.debug("Unexpected failure", exc_info=True)
        _report_error(e)
        return EXIT_INTERNAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
