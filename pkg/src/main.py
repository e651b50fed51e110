# main.py
"""
Command-line surface:

    python -m src.main check alpha.json
    python -m src.main simulate alpha.json --input impulse.json --energy --csv ledger.csv
    python -m src.main transfer alpha_prime.json --grid 20 --coeffs 3
    python -m src.main realize z1z2.json --out realized.json
    python -m src.main laxphillips alpha.json --op metric

Reports are JSON on stdout, logs go to stderr. Exit codes: 0 computed,
2 input error (including unexpected exceptions), 3 verification failure.
For a fixed --seed the report is byte-identical across runs unless
--timing adds wall-clock seconds.
"""
import argparse
import logging
import sys
from typing import List, Optional

from src.cli_io.commands import COMMANDS
from src.cli_io.formats import read_json
from src.cli_io.reports import EXIT_INPUT, EXIT_VERIFICATION, error_report
from src.config import load_settings
from src.errors import InputError, NdsysError, PreconditionError, RankAmbiguityError, VerificationError
from src.metrics.compare import compare_results
from utils.helper_functions import configure_logging

logger = logging.getLogger(__name__)

VERIFICATION_ERRORS = (PreconditionError, VerificationError, RankAmbiguityError)


def common_options() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("--tol", type=float, help="Pass/fail tolerance (overrides NDSYS_TOL)")
    parent.add_argument("--seed", type=int, help="Seed of every randomized step")
    parent.add_argument("--config", help="JSON file with settings and flag values")
    parent.add_argument("--verbose", action="store_true", help="Debug logging on stderr")
    parent.add_argument("--progress", action="store_true", help="Progress bars on stderr")
    parent.add_argument("--reference", help="Stored report whose results this run is compared with")
    parent.add_argument("--timing", action="store_true", help="Add wall-clock seconds per stage to the report")
    return parent


def build_parser() -> argparse.ArgumentParser:
    parent = common_options()
    parser = argparse.ArgumentParser(prog="ndsys", description="Multiparametric LSDS toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    check = sub.add_parser("check", parents=[parent], help="Dissipativity, conservativity, close-connectedness")
    check.add_argument("system")
    check.add_argument("--samples", type=int, help="Torus grid points per axis")
    check.add_argument("--refine", action=argparse.BooleanOptionalAction, default=True)

    simulate = sub.add_parser("simulate", parents=[parent], help="Trajectory and energy ledger")
    simulate.add_argument("system")
    simulate.add_argument("--input", help="Input signal file")
    simulate.add_argument("--init", help="Initial state file (front |t| = 0)")
    simulate.add_argument("--box", type=int, nargs=2, metavar=("LO", "HI"), help="Cube [LO, HI]^N")
    simulate.add_argument("--nmax", type=int, default=4)
    simulate.add_argument("--energy", action="store_true", help="Add the per-front energy ledger")
    simulate.add_argument("--conjugate", action="store_true", help="Ledger of the conjugate system")
    simulate.add_argument("--csv", help="Write the ledger to this CSV file")

    transfer = sub.add_parser("transfer", parents=[parent], help="Transfer function values and coefficients")
    transfer.add_argument("system")
    transfer.add_argument("--points", help="JSON file of points")
    transfer.add_argument("--grid", type=int, default=20, help="Number of random points when --points is absent")
    transfer.add_argument("--coeffs", type=int, metavar="MAXDEG", help="Maclaurin coefficients up to this degree")

    realize = sub.add_parser("realize", parents=[parent], help="Conservative realization of Agler data")
    realize.add_argument("agler")
    realize.add_argument("--grid-size", type=int)
    realize.add_argument("--extra-dims", type=int, default=0)
    realize.add_argument("--out", help="Write the realized system here")

    laxphillips = sub.add_parser("laxphillips", parents=[parent], help="Lax-Phillips generator checks")
    laxphillips.add_argument("system")
    laxphillips.add_argument("--op", choices=["generator", "adjoint", "commute", "metric"], default="metric")
    laxphillips.add_argument("--k", type=int, default=1)
    laxphillips.add_argument("--j", type=int)
    laxphillips.add_argument("--box", type=int, nargs=2, metavar=("LO", "HI"))
    laxphillips.add_argument("--trials", type=int, default=10)

    parser.subcommands = sub.choices
    return parser


def parse_arguments(argv: Optional[List[str]] = None) -> argparse.Namespace:
    """Flag values from --config become defaults; explicit flags still win."""
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config:
        document = read_json(args.config)
        subparser = parser.subcommands[args.command]
        known = {key: value for key, value in document.items() if hasattr(args, key.replace("-", "_"))}
        subparser.set_defaults(**{key.replace("-", "_"): value for key, value in known.items()})
        args = parser.parse_args(argv)
    return args


def main(argv: Optional[List[str]] = None) -> int:
    command = argv[0] if argv else (sys.argv[1] if len(sys.argv) > 1 else "")
    try:
        args = parse_arguments(argv)
        command = args.command
        configure_logging(args.verbose)
        settings = load_settings(args.config, verdict_tol=args.tol, seed=args.seed)
        report = COMMANDS[command](args, settings)
        if not args.timing:
            report.timing = {}
        if args.reference:
            comparison = compare_results(report.results, read_json(args.reference), settings.verdict_tol)
            report.results["comparison"] = comparison
            if comparison["number_of_keys_differing"] or comparison["number_of_keys_missed"]:
                report.warnings.append(f"results differ from {args.reference}")
    except VERIFICATION_ERRORS as e:
        logger.error("%s failed verification: %s", command, e)
        report = error_report(command, e, EXIT_VERIFICATION)
    except (NdsysError, ValueError) as e:
        logger.error("%s: %s", command, e)
        report = error_report(command, e, EXIT_INPUT)
    except SystemExit as e:
        if e.code in (0, None):
            raise
        report = error_report(command, InputError(f"invalid command line (argparse exit {e.code})"), EXIT_INPUT)
    except Exception as e:
        logger.exception("%s: unexpected %s", command, type(e).__name__)
        report = error_report(command, e, EXIT_INPUT)
    print(report.to_json())
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
