import argparse
import sys

# Handlers
from handlers.spectrum_es import handle_spectrum_es
from handlers.spectrum_ces import handle_spectrum_ces
from handlers.duality_check import handle_duality_check
from handlers.export_wf import handle_export_wf
from handlers.verify_all import handle_verify_all

# Utils
from utils.config import OUTPUT_FORMATS, RunConfig
from utils.shared_context import logger

HANDLERS = {
    "spectrum-es": (handle_spectrum_es, "ES spectrum: closed form vs finite-difference oracle"),
    "spectrum-ces": (handle_spectrum_ces, "CES spectrum from the cubic vs oracle"),
    "duality-check": (handle_duality_check, "energy/coupling exchange and Schwarzian closure"),
    "export-wf": (handle_export_wf, "analytic and numeric eigenfunction of level n"),
    "verify-all": (handle_verify_all, "every check at default parameters"),
}


def build_parser() -> argparse.ArgumentParser:
    flags = argparse.ArgumentParser(add_help=False, allow_abbrev=False)
    flags.add_argument("--alpha", type=float, help="ES alpha (> 0)")
    flags.add_argument("--beta", type=float, help="ES beta")
    flags.add_argument("--A", type=float, help="CES coupling A")
    flags.add_argument("--B", type=float, help="CES coupling B")
    flags.add_argument("--n", type=int, default=0, help="level index (default 0)")
    flags.add_argument("--n-max", type=int, help="highest CES level compared (default: all)")
    flags.add_argument("--grid-min", type=float, help="left grid end")
    flags.add_argument("--grid-max", type=float, help="right grid end")
    flags.add_argument("--grid-points", type=int, help="interior grid points (>= 100)")
    flags.add_argument("--format", choices=OUTPUT_FORMATS, default="csv", help="output format")
    flags.add_argument("--out", help="output file (default: stdout)")

    parser = argparse.ArgumentParser(
        prog="dualspec",
        description="Numerical checks of the ES/CES potential duality",
        allow_abbrev=False,
    )
    subparsers = parser.add_subparsers(dest="subcommand", required=True)
    for name, (_, help_text) in HANDLERS.items():
        subparsers.add_parser(name, parents=[flags], help=help_text, allow_abbrev=False)
    return parser


def main(argv=None) -> int:
    """Parses flags and dispatches to the subcommand handler; returns the exit status."""
    parser = build_parser()
    args = parser.parse_args(argv)

    try:
        cfg = RunConfig.from_args(args)
    except ValueError as e:
        parser.print_usage(sys.stderr)
        logger.error(f"Invalid flags: {e}")
        return 2

    handler, _ = HANDLERS[cfg.subcommand]
    logger.info(f"Running {cfg.subcommand}...")
    return handler(cfg)


if __name__ == '__main__':
    try:
        sys.exit(main())
    except Exception as e:
        logger.critical(f"Run failed: {e}")
        sys.exit(1)
