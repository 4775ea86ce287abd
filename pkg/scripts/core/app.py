import sys
import logging
import argparse

from .. import config
from .. import dependencies
from ..errors import RecipeError

# Configure logging
logging.basicConfig(level=logging.INFO, format='%(asctime)s - %(name)s - %(levelname)s - %(message)s')
logger = logging.getLogger('LatticeWorkbench')

ALGORITHM_CHOICES = ("min-sum", "sum-product", "ml")


def _add_lattice_argument(parser):
    parser.add_argument("lattice", help="Lattice file (.lattice or leveled alist) or a JSON recipe")


def _add_decoder_arguments(parser):
    group = parser.add_argument_group("decoder")
    group.add_argument("--algorithm", choices=ALGORITHM_CHOICES, default=None,
                       help=f"Decoding algorithm (default: {config.DECODER_ALGORITHM})")
    group.add_argument("--max-iterations", type=int, default=None,
                       help=f"Maximum message-passing iterations (default: {config.MAX_ITERATIONS})")
    group.add_argument("--no-early-stop", dest="early_stop", action="store_const", const=False, default=None,
                       help="Run every iteration instead of stopping on a zero syndrome")
    group.add_argument("--damping", type=float, default=None,
                       help=f"Message damping factor in (0, 1] (default: {config.DAMPING})")
    group.add_argument("--llr-clip", type=float, default=None,
                       help=f"Magnitude bound on log-likelihood ratios (default: {config.LLR_CLIP})")


def _add_simulation_arguments(parser):
    group = parser.add_argument_group("simulation")
    group.add_argument("--seed", type=int, required=True,
                       help="Master seed; every random draw derives from it")
    group.add_argument("--min-word-errors", type=int, default=None,
                       help=f"Stop a point after this many word errors (default: {config.MIN_WORD_ERRORS})")
    group.add_argument("--max-trials", type=int, default=None,
                       help=f"Stop a point after this many trials (default: {config.MAX_TRIALS})")
    group.add_argument("--workers", type=int, default=None,
                       help=f"Worker threads; results do not depend on it (default: {config.WORKERS})")
    group.add_argument("--batch-size", type=int, default=None,
                       help=f"Trials per work unit (default: {config.BATCH_SIZE})")
    group.add_argument("--random-members", action="store_true",
                       help="Transmit random lattice points instead of the zero word")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="ldl",
        description="Construct, inspect, decode and simulate LDPC lattices")
    parser.add_argument("-v", "--verbose", action="store_true", help="Enable verbose output")
    parser.add_argument("--settings-dir", default=None,
                        help="Directory of the settings file (default: per-user data directory)")
    parser.add_argument("--version", action="version", version=f"%(prog)s {config.VERSION}",
                        help="Show the program version and exit")
    subparsers = parser.add_subparsers(dest="command", required=True, metavar="command")

    construct = subparsers.add_parser("construct", help="Build a lattice from a recipe and write it",
                                      description="Build a lattice from a JSON recipe and write a lattice file")
    construct.add_argument("recipe", help="JSON recipe file")
    construct.add_argument("--out", required=True, help="Output lattice file")

    info = subparsers.add_parser("info", help="Report volume, distance bounds and coding gain",
                                 description="Report volume, distance bounds, coding gain and LDLC sparsity")
    _add_lattice_argument(info)

    decode = subparsers.add_parser("decode", help="Decode one received vector",
                                   description="Decode one received vector to a lattice point")
    _add_lattice_argument(decode)
    source = decode.add_mutually_exclusive_group(required=True)
    source.add_argument("--vector", help="Received vector as whitespace- or comma-separated reals")
    source.add_argument("--vector-file", help="File holding the received vector")
    decode.add_argument("--sigma", type=float, default=None, help="Noise standard deviation for sum-product")
    decode.add_argument("--vnr", type=float, default=None, help="VNR in dB, converted to sigma")
    _add_decoder_arguments(decode)

    simulate = subparsers.add_parser("simulate", help="Simulate one VNR point",
                                     description="Monte Carlo word and symbol error rates at one VNR")
    _add_lattice_argument(simulate)
    simulate.add_argument("--vnr", type=float, required=True, help="VNR in dB")
    simulate.add_argument("--out", default=None, help="CSV output file (default: standard output)")
    _add_decoder_arguments(simulate)
    _add_simulation_arguments(simulate)

    sweep = subparsers.add_parser("sweep", help="Simulate a grid of VNR points",
                                  description="Monte Carlo error rates over a VNR grid")
    _add_lattice_argument(sweep)
    sweep.add_argument("--vnr-grid", default=None, help="Comma-separated VNR values in dB")
    sweep.add_argument("--vnr-start", type=float, default=None, help="First VNR in dB")
    sweep.add_argument("--vnr-stop", type=float, default=None, help="Last VNR in dB (inclusive)")
    sweep.add_argument("--vnr-step", type=float, default=0.25, help="VNR step in dB (default: 0.25)")
    sweep.add_argument("--out", default=None, help="CSV output file (default: standard output)")
    _add_decoder_arguments(sweep)
    _add_simulation_arguments(sweep)

    oracle = subparsers.add_parser("oracle-check", help="Compare the iterative decoder with the ML oracle",
                                   description="Paired trials through the iterative decoder and the ML oracle")
    _add_lattice_argument(oracle)
    oracle.add_argument("--vnr", type=float, required=True, help="VNR in dB")
    oracle.add_argument("--trials", type=int, default=1000, help="Paired trials (default: 1000)")
    _add_decoder_arguments(oracle)
    _add_simulation_arguments(oracle)
    return parser


def main(argv=None):
    """Main entry point for the command line; returns the process exit code"""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 2

    config.VERBOSE_OUTPUT = args.verbose
    if config.VERBOSE_OUTPUT:
        logging.getLogger().setLevel(logging.DEBUG)

    if not dependencies.check_libraries():
        return 1

    from ..SettingsManager import SettingsManager
    from .commands import COMMANDS

    settings = SettingsManager(settings_dir=args.settings_dir)
    try:
        return COMMANDS[args.command](args, settings)
    except RecipeError as e:
        logger.error(f"Invalid recipe: {e}")
        return 2
    except (ValueError, OSError) as e:
        logger.error(f"{args.command} failed: {e}")
        return 1


if __name__ == "__main__":
    sys.exit(main())
