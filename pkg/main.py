"""Main application entry point with the command-line surface."""
import argparse
import logging
import sys
from typing import List, Optional

from config.settings import settings
from config.constants import EXIT_OK
from handlers.error import error_handler

logger = logging.getLogger(__name__)


def build_parser() -> argparse.ArgumentParser:
    """Argument parser for the run, dict and verify commands."""
    parser = argparse.ArgumentParser(
        prog="greedy-descent",
        description="Dictionary greedy approximation and convex minimization in l_p^d",
    )
    parser.add_argument(
        "--log-level", default=None, choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        help=f"Logging level (default from LOG_LEVEL, currently {settings.LOG_LEVEL})",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    run = commands.add_parser("run", help="Run one experiment from a JSON config")
    run.add_argument("config", help="Path to the run configuration")

    dictionary = commands.add_parser("dict", help="Build or inspect dictionaries")
    dict_commands = dictionary.add_subparsers(dest="dict_command", required=True)
    build = dict_commands.add_parser("build", help="Build a dictionary and write it as CSV")
    build.add_argument("kind", help="canonical, random_sphere, incoherent or equiangular")
    build.add_argument("--d", type=int, default=None, help="Ambient dimension")
    build.add_argument("--n", type=int, default=None, help="Number of atoms")
    build.add_argument("--mu", type=float, default=None, help="Coherence cap (incoherent)")
    build.add_argument("--p", type=float, default=2.0, help="Exponent of the ambient l_p norm")
    build.add_argument("--seed", type=int, default=None)
    build.add_argument("--max-attempts", type=int, default=100000, help="Draw budget (incoherent)")
    build.add_argument("--out", default=None, help="Destination CSV")
    inspect = dict_commands.add_parser("inspect", help="Print d, N, coherence and beta of a dictionary CSV")
    inspect.add_argument("path")
    inspect.add_argument("--seed", type=int, default=None, help="Seed for the multistart beta bound")

    verify = commands.add_parser("verify", help="Run a named verification suite")
    verify.add_argument("suite")
    verify.add_argument("--seeds", type=int, default=None, help="Number of seeded trials")
    verify.add_argument("--max-seconds", type=float, default=None, help="Wall-clock budget")
    verify.add_argument("--workers", type=int, default=None, help="Worker threads (results do not depend on it)")
    verify.add_argument("--out", default=None, help="Output directory")
    verify.add_argument("--seed", type=int, default=0, help="Base seed")
    return parser


def dispatch(args: argparse.Namespace) -> int:
    # Import here so --help stays fast
    if args.command == "run":
        from cli.run import cmd_run
        return cmd_run(args.config)
    if args.command == "dict":
        from cli.dictionary import cmd_dict_build, cmd_dict_inspect
        if args.dict_command == "build":
            return cmd_dict_build(
                args.kind, out=args.out, d=args.d, n=args.n, mu=args.mu, p=args.p,
                seed=args.seed, max_attempts=args.max_attempts,
            )
        return cmd_dict_inspect(args.path, seed=args.seed)
    from cli.verify import cmd_verify
    return cmd_verify(
        args.suite, seeds=args.seeds, max_seconds=args.max_seconds,
        workers=args.workers, out_dir=args.out, seed=args.seed,
    )


def main(argv: Optional[List[str]] = None) -> int:
    """Main application entry point."""
    args = build_parser().parse_args(argv)

    # Configure logging
    logging.basicConfig(
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        level=getattr(logging, args.log_level or settings.LOG_LEVEL),
    )
    logger.debug(f"Command: {args.command}")

    try:
        return dispatch(args)
    except Exception as e:
        return error_handler(e)


if __name__ == "__main__":
    sys.exit(main() or EXIT_OK)
