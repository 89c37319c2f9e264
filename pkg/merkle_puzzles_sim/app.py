#!/usr/bin/env python3
"""
Merkle Puzzles Sim - key agreement experiments against a random permutation oracle
"""

import argparse
import logging
import logging.config
import os
import sys

from .actions.run import add_run_arguments, run_command
from .actions.sweep import add_sweep_arguments, sweep_command
from .actions.trace import add_trace_arguments, trace_command
from .actions.verify import add_verify_arguments, verify_command
from .exceptions import MerklePuzzlesError

LOG_FILE = 'logs/merkle_puzzles_sim.log'
UNEXPECTED_EXIT_CODE = 2


def setup_logging(log_level: str = "INFO"):
    """Console gets warnings and up, the rotating file gets log_level and up"""
    os.makedirs("logs", exist_ok=True)

    try:
        logging.config.dictConfig({
            'version': 1,
            'disable_existing_loggers': False,
            'formatters': {
                'standard': {
                    'format': '%(asctime)s - %(name)s - %(levelname)s - %(funcName)s:%(lineno)d - %(message)s',
                    'datefmt': '%Y-%m-%d %H:%M:%S'
                },
                'simple': {
                    'format': '%(levelname)s - %(name)s - %(message)s'
                }
            },
            'handlers': {
                'console': {
                    'class': 'logging.StreamHandler',
                    'level': 'WARNING',
                    'formatter': 'simple',
                    'stream': 'ext://sys.stderr'
                },
                'file': {
                    'class': 'logging.handlers.RotatingFileHandler',
                    'level': log_level,
                    'formatter': 'standard',
                    'filename': LOG_FILE,
                    'maxBytes': 10485760,  # 10MB
                    'backupCount': 5,
                    'encoding': 'utf8'
                }
            },
            'loggers': {
                'merkle_puzzles_sim': {
                    'level': log_level,
                    'handlers': ['console', 'file'],
                    'propagate': False
                }
            },
            'root': {
                'level': log_level,
                'handlers': ['console', 'file']
            }
        })
    except (ValueError, OSError):
        # Fall back to stderr only if the log file can't be opened
        logging.basicConfig(
            level=getattr(logging, log_level.upper()),
            format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
            handlers=[logging.StreamHandler(sys.stderr)]
        )


class _ArgumentParser(argparse.ArgumentParser):
    """argparse exits 2 on bad usage; usage errors exit 1 here"""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(
        prog='mps',
        description="Merkle Puzzles Sim - key agreement experiments against a random permutation oracle",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  mps run --n 100 --trials 10000 --seed 1                  # Agreement and repeat-Bob success at n=100
  mps run --n 10000 --trials 500 --seed 7 --format text    # Human-readable summary
  mps sweep --n-list 16,64,256 --trials 2000 --seed 3      # Scaling curve as CSV
  mps run --n 400 --trials 1000 --seed 2 --attacks brute_force --budgets 0,100,400
  mps trace --n 4 --seed 5                                 # Transcript and ledgers of one trial
  mps verify                                               # Exact cross-checks
        """
    )

    parser.add_argument(
        '--log-level',
        choices=['DEBUG', 'INFO', 'WARNING', 'ERROR'],
        default='INFO',
        help='Set logging level (default: INFO)'
    )

    subparsers = parser.add_subparsers(dest='command', help='Available commands', parser_class=_ArgumentParser)

    run_parser = subparsers.add_parser('run', help='Run one Monte Carlo experiment')
    add_run_arguments(run_parser)
    run_parser.set_defaults(func=run_command)

    sweep_parser = subparsers.add_parser('sweep', help='Run one experiment per domain size')
    add_sweep_arguments(sweep_parser)
    sweep_parser.set_defaults(func=sweep_command)

    trace_parser = subparsers.add_parser('trace', help='Show transcript, keys and ledgers of one trial')
    add_trace_arguments(trace_parser)
    trace_parser.set_defaults(func=trace_command)

    verify_parser = subparsers.add_parser('verify', help='Cross-check simulation against exact formulas')
    add_verify_arguments(verify_parser)
    verify_parser.set_defaults(func=verify_command)

    return parser


def main(argv=None):
    """Main CLI entry point"""
    parser = build_parser()
    args = parser.parse_args(argv)

    if not args.command:
        parser.print_help()
        sys.exit(1)

    setup_logging(log_level=args.log_level)
    logger = logging.getLogger(__name__)
    logger.info(f"Executing command: {args.command}")

    try:
        args.func(args)
        logger.info(f"Command '{args.command}' completed successfully")
    except MerklePuzzlesError as e:
        logger.exception(f"Application error in command '{args.command}': {e}")
        print(f"✗ Error: {e}", file=sys.stderr)
        print(f"Check {LOG_FILE} for detailed information", file=sys.stderr)
        sys.exit(e.exit_code)
    except KeyboardInterrupt:
        logger.info("Command interrupted by user")
        print("⚠ Operation cancelled by user", file=sys.stderr)
        sys.exit(0)
    except Exception as e:
        logger.exception(f"Unexpected error in command '{args.command}': {e}")
        print("✗ An unexpected error occurred", file=sys.stderr)
        print(f"Check {LOG_FILE} for detailed information", file=sys.stderr)
        sys.exit(UNEXPECTED_EXIT_CODE)


if __name__ == "__main__":
    main()
