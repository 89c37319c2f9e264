"""
Verify action - runs the exact-oracle cross-check suite
"""

import logging
import sys

from tabulate import tabulate

from ..exceptions import InvariantViolationError
from ..verification import run_verification_suite

logger = logging.getLogger(__name__)


def add_verify_arguments(parser):
    """Add verify specific arguments to the parser"""
    parser.add_argument(
        '--max-n',
        type=int,
        default=6,
        help='Largest n for exhaustive subset enumeration (default: 6)'
    )


def verify_command(args):
    """Handle verify command"""
    logger.info("Starting verify command")
    print("→ Running verification suite...", file=sys.stderr)

    results = run_verification_suite(max_n=args.max_n)
    table = [[r.name, 'PASS' if r.passed else 'FAIL', r.detail] for r in results]
    print(tabulate(table, headers=['Check', 'Result', 'Detail'], tablefmt='grid'))

    failed = [r.name for r in results if not r.passed]
    if failed:
        raise InvariantViolationError(f"{len(failed)} verification check(s) failed: {', '.join(failed)}")
    print(f"✓ All {len(results)} checks passed", file=sys.stderr)
