"""
Sweep action - CLI interface for scaling experiments over several n
"""

import logging
import sys

from .run import add_experiment_arguments, config_from_args, deliver_payload, parse_int_list
from ..exceptions import ConfigurationError
from ..harness import sweep
from ..reports import emit_reports

logger = logging.getLogger(__name__)


def add_sweep_arguments(parser):
    """Add sweep specific arguments to the parser"""
    parser.add_argument('--n-list', type=parse_int_list, required=True, help='Domain sizes, comma-separated')
    add_experiment_arguments(parser)


def sweep_command(args):
    """Handle sweep command"""
    logger.info("Starting sweep command")
    if not args.n_list:
        raise ConfigurationError("--n-list must name at least one domain size")

    base = config_from_args(args, args.n_list[0])
    print(f"→ Sweeping n over {', '.join(str(n) for n in args.n_list)}...", file=sys.stderr)
    reports = sweep(base, args.n_list)
    deliver_payload(emit_reports(reports, args.format), args.out)

    logger.info(f"sweep command completed with {len(reports)} reports")
