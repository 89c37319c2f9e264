"""
Run action - CLI interface for a single Monte Carlo experiment
"""

import argparse
import logging
import sys
from typing import Tuple

from ..attacks import ATTACK_NAMES
from ..harness import DEFAULT_ATTACKS, ExperimentConfig, run_trials
from ..oracle import MASK64
from ..permutations import SAMPLERS
from ..reports import REPORT_FORMATS, emit_report, write_report

logger = logging.getLogger(__name__)


def parse_int_list(text: str) -> Tuple[int, ...]:
    try:
        return tuple(int(item) for item in text.split(',') if item.strip())
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from e


def parse_float_list(text: str) -> Tuple[float, ...]:
    try:
        return tuple(float(item) for item in text.split(',') if item.strip())
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from e


def parse_attacks(text: str) -> Tuple[str, ...]:
    names = tuple(item.strip() for item in text.split(',') if item.strip())
    unknown = [name for name in names if name not in ATTACK_NAMES]
    if unknown:
        choices = ', '.join(ATTACK_NAMES)
        raise argparse.ArgumentTypeError(f"unknown attack(s) {', '.join(unknown)}; choose from {choices}")
    return names


def parse_seed(text: str) -> int:
    try:
        seed = int(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"seed must be an integer, got {text!r}") from e
    if not 0 <= seed <= MASK64:
        raise argparse.ArgumentTypeError(f"seed must be an unsigned 64-bit integer, got {seed}")
    return seed


def add_experiment_arguments(parser):
    """Flags shared by run and sweep"""
    parser.add_argument('--a', type=int, help='Alice query budget (default: ceil(sqrt(n)))')
    parser.add_argument('--b', type=int, help='Bob query budget (default: ceil(sqrt(n)))')
    parser.add_argument('--trials', type=int, required=True, help='Number of independent trials')
    parser.add_argument('--seed', type=parse_seed, required=True, help='Master seed (unsigned 64-bit)')
    parser.add_argument('--gamma', type=int, default=5, help='Repeat-Bob multiplier (default: 5)')
    parser.add_argument(
        '--attacks',
        type=parse_attacks,
        default=DEFAULT_ATTACKS,
        help=f"Comma-separated attacks from {','.join(ATTACK_NAMES)} (default: repeat_bob)"
    )
    parser.add_argument('--budgets', type=parse_int_list, default=(), help='Brute-force budgets, comma-separated')
    parser.add_argument(
        '--budget-fractions',
        type=parse_float_list,
        default=(),
        help='Brute-force budgets as fractions of n, comma-separated (default: 0,0.25,0.5,0.75,1)'
    )
    parser.add_argument('--confidence', type=float, default=0.95, help='Confidence level (default: 0.95)')
    parser.add_argument('--sampler', choices=SAMPLERS, default='auto', help='Permutation sampler (default: auto)')
    parser.add_argument('--workers', type=int, default=1, help='Worker processes, 0 for one per core (default: 1)')
    parser.add_argument('--format', choices=REPORT_FORMATS, default='csv', help='Output format (default: csv)')
    parser.add_argument('--out', '-o', help='Output file path (default: stdout)')


def add_run_arguments(parser):
    """Add run specific arguments to the parser"""
    parser.add_argument('--n', type=int, required=True, help='Oracle domain size')
    add_experiment_arguments(parser)


def config_from_args(args, n: int) -> ExperimentConfig:
    return ExperimentConfig(
        n=n,
        trials=args.trials,
        master_seed=args.seed,
        a=args.a,
        b=args.b,
        gamma=args.gamma,
        attacks=tuple(args.attacks),
        brute_force_budgets=tuple(args.budgets),
        budget_fractions=tuple(args.budget_fractions),
        confidence=args.confidence,
        sampler=args.sampler,
        workers=args.workers,
    )


def deliver_payload(payload: bytes, out_path=None):
    """Write to --out if given, otherwise to stdout"""
    if out_path:
        written = write_report(payload, out_path)
        print(f"✓ Report written to {written}", file=sys.stderr)
        return
    sys.stdout.buffer.write(payload)
    sys.stdout.flush()


def run_command(args):
    """Handle run command"""
    logger.info("Starting run command")
    config = config_from_args(args, args.n)
    config.validate()
    print(f"→ Running {config.trials} trials at n={config.n}...", file=sys.stderr)

    report = run_trials(config)
    deliver_payload(emit_report(report, args.format), args.out)

    logger.info("run command completed successfully")
