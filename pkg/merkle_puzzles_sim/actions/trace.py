"""
Trace action - prints the transcript and keys of one seeded trial
"""

import logging

from tabulate import tabulate

from .run import parse_attacks, parse_seed
from ..harness import ExperimentConfig, execute_trial
from ..oracle import PartyId
from ..protocols import encode_key, serialize_transcript

logger = logging.getLogger(__name__)


def add_trace_arguments(parser):
    """Add trace specific arguments to the parser"""
    parser.add_argument('--n', type=int, required=True, help='Oracle domain size')
    parser.add_argument('--a', type=int, help='Alice query budget (default: ceil(sqrt(n)))')
    parser.add_argument('--b', type=int, help='Bob query budget (default: ceil(sqrt(n)))')
    parser.add_argument('--seed', type=parse_seed, required=True, help='Master seed (unsigned 64-bit)')
    parser.add_argument('--trial', type=int, default=0, help='Trial index under the master seed (default: 0)')
    parser.add_argument('--gamma', type=int, default=5, help='Repeat-Bob multiplier (default: 5)')
    parser.add_argument('--attacks', type=parse_attacks, default=(), help='Attacks to run on the transcript')


def _key_text(key, n):
    return 'ABORT' if key is None else f"{key} ({encode_key(key, n) or '-'})"


def trace_command(args):
    """Handle trace command"""
    config = ExperimentConfig(n=args.n, trials=1, master_seed=args.seed, a=args.a, b=args.b,
                              gamma=args.gamma, attacks=tuple(args.attacks))
    config.validate()
    logger.info(f"Tracing trial {args.trial} at n={args.n}")

    result = execute_trial(config, args.trial)
    outcome = result.outcome
    print(serialize_transcript(outcome.transcript), end='')
    print(f"kA: {_key_text(outcome.k_a, args.n)}")
    print(f"kB: {_key_text(outcome.k_b, args.n)}")
    print(f"agreed: {outcome.agreed}")
    print()

    rows = [
        [PartyId.ALICE.value, outcome.alice_ledger.call_count, outcome.alice_ledger.unique_count],
        [PartyId.BOB.value, outcome.bob_ledger.call_count, outcome.bob_ledger.unique_count],
    ]
    for label, (eve, covered) in result.attacks.items():
        rows.append([f"eve/{label}", eve.calls_used, eve.unique_used])
    print(tabulate(rows, headers=['Party', 'Calls', 'Unique'], tablefmt='grid'))

    for label, (eve, covered) in result.attacks.items():
        guess = 'abstain' if eve.guess is None else eve.guess
        print(f"{label}: guess={guess} success={eve.success} covered={covered}")
