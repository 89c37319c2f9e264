"""
Repeat-Bob attack

Eve replays Bob's query-sampling procedure gamma * a times with fresh
randomness, queries the phase-2 positions she can read off c_B, and then
resolves the identifier c_B against everything she has seen.
"""

import logging

from .base import AttackConfig, EveOracle, EveOutcome, EveView
from .intersection import intersection_informed_guess

logger = logging.getLogger(__name__)


def _out_of_calls(eve: EveOracle, config: AttackConfig) -> bool:
    return eve.exhausted or (config.budget is not None and eve.calls >= config.budget)


def repeat_bob_attack(view: EveView, config: AttackConfig = AttackConfig()) -> EveOutcome:
    """
    Run the attack on one transcript

    Args:
        view: Eve's view of the trial
        config: Repetition multiplier and optional hard cap on calls

    Returns:
        EveOutcome (ungraded); calls_used <= gamma*a*b + a and <= config.budget
    """
    if view.transcript.aborted:
        logger.debug("Bob aborted, nothing to attack")
        return EveOutcome()

    protocol = view.protocol
    eve = view.oracle
    repetitions = config.gamma * protocol.a

    for _ in range(repetitions):
        if _out_of_calls(eve, config):
            break
        for x in protocol.sample_bob_positions(view.rng):
            if _out_of_calls(eve, config):
                break
            eve.query(x)

    for x in protocol.eve_phase2_positions(view.transcript):
        if _out_of_calls(eve, config):
            break
        eve.query(x)

    guess = intersection_informed_guess(eve.known_pairs(), view.transcript)
    return eve.outcome(guess)
