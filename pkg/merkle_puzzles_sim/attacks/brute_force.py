"""
Brute-force baseline: query fresh uniform positions until one maps to c_B
"""

import logging

from .base import EveOutcome, EveView
from ..exceptions import InvalidParameterError

logger = logging.getLogger(__name__)


def brute_force_attack(view: EveView, budget: int) -> EveOutcome:
    """
    Query up to `budget` distinct random positions, stopping at the key

    Args:
        view: Eve's view of the trial
        budget: Maximum number of positions to try

    Returns:
        EveOutcome (ungraded)
    """
    if budget < 0:
        raise InvalidParameterError(f"budget must be non-negative, got {budget}")
    if view.transcript.aborted:
        return EveOutcome()

    attempts = min(budget, view.n)
    for x in view.rng.choice(view.n, size=attempts, replace=False):
        position = int(x) + 1
        if view.oracle.query(position) == view.transcript.c_b:
            return view.oracle.outcome(position)

    return view.oracle.outcome(None)
