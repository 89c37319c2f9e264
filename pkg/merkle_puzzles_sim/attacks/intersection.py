"""
Intersection-informed key recovery

Knowing f on every position Alice and Bob both queried is enough: the
identifier c_B is then the image of a known position.
"""

from typing import Optional

import numpy as np

from .consistent import ConstraintSet, sample_consistent_permutation
from ..protocols import AliceState, Transcript


def intersection_informed_guess(known, transcript: Transcript) -> Optional[int]:
    """
    Guess Bob's key from known (position, image) pairs

    Args:
        known: ConstraintSet (or pairs) containing f on A ∩ B
        transcript: Complete transcript

    Returns:
        The position whose image is c_B, or None to abstain
    """
    if transcript.aborted:
        return None
    if not isinstance(known, ConstraintSet):
        known = ConstraintSet.from_pairs(known)
    return known.preimage_of(transcript.c_b)


def simulate_alice_key(n: int, known, transcript: Transcript, rng: np.random.Generator) -> Optional[int]:
    """
    Re-run Alice's key step on a simulated permutation

    Samples f' consistent with the known pairs, takes A'_1 = f'^-1(c_A) so
    that f' reproduces c_A, and lets the simulated Alice recognise c_B.
    """
    if transcript.aborted:
        return None

    table = sample_consistent_permutation(n, known, rng)
    inverse = {image: position for position, image in enumerate(table, start=1)}
    positions = tuple(sorted(inverse[y] for y in transcript.c_a))
    simulated = AliceState(positions, {x: table[x - 1] for x in positions})
    return simulated.preimage_of(transcript.c_b)
