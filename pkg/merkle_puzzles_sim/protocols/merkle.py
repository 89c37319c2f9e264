"""
Merkle-puzzle key agreement in the permutation-oracle model

Alice queries a random a-subset A and publishes the sorted images. Bob
queries a random b-subset B, picks a collision x in A ∩ B at random and
publishes f(x) as the identifier. Both output x; Alice recognises it from
the identifier because f is injective.
"""

import logging
from typing import Optional, Sequence, Tuple

import numpy as np

from .base import AliceState, BobState, KeyAgreementProtocol
from .transcript import validate_alice_message
from ..exceptions import InvalidParameterError, ProtocolViolationError
from ..oracle import Oracle, PartyId

logger = logging.getLogger(__name__)


class MerklePuzzleProtocol(KeyAgreementProtocol):
    """Birthday-paradox key agreement with a = b = ceil(sqrt(n)) by default"""

    name = 'merkle'

    def _sample_subset(self, size: int, rng: np.random.Generator) -> Tuple[int, ...]:
        drawn = rng.choice(self.n, size=size, replace=False, shuffle=False)
        return tuple((np.sort(drawn) + 1).tolist())

    def _forced_subset(self, positions: Sequence[int], size: int, owner: str) -> Tuple[int, ...]:
        chosen = tuple(sorted(int(x) for x in positions))
        if len(chosen) != size or len(set(chosen)) != size:
            raise InvalidParameterError(f"{owner} needs {size} distinct positions, got {list(positions)}")
        if chosen and not (1 <= chosen[0] and chosen[-1] <= self.n):
            raise InvalidParameterError(f"{owner} positions must lie in 1..{self.n}")
        return chosen

    def alice_phase1(self, oracle: Oracle, rng: np.random.Generator,
                     positions: Optional[Sequence[int]] = None) -> Tuple[AliceState, Tuple[int, ...]]:
        if positions is None:
            chosen = self._sample_subset(self.a, rng)
        else:
            chosen = self._forced_subset(positions, self.a, 'Alice')

        images = dict(zip(chosen, oracle.query_many(PartyId.ALICE, chosen)))
        c_a = tuple(sorted(images.values()))
        return AliceState(chosen, images), c_a

    def sample_bob_positions(self, rng: np.random.Generator) -> Tuple[int, ...]:
        return self._sample_subset(self.b, rng)

    def bob_respond(self, oracle: Oracle, c_a: Sequence[int], rng: np.random.Generator,
                    positions: Optional[Sequence[int]] = None) -> Tuple[BobState, Optional[int], Optional[int]]:
        published = set(validate_alice_message(c_a, self.a, self.n))

        if positions is None:
            chosen = self.sample_bob_positions(rng)
        else:
            chosen = self._forced_subset(positions, self.b, 'Bob')

        images = dict(zip(chosen, oracle.query_many(PartyId.BOB, chosen)))
        collisions = [x for x in chosen if images[x] in published]
        if not collisions:
            logger.debug("No collision between A and B, Bob aborts")
            return BobState(chosen, images), None, None

        key = collisions[int(rng.integers(len(collisions)))]
        return BobState(chosen, images, key), images[key], key

    def alice_phase2(self, oracle: Oracle, state: AliceState, c_b: Optional[int]) -> Optional[int]:
        if c_b is None:
            return None

        key = state.preimage_of(c_b)
        if key is None:
            raise ProtocolViolationError(f"c_B={c_b} matches none of Alice's images")
        return key
