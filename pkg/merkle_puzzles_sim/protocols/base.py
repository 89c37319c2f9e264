"""
Generic one-round key agreement

Alice queries and sends c_A, Bob queries, answers with c_B and outputs k_B,
then Alice (optionally querying again) outputs k_A.
"""

import logging
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field, replace
from typing import Dict, Optional, Sequence, Tuple

import numpy as np

from .transcript import Transcript
from ..exceptions import InvalidParameterError, ProtocolViolationError
from ..oracle import Oracle, PartyId, QueryLedger

logger = logging.getLogger(__name__)


def ceil_sqrt(n: int) -> int:
    root = math.isqrt(n)
    return root if root * root == n else root + 1


@dataclass(frozen=True)
class AliceState:
    """Alice's private view: her positions A and their images"""
    positions: Tuple[int, ...]
    images: Dict[int, int] = field(default_factory=dict)
    phase2_positions: Tuple[int, ...] = ()

    def preimage_of(self, image: int) -> Optional[int]:
        for position, value in self.images.items():
            if value == image:
                return position
        return None


@dataclass(frozen=True)
class BobState:
    """Bob's private view: his positions B, their images and the chosen key"""
    positions: Tuple[int, ...]
    images: Dict[int, int] = field(default_factory=dict)
    chosen_key: Optional[int] = None


@dataclass(frozen=True)
class ProtocolOutcome:
    """
    Result of one honest run

    The private states are kept for verification only; attacks see nothing
    but the transcript.
    """
    k_a: Optional[int]
    k_b: Optional[int]
    agreed: bool
    aborted: bool
    alice_ledger: QueryLedger
    bob_ledger: QueryLedger
    transcript: Transcript
    alice_state: AliceState
    bob_state: BobState

    @property
    def intersection(self) -> Tuple[int, ...]:
        return tuple(sorted(set(self.alice_state.positions) & set(self.bob_state.positions)))


class KeyAgreementProtocol(ABC):
    """One-round (a, b, epsilon) key agreement against the permutation oracle"""

    name = 'abstract'

    def __init__(self, n: int, a: Optional[int] = None, b: Optional[int] = None):
        if n < 1:
            raise InvalidParameterError(f"Domain size must be positive, got {n}")
        self.n = n
        self.a = ceil_sqrt(n) if a is None else a
        self.b = ceil_sqrt(n) if b is None else b
        for label, value in (('a', self.a), ('b', self.b)):
            if not 0 <= value <= n:
                raise InvalidParameterError(f"{label}={value} must lie in 0..{n}")

    @abstractmethod
    def alice_phase1(self, oracle: Oracle, rng: np.random.Generator,
                     positions: Optional[Sequence[int]] = None) -> Tuple[AliceState, Tuple[int, ...]]:
        """Alice's first queries; returns her state and c_A"""

    @abstractmethod
    def bob_respond(self, oracle: Oracle, c_a: Sequence[int], rng: np.random.Generator,
                    positions: Optional[Sequence[int]] = None) -> Tuple[BobState, Optional[int], Optional[int]]:
        """Bob's queries; returns his state, c_B and k_B (None, None on abort)"""

    @abstractmethod
    def alice_phase2(self, oracle: Oracle, state: AliceState, c_b: Optional[int]) -> Optional[int]:
        """Alice's key from c_B, after any phase-2 queries"""

    @abstractmethod
    def sample_bob_positions(self, rng: np.random.Generator) -> Tuple[int, ...]:
        """Bob's query-sampling procedure, also replayed by Eve"""

    def phase2_positions(self, state: AliceState, c_b: Optional[int]) -> Tuple[int, ...]:
        """Alice's A_2 queries given c, charged to her budget a; none by default"""
        return ()

    def eve_phase2_positions(self, transcript: Transcript) -> Tuple[int, ...]:
        """The A_2 positions Eve can read off the transcript; none by default"""
        return ()


def _alice_phase2_queries(oracle: Oracle, protocol: KeyAgreementProtocol, state: AliceState,
                          c_b: Optional[int]) -> AliceState:
    """Query A_2 as Alice and fold the answers into her state"""
    positions = tuple(protocol.phase2_positions(state, c_b))
    if not positions:
        return state
    images = dict(state.images)
    images.update(zip(positions, oracle.query_many(PartyId.ALICE, positions)))
    return replace(state, images=images, phase2_positions=positions)


def run_key_agreement(oracle: Oracle, protocol: KeyAgreementProtocol, rng: np.random.Generator) -> ProtocolOutcome:
    """
    Run the three phases in order on a fresh oracle

    Args:
        oracle: Oracle nobody has queried yet
        protocol: Protocol instance
        rng: Local randomness of Alice and Bob

    Returns:
        ProtocolOutcome with keys, flags, ledgers and transcript
    """
    if not oracle.is_fresh():
        raise ProtocolViolationError("run_key_agreement needs a fresh oracle")

    alice_state, c_a = protocol.alice_phase1(oracle, rng)
    bob_state, c_b, k_b = protocol.bob_respond(oracle, c_a, rng)
    alice_state = _alice_phase2_queries(oracle, protocol, alice_state, c_b)
    k_a = protocol.alice_phase2(oracle, alice_state, c_b)
    transcript = Transcript(tuple(c_a), c_b)

    alice_ledger = oracle.ledger_snapshot(PartyId.ALICE)
    bob_ledger = oracle.ledger_snapshot(PartyId.BOB)
    if alice_ledger.unique_count > protocol.a:
        raise ProtocolViolationError(f"Alice made {alice_ledger.unique_count} queries, budget a={protocol.a}")
    if bob_ledger.unique_count > protocol.b:
        raise ProtocolViolationError(f"Bob made {bob_ledger.unique_count} queries, budget b={protocol.b}")

    aborted = transcript.aborted
    if aborted and (k_a is not None or k_b is not None):
        raise ProtocolViolationError("Keys must be absent on abort")

    return ProtocolOutcome(
        k_a=k_a,
        k_b=k_b,
        agreed=k_a is not None and k_a == k_b,
        aborted=aborted,
        alice_ledger=alice_ledger,
        bob_ledger=bob_ledger,
        transcript=transcript,
        alice_state=alice_state,
        bob_state=bob_state,
    )
