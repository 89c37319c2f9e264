"""
Eve's view of a trial and the accounting of her oracle use
"""

import logging
from dataclasses import dataclass, replace
from typing import Dict, FrozenSet, Optional

import numpy as np

from .consistent import ConstraintSet
from ..exceptions import InvalidParameterError
from ..oracle import Oracle, PartyId, QueryLedger
from ..protocols import KeyAgreementProtocol, Transcript

logger = logging.getLogger(__name__)

DEFAULT_GAMMA = 5


@dataclass(frozen=True)
class AttackConfig:
    """gamma: repetitions of Bob's strategy per Alice query; budget: cap on calls"""
    gamma: int = DEFAULT_GAMMA
    budget: Optional[int] = None

    def __post_init__(self):
        if self.gamma < 1:
            raise InvalidParameterError(f"gamma must be at least 1, got {self.gamma}")
        if self.budget is not None and self.budget < 0:
            raise InvalidParameterError(f"budget must be non-negative, got {self.budget}")


@dataclass(frozen=True)
class EveOutcome:
    """
    Eve's guess and what it cost

    calls_used counts logical queries, physical_calls those that reached the
    oracle after Eve's cache, unique_used the distinct positions.
    """
    guess: Optional[int] = None
    success: bool = False
    calls_used: int = 0
    unique_used: int = 0
    physical_calls: int = 0
    positions: FrozenSet[int] = frozenset()

    def __post_init__(self):
        if self.calls_used < self.unique_used:
            raise InvalidParameterError("calls_used cannot be below unique_used")
        if self.success and self.guess is None:
            raise InvalidParameterError("A successful outcome needs a guess")


class EveOracle:
    """Eve's caching handle on the oracle, optionally capped"""

    def __init__(self, oracle: Oracle, budget: Optional[int] = None):
        self._oracle = oracle
        self._budget = budget
        self._known: Dict[int, int] = {}
        self._calls = 0

    @property
    def calls(self) -> int:
        return self._calls

    @property
    def exhausted(self) -> bool:
        return self._budget is not None and self._calls >= self._budget

    def query(self, x: int) -> int:
        self._calls += 1
        if x not in self._known:
            self._known[x] = self._oracle.query(PartyId.EVE, x)
        return self._known[x]

    def known_pairs(self) -> ConstraintSet:
        return ConstraintSet.from_pairs(self._known)

    def ledger(self) -> QueryLedger:
        return self._oracle.ledger_snapshot(PartyId.EVE)

    def outcome(self, guess: Optional[int]) -> EveOutcome:
        return EveOutcome(
            guess=guess,
            calls_used=self._calls,
            unique_used=len(self._known),
            physical_calls=self.ledger().call_count,
            positions=frozenset(self._known),
        )


@dataclass(frozen=True)
class EveView:
    """Everything Eve may use: the public transcript, the protocol and her own queries"""
    n: int
    transcript: Transcript
    oracle: EveOracle
    rng: np.random.Generator
    protocol: KeyAgreementProtocol


def grade_outcome(outcome: EveOutcome, bob_key: Optional[int]) -> EveOutcome:
    """Mark the outcome successful when the guess equals Bob's key"""
    success = bob_key is not None and outcome.guess == bob_key
    return replace(outcome, success=success)
