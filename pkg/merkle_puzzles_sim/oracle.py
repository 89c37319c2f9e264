"""
Random permutation oracle shared by Alice, Bob and Eve

The oracle hides a bijection f on {1..n} and meters every query in a
per-party ledger. Only forward queries exist.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Dict, FrozenSet, List, Sequence, Set

from .exceptions import InvalidDomainError, OracleAccessError, OutOfRangeError
from .permutations import FisherYatesPermutation, build_permutation

logger = logging.getLogger(__name__)

MASK64 = (1 << 64) - 1


class PartyId(Enum):
    """The three parties allowed to query the oracle"""
    ALICE = 'alice'
    BOB = 'bob'
    EVE = 'eve'


@dataclass(frozen=True)
class QueryLedger:
    """Immutable record of one party's oracle usage"""
    unique_positions: FrozenSet[int] = frozenset()
    call_count: int = 0

    @property
    def unique_count(self) -> int:
        return len(self.unique_positions)


class Oracle:
    """Query-metered random permutation on {1..n}"""

    def __init__(self, n: int, seed: int, permutation, verification: bool = False):
        self._n = n
        self._seed = seed
        self._permutation = permutation
        self._verification = verification
        self._positions: Dict[PartyId, Set[int]] = {party: set() for party in PartyId}
        self._calls: Dict[PartyId, int] = {party: 0 for party in PartyId}

    @classmethod
    def from_table(cls, table: Sequence[int], verification: bool = True) -> 'Oracle':
        """Oracle answering from an explicit permutation (test fixtures)"""
        permutation = FisherYatesPermutation.from_table(table)
        return cls(permutation.n, 0, permutation, verification=verification)

    @property
    def n(self) -> int:
        return self._n

    @property
    def seed(self) -> int:
        return self._seed

    @property
    def sampler(self) -> str:
        return self._permutation.name

    def _position(self, x) -> int:
        if type(x) is not int:
            if isinstance(x, bool) or int(x) != x:
                raise OutOfRangeError(f"Query position {x} outside 1..{self._n}")
            x = int(x)
        if not 1 <= x <= self._n:
            raise OutOfRangeError(f"Query position {x} outside 1..{self._n}")
        return x

    def query(self, party: PartyId, x: int) -> int:
        """
        Answer f(x) and charge the query to the party's ledger

        Args:
            party: Querying party
            x: Position in 1..n

        Returns:
            The image f(x)
        """
        x = self._position(x)
        image = self._permutation.image(x)
        self._calls[party] += 1
        self._positions[party].add(x)
        return image

    def query_many(self, party: PartyId, positions: Sequence[int]) -> List[int]:
        """
        Answer a batch of queries, one ledger entry per position

        Every position is range-checked before any is charged, so a bad
        batch leaves the ledger untouched.
        """
        checked = [self._position(x) for x in positions]
        image = self._permutation.image
        images = [image(x) for x in checked]
        self._calls[party] += len(checked)
        self._positions[party].update(checked)
        return images

    def ledger_snapshot(self, party: PartyId) -> QueryLedger:
        return QueryLedger(frozenset(self._positions[party]), self._calls[party])

    def is_fresh(self) -> bool:
        return all(count == 0 for count in self._calls.values())

    def reveal_permutation(self) -> List[int]:
        """Full mapping f(1..n); verification mode only, ledgers untouched"""
        if not self._verification:
            raise OracleAccessError("reveal_permutation is only available in verification mode")
        return self._permutation.table()

    def fork(self) -> 'Oracle':
        """Same permutation, fresh ledgers"""
        return Oracle(self._n, self._seed, self._permutation, verification=self._verification)


def create_oracle(n: int, seed: int, sampler: str = 'auto', verification: bool = False) -> Oracle:
    """
    Create an oracle for a uniformly drawn permutation on {1..n}

    Args:
        n: Domain size, at least 1
        seed: 64-bit seed; equal (n, seed) give the identical permutation
        sampler: 'auto', 'fisher_yates' or 'swap_or_not'
        verification: Enable reveal_permutation

    Returns:
        Oracle with empty ledgers
    """
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise InvalidDomainError(f"Oracle domain size must be a positive integer, got {n!r}")

    seed = int(seed) & MASK64
    permutation = build_permutation(n, seed, sampler)
    logger.debug(f"Created {permutation.name} oracle n={n} seed={seed}")
    return Oracle(n, seed, permutation, verification=verification)
