"""
Eager permutation backend
Draws the whole permutation up front with a seeded Fisher-Yates shuffle
"""

from typing import List, Sequence

import numpy as np

from ..exceptions import InvalidDomainError


class FisherYatesPermutation:
    """Uniform random permutation of 1..n held as a lookup table"""

    name = 'fisher_yates'

    def __init__(self, n: int, seed: int):
        rng = np.random.default_rng(seed)
        # Generator.permutation is an in-place Fisher-Yates over 0..n-1
        self._table: List[int] = (rng.permutation(n) + 1).tolist()
        self.n = n

    @classmethod
    def from_table(cls, table: Sequence[int]) -> 'FisherYatesPermutation':
        """
        Wrap an explicit permutation, e.g. a pinned test fixture

        Args:
            table: table[i] is the image of position i + 1

        Returns:
            Backend answering from the given table
        """
        values = [int(v) for v in table]
        if not values or sorted(values) != list(range(1, len(values) + 1)):
            raise InvalidDomainError(f"Not a permutation of 1..{len(values)}: {values}")

        backend = cls.__new__(cls)
        backend._table = values
        backend.n = len(values)
        return backend

    def image(self, x: int) -> int:
        return self._table[x - 1]

    def table(self) -> List[int]:
        return list(self._table)
