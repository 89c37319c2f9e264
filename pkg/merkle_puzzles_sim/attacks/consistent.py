"""
Partial permutations and uniform completion

An eavesdropper who knows f on a set of positions can sample a permutation
f' that agrees with f there and is otherwise uniform.
"""

from dataclasses import dataclass
from typing import Iterable, List, Mapping, Optional, Tuple, Union

import numpy as np

from ..exceptions import InconsistentConstraintsError, OutOfRangeError


@dataclass(frozen=True)
class ConstraintSet:
    """Injective set of (position, image) pairs, kept sorted by position"""
    pairs: Tuple[Tuple[int, int], ...] = ()

    def __post_init__(self):
        positions = [x for x, _ in self.pairs]
        images = [y for _, y in self.pairs]
        if len(set(positions)) != len(positions):
            raise InconsistentConstraintsError(f"Position repeated in constraints {list(self.pairs)}")
        if len(set(images)) != len(images):
            raise InconsistentConstraintsError(f"Image repeated in constraints {list(self.pairs)}")

    @classmethod
    def from_pairs(cls, pairs: Union[Iterable[Tuple[int, int]], Mapping[int, int]]) -> 'ConstraintSet':
        items = pairs.items() if isinstance(pairs, Mapping) else pairs
        return cls(tuple(sorted((int(x), int(y)) for x, y in items)))

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)

    @property
    def positions(self) -> Tuple[int, ...]:
        return tuple(x for x, _ in self.pairs)

    def image_of(self, position: int) -> Optional[int]:
        for x, y in self.pairs:
            if x == position:
                return y
        return None

    def preimage_of(self, image: int) -> Optional[int]:
        for x, y in self.pairs:
            if y == image:
                return x
        return None


def sample_consistent_permutation(n: int, constraints, rng: np.random.Generator) -> List[int]:
    """
    Draw a permutation of 1..n uniformly among those agreeing with constraints

    Args:
        n: Domain size
        constraints: ConstraintSet, or pairs/mapping to build one from
        rng: Random stream

    Returns:
        table with table[x - 1] = f'(x)
    """
    if not isinstance(constraints, ConstraintSet):
        constraints = ConstraintSet.from_pairs(constraints)

    table = [0] * n
    for x, y in constraints:
        if not (1 <= x <= n and 1 <= y <= n):
            raise OutOfRangeError(f"Constraint ({x}, {y}) outside 1..{n}")
        table[x - 1] = y

    used = {y for _, y in constraints}
    free_positions = [x for x in range(1, n + 1) if table[x - 1] == 0]
    free_images = np.array([y for y in range(1, n + 1) if y not in used], dtype=np.int64)
    for x, y in zip(free_positions, rng.permutation(free_images)):
        table[x - 1] = int(y)
    return table
