"""
Lazy permutation backend for large domains

Evaluates a seeded swap-or-not shuffle one position at a time. Every round
pairs X with its partner K_i - X (mod n) and swaps both members of the pair
or neither, so each round is a bijection and the composition is one too.
Answers depend only on (n, seed, x); nothing proportional to n is stored.
"""

import hashlib
import logging
import math
import struct
from typing import Dict, List

import numpy as np

logger = logging.getLogger(__name__)

DEFAULT_SECURITY_BITS = 40


def round_count(n: int, security_bits: int = DEFAULT_SECURITY_BITS) -> int:
    """Number of swap-or-not rounds for a domain of size n"""
    if n <= 1:
        return 0
    return math.ceil(7.23 * math.log2(n) + 4.82 * security_bits)


class SwapOrNotPermutation:
    """Pseudorandom permutation of 1..n answered on demand"""

    name = 'swap_or_not'

    def __init__(self, n: int, seed: int, security_bits: int = DEFAULT_SECURITY_BITS):
        self.n = n
        self._key = (seed % 2 ** 64).to_bytes(8, 'little')
        rounds = round_count(n, security_bits)
        rng = np.random.default_rng([seed % 2 ** 64, n])
        self._constants: List[int] = [int(k) for k in rng.integers(0, n, size=rounds)] if rounds else []
        self._images: Dict[int, int] = {}
        logger.debug(f"Swap-or-not permutation on {n} points with {rounds} rounds")

    def _swaps(self, round_idx: int, x_hat: int) -> bool:
        digest = hashlib.blake2b(struct.pack('<IQ', round_idx, x_hat), key=self._key, digest_size=1).digest()
        return (digest[0] & 1) == 1

    def image(self, x: int) -> int:
        cached = self._images.get(x)
        if cached is not None:
            return cached

        value = x - 1
        for round_idx, constant in enumerate(self._constants):
            partner = (constant - value) % self.n
            if self._swaps(round_idx, max(value, partner)):
                value = partner

        self._images[x] = value + 1
        return value + 1

    def table(self) -> List[int]:
        return [self.image(x) for x in range(1, self.n + 1)]
