"""
Shared fixtures for Merkle Puzzles Sim tests
"""

import numpy as np
import pytest

from merkle_puzzles_sim.oracle import Oracle

# f(1)=2, f(2)=4, f(3)=1, f(4)=3
PINNED_TABLE = [2, 4, 1, 3]

# Statistical assertions use wide intervals so a fixed seed does not flake
TEST_CONFIDENCE = 0.999


@pytest.fixture
def pinned_oracle():
    return Oracle.from_table(PINNED_TABLE)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
