from collections import Counter

import numpy as np
import pytest

from merkle_puzzles_sim.attacks import ConstraintSet, sample_consistent_permutation
from merkle_puzzles_sim.exceptions import InconsistentConstraintsError, OutOfRangeError


def test_constraint_set_rejects_repeats():
    with pytest.raises(InconsistentConstraintsError):
        ConstraintSet.from_pairs([(1, 2), (1, 3)])
    with pytest.raises(InconsistentConstraintsError):
        ConstraintSet.from_pairs([(1, 2), (3, 2)])


def test_constraint_set_lookup():
    constraints = ConstraintSet.from_pairs({3: 1, 1: 2})
    assert constraints.positions == (1, 3)
    assert constraints.image_of(3) == 1
    assert constraints.preimage_of(2) == 1
    assert constraints.preimage_of(4) is None
    assert len(constraints) == 2


def test_fully_constrained_returns_that_permutation(rng):
    assert sample_consistent_permutation(3, [(1, 2), (2, 1), (3, 3)], rng) == [2, 1, 3]


def test_sample_respects_constraints(rng):
    for _ in range(50):
        table = sample_consistent_permutation(8, {2: 7, 5: 1}, rng)
        assert sorted(table) == list(range(1, 9))
        assert table[1] == 7 and table[4] == 1


def test_constraint_outside_domain(rng):
    with pytest.raises(OutOfRangeError):
        sample_consistent_permutation(3, [(4, 1)], rng)


def test_unconstrained_completion_spreads_over_free_images():
    rng = np.random.default_rng(99)
    counts = Counter(tuple(sample_consistent_permutation(3, {1: 1}, rng)) for _ in range(2000))
    assert set(counts) == {(1, 2, 3), (1, 3, 2)}
    assert 850 < counts[(1, 2, 3)] < 1150
