from fractions import Fraction

import pytest

from merkle_puzzles_sim.verification import (
    PINNED_PERMUTATION, enumerate_collision_probability, enumerate_intersection_mean, oracle_tables,
    permutation_frequencies, run_verification_suite, uniformity_p_value,
)


def test_enumeration_reference_values():
    assert enumerate_collision_probability(4, 2, 2) == Fraction(5, 6)
    assert enumerate_intersection_mean(4, 2, 2) == 1


def test_permutation_frequencies_cover_all_of_s_n():
    counts = permutation_frequencies(3, [[1, 2, 3], [1, 2, 3], [3, 2, 1]])
    assert len(counts) == 6
    assert sum(counts) == 3
    assert counts[0] == 2


@pytest.mark.parametrize("sampler,seeds", [('fisher_yates', 3000), ('swap_or_not', 1200)])
def test_small_domain_uniformity(sampler, seeds):
    assert uniformity_p_value(3, oracle_tables(3, range(seeds), sampler)) > 0.01


def test_pinned_permutation():
    assert PINNED_PERMUTATION == (2, 4, 1, 3)


def test_suite_passes():
    results = run_verification_suite(max_n=5)
    failed = [(r.name, r.detail) for r in results if not r.passed]
    assert not failed
    names = [r.name for r in results]
    assert 'merkle hand trace' in names
    assert 'simulated Alice matches Bob' in names
