"""
Exact-oracle cross-checks at small n

Enumeration over every subset pair anchors the closed forms in analysis.py;
the remaining checks exercise the samplers and the Merkle-puzzle hand trace.
run_verification_suite backs the `verify` command.
"""

import itertools
import logging
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterator, List, Tuple

import numpy as np
from scipy.stats import chisquare

from .analysis import (
    exact_collision_probability, expected_intersection_size, exact_coverage_probability, intersection_size_pmf,
    repeat_bob_miss_probability, wilson_interval,
)
from .attacks import ConstraintSet, sample_consistent_permutation, simulate_alice_key
from .oracle import Oracle, create_oracle
from .protocols import MerklePuzzleProtocol, ceil_sqrt, run_key_agreement

logger = logging.getLogger(__name__)

SIGNIFICANCE = 0.01
PINNED_PERMUTATION = (2, 4, 1, 3)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ''


def enumerate_subset_pairs(n: int, a: int, b: int) -> Iterator[Tuple[frozenset, frozenset]]:
    domain = range(1, n + 1)
    for alice in itertools.combinations(domain, a):
        for bob in itertools.combinations(domain, b):
            yield frozenset(alice), frozenset(bob)


def enumerate_collision_probability(n: int, a: int, b: int) -> Fraction:
    pairs = list(enumerate_subset_pairs(n, a, b))
    hits = sum(1 for alice, bob in pairs if alice & bob)
    return Fraction(hits, len(pairs))


def enumerate_intersection_mean(n: int, a: int, b: int) -> Fraction:
    pairs = list(enumerate_subset_pairs(n, a, b))
    return Fraction(sum(len(alice & bob) for alice, bob in pairs), len(pairs))


def enumerate_intersection_pmf(n: int, a: int, b: int) -> Dict[int, Fraction]:
    pairs = list(enumerate_subset_pairs(n, a, b))
    counts = Counter(len(alice & bob) for alice, bob in pairs)
    return {k: Fraction(count, len(pairs)) for k, count in sorted(counts.items())}


def enumerate_coverage_probability(n: int, a: int, b: int, t: int) -> Fraction:
    """P(t uniform b-subsets cover A ∩ B | A ∩ B non-empty), by full enumeration"""
    samples = list(itertools.combinations(range(1, n + 1), b))
    covered = 0
    colliding = 0
    for alice, bob in enumerate_subset_pairs(n, a, b):
        common = alice & bob
        if not common:
            continue
        for draws in itertools.product(samples, repeat=t):
            colliding += 1
            if common <= set().union(*draws):
                covered += 1
    return Fraction(covered, colliding)


def permutation_frequencies(n: int, tables: List[List[int]]) -> List[int]:
    counts = Counter(tuple(table) for table in tables)
    return [counts.get(perm, 0) for perm in itertools.permutations(range(1, n + 1))]


def uniformity_p_value(n: int, tables: List[List[int]]) -> float:
    """Chi-square p-value of observed permutations against the uniform law on S_n"""
    return float(chisquare(permutation_frequencies(n, tables)).pvalue)


def oracle_tables(n: int, seeds, sampler: str) -> List[List[int]]:
    return [create_oracle(n, seed, sampler=sampler, verification=True).reveal_permutation() for seed in seeds]


def _check(name: str, passed: bool, detail: str = '') -> CheckResult:
    if not passed:
        logger.warning(f"Verification check failed: {name} {detail}")
    return CheckResult(name, bool(passed), detail)


def _check_enumeration(max_n: int) -> List[CheckResult]:
    mismatches = []
    for n in range(1, max_n + 1):
        for a in range(n + 1):
            for b in range(n + 1):
                if exact_collision_probability(n, a, b).value != enumerate_collision_probability(n, a, b):
                    mismatches.append(f"collision({n},{a},{b})")
                if expected_intersection_size(n, a, b) != enumerate_intersection_mean(n, a, b):
                    mismatches.append(f"mean({n},{a},{b})")
                if intersection_size_pmf(n, a, b) != enumerate_intersection_pmf(n, a, b):
                    mismatches.append(f"pmf({n},{a},{b})")
    return [_check(f"enumeration n<={max_n}", not mismatches, ', '.join(mismatches[:5]))]


def _check_coverage() -> List[CheckResult]:
    results = []
    for n, a, b, t in ((3, 1, 1, 2), (4, 2, 2, 1), (4, 2, 2, 2), (5, 2, 2, 2)):
        exact = exact_coverage_probability(n, a, b, t).value
        enumerated = enumerate_coverage_probability(n, a, b, t)
        results.append(_check(f"coverage({n},{a},{b},{t})", exact == enumerated, f"{exact} vs {enumerated}"))
    return results


def _check_monotonicity(max_n: int = 12) -> List[CheckResult]:
    broken = []
    for n in range(1, max_n + 1):
        for a in range(n + 1):
            row = [exact_collision_probability(n, a, b).value for b in range(n + 1)]
            column = [exact_collision_probability(n, b, a).value for b in range(n + 1)]
            if row != sorted(row) or column != sorted(column):
                broken.append(f"collision n={n} a={a}")
        for b in range(n + 1):
            misses = [repeat_bob_miss_probability(n, b, t).value for t in range(6)]
            if misses != sorted(misses, reverse=True):
                broken.append(f"miss in t n={n} b={b}")
        for t in range(4):
            misses = [repeat_bob_miss_probability(n, b, t).value for b in range(n + 1)]
            if misses != sorted(misses, reverse=True):
                broken.append(f"miss in b n={n} t={t}")
    return [_check("monotonicity", not broken, ', '.join(broken[:5]))]


def _check_birthday_constant() -> List[CheckResult]:
    results = []
    for n in (16, 100, 10 ** 4, 10 ** 6):
        side = ceil_sqrt(n)
        value = float(exact_collision_probability(n, side, side))
        results.append(_check(f"birthday constant n={n}", value >= 0.63, f"{value:.6f}"))
    return results


def _check_wilson() -> List[CheckResult]:
    outside = []
    for trials in (1, 2, 7, 50, 100, 1000):
        for successes in range(0, trials + 1, max(1, trials // 10)):
            if not wilson_interval(successes, trials).contains(successes / trials):
                outside.append(f"{successes}/{trials}")
    return [_check("wilson contains estimate", not outside, ', '.join(outside[:5]))]


def _check_oracles() -> List[CheckResult]:
    results = []
    for sampler in ('fisher_yates', 'swap_or_not'):
        bad = [n for n in range(1, 9) for seed in range(5)
               if sorted(oracle_tables(n, [seed], sampler)[0]) != list(range(1, n + 1))]
        results.append(_check(f"bijectivity {sampler}", not bad, str(bad)))

    for n, seeds in ((3, 3000), (4, 6000)):
        p_value = uniformity_p_value(n, oracle_tables(n, range(seeds), 'fisher_yates'))
        results.append(_check(f"uniformity fisher_yates n={n}", p_value > SIGNIFICANCE, f"p={p_value:.4f}"))
    p_value = uniformity_p_value(3, oracle_tables(3, range(1200), 'swap_or_not'))
    results.append(_check("uniformity swap_or_not n=3", p_value > SIGNIFICANCE, f"p={p_value:.4f}"))
    return results


def _check_constrained_sampler() -> List[CheckResult]:
    rng = np.random.default_rng(2024)
    tables = [sample_consistent_permutation(3, ConstraintSet(), rng) for _ in range(3000)]
    p_value = uniformity_p_value(3, tables)
    pinned = sample_consistent_permutation(3, ConstraintSet(((1, 2), (2, 1), (3, 3))), rng)
    return [
        _check("constrained sampler uniform n=3", p_value > SIGNIFICANCE, f"p={p_value:.4f}"),
        _check("constrained sampler pinned", pinned == [2, 1, 3], str(pinned)),
    ]


def _check_hand_trace() -> List[CheckResult]:
    oracle = Oracle.from_table(PINNED_PERMUTATION)
    protocol = MerklePuzzleProtocol(4, 2, 2)
    rng = np.random.default_rng(0)
    state, c_a = protocol.alice_phase1(oracle, rng, positions=(1, 3))
    bob_state, c_b, k_b = protocol.bob_respond(oracle, c_a, rng, positions=(3, 4))
    k_a = protocol.alice_phase2(oracle, state, c_b)
    passed = c_a == (1, 2) and c_b == 1 and k_b == 3 and k_a == 3
    return [_check("merkle hand trace", passed, f"c_A={c_a} c_B={c_b} k_A={k_a} k_B={k_b}")]


def _check_consistent_alice(trials: int = 200) -> List[CheckResult]:
    mismatched = 0
    for seed in range(trials):
        oracle = create_oracle(16, seed)
        outcome = run_key_agreement(oracle, MerklePuzzleProtocol(16), np.random.default_rng([seed, 1]))
        if outcome.aborted:
            continue
        known = {x: outcome.alice_state.images[x] for x in outcome.intersection}
        if simulate_alice_key(16, known, outcome.transcript, np.random.default_rng([seed, 2])) != outcome.k_b:
            mismatched += 1
    return [_check("simulated Alice matches Bob", mismatched == 0, f"{mismatched} mismatches")]


def run_verification_suite(max_n: int = 6) -> List[CheckResult]:
    """Run every cross-check and return the results in a fixed order"""
    logger.info(f"Running verification suite up to n={max_n}")
    results: List[CheckResult] = []
    results += _check_enumeration(max_n)
    results += _check_coverage()
    results += _check_monotonicity()
    results += _check_birthday_constant()
    results += _check_wilson()
    results += _check_oracles()
    results += _check_constrained_sampler()
    results += _check_hand_trace()
    results += _check_consistent_alice()
    failed = [r.name for r in results if not r.passed]
    logger.info(f"Verification suite: {len(results) - len(failed)}/{len(results)} checks passed")
    return results
