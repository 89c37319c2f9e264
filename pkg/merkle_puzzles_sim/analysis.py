"""
Exact reference values for the Monte Carlo estimates

Small domains use exact rationals; above EXACT_LIMIT the products are
accumulated in log space.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Union

import numpy as np
from scipy.stats import hypergeom, norm

from .exceptions import InvalidParameterError

EXACT_LIMIT = 10 ** 4
# Inclusion-exclusion with rational powers gets expensive well before EXACT_LIMIT
COVERAGE_EXACT_LIMIT = 1000
DEFAULT_CONFIDENCE = 0.95

Number = Union[Fraction, float]


@dataclass(frozen=True)
class Probability:
    """A probability held as an exact Fraction or a float"""
    value: Number

    def __post_init__(self):
        if not 0 <= self.value <= 1:
            raise InvalidParameterError(f"Probability out of range: {self.value}")

    @property
    def exact(self) -> bool:
        return isinstance(self.value, Fraction)

    def complement(self) -> 'Probability':
        return Probability(1 - self.value)

    def __float__(self) -> float:
        return float(self.value)


@dataclass(frozen=True)
class ConfidenceInterval:
    low: float
    high: float
    confidence: float = DEFAULT_CONFIDENCE

    def __post_init__(self):
        if not 0.0 <= self.low <= self.high <= 1.0:
            raise InvalidParameterError(f"Invalid interval [{self.low}, {self.high}]")
        if not 0.0 < self.confidence < 1.0:
            raise InvalidParameterError(f"Confidence must lie in (0, 1), got {self.confidence}")

    def contains(self, value: float) -> bool:
        return self.low <= value <= self.high

    @property
    def half_width(self) -> float:
        return (self.high - self.low) / 2


def _check_sizes(n: int, **sizes: int) -> None:
    if n < 1:
        raise InvalidParameterError(f"n must be positive, got {n}")
    for label, value in sizes.items():
        if not 0 <= value <= n:
            raise InvalidParameterError(f"{label}={value} must lie in 0..{n}")


def _log_avoid(n: int, avoided: int, b: int) -> float:
    """log of prod_{i<b} (n - avoided - i) / (n - i), for avoided + b <= n"""
    if b == 0 or avoided == 0:
        return 0.0
    return float(np.sum(np.log1p(-avoided / (n - np.arange(b, dtype=np.float64)))))


def exact_collision_probability(n: int, a: int, b: int) -> Probability:
    """
    Probability that uniform a- and b-subsets of {1..n} intersect

    Returns:
        1 - prod_{i<b} (n-a-i)/(n-i)
    """
    _check_sizes(n, a=a, b=b)
    exact = n <= EXACT_LIMIT
    if a + b > n:
        return Probability(Fraction(1) if exact else 1.0)

    if exact:
        miss = Fraction(1)
        for i in range(b):
            miss *= Fraction(n - a - i, n - i)
        return Probability(1 - miss)

    return Probability(float(-np.expm1(_log_avoid(n, a, b))))


def expected_intersection_size(n: int, a: int, b: int) -> Number:
    """Hypergeometric mean ab/n of |A ∩ B|"""
    _check_sizes(n, a=a, b=b)
    if n <= EXACT_LIMIT:
        return Fraction(a * b, n)
    return a * b / n


def intersection_size_pmf(n: int, a: int, b: int) -> Dict[int, Number]:
    """Distribution of |A ∩ B| for independent uniform a- and b-subsets"""
    _check_sizes(n, a=a, b=b)
    support = range(max(0, a + b - n), min(a, b) + 1)
    if n <= EXACT_LIMIT:
        total = math.comb(n, b)
        return {k: Fraction(math.comb(a, k) * math.comb(n - a, b - k), total) for k in support}

    law = hypergeom(n, a, b)
    return {k: float(law.pmf(k)) for k in support}


def repeat_bob_miss_probability(n: int, b: int, t: int) -> Probability:
    """Probability that a fixed position escapes t independent uniform b-subsets"""
    _check_sizes(n, b=b)
    if t < 0:
        raise InvalidParameterError(f"t must be non-negative, got {t}")
    if n <= EXACT_LIMIT:
        return Probability(Fraction(n - b, n) ** t)
    return Probability((1 - b / n) ** t)


def repeat_bob_success_probability(n: int, b: int, t: int) -> Probability:
    """Probability that t replays of Bob's sampling hit the key position"""
    return repeat_bob_miss_probability(n, b, t).complement()


def brute_force_success_probability(n: int, budget: int) -> Probability:
    """The key is uniform given the transcript, so budget distinct guesses win w.p. budget/n"""
    _check_sizes(n, budget=budget)
    if n <= EXACT_LIMIT:
        return Probability(Fraction(budget, n))
    return Probability(budget / n)


def exact_coverage_probability(n: int, a: int, b: int, t: int) -> Probability:
    """
    Probability that t independent uniform b-subsets cover A ∩ B,
    conditioned on A ∩ B being non-empty

    Inclusion-exclusion over the positions missed by every sample, weighted
    by the hypergeometric law of |A ∩ B|.
    """
    _check_sizes(n, a=a, b=b)
    if t < 0:
        raise InvalidParameterError(f"t must be non-negative, got {t}")
    if a == 0 or b == 0:
        raise InvalidParameterError("A and B cannot intersect when a or b is zero")

    top = min(a, b)
    if n <= COVERAGE_EXACT_LIMIT:
        pmf = intersection_size_pmf(n, a, b)
        total = math.comb(n, b)
        avoid = [Fraction(math.comb(n - j, b), total) ** t for j in range(top + 1)]
        covered = Fraction(0)
        for k, weight in pmf.items():
            if k == 0:
                continue
            hit_all = sum((-1) ** j * math.comb(k, j) * avoid[j] for j in range(k + 1))
            covered += weight * hit_all
        return Probability(covered / (1 - pmf.get(0, Fraction(0))))

    law = hypergeom(n, a, b)
    avoid = [0.0 if j + b > n else math.exp(t * _log_avoid(n, j, b)) for j in range(top + 1)]
    covered = 0.0
    for k in range(1, top + 1):
        weight = float(law.pmf(k))
        if weight == 0.0:
            continue
        hit_all = math.fsum((-1) ** j * math.comb(k, j) * avoid[j] for j in range(k + 1))
        covered += weight * hit_all
    conditional = covered / (1.0 - float(law.pmf(0)))
    return Probability(min(1.0, max(0.0, conditional)))


def theorem_query_budget(a: int, b: int, gamma: int = 5) -> int:
    """Eve's call budget gamma*a*b + a; 5ab + a at the default gamma"""
    return gamma * a * b + a


def wilson_interval(successes: int, trials: int, confidence: float = DEFAULT_CONFIDENCE) -> ConfidenceInterval:
    """
    Wilson score interval for a binomial proportion

    Args:
        successes: Number of successes
        trials: Number of trials, at least 1
        confidence: Confidence level in (0, 1)

    Returns:
        ConfidenceInterval that always contains successes / trials
    """
    if trials < 1:
        raise InvalidParameterError(f"Wilson interval needs at least one trial, got {trials}")
    if not 0 <= successes <= trials:
        raise InvalidParameterError(f"successes={successes} must lie in 0..{trials}")
    if not 0.0 < confidence < 1.0:
        raise InvalidParameterError(f"Confidence must lie in (0, 1), got {confidence}")

    z = float(norm.ppf(0.5 + confidence / 2))
    p = successes / trials
    z2 = z * z
    denom = 1.0 + z2 / trials
    center = (p + z2 / (2.0 * trials)) / denom
    margin = z * math.sqrt(p * (1.0 - p) / trials + z2 / (4.0 * trials * trials)) / denom

    low = 0.0 if successes == 0 else max(0.0, min(p, center - margin))
    high = 1.0 if successes == trials else min(1.0, max(p, center + margin))
    return ConfidenceInterval(low, high, confidence)
