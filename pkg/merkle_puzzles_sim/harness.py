"""
Core experiment module for Merkle Puzzles Sim
Runs seed-deterministic Monte Carlo trials and aggregates them into reports
"""

import logging
import math
import time
import zlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from functools import reduce
from itertools import repeat
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import psutil

from .analysis import (
    DEFAULT_CONFIDENCE, ConfidenceInterval, brute_force_success_probability, exact_collision_probability,
    exact_coverage_probability, repeat_bob_success_probability, theorem_query_budget, wilson_interval,
)
from .attacks import (
    ATTACK_NAMES, DEFAULT_GAMMA, AttackConfig, ConstraintSet, EveOracle, EveOutcome, EveView, grade_outcome,
    intersection_informed_guess, run_attack,
)
from .exceptions import ConfigurationError, InvariantViolationError, MerklePuzzlesError
from .oracle import MASK64, create_oracle
from .permutations import SAMPLERS
from .protocols import (
    PROTOCOL_NAMES, KeyAgreementProtocol, ProtocolOutcome, ceil_sqrt, get_protocol, run_key_agreement,
)

logger = logging.getLogger(__name__)

DEFAULT_ATTACKS = ('repeat_bob',)
DEFAULT_BUDGET_FRACTIONS = (0.0, 0.25, 0.5, 0.75, 1.0)

PROTOCOL_STREAM = 1
EVE_STREAM = 2


def derive_trial_seed(master_seed: int, trial_index: int) -> int:
    """
    Oracle seed of one trial: SplitMix64 finalizer over master_seed + (index+1)*golden

    Seeds depend only on (master_seed, trial_index), never on execution order.
    """
    z = (master_seed + (trial_index + 1) * 0x9E3779B97F4A7C15) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def stream_rng(trial_seed: int, *key: int) -> np.random.Generator:
    """Independent random stream of a trial, keyed by (trial_seed, *key)"""
    return np.random.default_rng([trial_seed, *key])


def eve_stream(trial_seed: int, label: str) -> np.random.Generator:
    """Eve's stream for one attack; depends on the label only, not on its place in the plan"""
    return stream_rng(trial_seed, EVE_STREAM, zlib.crc32(label.encode('utf-8')))


def resolve_workers(workers: int) -> int:
    if workers == 0:
        return psutil.cpu_count(logical=False) or 1
    return workers


@dataclass(frozen=True)
class ExperimentConfig:
    """Parameters of one experiment; a and b default to ceil(sqrt(n))"""
    n: int
    trials: int = 1000
    master_seed: int = 0
    a: Optional[int] = None
    b: Optional[int] = None
    gamma: int = DEFAULT_GAMMA
    attacks: Tuple[str, ...] = DEFAULT_ATTACKS
    brute_force_budgets: Tuple[int, ...] = ()
    budget_fractions: Tuple[float, ...] = ()
    confidence: float = DEFAULT_CONFIDENCE
    sampler: str = 'auto'
    workers: int = 1
    protocol: str = 'merkle'

    @property
    def resolved_a(self) -> int:
        return ceil_sqrt(self.n) if self.a is None else self.a

    @property
    def resolved_b(self) -> int:
        return ceil_sqrt(self.n) if self.b is None else self.b

    def resolved_budgets(self) -> Tuple[int, ...]:
        """Explicit budgets then fractions of n, without repeats"""
        fractions = self.budget_fractions
        if not self.brute_force_budgets and not fractions:
            fractions = DEFAULT_BUDGET_FRACTIONS
        budgets: List[int] = []
        for budget in list(self.brute_force_budgets) + [int(round(f * self.n)) for f in fractions]:
            if budget not in budgets:
                budgets.append(budget)
        return tuple(budgets)

    def attack_plan(self) -> List[Tuple[str, str, Optional[int]]]:
        """(label, attack name, budget) in report order"""
        plan = []
        for name in self.attacks:
            if name == 'brute_force':
                plan.extend((f"brute_force[{budget}]", name, budget) for budget in self.resolved_budgets())
            else:
                plan.append((name, name, None))
        return plan

    def for_n(self, n: int) -> 'ExperimentConfig':
        return replace(self, n=n)

    def validate(self) -> None:
        """Raise ConfigurationError on the first invalid field"""
        if isinstance(self.n, bool) or not isinstance(self.n, int) or self.n < 1:
            raise ConfigurationError(f"n must be a positive integer, got {self.n!r}")
        if self.trials < 1:
            raise ConfigurationError(f"trials must be at least 1, got {self.trials}")
        if not 0 <= self.master_seed <= MASK64:
            raise ConfigurationError(f"seed must be an unsigned 64-bit integer, got {self.master_seed}")
        for label, value in (('a', self.resolved_a), ('b', self.resolved_b)):
            if not 0 <= value <= self.n:
                raise ConfigurationError(f"{label}={value} must lie in 0..{self.n}")
        if self.gamma < 1:
            raise ConfigurationError(f"gamma must be at least 1, got {self.gamma}")
        unknown = [name for name in self.attacks if name not in ATTACK_NAMES]
        if unknown:
            raise ConfigurationError(f"Unknown attacks: {', '.join(unknown)}")
        if len(set(self.attacks)) != len(self.attacks):
            raise ConfigurationError("Attacks must not repeat")
        if any(not 0.0 <= f <= 1.0 for f in self.budget_fractions):
            raise ConfigurationError("Budget fractions must lie in [0, 1]")
        if any(not 0 <= budget <= self.n for budget in self.resolved_budgets()):
            raise ConfigurationError(f"Brute-force budgets must lie in 0..{self.n}")
        if not 0.0 < self.confidence < 1.0:
            raise ConfigurationError(f"confidence must lie in (0, 1), got {self.confidence}")
        if self.sampler not in SAMPLERS:
            raise ConfigurationError(f"Unknown sampler: {self.sampler}")
        if self.workers < 0:
            raise ConfigurationError(f"workers must be non-negative, got {self.workers}")
        if self.protocol not in PROTOCOL_NAMES:
            raise ConfigurationError(f"Unknown protocol: {self.protocol}")


@dataclass(frozen=True)
class AttackSummary:
    """Aggregated results of one attack over the non-abort trials"""
    attack: str
    name: str
    budget: Optional[int]
    attempts: int
    successes: int
    success_rate: Optional[float]
    success_ci: Optional[ConfidenceInterval]
    calls_mean: Optional[float]
    calls_max: int
    unique_mean: Optional[float]
    unique_max: int
    covered: int
    coverage_rate: Optional[float]
    coverage_ci: Optional[ConfidenceInterval]
    ref_success: Optional[float]
    ref_coverage: Optional[float]
    call_limit: Optional[int]


@dataclass(frozen=True)
class ExperimentReport:
    """Empirical rates with intervals and exact references for one configuration"""
    n: int
    a: int
    b: int
    trials: int
    master_seed: int
    gamma: int
    confidence: float
    sampler: str
    attacks: Tuple[str, ...]
    agreements: int
    aborts: int
    agree_rate: float
    agree_ci: ConfidenceInterval
    abort_rate: float
    abort_ci: ConfidenceInterval
    epsilon_hat: float
    ref_agree: float
    attack_results: Tuple[AttackSummary, ...] = ()
    duration_seconds: float = field(default=0.0, compare=False)


@dataclass
class AttackTally:
    attempts: int = 0
    successes: int = 0
    calls_sum: int = 0
    calls_max: int = 0
    unique_sum: int = 0
    unique_max: int = 0
    covered: int = 0

    def add(self, outcome: EveOutcome, covered: bool) -> None:
        self.attempts += 1
        self.successes += int(outcome.success)
        self.calls_sum += outcome.calls_used
        self.calls_max = max(self.calls_max, outcome.calls_used)
        self.unique_sum += outcome.unique_used
        self.unique_max = max(self.unique_max, outcome.unique_used)
        self.covered += int(covered)

    def merge(self, other: 'AttackTally') -> 'AttackTally':
        return AttackTally(
            attempts=self.attempts + other.attempts,
            successes=self.successes + other.successes,
            calls_sum=self.calls_sum + other.calls_sum,
            calls_max=max(self.calls_max, other.calls_max),
            unique_sum=self.unique_sum + other.unique_sum,
            unique_max=max(self.unique_max, other.unique_max),
            covered=self.covered + other.covered,
        )


@dataclass
class TrialTally:
    """Commutative, associative fold over trial results"""
    trials: int = 0
    agreements: int = 0
    aborts: int = 0
    attacks: Dict[str, AttackTally] = field(default_factory=dict)

    def merge(self, other: 'TrialTally') -> 'TrialTally':
        labels = set(self.attacks) | set(other.attacks)
        return TrialTally(
            trials=self.trials + other.trials,
            agreements=self.agreements + other.agreements,
            aborts=self.aborts + other.aborts,
            attacks={label: self.attacks.get(label, AttackTally()).merge(other.attacks.get(label, AttackTally()))
                     for label in labels},
        )


@dataclass(frozen=True)
class TrialResult:
    trial_index: int
    oracle_seed: int
    outcome: ProtocolOutcome
    attacks: Dict[str, Tuple[EveOutcome, bool]]


def _check_protocol_ledgers(outcome: ProtocolOutcome, protocol: KeyAgreementProtocol) -> None:
    for party, ledger, budget in (('Alice', outcome.alice_ledger, protocol.a), ('Bob', outcome.bob_ledger, protocol.b)):
        if ledger.call_count != budget or ledger.unique_count != budget:
            raise InvariantViolationError(
                f"{party} ledger ({ledger.unique_count} unique, {ledger.call_count} calls) != budget {budget}")


def _check_eve_ledger(label: str, outcome: EveOutcome, eve: EveOracle, call_limit: Optional[int]) -> None:
    ledger = eve.ledger()
    if ledger.call_count != outcome.physical_calls or ledger.unique_positions != outcome.positions:
        raise InvariantViolationError(f"{label}: Eve's ledger disagrees with her outcome")
    if outcome.unique_used != ledger.unique_count:
        raise InvariantViolationError(f"{label}: unique_used {outcome.unique_used} != ledger {ledger.unique_count}")
    if call_limit is not None and outcome.calls_used > call_limit:
        raise InvariantViolationError(f"{label}: {outcome.calls_used} calls exceed the limit {call_limit}")


def execute_trial(config: ExperimentConfig, trial_index: int) -> TrialResult:
    """
    Run one trial: the honest protocol, then every configured attack

    Each attack works on its own fork of the oracle and its own random
    stream, so attacks neither share a ledger nor see each other's draws.
    Attacks on an aborted transcript abstain without touching the oracle.
    """
    seed = derive_trial_seed(config.master_seed, trial_index)
    oracle = create_oracle(config.n, seed, sampler=config.sampler)
    protocol = get_protocol(config.protocol, config.n, config.a, config.b)
    outcome = run_key_agreement(oracle, protocol, stream_rng(seed, PROTOCOL_STREAM))
    _check_protocol_ledgers(outcome, protocol)

    plan = config.attack_plan()
    if outcome.aborted:
        return TrialResult(trial_index, seed, outcome, {label: (EveOutcome(), False) for label, _, _ in plan})

    intersection = set(outcome.intersection)
    attack_config = AttackConfig(gamma=config.gamma)
    results: Dict[str, Tuple[EveOutcome, bool]] = {}

    for label, name, budget in plan:
        if name == 'intersection_informed':
            known = ConstraintSet.from_pairs({x: outcome.alice_state.images[x] for x in intersection})
            eve_outcome = EveOutcome(guess=intersection_informed_guess(known, outcome.transcript))
            covered = True
        else:
            eve = EveOracle(oracle.fork())
            view = EveView(config.n, outcome.transcript, eve, eve_stream(seed, label), protocol)
            eve_outcome = run_attack(name, view, attack_config, budget or 0)
            call_limit = theorem_query_budget(protocol.a, protocol.b, config.gamma) if name == 'repeat_bob' else budget
            _check_eve_ledger(label, eve_outcome, eve, call_limit)
            covered = intersection <= eve_outcome.positions
        results[label] = (grade_outcome(eve_outcome, outcome.k_b), covered)

    return TrialResult(trial_index, seed, outcome, results)


def _run_chunk(config: ExperimentConfig, start: int, stop: int) -> TrialTally:
    tally = TrialTally(attacks={label: AttackTally() for label, _, _ in config.attack_plan()})
    for trial_index in range(start, stop):
        result = execute_trial(config, trial_index)
        tally.trials += 1
        tally.agreements += int(result.outcome.agreed)
        if result.outcome.aborted:
            tally.aborts += 1
            continue
        for label, (eve_outcome, covered) in result.attacks.items():
            tally.attacks[label].add(eve_outcome, covered)
    logger.debug(f"Finished trials {start}..{stop - 1}")
    return tally


def _chunk_bounds(trials: int, workers: int) -> List[Tuple[int, int]]:
    size = max(1, math.ceil(trials / (workers * 4)))
    return [(start, min(start + size, trials)) for start in range(0, trials, size)]


def _interval(successes: int, attempts: int, confidence: float) -> Optional[ConfidenceInterval]:
    return wilson_interval(successes, attempts, confidence) if attempts else None


def _summarize_attack(config: ExperimentConfig, label: str, name: str, budget: Optional[int],
                      tally: AttackTally) -> AttackSummary:
    n, a, b = config.n, config.resolved_a, config.resolved_b
    attempts = tally.attempts
    if not attempts:
        logger.warning(f"{label}: no non-abort trials, conditional rates are undefined")

    ref_coverage = None
    call_limit = budget
    if name == 'repeat_bob':
        ref_success = float(repeat_bob_success_probability(n, b, config.gamma * a))
        ref_coverage = float(exact_coverage_probability(n, a, b, config.gamma * a)) if a and b else None
        call_limit = theorem_query_budget(a, b, config.gamma)
    elif name == 'brute_force':
        ref_success = float(brute_force_success_probability(n, budget))
    else:
        ref_success = 1.0

    tracks_coverage = name == 'repeat_bob'
    return AttackSummary(
        attack=label,
        name=name,
        budget=budget,
        attempts=attempts,
        successes=tally.successes,
        success_rate=tally.successes / attempts if attempts else None,
        success_ci=_interval(tally.successes, attempts, config.confidence),
        calls_mean=tally.calls_sum / attempts if attempts else None,
        calls_max=tally.calls_max,
        unique_mean=tally.unique_sum / attempts if attempts else None,
        unique_max=tally.unique_max,
        covered=tally.covered,
        coverage_rate=tally.covered / attempts if attempts and tracks_coverage else None,
        coverage_ci=_interval(tally.covered, attempts, config.confidence) if tracks_coverage else None,
        ref_success=ref_success,
        ref_coverage=ref_coverage,
        call_limit=call_limit,
    )


def build_report(config: ExperimentConfig, tally: TrialTally, duration: float = 0.0) -> ExperimentReport:
    agree_rate = tally.agreements / tally.trials
    attack_results = tuple(
        _summarize_attack(config, label, name, budget, tally.attacks.get(label, AttackTally()))
        for label, name, budget in config.attack_plan()
    )
    return ExperimentReport(
        n=config.n,
        a=config.resolved_a,
        b=config.resolved_b,
        trials=tally.trials,
        master_seed=config.master_seed,
        gamma=config.gamma,
        confidence=config.confidence,
        sampler=config.sampler,
        attacks=tuple(config.attacks),
        agreements=tally.agreements,
        aborts=tally.aborts,
        agree_rate=agree_rate,
        agree_ci=wilson_interval(tally.agreements, tally.trials, config.confidence),
        abort_rate=tally.aborts / tally.trials,
        abort_ci=wilson_interval(tally.aborts, tally.trials, config.confidence),
        epsilon_hat=1.0 - agree_rate,
        ref_agree=float(exact_collision_probability(config.n, config.resolved_a, config.resolved_b)),
        attack_results=attack_results,
        duration_seconds=duration,
    )


def run_trials(config: ExperimentConfig) -> ExperimentReport:
    """
    Execute config.trials independent trials and aggregate them

    Args:
        config: Experiment configuration, validated before any trial runs

    Returns:
        ExperimentReport whose content does not depend on config.workers
    """
    config.validate()
    workers = resolve_workers(config.workers)
    logger.info(f"Running {config.trials} trials at n={config.n} a={config.resolved_a} b={config.resolved_b} "
                f"with {workers} worker(s)")
    started = time.perf_counter()

    bounds = _chunk_bounds(config.trials, workers)
    try:
        if workers == 1:
            tallies = [_run_chunk(config, start, stop) for start, stop in bounds]
        else:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                tallies = list(pool.map(_run_chunk, repeat(config), [s for s, _ in bounds], [e for _, e in bounds]))
    except MerklePuzzlesError:
        raise
    except Exception as e:
        logger.exception(f"Trial execution failed: {e}")
        raise InvariantViolationError(f"Trial execution failed: {e}") from e

    total = reduce(TrialTally.merge, tallies)
    duration = time.perf_counter() - started
    logger.info(f"Completed {total.trials} trials in {duration:.2f}s")
    return build_report(config, total, duration)


def sweep(base: ExperimentConfig, n_values: Sequence[int]) -> List[ExperimentReport]:
    """One report per n, in input order; every config is validated first"""
    if not n_values:
        raise ConfigurationError("sweep needs at least one value of n")
    configs = [base.for_n(n) for n in n_values]
    for config in configs:
        config.validate()
    return [run_trials(config) for config in configs]
