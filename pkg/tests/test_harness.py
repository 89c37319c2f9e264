from dataclasses import replace

import pytest

from merkle_puzzles_sim import harness
from merkle_puzzles_sim.analysis import theorem_query_budget
from merkle_puzzles_sim.exceptions import ConfigurationError
from merkle_puzzles_sim.harness import (
    AttackTally, ExperimentConfig, TrialTally, derive_trial_seed, execute_trial, resolve_workers, run_trials,
    sweep,
)

from .conftest import TEST_CONFIDENCE


def _summary(report, label):
    return next(s for s in report.attack_results if s.attack == label)


def test_trial_seeds_are_deterministic_and_distinct():
    seeds = [derive_trial_seed(7, i) for i in range(1000)]
    assert seeds == [derive_trial_seed(7, i) for i in range(1000)]
    assert len(set(seeds)) == 1000
    assert derive_trial_seed(7, 0) != derive_trial_seed(8, 0)
    assert all(0 <= s < 2 ** 64 for s in seeds)


def test_resolve_workers():
    assert resolve_workers(3) == 3
    assert resolve_workers(0) >= 1


def test_config_defaults():
    config = ExperimentConfig(n=100)
    assert (config.resolved_a, config.resolved_b) == (10, 10)
    assert config.resolved_budgets() == (0, 25, 50, 75, 100)


def test_attack_plan_labels():
    config = ExperimentConfig(n=100, attacks=('repeat_bob', 'brute_force'), brute_force_budgets=(10, 50),
                              budget_fractions=(0.5,))
    assert config.attack_plan() == [
        ('repeat_bob', 'repeat_bob', None),
        ('brute_force[10]', 'brute_force', 10),
        ('brute_force[50]', 'brute_force', 50),
    ]


@pytest.mark.parametrize("changes", [
    {'trials': 0},
    {'n': 0},
    {'a': 11, 'n': 10},
    {'gamma': 0},
    {'attacks': ('nope',)},
    {'attacks': ('repeat_bob', 'repeat_bob')},
    {'brute_force_budgets': (101,)},
    {'budget_fractions': (1.5,)},
    {'confidence': 1.0},
    {'sampler': 'mystery'},
    {'workers': -1},
    {'protocol': 'nope'},
    {'master_seed': 2 ** 64},
])
def test_invalid_config(changes):
    fields = {'n': 100, 'trials': 10}
    fields.update(changes)
    with pytest.raises(ConfigurationError):
        run_trials(ExperimentConfig(**fields))


def test_execute_trial_is_reproducible():
    config = ExperimentConfig(n=49, trials=1, master_seed=11, attacks=('repeat_bob', 'intersection_informed'))
    first = execute_trial(config, 3)
    second = execute_trial(config, 3)
    assert first.outcome == second.outcome
    assert first.attacks == second.attacks


def test_tally_merge_is_order_independent():
    left = TrialTally(3, 2, 1, {'x': AttackTally(2, 1, 10, 6, 8, 5, 1)})
    right = TrialTally(5, 4, 1, {'x': AttackTally(4, 4, 20, 9, 12, 6, 4), 'y': AttackTally(1)})
    assert left.merge(right) == right.merge(left)
    merged = left.merge(right)
    assert merged.trials == 8
    assert merged.attacks['x'].calls_max == 9
    assert merged.attacks['y'].attempts == 1


def test_single_point_domain():
    report = run_trials(ExperimentConfig(n=1, trials=20, master_seed=1))
    assert report.agree_rate == 1.0
    assert report.aborts == 0
    summary = _summary(report, 'repeat_bob')
    assert summary.success_rate == 1.0
    assert summary.calls_max == 5
    assert summary.unique_max == 1


def test_zero_budget_always_aborts():
    report = run_trials(ExperimentConfig(n=50, a=0, trials=30, master_seed=2))
    assert report.abort_rate == 1.0
    assert report.epsilon_hat == 1.0
    summary = _summary(report, 'repeat_bob')
    assert summary.attempts == 0
    assert summary.success_rate is None


def test_agreement_rate_matches_birthday_probability():
    report = run_trials(ExperimentConfig(n=100, trials=4000, master_seed=1, attacks=(),
                                         confidence=TEST_CONFIDENCE))
    assert report.ref_agree == pytest.approx(0.6695, abs=1e-4)
    assert report.agree_ci.contains(report.ref_agree)
    assert report.agreements + report.aborts == report.trials
    assert report.epsilon_hat == pytest.approx(1 - report.agree_rate)


def test_repeat_bob_rates_and_call_bound():
    report = run_trials(ExperimentConfig(n=100, trials=600, master_seed=5, confidence=TEST_CONFIDENCE))
    summary = _summary(report, 'repeat_bob')
    assert summary.attempts == report.trials - report.aborts
    assert summary.success_ci.contains(summary.ref_success)
    assert summary.coverage_ci.low > 0.125
    assert summary.calls_max == 5 * 10 * 10
    assert summary.calls_max <= summary.call_limit == theorem_query_budget(10, 10)


def test_intersection_informed_never_misses():
    report = run_trials(ExperimentConfig(n=64, trials=300, master_seed=9, attacks=('intersection_informed',)))
    summary = _summary(report, 'intersection_informed')
    assert summary.attempts > 0
    assert summary.success_rate == 1.0
    assert summary.calls_max == 0


def test_brute_force_success_tracks_budget_fraction():
    report = run_trials(ExperimentConfig(n=100, trials=1500, master_seed=4, attacks=('brute_force',),
                                         brute_force_budgets=(0, 50), confidence=TEST_CONFIDENCE))
    assert _summary(report, 'brute_force[0]').success_rate == 0.0
    half = _summary(report, 'brute_force[50]')
    assert half.ref_success == 0.5
    assert half.success_ci.contains(0.5)
    assert half.calls_max <= 50


def test_results_do_not_depend_on_worker_count():
    config = ExperimentConfig(n=16, trials=120, master_seed=42,
                              attacks=('repeat_bob', 'brute_force', 'intersection_informed'),
                              brute_force_budgets=(4,))
    serial = run_trials(config)
    parallel = run_trials(replace(config, workers=2))
    assert serial == parallel


def test_swap_or_not_sampler_runs():
    report = run_trials(ExperimentConfig(n=16, trials=20, master_seed=3, sampler='swap_or_not'))
    assert report.sampler == 'swap_or_not'
    assert report.trials == 20


def test_sweep_keeps_order_and_call_counts():
    reports = sweep(ExperimentConfig(n=1, trials=20, master_seed=8), [100, 400])
    assert [r.n for r in reports] == [100, 400]
    for report in reports:
        summary = _summary(report, 'repeat_bob')
        assert summary.calls_max == 5 * report.a * report.b
        assert summary.call_limit == 5 * report.a * report.b + report.a


def test_sweep_validates_every_n_first():
    with pytest.raises(ConfigurationError):
        sweep(ExperimentConfig(n=1, trials=5, brute_force_budgets=(50,), attacks=('brute_force',)), [100, 20])
    with pytest.raises(ConfigurationError):
        sweep(ExperimentConfig(n=1, trials=5), [])


def test_sweep_single_n():
    reports = sweep(ExperimentConfig(n=1, trials=10, master_seed=1), [16])
    assert len(reports) == 1 and reports[0].n == 16


def test_sweep_half_budget_brute_force():
    base = ExperimentConfig(n=1, trials=700, master_seed=6, attacks=('brute_force',), budget_fractions=(0.5,),
                            confidence=TEST_CONFIDENCE)
    for report in sweep(base, [100, 400]):
        summary = report.attack_results[0]
        assert summary.budget == report.n // 2
        assert summary.success_ci.contains(0.5)


def test_agreement_interval_covers_reference_across_seeds():
    hits = 0
    for seed in range(20):
        report = run_trials(ExperimentConfig(n=16, trials=200, master_seed=seed, attacks=()))
        hits += report.agree_ci.contains(report.ref_agree)
    assert hits >= 16


def _forbid_eve_streams(monkeypatch):
    def refuse(seed, label):
        raise AssertionError(f"Eve stream built for {label}")

    monkeypatch.setattr('merkle_puzzles_sim.harness.eve_stream', refuse)


def test_no_eve_stream_without_attacks(monkeypatch):
    _forbid_eve_streams(monkeypatch)
    report = run_trials(ExperimentConfig(n=64, trials=50, master_seed=3, attacks=()))
    assert report.trials == 50


def test_no_eve_stream_on_aborted_trials(monkeypatch):
    _forbid_eve_streams(monkeypatch)
    report = run_trials(ExperimentConfig(n=64, a=0, trials=20, master_seed=3, attacks=('repeat_bob', 'brute_force')))
    assert report.abort_rate == 1.0


def test_one_eve_stream_per_query_attack(monkeypatch):
    requested = []

    def recording(seed, label):
        requested.append(label)
        return harness.stream_rng(seed, harness.EVE_STREAM)

    monkeypatch.setattr('merkle_puzzles_sim.harness.eve_stream', recording)
    config = ExperimentConfig(n=1, trials=1, attacks=('repeat_bob', 'intersection_informed', 'brute_force'),
                              brute_force_budgets=(1,))
    execute_trial(config, 0)
    assert requested == ['repeat_bob', 'brute_force[1]']


def test_attack_results_do_not_depend_on_plan_order():
    alone = ExperimentConfig(n=64, trials=1, master_seed=5, attacks=('brute_force',), brute_force_budgets=(16,))
    mixed = replace(alone, attacks=('repeat_bob', 'brute_force'))
    reordered = replace(alone, attacks=('brute_force', 'repeat_bob'))
    for index in range(20):
        expected = execute_trial(alone, index).attacks['brute_force[16]']
        assert execute_trial(mixed, index).attacks['brute_force[16]'] == expected
        assert execute_trial(reordered, index).attacks['brute_force[16]'] == expected


def test_execute_trial_dispatches_on_protocol_name(monkeypatch):
    names = []
    original = harness.get_protocol

    def recording(name, *args):
        names.append(name)
        return original(name, *args)

    monkeypatch.setattr('merkle_puzzles_sim.harness.get_protocol', recording)
    execute_trial(ExperimentConfig(n=16, trials=1, attacks=()), 0)
    assert names == ['merkle']


@pytest.mark.parametrize("n", [16, 10 ** 4])
def test_agreement_rate_stays_above_sixty_percent(n):
    report = run_trials(ExperimentConfig(n=n, trials=4000, master_seed=n, attacks=()))
    assert report.agree_rate + report.agree_ci.half_width >= 0.60
