import math

import numpy as np
import pytest
from scipy.stats import chisquare

from merkle_puzzles_sim.exceptions import InvalidParameterError, ProtocolViolationError
from merkle_puzzles_sim.oracle import PartyId, create_oracle
from merkle_puzzles_sim.protocols import (
    AliceState, MerklePuzzleProtocol, ceil_sqrt, get_protocol, run_key_agreement,
)


def test_ceil_sqrt():
    assert [ceil_sqrt(n) for n in (1, 2, 4, 5, 16, 17, 100)] == [1, 2, 2, 3, 4, 5, 10]


def test_default_budgets():
    protocol = MerklePuzzleProtocol(100)
    assert (protocol.a, protocol.b) == (10, 10)


def test_budget_out_of_range():
    with pytest.raises(InvalidParameterError):
        MerklePuzzleProtocol(4, a=5)
    with pytest.raises(InvalidParameterError):
        MerklePuzzleProtocol(4, b=-1)


def test_get_protocol():
    assert isinstance(get_protocol('merkle', 9), MerklePuzzleProtocol)
    with pytest.raises(InvalidParameterError):
        get_protocol('diffie-hellman', 9)


def test_hand_trace(pinned_oracle, rng):
    protocol = MerklePuzzleProtocol(4, 2, 2)
    state, c_a = protocol.alice_phase1(pinned_oracle, rng, positions=(1, 3))
    assert c_a == (1, 2)

    bob_state, c_b, k_b = protocol.bob_respond(pinned_oracle, c_a, rng, positions=(3, 4))
    assert (c_b, k_b) == (1, 3)
    assert bob_state.chosen_key == 3

    assert protocol.alice_phase2(pinned_oracle, state, c_b) == 3


def test_bob_aborts_without_collision(pinned_oracle, rng):
    protocol = MerklePuzzleProtocol(4, 2, 2)
    state, c_a = protocol.alice_phase1(pinned_oracle, rng, positions=(1, 2))
    bob_state, c_b, k_b = protocol.bob_respond(pinned_oracle, c_a, rng, positions=(3, 4))
    assert c_b is None and k_b is None
    assert protocol.alice_phase2(pinned_oracle, state, c_b) is None


def test_alice_rejects_unknown_identifier(pinned_oracle):
    protocol = MerklePuzzleProtocol(4, 2, 2)
    state = AliceState((1, 3), {1: 2, 3: 1})
    with pytest.raises(ProtocolViolationError):
        protocol.alice_phase2(pinned_oracle, state, 4)


def test_bob_rejects_malformed_c_a(pinned_oracle, rng):
    protocol = MerklePuzzleProtocol(4, 2, 2)
    with pytest.raises(ProtocolViolationError):
        protocol.bob_respond(pinned_oracle, (2, 1), rng)


def test_run_requires_fresh_oracle(pinned_oracle, rng):
    pinned_oracle.query(PartyId.EVE, 1)
    with pytest.raises(ProtocolViolationError):
        run_key_agreement(pinned_oracle, MerklePuzzleProtocol(4), rng)


def test_n_equals_one_always_agrees():
    outcome = run_key_agreement(create_oracle(1, 3), MerklePuzzleProtocol(1), np.random.default_rng(0))
    assert outcome.agreed and not outcome.aborted
    assert outcome.k_a == outcome.k_b == 1
    assert outcome.transcript.c_a == (1,)


def test_zero_budget_always_aborts():
    outcome = run_key_agreement(create_oracle(10, 3), MerklePuzzleProtocol(10, 0, 5), np.random.default_rng(0))
    assert outcome.aborted and not outcome.agreed
    assert outcome.k_a is None and outcome.k_b is None


@pytest.mark.parametrize("seed", range(30))
def test_ledgers_exact_and_agreement_on_non_abort(seed):
    protocol = MerklePuzzleProtocol(25)
    outcome = run_key_agreement(create_oracle(25, seed), protocol, np.random.default_rng(seed))
    assert outcome.alice_ledger.unique_count == outcome.alice_ledger.call_count == protocol.a
    assert outcome.bob_ledger.unique_count == outcome.bob_ledger.call_count == protocol.b
    assert list(outcome.transcript.c_a) == sorted(outcome.transcript.c_a)
    assert outcome.aborted == (not outcome.intersection)
    if not outcome.aborted:
        assert outcome.agreed
        assert outcome.k_b in outcome.intersection


def test_full_budgets_always_collide():
    for seed in range(10):
        outcome = run_key_agreement(create_oracle(6, seed), MerklePuzzleProtocol(6, 4, 3),
                                    np.random.default_rng(seed))
        assert outcome.agreed


class _RequeryingProtocol(MerklePuzzleProtocol):
    """Alice asks again for one of her own positions after seeing c_B"""

    def phase2_positions(self, state, c_b):
        return state.positions[:1] if c_b is not None else ()


class _OverspendingProtocol(MerklePuzzleProtocol):
    """Alice queries one fresh position in phase 2"""

    def phase2_positions(self, state, c_b):
        return (min(set(range(1, self.n + 1)) - set(state.positions)),)


def test_phase2_queries_are_charged_to_alice():
    protocol = _RequeryingProtocol(9, 3, 9)
    outcome = run_key_agreement(create_oracle(9, 4), protocol, np.random.default_rng(4))
    assert outcome.alice_ledger.call_count == 4
    assert outcome.alice_ledger.unique_count == 3
    assert outcome.alice_state.phase2_positions == outcome.alice_state.positions[:1]
    assert outcome.agreed


def test_phase2_queries_count_against_budget():
    with pytest.raises(ProtocolViolationError):
        run_key_agreement(create_oracle(9, 4), _OverspendingProtocol(9, 3, 3), np.random.default_rng(4))


def test_merkle_makes_no_phase2_queries():
    outcome = run_key_agreement(create_oracle(16, 2), MerklePuzzleProtocol(16), np.random.default_rng(2))
    assert outcome.alice_state.phase2_positions == ()


def _position_counts(states, n):
    counts = np.zeros(n, dtype=np.int64)
    for state in states:
        counts[np.asarray(state.positions) - 1] += 1
    return counts


def test_alice_positions_are_uniform():
    protocol = MerklePuzzleProtocol(100)
    oracle = create_oracle(100, 1)
    rng = np.random.default_rng(2024)
    counts = _position_counts((protocol.alice_phase1(oracle.fork(), rng)[0] for _ in range(10_000)), 100)

    sigma = math.sqrt(10_000 * 0.1 * 0.9)
    assert counts.sum() == 100_000
    assert np.all(np.abs(counts - 1000) <= 5 * sigma)
    assert chisquare(counts).pvalue > 0.001


def test_bob_positions_are_uniform():
    protocol = MerklePuzzleProtocol(100)
    oracle = create_oracle(100, 1)
    _, c_a = protocol.alice_phase1(oracle.fork(), np.random.default_rng(0), positions=range(1, 11))
    rng = np.random.default_rng(77)
    counts = _position_counts((protocol.bob_respond(oracle.fork(), c_a, rng)[0] for _ in range(10_000)), 100)

    sigma = math.sqrt(10_000 * 0.1 * 0.9)
    assert np.all(np.abs(counts - 1000) <= 5 * sigma)
    assert chisquare(counts).pvalue > 0.001


def test_bob_positions_do_not_depend_on_c_a():
    protocol = MerklePuzzleProtocol(100)
    oracle = create_oracle(100, 1)
    _, low = protocol.alice_phase1(oracle.fork(), np.random.default_rng(0), positions=range(1, 11))
    _, high = protocol.alice_phase1(oracle.fork(), np.random.default_rng(0), positions=range(91, 101))
    assert low != high
    for seed in range(50):
        first = protocol.bob_respond(oracle.fork(), low, np.random.default_rng(seed))[0]
        second = protocol.bob_respond(oracle.fork(), high, np.random.default_rng(seed))[0]
        assert first.positions == second.positions
