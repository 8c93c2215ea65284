import itertools
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kgames.engine import IllegalMove, Player, make_schema, make_strategy, run_match, validate_trace
from kgames.total_function import (
    Exhausted,
    ScriptedAdversary,
    TotalFunctionGame,
    alice_strategy_step,
    all_tables,
    exhaustive_adversaries,
    kbar,
    referee,
)


def oracle_witness(f, gs, n):
    """Least (x, y) by brute force over every pair of n-bit values."""
    size = 1 << n
    for x, y in itertools.product(range(size), repeat=2):
        if f.get(y) == x and all(g[y] != x for g in gs):
            return (x, y)
    return None


def tables_strategy(n, max_count):
    size = 1 << n
    table = st.tuples(*[st.integers(0, size - 1)] * size)
    return st.lists(table, max_size=max_count)


@given(
    st.integers(1, 3).flatmap(
        lambda n: st.tuples(
            st.just(n),
            st.dictionaries(st.integers(0, (1 << n) - 1), st.integers(0, (1 << n) - 1)),
            tables_strategy(n, 8),
        )
    )
)
@settings(max_examples=300)
def test_referee_matches_bruteforce(args):
    n, f, gs = args
    assert referee(f, gs) == oracle_witness(f, gs, n)


def test_step_picks_least_free_point_and_least_unblocked_value():
    assert alice_strategy_step({}, [], 2) == (0, 0)
    assert alice_strategy_step({}, [(0, 1, 2, 3), (1, 1, 1, 1)], 2) == (0, 2)
    # a witness already exists: nothing to do
    assert alice_strategy_step({0: 3}, [(0, 0, 0, 0)], 2) is None


def test_step_raises_when_exhausted():
    with pytest.raises(Exhausted):
        alice_strategy_step({0: 0, 1: 0}, [(0, 0), (1, 1)], 1)
    with pytest.raises(Exhausted):
        alice_strategy_step({}, [(0, 0), (1, 1)], 1)


def test_kbar_is_index_length():
    universe = list(all_tables(1))  # (0,0) (0,1) (1,0) (1,1)
    assert kbar(0, 0, universe) == 0
    assert kbar(1, 0, universe) == 2  # first at index 2
    assert kbar(1, 1, universe) == 1  # index 1
    assert kbar(5, 0, universe) == math.inf


def test_all_tables_count_and_order():
    tabs = list(all_tables(2))
    assert len(tabs) == 4**4
    assert tabs == sorted(tabs)


def test_quota_enforced():
    schema = TotalFunctionGame(1)
    bob = ScriptedAdversary([[(0, 0), (1, 1)]])
    with pytest.raises(IllegalMove):
        run_match(schema, make_strategy("total_function", Player.ALICE, "pass"), bob)


def test_alice_cannot_redefine_a_point():
    schema = TotalFunctionGame(1)
    state = schema.initial_state()
    schema.apply(state, Player.ALICE, [(0, 1)])
    with pytest.raises(Exception):
        schema.apply(state, Player.ALICE, [(0, 0)])


def test_exhaustive_family_size_for_n1():
    # quota 1: the empty script, plus 4 tables each with 0 or 1 leading pass
    assert sum(1 for _ in exhaustive_adversaries(1)) == 1 + 4 * 2


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("bob", ["enumerate", "killer", "pass"])
def test_witness_beats_deterministic_adversaries(n, bob):
    schema = make_schema("total_function", {"n": n})
    trace = run_match(
        schema,
        make_strategy("total_function", Player.ALICE, "witness"),
        make_strategy("total_function", Player.BOB, bob),
    )
    assert trace.outcome is Player.ALICE
    assert validate_trace(trace)


@given(st.integers(0, 2**32))
@settings(max_examples=100, deadline=None)
def test_witness_beats_random_adversaries(seed):
    schema = make_schema("total_function", {"n": 2})
    trace = run_match(
        schema,
        make_strategy("total_function", Player.ALICE, "witness"),
        make_strategy("total_function", Player.BOB, "random", pass_prob=0.1, max_batch=3),
        seed=seed,
    )
    assert trace.outcome is Player.ALICE
