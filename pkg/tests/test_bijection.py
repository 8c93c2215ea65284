import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kgames.bijection import (
    BijectionState,
    FunctionRoster,
    NotAPermutation,
    NotInjective,
    check_permutation,
    complete_to_bijection,
    confirmed_pairs,
    fit_loglog_exponent,
    induced_matching,
    minimal_cover,
    offline_cover,
    pairwise_strategy_step,
    referee,
)
from kgames.engine import IllegalMove, Player, make_schema, make_strategy, play_match, run_match, validate_trace
from kgames.matching import DegreeBoundViolated

IDENT = (0, 1, 2, 3)


def oracle_confirmed(F, G, N):
    return {(x, y) for x in range(N) for y in range(N) if any(f[x] == y for f in F) and any(g[y] == x for g in G)}


def max_degree(edges):
    left = [x for x, _ in edges]
    right = [y for _, y in edges]
    return max([left.count(v) for v in set(left)] + [right.count(v) for v in set(right)] + [0])


def test_referee_examples():
    assert referee(BijectionState(FunctionRoster(4))) == (Player.ALICE, None)
    roster = FunctionRoster(4, [IDENT], [IDENT])
    assert referee(BijectionState(roster, [IDENT])) == (Player.ALICE, None)
    assert referee(BijectionState(roster)) == (Player.BOB, (0, 0, 1, 1))


def test_induced_matching_examples():
    assert induced_matching(IDENT, IDENT) == {0: 0, 1: 1, 2: 2, 3: 3}
    assert induced_matching((2,) * 4, (1,) * 4) == {1: 2}


@given(st.lists(st.integers(0, 5), min_size=6, max_size=6), st.lists(st.integers(0, 5), min_size=6, max_size=6))
def test_induced_matching_matches_bruteforce(f, g):
    got = induced_matching(tuple(f), tuple(g))
    assert set(got.items()) == {(x, y) for x in range(6) for y in range(6) if f[x] == y and g[y] == x}
    assert len(set(got.values())) == len(got)


def test_completion_examples():
    assert complete_to_bijection({}, 3) == (0, 1, 2)
    assert complete_to_bijection({0: 2}, 3) == (2, 0, 1)
    with pytest.raises(NotInjective):
        complete_to_bijection({0: 1, 1: 1}, 3)


@given(st.permutations(range(7)), st.sets(st.integers(0, 6)))
def test_completion_extends_and_is_bijective(perm, dom):
    m = {x: perm[x] for x in dom}
    h = complete_to_bijection(m, 7)
    assert sorted(h) == list(range(7))
    assert all(h[x] == y for x, y in m.items())


def test_check_permutation():
    assert check_permutation([1, 0], 2) == (1, 0)
    with pytest.raises(NotAPermutation):
        check_permutation([0, 0], 2)


@given(st.integers(1, 6).flatmap(lambda n: st.tuples(st.just(n), st.lists(st.tuples(*[st.integers(0, n - 1)] * n), max_size=3), st.lists(st.tuples(*[st.integers(0, n - 1)] * n), max_size=3))))
def test_confirmed_pairs_match_bruteforce(args):
    n, F, G = args
    assert confirmed_pairs(FunctionRoster(n, F, G)) == oracle_confirmed(F, G, n)


def test_offline_cover_examples():
    perm = (2, 0, 3, 1)
    assert offline_cover(set(enumerate(perm)), 4, 1) == [perm]
    edges = {(0, 0), (0, 1), (1, 1)}
    cover = offline_cover(edges, 5, 3)
    assert len(cover) == 3 and all(sorted(h) == list(range(5)) for h in cover)
    assert all(any(h[x] == y for h in cover) for x, y in edges)
    with pytest.raises(DegreeBoundViolated):
        offline_cover({(0, 0), (0, 1)}, 3, 1)


def test_offline_cover_random_m3_n5():
    rng = random.Random(7)
    for _ in range(100):
        edges = set()
        for _ in range(15):
            e = (rng.randrange(5), rng.randrange(5))
            if max_degree(edges | {e}) <= 3:
                edges.add(e)
        cover = offline_cover(edges, 5, 3)
        assert len(cover) == 3
        assert all(any(h[x] == y for h in cover) for x, y in edges)


@given(st.sets(st.tuples(st.integers(0, 5), st.integers(0, 5)), max_size=14))
@settings(max_examples=200)
def test_minimal_cover_uses_max_degree(edges):
    cover = minimal_cover(edges, 6)
    assert len(cover) == max_degree(edges)
    assert all(sorted(h) == list(range(6)) for h in cover)
    assert all(any(h[x] == y for h in cover) for x, y in edges)


def test_minimal_cover_is_optimal_by_exhaustion():
    # no smaller set of permutations covers these edges
    edges = {(0, 0), (0, 1), (1, 0), (2, 2)}
    cover = minimal_cover(edges, 3)
    perms = list(itertools.permutations(range(3)))
    for k in range(len(cover)):
        for subset in itertools.combinations(perms, k):
            assert not all(any(h[x] == y for h in subset) for x, y in edges)


def test_pairwise_step_counts():
    roster = FunctionRoster(4, [IDENT, (1, 1, 1, 1)], [IDENT, (0,) * 4, (3, 2, 1, 0)])
    done = set()
    assert len(pairwise_strategy_step(roster, done)) == 6
    assert pairwise_strategy_step(roster, done) == []


@given(st.integers(0, 2**31))
@settings(max_examples=40, deadline=None)
def test_pairwise_never_loses(seed):
    trace, final = play_match(
        make_schema("bijection", {"N": 16}),
        make_strategy("bijection", Player.ALICE, "pairwise"),
        make_strategy("bijection", Player.BOB, "random"),
        seed=seed,
    )
    assert trace.outcome is Player.ALICE
    assert len(final.H) == len(final.roster.F) * len(final.roster.G)
    assert validate_trace(trace)


@given(st.integers(0, 2**31))
@settings(max_examples=40, deadline=None)
def test_minimizer_never_loses(seed):
    trace = run_match(
        make_schema("bijection", {"N": 16}),
        make_strategy("bijection", Player.ALICE, "minimizer"),
        make_strategy("bijection", Player.BOB, "random"),
        seed=seed,
    )
    assert trace.outcome is Player.ALICE


def test_constant_adversary_completes_moves():
    trace, final = play_match(
        make_schema("bijection", {"N": 256}),
        make_strategy("bijection", Player.ALICE, "pairwise"),
        make_strategy("bijection", Player.BOB, "constant", moves=8),
    )
    assert len(final.roster.F) + len(final.roster.G) == 8
    assert len(final.H) == 16
    assert trace.outcome is Player.ALICE


def test_unresponsive_alice_loses():
    trace = run_match(
        make_schema("bijection", {"N": 8}),
        make_strategy("bijection", Player.ALICE, "pass"),
        make_strategy("bijection", Player.BOB, "constant", moves=2),
    )
    assert trace.outcome is Player.BOB
    assert trace.certificate == {"x": 0, "y": 0, "i": 1, "j": 1}


def test_quota_and_bad_tables_rejected():
    from kgames.total_function import ScriptedAdversary

    schema = make_schema("bijection", {"N": 2, "quota": 1})
    pas = make_strategy("bijection", Player.ALICE, "pass")
    with pytest.raises(IllegalMove):
        run_match(schema, pas, ScriptedAdversary([{"f": [(0, 0), (1, 1)], "g": []}]))
    with pytest.raises(IllegalMove):
        run_match(schema, pas, ScriptedAdversary([{"f": [(0, 5)], "g": []}]))


def test_loglog_fit():
    ms = [4, 8, 16]
    assert fit_loglog_exponent(ms, [m * m for m in ms]) == pytest.approx(2.0)
    assert fit_loglog_exponent(ms, [3 * m for m in ms]) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        fit_loglog_exponent([4], [16])
