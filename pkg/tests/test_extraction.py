from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kgames.engine import ConfigError, Player, make_schema, make_strategy, play_match, run_match, validate_trace
from kgames.extraction import (
    BipartiteState,
    DegreeCapExceeded,
    ExtractionParams,
    add_edges,
    closed_form_bounds,
    marker_strategy_step,
    qualifying,
    referee,
    winnability_condition,
)


def rescan(edges: dict, marks, right_size):
    """Right elements whose every neighbour is marked, from the raw edge map."""
    marked = set(marks)
    return [r for r in range(right_size) if all(l in marked for l in edges.get(r, ()))]


def state(left=4, right=64, cap=2, t=2):
    return BipartiteState(ExtractionParams(left, right, cap, t))


def test_degree_cap_and_idempotence():
    s = state()
    add_edges(s, [(0, 5), (1, 5)])
    add_edges(s, [(0, 5)])
    assert s.neighbours(5) == {0, 1}
    with pytest.raises(DegreeCapExceeded):
        add_edges(s, [(2, 5)])
    batch = [(l, r) for r in range(10, 15) for l in (0, 1)]
    add_edges(s, batch)
    assert all(s.neighbours(r) == {0, 1} for r in range(10, 15))


def test_batches_are_all_or_nothing():
    s = state()
    with pytest.raises(DegreeCapExceeded):
        add_edges(s, [(0, 1), (1, 2), (2, 2), (3, 2)])
    assert s.edges == {}


def test_referee_examples():
    s = state()
    assert referee(s)[0] is Player.ALICE
    s = state(t=1)
    add_edges(s, [(0, r) for r in range(64)])
    assert referee(s) == (Player.BOB, [])


def test_marker_example_from_multiset():
    s = state(right=10)
    add_edges(s, [(0, r) for r in range(5)] + [(1, r) for r in range(5, 8)] + [(2, 8), (2, 9)])
    step = marker_strategy_step(s)
    assert step.marks == [0]
    assert step.selected == frozenset(range(5))


def test_marker_passes_without_edges():
    assert marker_strategy_step(state()).marks == []


def test_winnability_examples():
    w = winnability_condition(ExtractionParams(4, 64, 2, 2))
    assert w and w.bounds == [64, Fraction(31, 2), Fraction(27, 8)]
    w = winnability_condition(ExtractionParams(4, 8, 2, 2))
    assert not w and w.failed_stage == 1 and w.bounds[1] == Fraction(3, 2)


def test_asymptotic_shape_n9():
    p = ExtractionParams.asymptotic_shape(9)
    assert p.degree_cap == 3
    w = winnability_condition(p)
    assert w
    bounds = closed_form_bounds(9)
    assert bounds[-1] == 2**27 > 2**9
    # the exact iteration dominates the closed form at every stage
    assert all(s >= b for s, b in zip(w.bounds, bounds))


def test_params_validated():
    with pytest.raises(ConfigError):
        ExtractionParams(0, 4, 1, 1)
    with pytest.raises(ConfigError):
        make_schema("extraction", {"threshold": -1})


@pytest.mark.parametrize("bob", ["random", "flooding", "spoiler"])
@given(seed=st.integers(0, 2**31))
@settings(max_examples=25, deadline=None)
def test_marker_wins_with_at_most_cap_marks(bob, seed):
    schema = make_schema("extraction")
    trace, final = _play(schema, bob, seed)
    assert trace.outcome is Player.ALICE
    assert len(final.marks) <= 2
    assert trace.certificate == rescan(final.edges, final.marks, 64)
    assert qualifying(final) == trace.certificate
    assert validate_trace(trace)


def _play(schema, bob, seed):
    return play_match(
        schema,
        make_strategy("extraction", Player.ALICE, "marker"),
        make_strategy("extraction", Player.BOB, bob),
        seed=seed,
    )


def test_ledger_counts_common_neighbours():
    trace, final = _play(make_schema("extraction"), "flooding", 0)
    prefix = set()
    for row in trace.ledger:
        prefix.add(row["mark"])
        assert row["adjacent_to_all_marks"] == sum(1 for r in range(64) if prefix <= final.neighbours(r))


def test_random_seed0_example():
    trace = run_match(
        make_schema("extraction"),
        make_strategy("extraction", Player.ALICE, "marker"),
        make_strategy("extraction", Player.BOB, "random"),
        seed=0,
    )
    assert trace.outcome is Player.ALICE and len(trace.certificate) >= 2
