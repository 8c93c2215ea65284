import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kgames.matching import DegreeBoundViolated, maximum_matching, pad_to_regular, regular_decomposition

edge_sets = st.integers(1, 7).flatmap(
    lambda n: st.tuples(
        st.just(n),
        st.sets(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=n * n),
    )
)


@given(edge_sets)
@settings(max_examples=300)
def test_matching_size_matches_networkx(args):
    n, edges = args
    adj = {u: sorted(v for x, v in edges if x == u) for u in range(n)}
    ours = maximum_matching(range(n), adj)
    assert len(set(ours.values())) == len(ours)
    assert all((u, v) in edges for u, v in ours.items())

    g = nx.Graph()
    g.add_nodes_from((("L", u) for u in range(n)), bipartite=0)
    g.add_nodes_from((("R", v) for v in range(n)), bipartite=1)
    g.add_edges_from((("L", u), ("R", v)) for u, v in edges)
    theirs = nx.bipartite.maximum_matching(g, top_nodes=[("L", u) for u in range(n)])
    assert len(ours) == len(theirs) // 2


def test_long_augmenting_path():
    # a path that forces every earlier greedy choice to shift
    n = 300
    adj = {u: [u, u + 1] if u + 1 < n else [u] for u in range(n)}
    adj[n - 1] = [0]
    assert len(maximum_matching(range(n), adj)) == n


def test_pad_to_regular_and_errors():
    multi = pad_to_regular([(0, 0)], [0, 1], [0, 1], 2)
    assert sum(multi.values()) == 4
    with pytest.raises(DegreeBoundViolated):
        pad_to_regular([(0, 0), (0, 1)], [0, 1], [0, 1], 1)
    with pytest.raises(DegreeBoundViolated):
        pad_to_regular([], [0], [0, 1], 1)


@given(edge_sets, st.integers(0, 2))
@settings(max_examples=200)
def test_decomposition_covers_every_edge(args, extra):
    n, edges = args
    deg = max([sum(1 for e in edges if e[0] == u) for u in range(n)] + [sum(1 for e in edges if e[1] == v) for v in range(n)] + [1])
    m = deg + extra
    matchings = regular_decomposition(edges, list(range(n)), list(range(n)), m)
    assert len(matchings) == m
    for mt in matchings:
        assert sorted(mt) == list(range(n)) and sorted(mt.values()) == list(range(n))
    assert all(any(mt[u] == v for mt in matchings) for u, v in edges)
