"""Bipartite matching and regular-multigraph decomposition."""

from __future__ import annotations

from collections import Counter
from typing import Hashable, Iterable, Sequence


class DegreeBoundViolated(ValueError):
    pass


def maximum_matching(left: Sequence[Hashable], adj: dict) -> dict:
    """Augmenting-path (Kuhn) maximum matching; returns left -> right.

    ``adj[u]`` lists the right neighbours of ``u`` in the order they are tried.
    Iterative, so deep augmenting paths are fine.
    """
    match_l: dict = {}
    match_r: dict = {}
    # greedy warm start
    for u in left:
        for v in adj.get(u, ()):
            if v not in match_r:
                match_l[u] = v
                match_r[v] = u
                break
    for root in left:
        if root in match_l:
            continue
        seen: set = set()
        stack = [root]
        chosen: list = []
        iters = {root: iter(adj.get(root, ()))}
        while stack:
            x = stack[-1]
            for v in iters[x]:
                if v in seen:
                    continue
                seen.add(v)
                w = match_r.get(v)
                chosen.append(v)
                if w is None:
                    for u, vv in zip(stack, chosen):
                        match_l[u] = vv
                        match_r[vv] = u
                    stack = []
                else:
                    stack.append(w)
                    iters[w] = iter(adj.get(w, ()))
                break
            else:
                stack.pop()
                if chosen:
                    chosen.pop()
    return match_l


def pad_to_regular(
    edges: Iterable[tuple[Hashable, Hashable]],
    left: Sequence[Hashable],
    right: Sequence[Hashable],
    m: int,
) -> Counter:
    """Add parallel-allowed edges until every vertex has degree exactly ``m``.

    Deficient left vertices are paired, in order, with the first deficient
    right vertex. Raises :class:`DegreeBoundViolated` if some degree already
    exceeds ``m`` or the sides differ in size.
    """
    if len(left) != len(right):
        raise DegreeBoundViolated("both sides must have the same number of vertices")
    multi = Counter(edges)
    deg_l = Counter()
    deg_r = Counter()
    for (u, v), k in multi.items():
        deg_l[u] += k
        deg_r[v] += k
    for side, deg in (("left", deg_l), ("right", deg_r)):
        for vertex, d in deg.items():
            if d > m:
                raise DegreeBoundViolated(f"{side} vertex {vertex!r} has degree {d} > {m}")
    right_iter = iter(right)
    v = next(right_iter, None)
    for u in left:
        while deg_l[u] < m:
            while v is not None and deg_r[v] >= m:
                v = next(right_iter, None)
            multi[(u, v)] += 1
            deg_l[u] += 1
            deg_r[v] += 1
    return multi


def regular_decomposition(
    edges: Iterable[tuple[Hashable, Hashable]],
    left: Sequence[Hashable],
    right: Sequence[Hashable],
    m: int,
) -> list[dict]:
    """Split a max-degree-``m`` bipartite graph into ``m`` perfect matchings of its padding.

    Every input edge appears in at least one returned matching (left -> right).
    """
    multi = pad_to_regular(edges, left, right, m)
    matchings = []
    for _ in range(m):
        adj: dict = {u: [] for u in left}
        for (u, v), k in multi.items():
            if k > 0:
                adj[u].append(v)
        matching = maximum_matching(left, adj)
        if len(matching) != len(left):
            raise AssertionError("regular bipartite multigraph without a perfect matching")
        for u, v in matching.items():
            multi[(u, v)] -= 1
            if multi[(u, v)] == 0:
                del multi[(u, v)]
        matchings.append(matching)
    return matchings
