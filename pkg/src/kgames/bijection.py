"""Covering confirmed pairs with bijections.

Bob publishes total functions ``f_i`` and ``g_j`` on ``[N]``. A pair (x, y) is
confirmed when some ``f_i(x) = y`` and some ``g_j(y) = x``. Alice publishes
bijections and must map every confirmed x to its y by at least one of them;
Bob wins if a confirmed pair is left uncovered at the end.
"""

from __future__ import annotations

import math
import statistics
from collections import Counter
from dataclasses import dataclass, field

from kgames.engine import (
    ConfigError,
    GameSchema,
    Player,
    RuleViolation,
    Strategy,
    register_schema,
    register_strategy,
)
from kgames.matching import DegreeBoundViolated, regular_decomposition

GAME = "bijection"

Table = tuple[int, ...]


class NotInjective(ValueError):
    pass


class NotAPermutation(RuleViolation):
    pass


@dataclass
class FunctionRoster:
    N: int
    F: list[Table] = field(default_factory=list)
    G: list[Table] = field(default_factory=list)


@dataclass
class BijectionState:
    roster: FunctionRoster
    H: list[Table] = field(default_factory=list)
    covered: list[set[int]] = field(default_factory=list)  # covered[x] = {h(x) for h in H}

    def __post_init__(self):
        if not self.covered:
            self.covered = [set() for _ in range(self.roster.N)]
            for h in self.H:
                self._cover(h)

    def _cover(self, h: Table) -> None:
        for x, y in enumerate(h):
            self.covered[x].add(y)

    def add_bijection(self, h: Table) -> None:
        self.H.append(h)
        self._cover(h)


def check_permutation(h, N: int) -> Table:
    h = tuple(h)
    if len(h) != N or sorted(h) != list(range(N)):
        raise NotAPermutation(f"not a permutation of range({N})")
    return h


def induced_matching(f: Table, g: Table) -> dict[int, int]:
    """{x: f(x)} restricted to the x with g(f(x)) = x; injective since g inverts it."""
    return {x: y for x, y in enumerate(f) if g[y] == x}


def complete_to_bijection(m: dict[int, int], N: int) -> Table:
    """Extend a partial injection to a permutation, pairing leftovers in ascending order."""
    if len(set(m.values())) != len(m):
        raise NotInjective("partial matching maps two sources to one target")
    free_targets = iter(sorted(set(range(N)) - set(m.values())))
    return tuple(m[x] if x in m else next(free_targets) for x in range(N))


def confirmed_pairs(roster: FunctionRoster) -> set[tuple[int, int]]:
    pairs = set()
    for f in roster.F:
        for g in roster.G:
            pairs.update(induced_matching(f, g).items())
    return pairs


def uncovered_pairs(state: BijectionState) -> set[tuple[int, int]]:
    return {(x, y) for x, y in confirmed_pairs(state.roster) if y not in state.covered[x]}


def referee(state: BijectionState) -> tuple[Player, tuple[int, int, int, int] | None]:
    """Bob wins with the first (x, y, i, j) (1-based i, j) left uncovered; Alice wins otherwise."""
    for i, f in enumerate(state.roster.F, start=1):
        for j, g in enumerate(state.roster.G, start=1):
            for x, y in enumerate(f):
                if g[y] == x and y not in state.covered[x]:
                    return Player.BOB, (x, y, i, j)
    return Player.ALICE, None


def offline_cover(edges, N: int, m: int) -> list[Table]:
    """Exactly ``m`` bijections whose graphs contain every edge.

    ``edges`` is a set of (x, y) with every degree at most ``m``. The graph is
    padded to an m-regular multigraph on all of ``[N]`` and split into m
    perfect matchings.
    """
    if m < 1:
        raise DegreeBoundViolated("m must be positive")
    vertices = list(range(N))
    for x, y in edges:
        if not (0 <= x < N and 0 <= y < N):
            raise DegreeBoundViolated(f"edge ({x}, {y}) outside [0, {N})")
    return [tuple(mt[x] for x in vertices) for mt in regular_decomposition(sorted(edges), vertices, vertices, m)]


def minimal_cover(edges, N: int) -> list[Table]:
    """Fewest bijections covering ``edges``: as many as the maximum degree.

    A bijection covers at most one edge at each vertex, so fewer is impossible;
    the decomposition runs on the touched vertices only and each colour class
    is then completed to a full permutation.
    """
    edge_set = set(edges)
    edges = sorted(edge_set)
    if not edges:
        return []
    left = sorted({x for x, _ in edges})
    right = sorted({y for _, y in edges})
    delta = max(Counter(x for x, _ in edges).most_common(1)[0][1], Counter(y for _, y in edges).most_common(1)[0][1])
    size = max(len(left), len(right))
    # pad the smaller side with placeholder vertices that are dropped afterwards
    left_nodes = [("x", u) for u in left] + [("px", k) for k in range(size - len(left))]
    right_nodes = [("y", v) for v in right] + [("py", k) for k in range(size - len(right))]
    tagged = [(("x", x), ("y", y)) for x, y in edges]
    out = []
    for mt in regular_decomposition(tagged, left_nodes, right_nodes, delta):
        partial = {u[1]: v[1] for u, v in mt.items() if u[0] == "x" and v[0] == "y" and (u[1], v[1]) in edge_set}
        out.append(complete_to_bijection(partial, N))
    return out


def fit_loglog_exponent(ms, counts) -> float:
    """Least-squares slope of log(count) against log(m)."""
    pts = [(math.log(m), math.log(c)) for m, c in zip(ms, counts) if m > 0 and c > 0]
    if len(pts) < 2:
        raise ValueError("need at least two positive points")
    xs, ys = zip(*pts)
    return statistics.linear_regression(xs, ys).slope


@register_schema
class BijectionGame(GameSchema):
    """Params: ``N`` (domain size) and ``quota`` (max functions of each type; 0 = unbounded)."""

    name = GAME

    def __init__(self, N: int = 8, quota: int = 0):
        if not isinstance(N, int) or N < 1:
            raise ConfigError("N must be a positive integer")
        if not isinstance(quota, int) or quota < 0:
            raise ConfigError("quota must be a non-negative integer")
        self.N = N
        self.quota = quota
        self.params = {"N": N, "quota": quota}

    def initial_state(self) -> BijectionState:
        return BijectionState(FunctionRoster(self.N))

    def _table(self, t) -> Table:
        t = tuple(t)
        if len(t) != self.N or not all(0 <= v < self.N for v in t):
            raise RuleViolation(f"function must list {self.N} values in range")
        return t

    def apply(self, state: BijectionState, player: Player, payload) -> None:
        if player is Player.ALICE:
            perms = [check_permutation(h, self.N) for h in payload]
            for h in perms:
                state.add_bijection(h)
            return
        fs = [self._table(t) for t in payload.get("f", [])]
        gs = [self._table(t) for t in payload.get("g", [])]
        if self.quota and (len(state.roster.F) + len(fs) > self.quota or len(state.roster.G) + len(gs) > self.quota):
            raise RuleViolation(f"more than {self.quota} functions of one type")
        state.roster.F.extend(fs)
        state.roster.G.extend(gs)

    def encode_payload(self, player, payload):
        if player is Player.ALICE:
            return [list(h) for h in payload]
        return {"f": [list(t) for t in payload.get("f", [])], "g": [list(t) for t in payload.get("g", [])]}

    def decode_payload(self, player, data):
        if player is Player.ALICE:
            return [tuple(h) for h in data]
        return {"f": [tuple(t) for t in data["f"]], "g": [tuple(t) for t in data["g"]]}

    def is_pass(self, payload) -> bool:
        if isinstance(payload, dict):
            return not payload.get("f") and not payload.get("g")
        return super().is_pass(payload)

    def referee(self, state: BijectionState):
        return referee(state)

    def encode_certificate(self, certificate):
        if certificate is None:
            return None
        x, y, i, j = certificate
        return {"x": x, "y": y, "i": i, "j": j}

    def snapshot(self, state: BijectionState):
        return list(state.roster.F), list(state.roster.G), list(state.H)

    def extends(self, before, after: BijectionState) -> bool:
        F, G, H = before
        return (
            after.roster.F[: len(F)] == F
            and after.roster.G[: len(G)] == G
            and after.H[: len(H)] == H
        )

    def metrics(self, state: BijectionState) -> dict:
        return {
            "bijections": len(state.H),
            "f_count": len(state.roster.F),
            "g_count": len(state.roster.G),
            "confirmed": len(confirmed_pairs(state.roster)),
        }


# --------------------------------------------------------------------------
# Alice (responders)


def pairwise_strategy_step(roster: FunctionRoster, done: set[tuple[int, int]]) -> list[Table]:
    """One completed induced-matching bijection for every (i, j) not yet in ``done``.

    ``done`` is updated in place; pairs are handled in row-major order.
    """
    out = []
    for i, f in enumerate(roster.F):
        for j, g in enumerate(roster.G):
            if (i, j) not in done:
                done.add((i, j))
                out.append(complete_to_bijection(induced_matching(f, g), roster.N))
    return out


@register_strategy(GAME, Player.ALICE, "pairwise")
class PairwiseResponder(Strategy):
    name = "pairwise"

    def begin(self, schema, player, rng):
        super().begin(schema, player, rng)
        self.done: set[tuple[int, int]] = set()

    def move(self, ctx):
        return pairwise_strategy_step(ctx.state.roster, self.done) or None


@register_strategy(GAME, Player.ALICE, "minimizer")
class GreedyMinimizer(Strategy):
    """After each opponent move, publishes the fewest bijections that cover everything confirmed."""

    name = "minimizer"

    def move(self, ctx):
        missing = uncovered_pairs(ctx.state)
        return minimal_cover(missing, ctx.state.roster.N) or None


register_strategy(GAME, Player.ALICE, "pass")(Strategy)
register_strategy(GAME, Player.BOB, "pass")(Strategy)


# --------------------------------------------------------------------------
# Bob (adversaries)


@register_strategy(GAME, Player.BOB, "constant")
class ConstantAdversary(Strategy):
    """Selects fresh vertices through constant functions, alternating f and g.

    A constant f with value y selects right vertex y; a constant g with value x
    selects left vertex x. Each new vertex is the least one that is not yet
    selected and is not joined by any published bijection to a vertex already
    selected on the other side. Passes after ``moves`` functions or when no
    vertex qualifies.
    """

    name = "constant"

    def __init__(self, moves: int = 8):
        self.moves = moves

    def begin(self, schema, player, rng):
        super().begin(schema, player, rng)
        self.made = 0
        self.xs: list[int] = []
        self.ys: list[int] = []

    def move(self, ctx):
        if self.made >= self.moves:
            return None
        state = ctx.state
        N = state.roster.N
        if self.made % 2 == 0:
            taken = set(self.ys)
            for x in self.xs:
                taken |= state.covered[x]
            y = next((v for v in range(N) if v not in taken), None)
            if y is None:
                return None
            self.ys.append(y)
            payload = {"f": [(y,) * N], "g": []}
        else:
            chosen_ys = set(self.ys)
            x = next(
                (u for u in range(N) if u not in self.xs and not (state.covered[u] & chosen_ys)),
                None,
            )
            if x is None:
                return None
            self.xs.append(x)
            payload = {"f": [], "g": [(x,) * N]}
        self.made += 1
        return payload

    def describe(self):
        return {"name": self.name, "moves": self.moves}


@register_strategy(GAME, Player.BOB, "random")
class RandomRoster(Strategy):
    """Random rosters rich in confirmed pairs.

    Each non-pass move adds a function to F or G. Half of them are uniformly
    random; the rest invert a random earlier function of the other type on a
    random subset of points, which creates many confirmed pairs.
    """

    name = "random"
    randomized = True

    def __init__(self, per_type: int = 4, pass_prob: float = 0.25):
        self.per_type = per_type
        self.pass_prob = pass_prob

    def _function(self, N: int, others: list[Table]) -> Table:
        rng = self.rng
        t = [rng.randrange(N) for _ in range(N)]
        if others and rng.random() < 0.5:
            src = rng.choice(others)
            for a, b in enumerate(src):
                if rng.random() < 0.7:
                    t[b] = a
        return tuple(t)

    def move(self, ctx):
        roster = ctx.state.roster
        room_f = self.per_type - len(roster.F)
        room_g = self.per_type - len(roster.G)
        if (room_f <= 0 and room_g <= 0) or self.rng.random() < self.pass_prob:
            return None
        if room_f > 0 and (room_g <= 0 or self.rng.random() < 0.5):
            return {"f": [self._function(roster.N, roster.G)], "g": []}
        return {"f": [], "g": [self._function(roster.N, roster.F)]}

    def describe(self):
        return {"name": self.name, "per_type": self.per_type, "pass_prob": self.pass_prob}
