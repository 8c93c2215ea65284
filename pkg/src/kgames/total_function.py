"""Partial function against a bounded list of total functions.

Alice ("we") enumerates the graph of a partial function ``f`` on n-bit
strings; Bob may list at most ``2**n - 1`` total functions. Alice wins if some
``f(y) = x`` is avoided by every listed function at ``y``. Strings are the
integers ``0 .. 2**n - 1``; a total function is its value table.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

from kgames.engine import (
    ConfigError,
    GameError,
    GameSchema,
    MoveContext,
    Player,
    RuleViolation,
    Strategy,
    register_schema,
    register_strategy,
)

GAME = "total_function"

Table = tuple[int, ...]


class Exhausted(GameError):
    """No undefined point or no avoiding value is left for Alice."""


@dataclass
class TotalFunctionState:
    n: int
    f: dict[int, int] = field(default_factory=dict)
    gs: list[Table] = field(default_factory=list)

    @property
    def size(self) -> int:
        return 1 << self.n


def referee(f: dict[int, int], gs: list[Table]) -> tuple[int, int] | None:
    """Least witness ``(x, y)`` with ``f(y) = x`` and ``g(y) != x`` for every g, else None."""
    witnesses = [(x, y) for y, x in f.items() if all(g[y] != x for g in gs)]
    return min(witnesses) if witnesses else None


def alice_strategy_step(f: dict[int, int], gs: list[Table], n: int) -> tuple[int, int] | None:
    """Next ``(y, x)`` to declare, or None when ``f`` already holds a witness."""
    size = 1 << n
    if f and referee(f, gs) is not None:
        return None
    free = [y for y in range(size) if y not in f]
    if not free:
        raise Exhausted("f is defined everywhere")
    y = free[0]
    blocked = {g[y] for g in gs}
    for x in range(size):
        if x not in blocked:
            return y, x
    raise Exhausted(f"every value at y={y} is blocked")


def kbar(x: int, y: int, universe: list[Table]) -> float:
    """Index-length stand-in for total conditional complexity.

    Position ``i`` in the universe costs ``ceil(log2(i + 1))`` bits; the result
    is the cost of the first function mapping ``y`` to ``x`` (inf if none).
    """
    for i, g in enumerate(universe):
        if g[y] == x:
            return math.ceil(math.log2(i + 1)) if i else 0
    return math.inf


def all_tables(n: int):
    """Every total function on n-bit strings, in lexicographic order of value tables."""
    size = 1 << n
    return itertools.product(range(size), repeat=size)


@register_schema
class TotalFunctionGame(GameSchema):
    name = GAME

    def __init__(self, n: int = 1):
        if not isinstance(n, int) or not 1 <= n <= 4:
            raise ConfigError("n must be an integer in 1..4")
        self.n = n
        self.quota = (1 << n) - 1
        self.params = {"n": n}

    def initial_state(self) -> TotalFunctionState:
        return TotalFunctionState(self.n)

    def apply(self, state: TotalFunctionState, player: Player, payload) -> None:
        size = state.size
        if player is Player.ALICE:
            for y, x in payload:
                if not (0 <= y < size and 0 <= x < size):
                    raise RuleViolation(f"pair ({y}, {x}) out of range")
                if state.f.get(y, x) != x:
                    raise RuleViolation(f"f({y}) is already {state.f[y]}")
            for y, x in payload:
                state.f[y] = x
        else:
            tables = [tuple(t) for t in payload]
            for t in tables:
                if len(t) != size or not all(0 <= v < size for v in t):
                    raise RuleViolation("function table must list one in-range value per point")
            if len(state.gs) + len(tables) > self.quota:
                raise RuleViolation(f"quota of {self.quota} functions exceeded")
            state.gs.extend(tables)

    def decode_payload(self, player: Player, data):
        if player is Player.ALICE:
            return [(int(y), int(x)) for y, x in data]
        return [tuple(int(v) for v in t) for t in data]

    def referee(self, state: TotalFunctionState):
        witness = referee(state.f, state.gs)
        if witness is None:
            return Player.BOB, None
        return Player.ALICE, witness

    def encode_certificate(self, certificate):
        if certificate is None:
            return None
        x, y = certificate
        return {"x": x, "y": y}

    def snapshot(self, state: TotalFunctionState):
        return dict(state.f), len(state.gs), list(state.gs)

    def extends(self, before, after: TotalFunctionState) -> bool:
        f0, count, gs0 = before
        return all(after.f.get(y) == x for y, x in f0.items()) and after.gs[:count] == gs0

    def metrics(self, state: TotalFunctionState) -> dict:
        return {"points": len(state.f), "functions": len(state.gs)}


@register_strategy(GAME, Player.ALICE, "witness")
class WitnessStrategy(Strategy):
    """One fresh point per opponent move, avoiding every listed value there."""

    name = "witness"

    def move(self, ctx: MoveContext):
        state = ctx.state
        step = alice_strategy_step(state.f, state.gs, state.n)
        return None if step is None else [step]


register_strategy(GAME, Player.ALICE, "pass")(Strategy)
register_strategy(GAME, Player.BOB, "pass")(Strategy)


@register_strategy(GAME, Player.BOB, "enumerate")
class EnumeratingAdversary(Strategy):
    """Lists the first ``budget`` value tables in lexicographic order, one per round."""

    name = "enumerate"

    def __init__(self, budget: int | None = None, order: str = "lex"):
        if order != "lex":
            raise ConfigError("only the 'lex' order is available")
        self.budget = budget
        self.order = order

    def begin(self, schema, player, rng):
        super().begin(schema, player, rng)
        budget = schema.quota if self.budget is None else self.budget
        if not 0 <= budget <= schema.quota:
            raise ConfigError(f"budget must lie in 0..{schema.quota}")
        self._tables = itertools.islice(all_tables(schema.n), budget)

    def move(self, ctx):
        table = next(self._tables, None)
        return None if table is None else [table]

    def describe(self):
        return {"name": self.name, "budget": self.budget, "order": self.order}


@register_strategy(GAME, Player.BOB, "random")
class RandomAdversary(Strategy):
    """Adds random tables in random batches until the quota is used, passing at random."""

    name = "random"
    randomized = True

    def __init__(self, pass_prob: float = 0.3, max_batch: int = 2):
        self.pass_prob = pass_prob
        self.max_batch = max_batch

    def move(self, ctx):
        state = ctx.state
        room = (state.size - 1) - len(state.gs)
        if room <= 0 or self.rng.random() < self.pass_prob:
            return None
        k = self.rng.randint(1, min(room, self.max_batch))
        return [tuple(self.rng.randrange(state.size) for _ in range(state.size)) for _ in range(k)]

    def describe(self):
        return {"name": self.name, "pass_prob": self.pass_prob, "max_batch": self.max_batch}


@register_strategy(GAME, Player.BOB, "killer")
class KillerAdversary(Strategy):
    """Each round lists a table agreeing with f wherever f is defined, killing every witness."""

    name = "killer"

    def move(self, ctx):
        state = ctx.state
        if len(state.gs) >= state.size - 1 or not state.f or referee(state.f, state.gs) is None:
            return None
        fill = self.rng.randrange(state.size)
        return [tuple(state.f.get(y, fill) for y in range(state.size))]


class ScriptedAdversary(Strategy):
    """Replays a fixed list of moves (None for pass), then passes forever."""

    name = "scripted"

    def __init__(self, moves):
        self.moves = list(moves)

    def begin(self, schema, player, rng):
        super().begin(schema, player, rng)
        self._i = 0

    def move(self, ctx):
        if self._i >= len(self.moves):
            return None
        payload = self.moves[self._i]
        self._i += 1
        return payload

    def describe(self):
        return {"name": self.name, "moves": [None if m is None else [list(t) for t in m] for m in self.moves]}


def _compositions(seq):
    # every way to cut seq into consecutive non-empty batches
    if not seq:
        yield []
        return
    for i in range(1, len(seq) + 1):
        for rest in _compositions(seq[i:]):
            yield [list(seq[:i])] + rest


def exhaustive_adversaries(n: int, max_leading_passes: int = 1):
    """Every scripted adversary within the quota.

    Covers all ordered selections of distinct tables (length up to the
    quota), all ways of batching them into moves, and up to
    ``max_leading_passes`` passes before each batch.
    """
    quota = (1 << n) - 1
    tables = list(all_tables(n))
    for k in range(quota + 1):
        for ordered in itertools.permutations(tables, k):
            for batches in _compositions(ordered):
                for gaps in itertools.product(range(max_leading_passes + 1), repeat=len(batches)):
                    moves = []
                    for gap, batch in zip(gaps, batches):
                        moves.extend([None] * gap)
                        moves.append(batch)
                    yield ScriptedAdversary(moves)
