"""Marking game on a degree-capped bipartite graph.

Bob adds edges between right elements ``r`` (``0 .. right_size-1``) and left
elements ``l`` (``0 .. left_size-1``); no right element may get more than
``degree_cap`` neighbours. Alice marks left elements. Alice wins when at least
``threshold`` right elements have all their neighbours marked; an element
with no neighbours qualifies vacuously.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

from kgames.engine import (
    ConfigError,
    GameSchema,
    Player,
    RuleViolation,
    Strategy,
    register_schema,
    register_strategy,
)

GAME = "extraction"


class DegreeCapExceeded(RuleViolation):
    def __init__(self, r: int, cap: int):
        super().__init__(f"right element {r} would exceed {cap} neighbours")
        self.r = r


@dataclass(frozen=True)
class ExtractionParams:
    left_size: int
    right_size: int
    degree_cap: int
    threshold: int

    def __post_init__(self):
        for name in ("left_size", "right_size", "degree_cap", "threshold"):
            value = getattr(self, name)
            if not isinstance(value, int) or value < 1:
                raise ConfigError(f"{name} must be a positive integer")

    @classmethod
    def asymptotic_shape(cls, n: int) -> ExtractionParams:
        """|L| = 2^n, |R| = 2^(n^2), cap ceil(sqrt n), threshold 2^n."""
        return cls(1 << n, 1 << (n * n), math.isqrt(n - 1) + 1, 1 << n)


@dataclass
class BipartiteState:
    params: ExtractionParams
    edges: dict[int, set[int]] = field(default_factory=dict)
    marks: list[int] = field(default_factory=list)  # in marking order

    @property
    def marked(self) -> set[int]:
        return set(self.marks)

    def neighbours(self, r: int) -> set[int]:
        return self.edges.get(r, set())


def add_edges(state: BipartiteState, pairs) -> BipartiteState:
    """Add (l, r) edges in place; duplicates are ignored. The batch is all-or-nothing."""
    p = state.params
    staged: dict[int, set[int]] = {}
    for l, r in pairs:
        if not (0 <= l < p.left_size and 0 <= r < p.right_size):
            raise RuleViolation(f"edge ({l}, {r}) out of range")
        nb = staged.setdefault(r, set(state.neighbours(r)))
        nb.add(l)
        if len(nb) > p.degree_cap:
            raise DegreeCapExceeded(r, p.degree_cap)
    state.edges.update(staged)
    return state


def qualifying(state: BipartiteState) -> list[int]:
    marked = state.marked
    return [r for r in range(state.params.right_size) if state.neighbours(r) <= marked]


def referee(state: BipartiteState, threshold: int | None = None) -> tuple[Player, list[int]]:
    t = state.params.threshold if threshold is None else threshold
    good = qualifying(state)
    return (Player.ALICE if len(good) >= t else Player.BOB), good


@dataclass
class MarkerStep:
    marks: list[int]
    selected: frozenset[int]
    stage: int
    stages: list[dict]


def marker_strategy_step(
    state: BipartiteState, selected: frozenset[int] | None = None, stage: int = 0
) -> MarkerStep:
    """Advance the marker through as many stages as the current edges force.

    At stage k the marker waits while at least ``threshold`` selected elements
    have at most k neighbours (those have only marked neighbours). Otherwise it
    marks the unmarked left element adjacent to the most selected elements
    (least element on ties), keeps only the selected elements adjacent to it
    and moves to stage k + 1. It stops at stage ``degree_cap``.
    """
    p = state.params
    selected = frozenset(range(p.right_size)) if selected is None else selected
    marked = state.marked
    marks: list[int] = []
    stages: list[dict] = []
    while stage < p.degree_cap:
        low = sum(1 for r in selected if len(state.neighbours(r)) <= stage)
        if low >= p.threshold:
            break
        counts = Counter(l for r in selected for l in state.neighbours(r) if l not in marked)
        if not counts:
            break
        best = min(counts, key=lambda l: (-counts[l], l))
        new_selected = frozenset(r for r in selected if best in state.neighbours(r))
        stages.append(
            {
                "stage": stage,
                "mark": best,
                "selected_before": len(selected),
                "selected_after": len(new_selected),
            }
        )
        marks.append(best)
        marked.add(best)
        selected, stage = new_selected, stage + 1
    return MarkerStep(marks, selected, stage, stages)


@dataclass
class Winnability:
    holds: bool
    bounds: list[Fraction]  # guaranteed |selected| at stages 0..d
    failed_stage: int | None = None

    def __bool__(self) -> bool:
        return self.holds


def winnability_condition(params: ExtractionParams) -> Winnability:
    """Iterate s_{k+1} = (s_k - T) / |L| from s_0 = |R| and require s_d >= T."""
    s = Fraction(params.right_size)
    bounds = [s]
    failed = None
    for k in range(1, params.degree_cap + 1):
        s = (s - params.threshold) / params.left_size
        bounds.append(s)
        if failed is None and s < params.threshold:
            failed = k
    return Winnability(failed is None and bounds[0] >= params.threshold, bounds, failed)


def closed_form_bounds(n: int) -> list[int]:
    """The closed-form stage bounds 2^(n^2 - 2kn), k = 0 .. ceil(sqrt n)."""
    d = ExtractionParams.asymptotic_shape(n).degree_cap
    return [1 << (n * n - 2 * k * n) for k in range(d + 1)]


@register_schema
class ExtractionGame(GameSchema):
    name = GAME

    def __init__(self, left_size: int = 4, right_size: int = 64, degree_cap: int = 2, threshold: int = 2):
        self.game_params = ExtractionParams(left_size, right_size, degree_cap, threshold)
        self.params = {
            "left_size": left_size,
            "right_size": right_size,
            "degree_cap": degree_cap,
            "threshold": threshold,
        }

    def initial_state(self) -> BipartiteState:
        return BipartiteState(self.game_params)

    def apply(self, state: BipartiteState, player: Player, payload) -> None:
        if player is Player.BOB:
            add_edges(state, payload)
            return
        for l in payload:
            if not 0 <= l < self.game_params.left_size:
                raise RuleViolation(f"left element {l} out of range")
        for l in payload:
            if l not in state.marks:
                state.marks.append(l)

    def decode_payload(self, player, data):
        if player is Player.BOB:
            return [(int(l), int(r)) for l, r in data]
        return [int(l) for l in data]

    def referee(self, state: BipartiteState):
        return referee(state)

    def snapshot(self, state: BipartiteState):
        return {r: set(nb) for r, nb in state.edges.items()}, list(state.marks)

    def extends(self, before, after: BipartiteState) -> bool:
        edges, marks = before
        return all(nb <= after.neighbours(r) for r, nb in edges.items()) and after.marks[: len(marks)] == marks

    def ledger(self, state: BipartiteState):
        # right elements adjacent to every mark so far, after each mark
        rows = []
        prefix: set[int] = set()
        for l in state.marks:
            prefix.add(l)
            count = sum(1 for r in range(self.game_params.right_size) if prefix <= state.neighbours(r))
            rows.append({"mark": l, "adjacent_to_all_marks": count})
        return rows

    def winnable(self):
        w = winnability_condition(self.game_params)
        if w:
            return True, ""
        if w.failed_stage is None:
            return False, "fewer right elements than the threshold"
        return False, f"guaranteed selection {w.bounds[w.failed_stage]} drops below the threshold at stage {w.failed_stage}"

    def metrics(self, state: BipartiteState) -> dict:
        return {
            "marks": len(state.marks),
            "qualifying": len(qualifying(state)),
            "edges": sum(len(nb) for nb in state.edges.values()),
        }


@register_strategy(GAME, Player.ALICE, "marker")
class MarkerStrategy(Strategy):
    name = "marker"

    def begin(self, schema, player, rng):
        super().begin(schema, player, rng)
        self.selected: frozenset[int] | None = None
        self.stage = 0
        self.stages: list[dict] = []

    def move(self, ctx):
        step = marker_strategy_step(ctx.state, self.selected, self.stage)
        self.selected, self.stage = step.selected, step.stage
        self.stages.extend(step.stages)
        return step.marks or None

    def describe(self):
        return {"name": self.name, "stages": getattr(self, "stages", [])}


register_strategy(GAME, Player.ALICE, "pass")(Strategy)
register_strategy(GAME, Player.BOB, "pass")(Strategy)


def _open_slots(state: BipartiteState, r: int) -> list[int]:
    nb = state.neighbours(r)
    if len(nb) >= state.params.degree_cap:
        return []
    return [l for l in range(state.params.left_size) if l not in nb]


@register_strategy(GAME, Player.BOB, "random")
class RandomEdges(Strategy):
    """Random legal edges in random batches for a random number of moves."""

    name = "random"
    randomized = True

    def __init__(self, max_moves: int = 40, max_batch: int = 16, pass_prob: float = 0.2):
        self.max_moves = max_moves
        self.max_batch = max_batch
        self.pass_prob = pass_prob

    def begin(self, schema, player, rng):
        super().begin(schema, player, rng)
        self._left = rng.randint(1, self.max_moves)

    def move(self, ctx):
        if self._left <= 0:
            return None
        self._left -= 1
        if self.rng.random() < self.pass_prob:
            return None
        state = ctx.state
        p = state.params
        trial = BipartiteState(p, {r: set(nb) for r, nb in state.edges.items()})
        out = []
        for _ in range(self.rng.randint(1, self.max_batch)):
            r = self.rng.randrange(p.right_size)
            slots = _open_slots(trial, r)
            if not slots:
                continue
            l = self.rng.choice(slots)
            trial.edges.setdefault(r, set()).add(l)
            out.append((l, r))
        return out or None

    def describe(self):
        return {"name": self.name, "max_moves": self.max_moves, "max_batch": self.max_batch, "pass_prob": self.pass_prob}


@register_strategy(GAME, Player.BOB, "flooding")
class FloodingEdges(Strategy):
    """Sweeps the right part in order, giving every element one more random neighbour per sweep."""

    name = "flooding"
    randomized = True

    def __init__(self, batch: int = 8):
        self.batch = batch

    def begin(self, schema, player, rng):
        super().begin(schema, player, rng)
        self._cursor = 0
        self._idle = 0

    def move(self, ctx):
        state = ctx.state
        p = state.params
        trial = BipartiteState(p, {r: set(nb) for r, nb in state.edges.items()})
        out = []
        while len(out) < self.batch and self._idle < p.right_size:
            r = self._cursor
            self._cursor = (self._cursor + 1) % p.right_size
            slots = _open_slots(trial, r)
            if not slots:
                self._idle += 1
                continue
            self._idle = 0
            l = self.rng.choice(slots)
            trial.edges.setdefault(r, set()).add(l)
            out.append((l, r))
        return out or None

    def describe(self):
        return {"name": self.name, "batch": self.batch}


@register_strategy(GAME, Player.BOB, "spoiler")
class SpoilerEdges(Strategy):
    """Gives qualifying right elements an unmarked neighbour whenever their cap allows."""

    name = "spoiler"
    randomized = True

    def __init__(self, batch: int = 16):
        self.batch = batch

    def move(self, ctx):
        state = ctx.state
        marked = state.marked
        targets = [r for r in qualifying(state) if len(state.neighbours(r)) < state.params.degree_cap]
        self.rng.shuffle(targets)
        out = []
        for r in targets[: self.batch]:
            slots = [l for l in _open_slots(state, r) if l not in marked]
            if slots:
                out.append((self.rng.choice(slots), r))
        return out or None

    def describe(self):
        return {"name": self.name, "batch": self.batch}
