"""The decompressor game and its referees.

Both players enumerate graphs of partial maps program -> output. The complexity
of a string under a graph is the length of its shortest program; the referee
judges a property of the pointwise minimum of the two complexity functions.

Also here: the two-function (monotone) referee, the optimal-table simulation
used to transfer a win to the real complexity function, and the alternative
move semantics where players lower complexity upper bounds directly subject
to a counting constraint.

Strings are Python ``str`` over ``"01"``; ``math.inf`` stands for "no program".
"""

from __future__ import annotations

import bisect
import itertools
import math
import random
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Mapping

from kgames.engine import (
    ConfigError,
    GameError,
    GameSchema,
    HorizonPolicy,
    MatchTrace,
    Player,
    RuleViolation,
    Strategy,
    play_match,
    register_schema,
    register_strategy,
)

GAME = "complexity"
INF = math.inf


class DomainMismatch(GameError):
    """A profile is infinite on the property's domain and the property has no rule for that."""


class MonotonicityViolation(GameError):
    """A two-function property flipped from true to false under a monotone perturbation."""


def strings_up_to(length: int) -> Iterator[str]:
    """All bit strings of length <= ``length`` in shortlex order."""
    for k in range(length + 1):
        for bits in itertools.product("01", repeat=k):
            yield "".join(bits)


def shortlex_key(s: str) -> tuple[int, str]:
    return len(s), s


def _check_bits(s: str) -> None:
    if not isinstance(s, str) or s.strip("01"):
        raise RuleViolation(f"{s!r} is not a bit string")


class DecompressorGraph:
    """A finite functional graph: each program has at most one output."""

    def __init__(self, pairs: Iterable[tuple[str, str]] = ()):
        self._out: dict[str, str] = {}
        self.add_pairs(pairs)

    def add(self, program: str, output: str) -> None:
        _check_bits(program)
        _check_bits(output)
        current = self._out.get(program)
        if current is not None and current != output:
            raise RuleViolation(f"program {program!r} already maps to {current!r}")
        self._out[program] = output

    def add_pairs(self, pairs: Iterable[tuple[str, str]]) -> None:
        pairs = list(pairs)
        # validate the whole batch before touching the graph
        staged = dict(self._out)
        for p, x in pairs:
            _check_bits(p)
            _check_bits(x)
            if staged.get(p, x) != x:
                raise RuleViolation(f"program {p!r} already maps to {staged[p]!r}")
            staged[p] = x
        self._out = staged

    def get(self, program: str) -> str | None:
        return self._out.get(program)

    def pairs(self) -> list[tuple[str, str]]:
        return sorted(self._out.items(), key=lambda kv: shortlex_key(kv[0]))

    def issubgraph(self, other: DecompressorGraph) -> bool:
        return all(other._out.get(p) == x for p, x in self._out.items())

    def copy(self) -> DecompressorGraph:
        g = DecompressorGraph()
        g._out = dict(self._out)
        return g

    def __len__(self) -> int:
        return len(self._out)

    def __contains__(self, program: str) -> bool:
        return program in self._out

    def __eq__(self, other: object) -> bool:
        return isinstance(other, DecompressorGraph) and self._out == other._out

    def __repr__(self) -> str:
        return f"DecompressorGraph({self.pairs()!r})"


class ComplexityProfile(Mapping[str, float]):
    """Map string -> complexity. Strings not listed have value ``inf``."""

    def __init__(self, values: Mapping[str, float] | None = None):
        self._v = {x: v for x, v in (values or {}).items() if v != INF}

    def __getitem__(self, x: str) -> float:
        return self._v.get(x, INF)

    def __iter__(self):
        return iter(self._v)

    def __len__(self) -> int:
        return len(self._v)

    def finite(self) -> dict[str, int]:
        return dict(self._v)

    def on(self, domain: Iterable[str]) -> dict[str, float]:
        return {x: self[x] for x in domain}

    def __eq__(self, other: object) -> bool:
        if isinstance(other, ComplexityProfile):
            return self._v == other._v
        return NotImplemented

    def __le__(self, other: ComplexityProfile) -> bool:
        return all(self[x] <= other[x] for x in set(self._v) | set(other._v))

    def __repr__(self) -> str:
        return f"ComplexityProfile({dict(sorted(self._v.items(), key=lambda kv: shortlex_key(kv[0])))!r})"


def complexity_of(graph: DecompressorGraph, x: str) -> float:
    return min((len(p) for p, out in graph.pairs() if out == x), default=INF)


def profile_of(graph: DecompressorGraph) -> ComplexityProfile:
    best: dict[str, int] = {}
    for p, x in graph.pairs():
        if len(p) < best.get(x, INF):
            best[x] = len(p)
    return ComplexityProfile(best)


def combined_complexity(ka: Mapping[str, float], kb: Mapping[str, float]) -> ComplexityProfile:
    # missing keys of a plain dict also read as inf
    keys = set(ka) | set(kb)
    return ComplexityProfile({x: min(ka.get(x, INF), kb.get(x, INF)) for x in keys})


# --------------------------------------------------------------------------
# properties of one complexity function


@dataclass
class PropertyAlpha:
    """A predicate on complexity values over a finite domain.

    ``infinite`` is the verdict when some domain value is infinite; ``None``
    means the property does not define one.
    """

    name: str
    domain: tuple[str, ...]
    predicate: Callable[[dict[str, float]], bool]
    infinite: bool | None = False
    params: dict = field(default_factory=dict)

    def __call__(self, profile: Mapping[str, float]) -> bool:
        values = {x: profile.get(x, INF) for x in self.domain}
        if any(v == INF for v in values.values()):
            if self.infinite is None:
                raise DomainMismatch(f"{self.name}: infinite value on the domain")
            return self.infinite
        return bool(self.predicate(values))

    def spec(self) -> dict:
        return {"key": self.name, **self.params}


def _domain(domain_length: int | None, domain: Iterable[str] | None) -> tuple[str, ...]:
    if domain is not None:
        return tuple(domain)
    return tuple(strings_up_to(2 if domain_length is None else domain_length))


def _domain_params(domain_length: int, domain) -> dict:
    return {"domain": list(domain)} if domain is not None else {"domain_length": domain_length}


def alpha_finite(domain_length: int = 2, domain=None) -> PropertyAlpha:
    """Every domain string has a program. Trivially shift-invariant."""
    return PropertyAlpha(
        "finite", _domain(domain_length, domain), lambda v: True, False, _domain_params(domain_length, domain)
    )


def alpha_even(x0: str = "") -> PropertyAlpha:
    """Complexity of ``x0`` is even. Not stable; used to exercise the refuter."""
    return PropertyAlpha("even", (x0,), lambda v: v[x0] % 2 == 0, False, {"x0": x0})


def alpha_threshold(ratio: float = 0.5, c: int = 0, domain_length: int = 2, domain=None) -> PropertyAlpha:
    """Every domain string w has complexity > ratio*|w| + c."""

    def pred(values):
        return all(v > ratio * len(w) + c for w, v in values.items())

    return PropertyAlpha(
        "threshold",
        _domain(domain_length, domain),
        pred,
        False,
        {"ratio": ratio, "c": c, **_domain_params(domain_length, domain)},
    )


def alpha_upper(c: int = 1, domain_length: int = 2, domain=None) -> PropertyAlpha:
    """Every domain string w has complexity <= |w| + c."""

    def pred(values):
        return all(v <= len(w) + c for w, v in values.items())

    return PropertyAlpha("upper", _domain(domain_length, domain), pred, False, {"c": c, **_domain_params(domain_length, domain)})


ALPHAS: dict[str, Callable[..., PropertyAlpha]] = {
    "finite": alpha_finite,
    "even": alpha_even,
    "threshold": alpha_threshold,
    "upper": alpha_upper,
}


def make_alpha(spec: Mapping) -> PropertyAlpha:
    spec = dict(spec)
    key = spec.pop("key", None)
    if key not in ALPHAS:
        raise ConfigError(f"unknown property {key!r}; known: {sorted(ALPHAS)}")
    try:
        return ALPHAS[key](**spec)
    except TypeError as exc:
        raise ConfigError(f"bad parameters for property {key!r}: {exc}") from None


@dataclass
class StabilityCheck:
    stable: bool
    counterexample: tuple[dict[str, float], dict[str, float]] | None = None

    def __bool__(self) -> bool:
        return self.stable


def _shifts(bound: int) -> Iterator[int]:
    for k in range(1, bound + 1):
        yield k
        yield -k


def check_o1_stable(
    alpha: PropertyAlpha,
    profiles: Iterable[Mapping[str, float]],
    shift_bound: int,
    pairs: Iterable[tuple[Mapping[str, float], Mapping[str, float]]] = (),
) -> StabilityCheck:
    """Try to refute bounded-shift invariance of ``alpha``.

    Each profile is compared with its uniform shifts by 1, -1, 2, -2, ... up
    to ``shift_bound`` (clamped at zero), then each supplied pair whose
    pointwise difference is within the bound is compared directly. A ``True``
    result only means no counterexample was found.
    """
    for profile in profiles:
        values = {x: profile.get(x, INF) for x in alpha.domain}
        if alpha.infinite is None and any(v == INF for v in values.values()):
            raise DomainMismatch(f"{alpha.name}: profile is infinite on the domain")
        base = alpha(values)
        for s in _shifts(shift_bound):
            shifted = {x: v if v == INF else max(0, v + s) for x, v in values.items()}
            if alpha(shifted) != base:
                return StabilityCheck(False, (values, shifted))
    for p, q in pairs:
        pv = {x: p.get(x, INF) for x in alpha.domain}
        qv = {x: q.get(x, INF) for x in alpha.domain}
        close = all(
            (a == INF and b == INF) or (a != INF and b != INF and abs(a - b) <= shift_bound)
            for a, b in zip(pv.values(), qv.values())
        )
        if close and alpha(pv) != alpha(qv):
            return StabilityCheck(False, (pv, qv))
    return StabilityCheck(True)


# --------------------------------------------------------------------------
# properties of two complexity functions


@dataclass
class PairProperty:
    """A predicate on (Alice's, Bob's) complexity functions, declared monotone by its author.

    ``keys`` lists the strings at which the spot check perturbs values.
    """

    name: str
    keys: tuple[str, ...]
    predicate: Callable[[Mapping[str, float], Mapping[str, float]], bool]
    params: dict = field(default_factory=dict)
    witness: Callable[[Mapping[str, float], Mapping[str, float]], object] | None = None

    def __call__(self, ka: Mapping[str, float], kb: Mapping[str, float]) -> bool:
        return bool(self.predicate(ka, kb))

    def spec(self) -> dict:
        return {"key": self.name, **self.params}


def pair_true() -> PairProperty:
    return PairProperty("true", (), lambda ka, kb: True)


def pair_dominated(domain_length: int = 2, domain=None) -> PairProperty:
    """Alice's complexity is at most Bob's on every domain string."""
    dom = _domain(domain_length, domain)

    def pred(ka, kb):
        return all(ka.get(x, INF) <= kb.get(x, INF) for x in dom)

    def witness(ka, kb):
        return next((x for x in dom if ka.get(x, INF) > kb.get(x, INF)), None)

    return PairProperty("dominated", dom, pred, _domain_params(domain_length, domain), witness)


def self_delimit(x: str) -> str:
    return "".join(b + b for b in x) + "01"


def pair_key(x: str, y: str, n: int) -> str:
    """Bit-string key for the pair (x, y); longer than any string of length <= n + 1."""
    return "0" * (n + 2) + "0" + self_delimit(x) + y


def cond_key(y: str, x: str, n: int) -> str:
    """Bit-string key for "y given x", disjoint from :func:`pair_key` and plain strings."""
    return "0" * (n + 2) + "1" + self_delimit(x) + y


def chain_rule_violated(b: float, a_x: float, a_yx: float, slack: float) -> bool:
    """Do naturals k, l exist with b < k + l, not (a_x < k + slack), not (a_yx < l + slack)?"""
    if b == INF:
        return False
    # not (a < k + slack)  <=>  k <= a - slack
    kmax = INF if a_x == INF else math.floor(a_x - slack)
    lmax = INF if a_yx == INF else math.floor(a_yx - slack)
    if kmax < 0 or lmax < 0:
        return False
    return b < kmax + lmax


def pair_chain_rule(c: float = 1.0, n: int = 2) -> PairProperty:
    """kb(x,y) < k + l implies ka(x) < k + c log n or ka(y|x) < l + c log n.

    Checked for all strings x, y of length <= n and all naturals k, l. The
    pair (x, y) and the condition "y given x" are looked up at the keys built
    by :func:`pair_key` and :func:`cond_key`.
    """
    slack = c * math.log2(n) if n > 1 else 0.0
    strings = list(strings_up_to(n))
    keys = tuple(strings) + tuple(pair_key(x, y, n) for x in strings for y in strings) + tuple(
        cond_key(y, x, n) for x in strings for y in strings
    )

    def witness(ka, kb):
        for x in strings:
            for y in strings:
                b = kb.get(pair_key(x, y, n), INF)
                if chain_rule_violated(b, ka.get(x, INF), ka.get(cond_key(y, x, n), INF), slack):
                    return [x, y]
        return None

    return PairProperty("chain_rule", keys, lambda ka, kb: witness(ka, kb) is None, {"c": c, "n": n}, witness)


PAIR_PROPERTIES: dict[str, Callable[..., PairProperty]] = {
    "true": pair_true,
    "dominated": pair_dominated,
    "chain_rule": pair_chain_rule,
}


def make_pair_property(spec: Mapping) -> PairProperty:
    spec = dict(spec)
    key = spec.pop("key", None)
    if key not in PAIR_PROPERTIES:
        raise ConfigError(f"unknown pair property {key!r}; known: {sorted(PAIR_PROPERTIES)}")
    try:
        return PAIR_PROPERTIES[key](**spec)
    except TypeError as exc:
        raise ConfigError(f"bad parameters for pair property {key!r}: {exc}") from None


def _bump(profile: Mapping[str, float], keys: Iterable[str], delta: int) -> dict[str, float]:
    out = dict(profile)
    for x in keys:
        v = out.get(x, INF)
        if v != INF:
            out[x] = max(0, v + delta)
    return out


def monotone_spot_check(alpha2: PairProperty, ka: Mapping[str, float], kb: Mapping[str, float]) -> None:
    """Raise :class:`MonotonicityViolation` if lowering ka or raising kb turns a true verdict false."""
    if not alpha2(ka, kb):
        return
    perturbations = [(_bump(ka, alpha2.keys, -1), kb), (ka, _bump(kb, alpha2.keys, +1))]
    for x in alpha2.keys:
        perturbations.append((_bump(ka, [x], -1), kb))
        perturbations.append((ka, _bump(kb, [x], +1)))
    for pa, pb in perturbations:
        if not alpha2(pa, pb):
            raise MonotonicityViolation(f"{alpha2.name} is not monotone at the tested profiles")


def monotone_referee(alpha2: PairProperty, ka: Mapping[str, float], kb: Mapping[str, float]) -> Player:
    monotone_spot_check(alpha2, ka, kb)
    return Player.ALICE if alpha2(ka, kb) else Player.BOB


# --------------------------------------------------------------------------
# direct upper-bound moves


class LevinProfile:
    """Directly assigned complexity upper bounds; values only ever decrease.

    With ``bound="strict"`` (default) at most ``2**n - 1`` strings may have a
    value below n, which is the number of programs shorter than n. With
    ``bound="literal"`` the limit is ``2**n``.
    """

    def __init__(self, values: Mapping[str, int] | None = None, bound: str = "strict"):
        if bound not in ("strict", "literal"):
            raise ConfigError("bound must be 'strict' or 'literal'")
        self.bound = bound
        self.values: dict[str, int] = dict(values or {})

    def limit(self, n: int) -> int:
        return (1 << n) - 1 if self.bound == "strict" else 1 << n

    def __getitem__(self, x: str) -> float:
        return self.values.get(x, INF)

    def profile(self) -> ComplexityProfile:
        return ComplexityProfile(self.values)

    def copy(self) -> LevinProfile:
        return LevinProfile(self.values, self.bound)


def counting_violation(values: Iterable[int], limit: Callable[[int], int]) -> int | None:
    """Least n with #{v < n} > limit(n), checked for n = 0 .. max(values) + 1."""
    ordered = sorted(values)
    if not ordered:
        return None
    for n in range(ordered[-1] + 2):
        if bisect.bisect_left(ordered, n) > limit(n):
            return n
    return None


@dataclass
class LevinCheck:
    accepted: bool
    violated_n: int | None = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.accepted


def levin_move_check(profile: LevinProfile, proposed: Iterable[tuple[str, int]]) -> LevinCheck:
    """Accept iff every value strictly decreases and the counting constraint still holds."""
    updated = dict(profile.values)
    for x, value in proposed:
        if not isinstance(value, int) or value < 0:
            return LevinCheck(False, None, f"value for {x!r} must be a natural number")
        if not value < updated.get(x, INF):
            return LevinCheck(False, None, f"value for {x!r} does not decrease")
        updated[x] = value
    n = counting_violation(updated.values(), profile.limit)
    if n is not None:
        return LevinCheck(False, n, f"more than {profile.limit(n)} strings with value < {n}")
    return LevinCheck(True)


# --------------------------------------------------------------------------
# the match schema


@dataclass
class ComplexityState:
    alice: DecompressorGraph | LevinProfile
    bob: DecompressorGraph | LevinProfile

    def side(self, player: Player):
        return self.alice if player is Player.ALICE else self.bob

    def profiles(self) -> tuple[ComplexityProfile, ComplexityProfile]:
        if isinstance(self.alice, LevinProfile):
            return self.alice.profile(), self.bob.profile()
        return profile_of(self.alice), profile_of(self.bob)


def _encode_value(v: float):
    return None if v == INF else v


@register_schema
class ComplexityGame(GameSchema):
    """Params: ``mode`` ("graph" or "levin"), ``referee`` ("single" or "pair"),
    ``alpha`` (property spec for the single referee), ``alpha2`` (pair
    property spec), ``levin_bound`` ("strict" or "literal")."""

    name = GAME

    def __init__(
        self,
        mode: str = "graph",
        referee: str = "single",
        alpha: dict | None = None,
        alpha2: dict | None = None,
        levin_bound: str = "strict",
    ):
        if mode not in ("graph", "levin"):
            raise ConfigError("mode must be 'graph' or 'levin'")
        if referee not in ("single", "pair"):
            raise ConfigError("referee must be 'single' or 'pair'")
        if levin_bound not in ("strict", "literal"):
            raise ConfigError("levin_bound must be 'strict' or 'literal'")
        self.mode = mode
        self.referee_kind = referee
        self.levin_bound = levin_bound
        self.alpha = make_alpha(alpha or {"key": "finite"})
        self.alpha2 = make_pair_property(alpha2 or {"key": "true"})
        self.params = {
            "mode": mode,
            "referee": referee,
            "alpha": self.alpha.spec(),
            "alpha2": self.alpha2.spec(),
            "levin_bound": levin_bound,
        }

    def initial_state(self) -> ComplexityState:
        if self.mode == "levin":
            return ComplexityState(LevinProfile(bound=self.levin_bound), LevinProfile(bound=self.levin_bound))
        return ComplexityState(DecompressorGraph(), DecompressorGraph())

    def apply(self, state: ComplexityState, player: Player, payload) -> None:
        side = state.side(player)
        if self.mode == "graph":
            side.add_pairs(payload)
            return
        check = levin_move_check(side, payload)
        if not check:
            raise RuleViolation(check.reason)
        side.values.update(payload)

    def decode_payload(self, player, data):
        if self.mode == "graph":
            return [(str(p), str(x)) for p, x in data]
        return [(str(x), v) for x, v in data]

    def referee(self, state: ComplexityState):
        ka, kb = state.profiles()
        if self.referee_kind == "pair":
            winner = monotone_referee(self.alpha2, ka, kb)
            witness = self.alpha2.witness(ka, kb) if self.alpha2.witness else None
            return winner, {"violation": witness}
        k = combined_complexity(ka, kb)
        winner = Player.ALICE if self.alpha(k) else Player.BOB
        return winner, {"profile": [[x, _encode_value(k[x])] for x in self.alpha.domain]}

    def snapshot(self, state: ComplexityState):
        if self.mode == "graph":
            return state.alice.copy(), state.bob.copy()
        return dict(state.alice.values), dict(state.bob.values)

    def extends(self, before, after: ComplexityState) -> bool:
        a0, b0 = before
        if self.mode == "graph":
            return a0.issubgraph(after.alice) and b0.issubgraph(after.bob)
        return all(after.alice[x] <= v for x, v in a0.items()) and all(after.bob[x] <= v for x, v in b0.items())

    def metrics(self, state: ComplexityState) -> dict:
        if self.mode == "graph":
            return {"alice_pairs": len(state.alice), "bob_pairs": len(state.bob)}
        return {"alice_values": len(state.alice.values), "bob_values": len(state.bob.values)}


# --------------------------------------------------------------------------
# strategies


def shortlex_table(length: int = 8, kind: str = "identity", seed: int = 0) -> DecompressorGraph:
    """A fixed finite decompressor on programs of length <= ``length``.

    ``identity`` maps each program to itself; ``shuffled`` maps the programs
    onto the same string set through a permutation drawn from ``seed``.
    """
    programs = list(strings_up_to(length))
    if kind == "identity":
        outputs = programs
    elif kind == "shuffled":
        outputs = programs[:]
        random.Random(seed).shuffle(outputs)
    else:
        raise ConfigError("table kind must be 'identity' or 'shuffled'")
    return DecompressorGraph(zip(programs, outputs))


@register_strategy(GAME, Player.BOB, "table")
@register_strategy(GAME, Player.ALICE, "table")
class TableEnumerator(Strategy):
    """Enumerates a fixed table in shortlex order of programs, ``batch`` pairs per move.

    Ignores the opponent entirely.
    """

    name = "table"

    def __init__(self, table: DecompressorGraph | None = None, length: int = 8, kind: str = "identity",
                 batch: int = 32, seed: int = 0):
        self.table = table if table is not None else shortlex_table(length, kind, seed)
        self.length, self.kind, self.batch, self.table_seed = length, kind, batch, seed

    def begin(self, schema, player, rng):
        super().begin(schema, player, rng)
        if schema.mode != "graph":
            raise ConfigError("table enumeration needs graph mode")
        self._pending = self.table.pairs()

    def move(self, ctx):
        chunk, self._pending = self._pending[: self.batch], self._pending[self.batch :]
        return chunk or None

    def describe(self):
        return {"name": self.name, "length": self.length, "kind": self.kind, "batch": self.batch, "seed": self.table_seed}


@register_strategy(GAME, Player.ALICE, "copy_prefixed")
class CopyPrefixed(Strategy):
    """Republishes every opponent pair (p, x) as (prefix + p, x)."""

    name = "copy_prefixed"

    def __init__(self, prefix: str = "1"):
        self.prefix = prefix

    def begin(self, schema, player, rng):
        super().begin(schema, player, rng)
        self._seen = 0

    def move(self, ctx):
        theirs = ctx.state.side(ctx.player.other).pairs()
        mine = ctx.state.side(ctx.player)
        new = [(self.prefix + p, x) for p, x in theirs if self.prefix + p not in mine]
        return new or None

    def describe(self):
        return {"name": self.name, "prefix": self.prefix}


@register_strategy(GAME, Player.BOB, "random")
@register_strategy(GAME, Player.ALICE, "random")
class RandomAssignment(Strategy):
    """Adds a few random pairs per move for a random number of moves.

    Programs have length <= ``program_length`` and are never reused; outputs
    have length <= ``output_length``. In levin mode it lowers random values
    instead, keeping only proposals that pass the counting check.
    """

    name = "random"
    randomized = True

    def __init__(self, program_length: int = 10, output_length: int = 8, max_moves: int = 12, max_batch: int = 6):
        self.program_length = program_length
        self.output_length = output_length
        self.max_moves = max_moves
        self.max_batch = max_batch

    def begin(self, schema, player, rng):
        super().begin(schema, player, rng)
        self._moves_left = rng.randint(0, self.max_moves)

    def _string(self, max_len: int) -> str:
        k = self.rng.randint(0, max_len)
        return "".join(self.rng.choice("01") for _ in range(k))

    def move(self, ctx):
        if self._moves_left <= 0:
            return None
        self._moves_left -= 1
        mine = ctx.state.side(ctx.player)
        k = self.rng.randint(1, self.max_batch)
        if isinstance(mine, LevinProfile):
            trial = mine.copy()
            out = []
            for _ in range(k):
                x = self._string(self.output_length)
                v = self.rng.randint(0, self.output_length + 2)
                if levin_move_check(trial, [(x, v)]):
                    trial.values[x] = v
                    out.append((x, v))
            return out or None
        out, used = [], set()
        for _ in range(k):
            p = self._string(self.program_length)
            if p in mine or p in used:
                continue
            used.add(p)
            out.append((p, self._string(self.output_length)))
        return out or None

    def describe(self):
        return {
            "name": self.name,
            "program_length": self.program_length,
            "output_length": self.output_length,
            "max_moves": self.max_moves,
            "max_batch": self.max_batch,
        }


register_strategy(GAME, Player.ALICE, "pass")(Strategy)
register_strategy(GAME, Player.BOB, "pass")(Strategy)


# --------------------------------------------------------------------------
# optimal-table simulation


@dataclass
class LemmaReport:
    kmin: ComplexityProfile
    kb: ComplexityProfile
    delta: dict[str, float]
    verdict: bool
    trace: MatchTrace


def lemma_simulation(
    alice: Strategy,
    optimal_table: DecompressorGraph | None = None,
    alpha: PropertyAlpha | None = None,
    seed: int = 0,
    batch: int = 32,
    horizon: HorizonPolicy | None = None,
) -> LemmaReport:
    """Play ``alice`` against a fixed table that Bob enumerates regardless of her moves.

    ``delta[x] = kb(x) - kmin(x)`` for every string that has a program in
    either graph; it is never negative.
    """
    table = optimal_table if optimal_table is not None else shortlex_table(8)
    alpha = alpha or alpha_finite()
    schema = ComplexityGame(alpha=alpha.spec())
    bob = TableEnumerator(table, batch=batch)
    trace, state = play_match(schema, alice, bob, horizon, seed)
    ka, kb = state.profiles()
    kmin = combined_complexity(ka, kb)
    delta = {x: kb[x] - kmin[x] for x in set(ka) | set(kb)}
    return LemmaReport(kmin, kb, delta, alpha(kmin), trace)
