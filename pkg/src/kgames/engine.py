"""Alternating-move runner for finite-horizon enumeration games.

A match is a sequence of rounds. In every round Alice moves first, then Bob.
A move either extends the mover's published object or passes. The match ends
when both players pass in the same round (quiescence) or when the horizon is
exhausted; the schema's referee then judges the final state.

Everything that varies between games lives in a :class:`GameSchema`. The
runner only knows how to alternate, record, replay and validate.
"""

from __future__ import annotations

import copy
import hashlib
import json
import random
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, ClassVar

ENGINE_VERSION = "1"


class Player(str, Enum):
    ALICE = "Alice"
    BOB = "Bob"

    @property
    def other(self) -> Player:
        return Player.BOB if self is Player.ALICE else Player.ALICE


TURN_ORDER = (Player.ALICE, Player.BOB)


class GameError(Exception):
    """Base class for every error raised by this package."""


class RuleViolation(GameError):
    """A payload breaks the rules of a game (raised by schemas)."""


class ConfigError(GameError):
    """Invalid schema parameters or strategy configuration."""


class IllegalMove(GameError):
    def __init__(self, player: Player, round: int, reason: str):
        super().__init__(f"illegal move by {player.value} in round {round}: {reason}")
        self.player = player
        self.round = round
        self.reason = reason


class MonotonicityError(GameError):
    """A move shrank the published state; schemas must prevent this."""


class TraceCorrupt(GameError):
    def __init__(self, round: int, reason: str):
        super().__init__(f"trace corrupt at round {round}: {reason}")
        self.round = round
        self.reason = reason


class UnknownSchema(GameError):
    pass


@dataclass(frozen=True)
class HorizonPolicy:
    max_rounds: int = 100_000
    quiescence: bool = True

    def __post_init__(self) -> None:
        if self.max_rounds < 1:
            raise ConfigError("max_rounds must be positive")

    def to_json(self) -> dict:
        return {"max_rounds": self.max_rounds, "quiescence": self.quiescence}


@dataclass(frozen=True)
class MoveRecord:
    round: int
    player: Player
    payload: Any  # JSON form as produced by GameSchema.encode_payload; None = pass

    @property
    def is_pass(self) -> bool:
        return self.payload is None


@dataclass
class MatchTrace:
    schema: str
    params: dict
    seed: int
    moves: list[MoveRecord]
    outcome: Player
    certificate: Any
    quiescent: bool
    rounds: int
    horizon: HorizonPolicy = field(default_factory=HorizonPolicy)
    players: dict = field(default_factory=dict)
    ledger: Any = None
    engine_version: str = ENGINE_VERSION


@dataclass
class MoveContext:
    """What a strategy sees when asked to move. ``state`` must not be mutated."""

    schema: GameSchema
    state: Any
    history: list[MoveRecord]
    round: int
    player: Player


class GameSchema(ABC):
    """Rules of one game.

    Subclasses validate their parameters in ``__init__`` and store the
    canonical JSON form in ``self.params`` so that a trace header is enough to
    rebuild the schema.
    """

    name: ClassVar[str]

    params: dict

    @abstractmethod
    def initial_state(self) -> Any: ...

    @abstractmethod
    def apply(self, state: Any, player: Player, payload: Any) -> None:
        """Mutate ``state`` by a decoded payload or raise :class:`RuleViolation`."""

    @abstractmethod
    def referee(self, state: Any) -> tuple[Player, Any]:
        """Winner and certificate (decoded form) for a final state."""

    def encode_payload(self, player: Player, payload: Any) -> Any:
        return payload

    def decode_payload(self, player: Player, data: Any) -> Any:
        return data

    def encode_certificate(self, certificate: Any) -> Any:
        return certificate

    def is_pass(self, payload: Any) -> bool:
        return payload is None or (hasattr(payload, "__len__") and len(payload) == 0)

    def snapshot(self, state: Any) -> Any:
        return copy.deepcopy(state)

    def extends(self, before: Any, after: Any) -> bool:
        """True when ``after`` is a monotone extension of ``before``."""
        return True

    def ledger(self, state: Any) -> Any:
        return None

    def metrics(self, state: Any) -> dict:
        return {}

    def winnable(self) -> tuple[bool, str]:
        """Whether Alice's strategy is known to win at these parameters, with a reason if not."""
        return True, ""


class Strategy:
    """A player's policy. The base class passes forever.

    The runner deep-copies a strategy before each match and calls
    :meth:`begin`, so per-match bookkeeping may be kept on ``self``.
    """

    name = "pass"
    randomized: ClassVar[bool] = False  # draws from the match rng

    def begin(self, schema: GameSchema, player: Player, rng: random.Random) -> None:
        self.rng = rng

    def move(self, ctx: MoveContext) -> Any:
        return None

    def describe(self) -> dict:
        return {"name": self.name}


def derive_rng(seed: int, role: str) -> random.Random:
    """Seeded generator for one role of one match.

    The stream is ``random.Random`` (Mersenne Twister) seeded with the first
    eight bytes of ``sha256(f"{seed}/{role}")``, so each player's randomness is
    independent of the other's and stable across runs and platforms.
    """
    digest = hashlib.sha256(f"{seed}/{role}".encode()).digest()
    return random.Random(int.from_bytes(digest[:8], "big"))


# name -> schema class
SCHEMAS: dict[str, type[GameSchema]] = {}


def register_schema(cls: type[GameSchema]) -> type[GameSchema]:
    SCHEMAS[cls.name] = cls
    return cls


# game name -> player -> strategy name -> factory(**params)
STRATEGIES: dict[str, dict[Player, dict[str, Callable[..., Strategy]]]] = {}


def register_strategy(game: str, player: Player, name: str):
    def deco(factory):
        STRATEGIES.setdefault(game, {Player.ALICE: {}, Player.BOB: {}})[player][name] = factory
        return factory

    return deco


def make_strategy(game: str, player: Player, name: str, **params: Any) -> Strategy:
    try:
        factory = STRATEGIES[game][player][name]
    except KeyError:
        known = sorted(STRATEGIES.get(game, {}).get(player, {}))
        raise ConfigError(f"unknown {player.value} strategy {name!r} for {game}; known: {known}") from None
    try:
        return factory(**params)
    except TypeError as exc:
        raise ConfigError(f"bad parameters for strategy {name!r}: {exc}") from None


def make_schema(name: str, params: dict | None = None) -> GameSchema:
    try:
        cls = SCHEMAS[name]
    except KeyError:
        raise UnknownSchema(f"unknown schema {name!r}") from None
    try:
        return cls(**(params or {}))
    except TypeError as exc:
        raise ConfigError(f"bad parameters for schema {name!r}: {exc}") from None


def _canonical(value: Any) -> Any:
    # round-trip through JSON so recorded and replayed forms compare equal
    return json.loads(json.dumps(value, sort_keys=True))


def play_match(
    schema: GameSchema,
    alice: Strategy,
    bob: Strategy,
    horizon: HorizonPolicy | None = None,
    seed: int = 0,
    check_monotone: bool = True,
    on_move: Callable[[MoveContext, MoveRecord], None] | None = None,
) -> tuple[MatchTrace, Any]:
    """Play one match; return its complete trace and the final state.

    Raises :class:`IllegalMove` if a strategy emits a payload the schema
    rejects. Running out of rounds is not an error: the trace is flagged
    ``quiescent=False`` and the referee still judges the final state.
    ``on_move`` is called after every accepted move, for invariant checks.
    """
    horizon = horizon or HorizonPolicy()
    state = schema.initial_state()
    agents = {Player.ALICE: copy.deepcopy(alice), Player.BOB: copy.deepcopy(bob)}
    for player, agent in agents.items():
        agent.begin(schema, player, derive_rng(seed, player.value))

    history: list[MoveRecord] = []
    quiescent = False
    rnd = 0
    for rnd in range(1, horizon.max_rounds + 1):
        passes = 0
        for player in TURN_ORDER:
            ctx = MoveContext(schema, state, history, rnd, player)
            payload = agents[player].move(ctx)
            if schema.is_pass(payload):
                record = MoveRecord(rnd, player, None)
                passes += 1
            else:
                encoded = _canonical(schema.encode_payload(player, payload))
                decoded = schema.decode_payload(player, encoded)
                before = schema.snapshot(state) if check_monotone else None
                try:
                    schema.apply(state, player, decoded)
                except RuleViolation as exc:
                    raise IllegalMove(player, rnd, str(exc)) from exc
                if check_monotone and not schema.extends(before, state):
                    raise MonotonicityError(f"{player.value} shrank the state in round {rnd}")
                record = MoveRecord(rnd, player, encoded)
            history.append(record)
            if on_move is not None:
                on_move(ctx, record)
        if horizon.quiescence and passes == len(TURN_ORDER):
            quiescent = True
            break

    outcome, certificate = schema.referee(state)
    trace = MatchTrace(
        schema=schema.name,
        params=_canonical(schema.params),
        seed=seed,
        moves=history,
        outcome=outcome,
        certificate=_canonical(schema.encode_certificate(certificate)),
        quiescent=quiescent,
        rounds=rnd,
        horizon=horizon,
        players={p.value: agents[p].describe() for p in TURN_ORDER},
        ledger=_canonical(schema.ledger(state)),
    )
    return trace, state


def run_match(*args: Any, **kwargs: Any) -> MatchTrace:
    """Play one match and return its trace; see :func:`play_match`."""
    return play_match(*args, **kwargs)[0]


@dataclass
class ReplayResult:
    schema: GameSchema
    state: Any
    outcome: Player
    certificate: Any
    quiescent: bool
    rounds: int
    ledger: Any


def replay(trace: MatchTrace) -> ReplayResult:
    """Re-apply the recorded moves; strategies play no part."""
    schema = make_schema(trace.schema, trace.params)
    state = schema.initial_state()
    expected_round, expected_player = 1, 0
    last_round_passes = 0
    for record in trace.moves:
        if record.round != expected_round or record.player is not TURN_ORDER[expected_player]:
            raise TraceCorrupt(
                record.round,
                f"expected {TURN_ORDER[expected_player].value} in round {expected_round}, "
                f"found {record.player.value} in round {record.round}",
            )
        if expected_player == 0:
            last_round_passes = 0
        if record.payload is None:
            last_round_passes += 1
        else:
            try:
                schema.apply(state, record.player, schema.decode_payload(record.player, record.payload))
            except (RuleViolation, KeyError, TypeError, ValueError) as exc:
                raise TraceCorrupt(record.round, f"illegal move: {exc}") from exc
        expected_player += 1
        if expected_player == len(TURN_ORDER):
            expected_player = 0
            expected_round += 1
    if expected_player != 0:
        raise TraceCorrupt(expected_round, "last round is incomplete")
    rounds = expected_round - 1
    outcome, certificate = schema.referee(state)
    return ReplayResult(
        schema=schema,
        state=state,
        outcome=outcome,
        certificate=_canonical(schema.encode_certificate(certificate)),
        quiescent=trace.horizon.quiescence and rounds > 0 and last_round_passes == len(TURN_ORDER),
        rounds=rounds,
        ledger=_canonical(schema.ledger(state)),
    )


@dataclass(frozen=True)
class Validation:
    ok: bool
    round: int | None = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


def validate_trace(trace: MatchTrace) -> Validation:
    """Check legality, alternation and that the recorded verdict matches the referee."""
    try:
        result = replay(trace)
    except TraceCorrupt as exc:
        return Validation(False, exc.round, exc.reason)
    except GameError as exc:
        return Validation(False, None, str(exc))
    checks = [
        ("outcome", result.outcome, trace.outcome),
        ("certificate", result.certificate, trace.certificate),
        ("rounds", result.rounds, trace.rounds),
        ("quiescent", result.quiescent, trace.quiescent),
        ("ledger", result.ledger, trace.ledger),
    ]
    for label, replayed, recorded in checks:
        if replayed != recorded:
            shown = [v.value if isinstance(v, Player) else v for v in (recorded, replayed)]
            return Validation(False, result.rounds, f"{label} mismatch: recorded {shown[0]!r}, referee {shown[1]!r}")
    if result.rounds > trace.horizon.max_rounds:
        return Validation(False, result.rounds, "more rounds than the horizon allows")
    return Validation(True)
