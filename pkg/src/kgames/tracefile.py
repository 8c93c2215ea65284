"""Line-delimited JSON trace files.

Layout, one JSON object per line::

    {"schema", "params", "seed", "engine_version", "horizon", "players"}   header
    {"round", "player", "payload"}                                         one per move
    {"outcome", "certificate", "quiescent", "rounds", "ledger"}            footer

Rounds are 1-based. ``payload`` is ``null`` for a pass. Objects are written
with sorted keys and no insignificant whitespace, so equal traces produce
byte-identical files.
"""

from __future__ import annotations

import json
from pathlib import Path

from kgames.engine import ENGINE_VERSION, GameError, HorizonPolicy, MatchTrace, MoveRecord, Player

HEADER_FIELDS = ("schema", "params", "seed", "engine_version")
MOVE_FIELDS = ("round", "player", "payload")
FOOTER_FIELDS = ("outcome", "certificate", "quiescent", "rounds")


class TraceParseError(GameError):
    def __init__(self, line: int, reason: str):
        super().__init__(f"line {line}: {reason}")
        self.line = line
        self.reason = reason


def _line(obj: dict) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def dumps_trace(trace: MatchTrace) -> str:
    lines = [
        _line(
            {
                "schema": trace.schema,
                "params": trace.params,
                "seed": trace.seed,
                "engine_version": trace.engine_version,
                "horizon": trace.horizon.to_json(),
                "players": trace.players,
            }
        )
    ]
    for rec in trace.moves:
        lines.append(_line({"round": rec.round, "player": rec.player.value, "payload": rec.payload}))
    lines.append(
        _line(
            {
                "outcome": trace.outcome.value,
                "certificate": trace.certificate,
                "quiescent": trace.quiescent,
                "rounds": trace.rounds,
                "ledger": trace.ledger,
            }
        )
    )
    return "\n".join(lines) + "\n"


def _require(obj: object, fields: tuple[str, ...], lineno: int, kind: str) -> dict:
    if not isinstance(obj, dict):
        raise TraceParseError(lineno, f"{kind} must be a JSON object")
    missing = [f for f in fields if f not in obj]
    if missing:
        raise TraceParseError(lineno, f"{kind} is missing {', '.join(missing)}")
    return obj


def _player(value: object, lineno: int) -> Player:
    try:
        return Player(value)
    except ValueError:
        raise TraceParseError(lineno, f"unknown player {value!r}") from None


def loads_trace(text: str) -> MatchTrace:
    raw_lines = text.splitlines()
    if not raw_lines:
        raise TraceParseError(1, "empty trace")
    objs = []
    for lineno, raw in enumerate(raw_lines, start=1):
        try:
            objs.append(json.loads(raw))
        except json.JSONDecodeError as exc:
            raise TraceParseError(lineno, f"invalid JSON: {exc.msg}") from None
    if len(objs) < 2:
        raise TraceParseError(len(objs) + 1, "missing footer line")

    header = _require(objs[0], HEADER_FIELDS, 1, "header")
    footer_no = len(objs)
    footer = _require(objs[-1], FOOTER_FIELDS, footer_no, "footer")

    moves = []
    for lineno, obj in enumerate(objs[1:-1], start=2):
        rec = _require(obj, MOVE_FIELDS, lineno, "move record")
        if not isinstance(rec["round"], int) or rec["round"] < 1:
            raise TraceParseError(lineno, "round must be a positive integer")
        moves.append(MoveRecord(rec["round"], _player(rec["player"], lineno), rec["payload"]))

    horizon_data = header.get("horizon") or {}
    try:
        horizon = HorizonPolicy(**horizon_data)
    except (TypeError, GameError) as exc:
        raise TraceParseError(1, f"bad horizon: {exc}") from None
    if not isinstance(footer["quiescent"], bool) or not isinstance(footer["rounds"], int):
        raise TraceParseError(footer_no, "quiescent must be a boolean and rounds an integer")
    return MatchTrace(
        schema=header["schema"],
        params=header["params"],
        seed=header["seed"],
        moves=moves,
        outcome=_player(footer["outcome"], footer_no),
        certificate=footer["certificate"],
        quiescent=footer["quiescent"],
        rounds=footer["rounds"],
        horizon=horizon,
        players=header.get("players", {}),
        ledger=footer.get("ledger"),
        engine_version=header.get("engine_version", ENGINE_VERSION),
    )


def write_trace(trace: MatchTrace, path: str | Path) -> None:
    Path(path).write_text(dumps_trace(trace), encoding="utf-8")


def read_trace(path: str | Path) -> MatchTrace:
    return loads_trace(Path(path).read_text(encoding="utf-8"))
