"""``kgames`` command line: run, verify and sweep.

Exit codes: 0 when Alice wins (or a trace verifies), 2 when Bob wins,
1 on configuration, parse or verification errors.
"""

from __future__ import annotations

import argparse
import itertools
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import kgames  # noqa: F401  (fills the registries)
from kgames.engine import (
    SCHEMAS,
    ConfigError,
    GameError,
    HorizonPolicy,
    Player,
    make_schema,
    make_strategy,
    play_match,
    run_match,
    validate_trace,
)
from kgames.tracefile import TraceParseError, dumps_trace, read_trace

EXIT_ALICE, EXIT_ERROR, EXIT_BOB = 0, 1, 2


@dataclass
class RunConfig:
    game: str
    params: dict = field(default_factory=dict)
    alice: str = "pass"
    bob: str = "pass"
    alice_params: dict = field(default_factory=dict)
    bob_params: dict = field(default_factory=dict)
    max_rounds: int = 100_000
    seed: int | None = None
    output: str | None = None
    strict: bool = False

    def build(self):
        """Validate everything and return ``(schema, alice, bob, horizon)``."""
        if self.game not in SCHEMAS:
            raise ConfigError(f"--game: unknown game {self.game!r}; known: {sorted(SCHEMAS)}")
        schema = make_schema(self.game, self.params)
        alice = make_strategy(self.game, Player.ALICE, self.alice, **self.alice_params)
        bob = make_strategy(self.game, Player.BOB, self.bob, **self.bob_params)
        horizon = HorizonPolicy(self.max_rounds)
        if self.strict:
            ok, reason = schema.winnable()
            if not ok:
                raise ConfigError(f"--strict: parameters {schema.params} are not known to be winnable: {reason}")
        return schema, alice, bob, horizon


def parse_value(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def parse_assignments(items: list[str] | None, flag: str) -> dict:
    out = {}
    for item in items or ():
        key, sep, value = item.partition("=")
        if not sep or not key:
            raise ConfigError(f"{flag}: expected KEY=VALUE, got {item!r}")
        out[key] = parse_value(value)
    return out


def parse_range(text: str, flag: str) -> list:
    """``a..b`` (inclusive integers), a comma list, or empty for no values."""
    text = text.strip()
    if not text:
        return []
    if ".." in text:
        lo, _, hi = text.partition("..")
        try:
            return list(range(int(lo), int(hi) + 1))
        except ValueError:
            raise ConfigError(f"{flag}: bad range {text!r}") from None
    return [parse_value(v) for v in text.split(",")]


def parse_seeds(text: str) -> list[int]:
    if ".." not in text and "," not in text:
        try:
            return list(range(int(text)))
        except ValueError:
            raise ConfigError(f"--seeds: expected a count, a..b or a list, got {text!r}") from None
    seeds = parse_range(text, "--seeds")
    if not all(isinstance(s, int) for s in seeds):
        raise ConfigError("--seeds: seeds must be integers")
    return seeds


def _config_from(args) -> RunConfig:
    return RunConfig(
        game=args.game,
        params=parse_assignments(args.param, "--param"),
        alice=args.alice,
        bob=args.bob,
        alice_params=parse_assignments(args.alice_param, "--alice-param"),
        bob_params=parse_assignments(args.bob_param, "--bob-param"),
        max_rounds=args.max_rounds,
        seed=getattr(args, "seed", None),
        output=getattr(args, "output", None),
        strict=args.strict,
    )


def _needs_seed(alice, bob) -> list[str]:
    return [s.name for s in (alice, bob) if s.randomized]


def _error(msg: str) -> int:
    print(f"error: {msg}", file=sys.stderr)
    return EXIT_ERROR


def cmd_run(args) -> int:
    try:
        cfg = _config_from(args)
        schema, alice, bob, horizon = cfg.build()
        if cfg.seed is None and _needs_seed(alice, bob):
            raise ConfigError(f"--seed: required for randomized strategies {_needs_seed(alice, bob)}")
        trace = run_match(schema, alice, bob, horizon, seed=cfg.seed or 0)
    except GameError as exc:
        return _error(str(exc))
    text = dumps_trace(trace)
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    status = "quiescent" if trace.quiescent else "horizon reached"
    print(
        f"winner: {trace.outcome.value} after {trace.rounds} rounds ({status}); "
        f"certificate: {json.dumps(trace.certificate)}",
        file=sys.stderr,
    )
    return EXIT_ALICE if trace.outcome is Player.ALICE else EXIT_BOB


def cmd_verify(args) -> int:
    try:
        trace = read_trace(args.trace)
    except TraceParseError as exc:
        return _error(f"line {exc.line}: {exc.reason}")
    except OSError as exc:
        return _error(str(exc))
    result = validate_trace(trace)
    if not result:
        where = f"round {result.round}: " if result.round is not None else ""
        return _error(f"{where}{result.reason}")
    print(f"ok: {trace.outcome.value} wins, {trace.rounds} rounds")
    return EXIT_ALICE


def _split_axis(cfg: RunConfig, key: str, value) -> None:
    target, dot, name = key.partition(".")
    if dot and target in ("alice", "bob"):
        getattr(cfg, f"{target}_params")[name] = value
    else:
        cfg.params[key] = value


def _sweep_row(cfg: RunConfig, seed: int, metric_keys: list[str]) -> list:
    try:
        schema, alice, bob, horizon = cfg.build()
        trace, state = play_match(schema, alice, bob, horizon, seed=seed)
        metrics = schema.metrics(state)
        cells = [trace.outcome.value, trace.rounds, str(trace.quiescent).lower()]
        cells += [metrics.get(k, "") for k in metric_keys]
        return cells + [""]
    except GameError as exc:
        return ["", "", ""] + [""] * len(metric_keys) + [str(exc).replace("\t", " ")]


def _row_job(job):
    cfg, seed, metric_keys = job
    return _sweep_row(cfg, seed, metric_keys)


def cmd_sweep(args) -> int:
    try:
        base = _config_from(args)
        schema, alice, bob, _ = base.build()
        axes = []
        for item in args.axis or ():
            key, sep, spec = item.partition("=")
            if not sep or not key:
                raise ConfigError(f"--axis: expected KEY=RANGE, got {item!r}")
            axes.append((key, parse_range(spec, "--axis")))
        if args.seeds is None:
            if _needs_seed(alice, bob):
                raise ConfigError(f"--seeds: required for randomized strategies {_needs_seed(alice, bob)}")
            seeds = [0]
        else:
            seeds = parse_seeds(args.seeds)
    except GameError as exc:
        return _error(str(exc))

    metric_keys = sorted(schema.metrics(schema.initial_state()))
    keys = [k for k, _ in axes]
    header = ["row", *keys, "seed", "winner", "rounds", "quiescent", *metric_keys, "error"]
    jobs, prefixes = [], []
    for combo in itertools.product(*(values for _, values in axes)):
        for seed in seeds:
            cfg = RunConfig(
                base.game,
                dict(base.params),
                base.alice,
                base.bob,
                dict(base.alice_params),
                dict(base.bob_params),
                base.max_rounds,
                strict=base.strict,
            )
            for key, value in zip(keys, combo):
                _split_axis(cfg, key, value)
            jobs.append((cfg, seed, metric_keys))
            prefixes.append([*combo, seed])
    if args.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_row_job, jobs, chunksize=max(1, len(jobs) // (4 * args.jobs))))
    else:
        results = [_row_job(job) for job in jobs]

    lines = ["\t".join(header)]
    for i, (prefix, cells) in enumerate(zip(prefixes, results)):
        lines.append("\t".join(str(c) for c in [i, *prefix, *cells]))
    text = "\n".join(lines) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_ALICE


def _add_match_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--game", required=True, help=f"one of {sorted(SCHEMAS)}")
    p.add_argument("--param", action="append", metavar="KEY=VALUE", help="game parameter (JSON value)")
    p.add_argument("--alice", default="pass", help="Alice's strategy")
    p.add_argument("--bob", default="pass", help="Bob's strategy")
    p.add_argument("--alice-param", action="append", metavar="KEY=VALUE")
    p.add_argument("--bob-param", action="append", metavar="KEY=VALUE")
    p.add_argument("--max-rounds", type=int, default=100_000)
    p.add_argument("--strict", action="store_true", help="refuse parameters Alice is not known to win")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kgames", description=__doc__, allow_abbrev=False)
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="play one match and write its trace", allow_abbrev=False)
    _add_match_flags(run)
    run.add_argument("--seed", type=int)
    run.add_argument("--output", help="trace file (default: stdout)")
    run.set_defaults(func=cmd_run)

    verify = sub.add_parser("verify", help="replay a trace and check its verdict", allow_abbrev=False)
    verify.add_argument("--trace", required=True)
    verify.set_defaults(func=cmd_verify)

    sweep = sub.add_parser("sweep", help="play a grid of matches and print a TSV table", allow_abbrev=False)
    _add_match_flags(sweep)
    sweep.add_argument("--axis", action="append", metavar="KEY=RANGE", help="a..b, comma list, or empty; alice.X / bob.X target strategy parameters")
    sweep.add_argument("--seeds", help="count, a..b or comma list")
    sweep.add_argument("--jobs", type=int, default=1)
    sweep.add_argument("--output", help="table file (default: stdout)")
    sweep.set_defaults(func=cmd_sweep)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code else 0
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
