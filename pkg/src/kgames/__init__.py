"""Enumeration games between Alice and Bob with replayable traces."""

from kgames import bijection, complexity, extraction, miller, total_function  # noqa: F401  (fill registries)
from kgames.engine import (
    SCHEMAS,
    STRATEGIES,
    HorizonPolicy,
    MatchTrace,
    Player,
    make_schema,
    make_strategy,
    replay,
    run_match,
    validate_trace,
)

__all__ = [
    "SCHEMAS",
    "STRATEGIES",
    "HorizonPolicy",
    "MatchTrace",
    "Player",
    "make_schema",
    "make_strategy",
    "replay",
    "run_match",
    "validate_trace",
]
