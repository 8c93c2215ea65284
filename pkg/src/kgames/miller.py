"""Weight game on disjoint sets with a fair Bob who may disable elements.

Sets ``S_0 .. S_{N-1}``; elements are ``(j, i)`` with ``0 <= i < sizes[j]``.
Alice raises weights ``A(s)`` freely; Bob raises a per-set weight ``B(j)``
spread evenly over ``S_j`` and may disable elements, but never a whole set.
Both totals stay at most 1. Alice wins if some enabled element has
``A(s) / B(s) >= C``; an element with ``A(s) > 0`` that Bob never weighted
counts as an unbounded ratio.

All weights are :class:`fractions.Fraction`; no floating point is involved.
"""

from __future__ import annotations

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

GAME = "miller"

Element = tuple[int, int]
ZERO = Fraction(0)
ONE = Fraction(1)
# Bob's defensive payment exceeds the matching level by this much per set
PAY_MARGIN = Fraction(1, 2**40)


class BudgetExceeded(RuleViolation):
    pass


class SetFullyDisabled(RuleViolation):
    def __init__(self, j: int):
        super().__init__(f"set {j} would have no enabled element")
        self.j = j


@dataclass(frozen=True)
class MillerParams:
    C: int
    sizes: tuple[int, ...]

    def __post_init__(self):
        if not isinstance(self.C, int) or self.C < 1:
            raise ConfigError("C must be a positive integer")
        if not self.sizes:
            raise ConfigError("need at least one set")
        if any(not isinstance(k, int) or k < 1 for k in self.sizes):
            raise ConfigError("set sizes must be positive integers")

    @property
    def N(self) -> int:
        return len(self.sizes)


@dataclass
class WeightState:
    params: MillerParams
    A: dict[Element, Fraction] = field(default_factory=dict)
    B: list[Fraction] = field(default_factory=list)
    disabled: set[Element] = field(default_factory=set)
    disabled_count: list[int] = field(default_factory=list)
    total_a: Fraction = ZERO
    total_b: Fraction = ZERO

    def __post_init__(self):
        if not self.B:
            self.B = [ZERO] * self.params.N
        if not self.disabled_count:
            self.disabled_count = [0] * self.params.N

    def bob_weight(self, s: Element) -> Fraction:
        j = s[0]
        return self.B[j] / self.params.sizes[j]

    def enabled(self, s: Element) -> bool:
        return s not in self.disabled

    def ratio_reaches(self, s: Element, C: int) -> bool:
        a = self.A.get(s, ZERO)
        if a <= 0 or s in self.disabled:
            return False
        j = s[0]
        # a / (B/size) >= C  <=>  a * size >= C * B
        return a * self.params.sizes[j] >= C * self.B[j]


def _check_element(params: MillerParams, s) -> Element:
    j, i = s
    if not (0 <= j < params.N and 0 <= i < params.sizes[j]):
        raise RuleViolation(f"no element {s!r}")
    return (j, i)


def apply_alice_move(state: WeightState, increments: dict[Element, Fraction]) -> WeightState:
    inc = {_check_element(state.params, s): Fraction(w) for s, w in increments.items()}
    if any(w < 0 for w in inc.values()):
        raise RuleViolation("weights may only increase")
    total = state.total_a + sum(inc.values(), ZERO)
    if total > ONE:
        raise BudgetExceeded(f"Alice's total weight would be {total}")
    for s, w in inc.items():
        if w:
            state.A[s] = state.A.get(s, ZERO) + w
    state.total_a = total
    return state


def apply_bob_move(
    state: WeightState, set_increments: dict[int, Fraction], to_disable=()
) -> WeightState:
    p = state.params
    inc = {}
    for j, w in set_increments.items():
        if not 0 <= j < p.N:
            raise RuleViolation(f"no set {j}")
        inc[j] = Fraction(w)
    if any(w < 0 for w in inc.values()):
        raise RuleViolation("weights may only increase")
    total = state.total_b + sum(inc.values(), ZERO)
    if total > ONE:
        raise BudgetExceeded(f"Bob's total weight would be {total}")
    fresh = {_check_element(p, s) for s in to_disable} - state.disabled
    per_set: dict[int, int] = {}
    for j, _ in fresh:
        per_set[j] = per_set.get(j, 0) + 1
    for j, k in per_set.items():
        if state.disabled_count[j] + k >= p.sizes[j]:
            raise SetFullyDisabled(j)
    for j, w in inc.items():
        state.B[j] += w
    state.total_b = total
    state.disabled |= fresh
    for j, k in per_set.items():
        state.disabled_count[j] += k
    return state


def referee(state: WeightState, C: int | None = None) -> tuple[Player, Element | None]:
    """Alice wins with the least enabled element whose ratio reaches C."""
    C = state.params.C if C is None else C
    for s in sorted(state.A):
        if state.ratio_reaches(s, C):
            return Player.ALICE, s
    return Player.BOB, None


def winnability(params: MillerParams) -> bool:
    C, sizes, N = params.C, params.sizes, params.N
    if N >= 2 ** (8 * C) and all(k >= 8 * C for k in sizes):
        return True
    return N >= 2 ** (4 * C) and all(k % (4 * C) == 0 for k in sizes)


def group_count(size: int, C: int) -> int:
    return 4 * C if size % (4 * C) == 0 else 8 * C


def split_groups(size: int, count: int) -> list[list[int]]:
    """Contiguous near-equal groups; sizes differ by at most one, larger groups first."""
    q, r = divmod(size, count)
    out, start = [], 0
    for k in range(count):
        width = q + (1 if k < r else 0)
        out.append(list(range(start, start + width)))
        start += width
    return out


def grouping_plan(params: MillerParams) -> list[list[list[int]]]:
    return [split_groups(k, group_count(k, params.C)) for k in params.sizes]


def set_ledger(state: WeightState) -> list[dict]:
    """Per touched set, in order: spends, verdict and Alice's remaining budget after it."""
    p = state.params
    alice_spend = [ZERO] * p.N
    for (j, _), a in state.A.items():
        alice_spend[j] += a
    rows = []
    spent = ZERO
    for j in range(p.N):
        a, b = alice_spend[j], state.B[j]
        if a == 0 and b == 0:
            continue
        spent += a
        if a == 0:
            outcome = "untouched"
        elif any(state.ratio_reaches((j, i), p.C) for i in range(p.sizes[j])):
            outcome = "alice_wins"
        elif b > 0:
            outcome = "bob_paid"
        else:
            outcome = "disabled"
        rows.append(
            {
                "set": j,
                "alice_spend": str(a),
                "bob_spend": str(b),
                "outcome": outcome,
                "alpha_after": str(ONE - spent),
            }
        )
    return rows


def _params_from(C, sizes, N, size) -> MillerParams:
    if sizes is None:
        if (N is None) != (size is None):
            raise ConfigError("give both N and size, or sizes")
        if N is None:
            N, size = 16, 4
        if not isinstance(N, int) or N < 1:
            raise ConfigError("N must be a positive integer")
        sizes = [size] * N
    elif N is not None and N != len(sizes):
        raise ConfigError("N disagrees with the number of sizes")
    return MillerParams(C, tuple(sizes))


@register_schema
class MillerGame(GameSchema):
    """Params: ``C`` and either ``sizes`` (list) or uniform ``N`` and ``size``."""

    name = GAME

    def __init__(self, C: int = 1, sizes: list[int] | None = None, N: int | None = None, size: int | None = None):
        self.game_params = _params_from(C, sizes, N, size)
        if sizes is None:
            self.params = {"C": C, "N": self.game_params.N, "size": self.game_params.sizes[0]}
        else:
            self.params = {"C": C, "sizes": list(sizes)}

    def initial_state(self) -> WeightState:
        return WeightState(self.game_params)

    def apply(self, state: WeightState, player: Player, payload) -> None:
        if player is Player.ALICE:
            apply_alice_move(state, payload)
        else:
            apply_bob_move(state, payload.get("raise", {}), payload.get("disable", ()))

    def encode_payload(self, player, payload):
        if player is Player.ALICE:
            return [[j, i, str(Fraction(w))] for (j, i), w in sorted(payload.items())]
        return {
            "raise": [[j, str(Fraction(w))] for j, w in sorted(payload.get("raise", {}).items())],
            "disable": [list(s) for s in sorted(payload.get("disable", ()))],
        }

    def decode_payload(self, player, data):
        if player is Player.ALICE:
            out: dict[Element, Fraction] = {}
            for j, i, w in data:
                if (j, i) in out:
                    raise RuleViolation(f"element {(j, i)} listed twice")
                out[(j, i)] = Fraction(w)
            return out
        raises: dict[int, Fraction] = {}
        for j, w in data["raise"]:
            if j in raises:
                raise RuleViolation(f"set {j} listed twice")
            raises[j] = Fraction(w)
        return {"raise": raises, "disable": [tuple(s) for s in data["disable"]]}

    def is_pass(self, payload) -> bool:
        if isinstance(payload, dict) and ("raise" in payload or "disable" in payload):
            return not payload.get("raise") and not payload.get("disable")
        return super().is_pass(payload)

    def referee(self, state: WeightState):
        return referee(state)

    def encode_certificate(self, certificate):
        return None if certificate is None else list(certificate)

    def snapshot(self, state: WeightState):
        return dict(state.A), tuple(state.B), frozenset(state.disabled)

    def extends(self, before, after: WeightState) -> bool:
        A, B, disabled = before
        return (
            all(after.A.get(s, ZERO) >= a for s, a in A.items())
            and all(b1 >= b0 for b0, b1 in zip(B, after.B))
            and disabled <= after.disabled
        )

    def ledger(self, state: WeightState):
        return set_ledger(state)

    def winnable(self):
        if winnability(self.game_params):
            return True, ""
        C = self.game_params.C
        return False, (
            f"need N >= 2^{8 * C} with every size >= {8 * C}, "
            f"or N >= 2^{4 * C} with every size a multiple of {4 * C}"
        )

    def metrics(self, state: WeightState) -> dict:
        rows = set_ledger(state)
        paid = [r for r in rows if r["outcome"] == "bob_paid"]
        ratios = [Fraction(r["bob_spend"]) / Fraction(r["alice_spend"]) for r in paid]
        return {
            "sets_played": sum(1 for r in rows if r["outcome"] != "untouched"),
            "alice_total": str(state.total_a),
            "bob_total": str(state.total_b),
            "min_spend_ratio": str(min(ratios)) if ratios else "",
        }


# --------------------------------------------------------------------------
# strategies


@register_strategy(GAME, Player.ALICE, "doubling")
class DoublingAlice(Strategy):
    """Doubling weights over groups, one set at a time.

    In the current set Alice puts ``alpha * 2**t / 2**M`` on group t (spread
    over its enabled members), where M is the number of groups and alpha her
    remaining budget on entering the set. She waits while that group wins the
    ratio; if Bob disables the whole group she moves to the next group; if
    Bob pays instead she moves to the next set.
    """

    name = "doubling"

    def begin(self, schema, player, rng):
        super().begin(schema, player, rng)
        self.params: MillerParams = schema.game_params
        self.plan = grouping_plan(self.params)
        self.j = 0
        self.t = 0
        self.assigned = False
        self.alpha = ONE

    def _group(self) -> list[Element]:
        return [(self.j, i) for i in self.plan[self.j][self.t]]

    def move(self, ctx):
        state: WeightState = ctx.state
        C = self.params.C
        while self.j < self.params.N:
            groups = self.plan[self.j]
            if self.t >= len(groups):
                self._next_set(state)
                continue
            members = self._group()
            enabled = [s for s in members if s not in state.disabled]
            if not self.assigned:
                if not enabled:
                    self.t += 1
                    continue
                w = self.alpha * Fraction(2**self.t, 2 ** len(groups))
                self.assigned = True
                share = w / len(enabled)
                return {s: share for s in enabled}
            if any(state.ratio_reaches(s, C) for s in enabled):
                return None  # winning; wait for Bob
            if not enabled:
                self.t += 1
                self.assigned = False
                continue
            self._next_set(state)  # Bob paid
        return None

    def _next_set(self, state: WeightState) -> None:
        self.j += 1
        self.t = 0
        self.assigned = False
        self.alpha = ONE - state.total_a


register_strategy(GAME, Player.ALICE, "pass")(Strategy)
register_strategy(GAME, Player.BOB, "pass")(Strategy)


def threats(state: WeightState, sets=None) -> dict[int, list[Element]]:
    """Enabled elements currently reaching the ratio, by set."""
    p = state.params
    found: dict[int, list[Element]] = {}
    keys = state.A if sets is None else [(j, i) for j in sets for i in range(p.sizes[j])]
    for s in keys:
        if state.ratio_reaches(s, p.C):
            found.setdefault(s[0], []).append(s)
    return found


def matching_payment(state: WeightState, j: int) -> Fraction:
    """Smallest raise of B(j) (plus :data:`PAY_MARGIN`) that puts every enabled ratio in S_j below C."""
    p = state.params
    top = max((state.A.get((j, i), ZERO) for i in range(p.sizes[j]) if (j, i) not in state.disabled), default=ZERO)
    need = top * p.sizes[j] / p.C + PAY_MARGIN
    return max(ZERO, need - state.B[j])


def _touched_sets(ctx) -> set[int]:
    for rec in reversed(ctx.history):
        if rec.player is Player.ALICE:
            return {j for j, _, _ in rec.payload} if rec.payload else set()
    return set()


@register_strategy(GAME, Player.BOB, "defensive")
class DefensiveBob(Strategy):
    """Answers each threat as cheaply as possible: disable it if the set survives, else pay."""

    name = "defensive"

    def begin(self, schema, player, rng):
        super().begin(schema, player, rng)
        self.open: set[int] = set()

    def move(self, ctx):
        state: WeightState = ctx.state
        self.open |= _touched_sets(ctx)
        found = threats(state, sorted(self.open))
        self.open = set(found)
        raises: dict[int, Fraction] = {}
        disable: list[Element] = []
        budget = ONE - state.total_b
        for j, elems in sorted(found.items()):
            if state.params.sizes[j] - state.disabled_count[j] - len(elems) >= 1:
                disable.extend(elems)
            else:
                pay = matching_payment(state, j)
                if pay <= budget:
                    raises[j] = pay
                    budget -= pay
        if not raises and not disable:
            return None
        return {"raise": raises, "disable": disable}


@register_strategy(GAME, Player.BOB, "random")
class RandomBob(Strategy):
    """A seeded legal Bob mixing threat responses with noise.

    Its temperament is drawn from the match seed: how often it answers a
    threat, how often it pays rather than disables, how often it makes
    unprompted moves (random raises or disables), and after how many moves it
    stops for good.
    """

    name = "random"
    randomized = True

    def __init__(self, max_moves: int = 4000):
        self.max_moves = max_moves

    def begin(self, schema, player, rng):
        super().begin(schema, player, rng)
        self.respond = rng.uniform(0.5, 1.0)
        self.pay = rng.random()
        self.noise = rng.uniform(0.0, 0.3)
        self.left = rng.randint(1, self.max_moves)
        self.open: set[int] = set()

    def move(self, ctx):
        if self.left <= 0:
            return None
        self.left -= 1
        state: WeightState = ctx.state
        p = state.params
        rng = self.rng
        self.open |= _touched_sets(ctx)
        found = threats(state, sorted(self.open))
        self.open = set(found)
        budget = ONE - state.total_b
        raises: dict[int, Fraction] = {}
        disable: set[Element] = set()
        pending = [0] * p.N

        def can_disable(j: int, k: int) -> bool:
            return p.sizes[j] - state.disabled_count[j] - pending[j] - k >= 1

        for j, elems in sorted(found.items()):
            if rng.random() > self.respond:
                continue
            if can_disable(j, len(elems)) and rng.random() >= self.pay:
                disable.update(elems)
                pending[j] += len(elems)
                continue
            extra = Fraction(rng.randint(0, 4), 2 ** rng.randint(8, 20))
            pay = matching_payment(state, j) + extra
            if pay <= budget:
                raises[j] = raises.get(j, ZERO) + pay
                budget -= pay
        if rng.random() < self.noise:
            j = rng.randrange(p.N)
            if rng.random() < 0.5:
                amount = min(budget, Fraction(1, 2 ** rng.randint(6, 16)))
                if amount > 0:
                    raises[j] = raises.get(j, ZERO) + amount
                    budget -= amount
            else:
                candidates = [
                    (j, i) for i in range(p.sizes[j]) if (j, i) not in state.disabled and (j, i) not in disable
                ]
                rng.shuffle(candidates)
                for s in candidates[: rng.randint(1, 3)]:
                    if can_disable(j, 1):
                        disable.add(s)
                        pending[j] += 1
        if not raises and not disable:
            return None
        return {"raise": raises, "disable": sorted(disable)}

    def describe(self):
        return {"name": self.name, "max_moves": self.max_moves}
