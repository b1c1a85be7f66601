"""Exact min-max decision procedure over grid-restricted bids.

Every bid is an integer multiple of a grid unit. Each turn the adversary
picks the value (value-set games), P1 bids knowing the value, then P2 bids
knowing P1's bid; she needs one grid unit more than P1 to take the turn,
which realizes the "epsilon more" of the continuous analysis exactly.

The search memoizes on (remaining turns, countdown pair, budgets): scores
influence the rest of the game only through the countdown pair, so the key
is sound. Two reductions keep the tree small without giving up exactness:

* Zero-value turns are settled without bids. Winning one changes no score
  and the countdown shift does not depend on the winner, so any nonzero
  bid strictly wastes the bidder's own budget.
* P2's responses collapse to two: concede (bid 0) or beat P1's bid by one
  unit. Losing bids above zero and winning bids above the minimum only
  cost her more, and winnability is monotone in budgets.

This module is the ground truth the matrices and the strategy are checked
against on small instances, and the brain of the simulator's omnipotent
adversary.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .core import (
    AuctionVariant,
    CountdownPair,
    DomainError,
    GameState,
    Numeric,
    Pricing,
    ResourceError,
    ValueModel,
    ceil_div,
)


class GridEvaluator:
    """Reusable memoized evaluator for one variant, in grid units.

    Budgets and bids are integers (P1's budget may be a Fraction of units
    under all-pay with fractional alpha, where losing costs alpha times a
    bid). The memo persists across calls, so a single evaluator can serve
    a whole budget search or a whole simulated game.
    """

    def __init__(self, variant: AuctionVariant):
        self.variant = variant
        self._alpha = variant.alpha
        self._all_pay = variant.pricing is Pricing.ALL_PAY
        self._set01 = variant.values is ValueModel.SET01
        self._memo: dict = {}
        self.nodes_expanded = 0

    def win(self, remaining: int, i: int, j: int, a, b: int) -> bool:
        """True iff P1 forces a win with ``remaining`` turns left.

        ``a`` and ``b`` are the players' budgets in grid units.
        """
        if i <= 0:
            return True
        if j <= 0:
            return False
        if remaining <= 0:
            # Unreachable from consistent states; fall back to the score
            # tie rules (i <= j means P1 is not behind).
            return i <= j
        key = (remaining, i, j, a, b)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        self.nodes_expanded += 1
        res = self._value_one_turn(remaining, i, j, a, b)
        if self._set01:
            if res:
                res = self._zero_value_turn(remaining, i, j, a, b)
        self._memo[key] = res
        return res

    def _zero_value_turn(self, remaining: int, i: int, j: int, a, b: int) -> bool:
        if i + j == remaining + 1:
            return self.win(remaining - 1, i - 1, j - 1, a, b)
        return self.win(remaining - 1, i, j, a, b)

    def _value_one_turn(self, remaining: int, i: int, j: int, a, b: int) -> bool:
        alpha = self._alpha
        all_pay = self._all_pay
        for p in range(int(a) + 1):
            # P2 concedes: P1 pays its own bid, P2 pays nothing.
            if not self.win(remaining - 1, i - 1, j, a - p, b):
                continue
            q = p + 1
            if q <= b:
                loss = a - alpha * p if all_pay else a
                if not self.win(remaining - 1, i, j - 1, loss, b - q):
                    continue
            return True
        return False

    def win_given_value(self, remaining: int, i: int, j: int, a, b: int, value: int) -> bool:
        """Like win(), but with the current turn's value already chosen."""
        if i <= 0:
            return True
        if j <= 0:
            return False
        if value == 0:
            return self._zero_value_turn(remaining, i, j, a, b)
        return self._value_one_turn(remaining, i, j, a, b)


@dataclass(frozen=True)
class OracleInstance:
    """A grid-bid game: budgets must be integer multiples of grid_unit."""

    variant: AuctionVariant
    turns: int
    b1: Fraction
    b2: Fraction
    grid_unit: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "b1", Fraction(self.b1))
        object.__setattr__(self, "b2", Fraction(self.b2))
        object.__setattr__(self, "grid_unit", Fraction(self.grid_unit))
        if self.turns < 1:
            raise DomainError(f"turns must be >= 1, got {self.turns}")
        if self.grid_unit <= 0:
            raise DomainError("grid_unit must be positive")
        if self.b1 < 0 or self.b2 < 0:
            raise DomainError("budgets must be nonnegative")
        self._units(self.b1)
        self._units(self.b2)

    def _units(self, amount: Fraction) -> int:
        q = Fraction(amount) / self.grid_unit
        if q.denominator != 1:
            raise DomainError(f"{amount} is not a multiple of grid unit {self.grid_unit}")
        return q.numerator


@dataclass(frozen=True)
class OracleResult:
    can_win: bool
    nodes_expanded: int


def evaluate(
    inst: OracleInstance,
    state: GameState | None = None,
    pending_value: int | None = None,
) -> OracleResult:
    """Exact win/loss evaluation from the start or from a mid-game state.

    ``pending_value`` evaluates the position where this turn's value is
    already fixed and P1 is about to bid.
    """
    if state is None:
        remaining = inst.turns
        countdown = CountdownPair.fresh(inst.turns)
        a, b = inst._units(inst.b1), inst._units(inst.b2)
    else:
        if state.turn_index > inst.turns:
            raise DomainError("state has more turns than the instance")
        remaining = inst.turns - state.turn_index
        countdown = state.countdown
        a, b = inst._units(state.budget_p1), inst._units(state.budget_p2)
    if pending_value is not None:
        if pending_value not in (0, 1):
            raise DomainError(f"pending value must be 0 or 1, got {pending_value!r}")
        if inst.variant.values is ValueModel.FIXED1 and pending_value != 1:
            raise DomainError("fixed-value contests only auction value-1 objects")
        if remaining < 1:
            raise DomainError("no turn left to evaluate a pending value for")
    ev = GridEvaluator(inst.variant)
    if pending_value is None:
        won = ev.win(remaining, countdown.i, countdown.j, a, b)
    else:
        won = ev.win_given_value(remaining, countdown.i, countdown.j, a, b, pending_value)
    return OracleResult(won, ev.nodes_expanded)


def p1_can_win(
    inst: OracleInstance,
    state: GameState | None = None,
    pending_value: int | None = None,
) -> bool:
    return evaluate(inst, state, pending_value).can_win


@dataclass(frozen=True)
class MinBudgetResult:
    """Smallest winning P1 budget, in grid units and as a ratio to b2."""

    b_star: int
    budget: Fraction
    ratio: Fraction
    nodes_expanded: int


def min_winning_budget(
    variant: AuctionVariant,
    turns: int,
    b2: Numeric,
    grid_unit: Numeric = 1,
    ceiling: Numeric | None = None,
    method: str = "linear",
) -> MinBudgetResult:
    """Search the smallest P1 budget (in grid units) that wins.

    The default linear scan starts at zero: against weak enough opponents
    even an all-zero-bids P1 can win on ties, so the corner is real.
    ``method="bisect"`` doubles then bisects, justified by monotonicity of
    winnability in P1's budget. The scan is capped at ``ceiling`` (budget
    amount, default 4 * b2, above every variant's limiting ratio); running
    past it raises ResourceError.

    Practical sizing guidance: turns <= 5 and b2 <= 30 at grid unit 1 stay
    comfortably under a second; cost grows quickly beyond that.
    """
    g = Fraction(grid_unit)
    if g <= 0:
        raise DomainError("grid_unit must be positive")
    b2 = Fraction(b2)
    if b2 <= 0:
        raise DomainError("b2 must be positive")
    b_units_frac = b2 / g
    if b_units_frac.denominator != 1:
        raise DomainError(f"b2={b2} is not a multiple of grid unit {g}")
    b_units = b_units_frac.numerator
    if ceiling is None:
        cap_units = 4 * b_units
    else:
        cap_frac = Fraction(ceiling) / g
        cap_units = cap_frac.numerator // cap_frac.denominator
    if turns < 1:
        raise DomainError(f"turns must be >= 1, got {turns}")
    if method not in ("linear", "bisect"):
        raise DomainError(f"unknown search method {method!r}")

    h = ceil_div(turns, 2)
    ev = GridEvaluator(variant)

    def wins(k: int) -> bool:
        return ev.win(turns, h, h, k, b_units)

    found: int | None = None
    if method == "linear":
        for k in range(cap_units + 1):
            if wins(k):
                found = k
                break
    else:
        if wins(0):
            found = 0
        else:
            hi = 1
            while hi <= cap_units and not wins(hi):
                hi *= 2
            if hi <= cap_units:
                lo = hi // 2  # known losing
                while hi - lo > 1:
                    mid = (lo + hi) // 2
                    if wins(mid):
                        hi = mid
                    else:
                        lo = mid
                found = hi
    if found is None:
        raise ResourceError(
            f"no winning budget up to {cap_units} grid units "
            f"({cap_units * g} at unit {g}); raise the ceiling"
        )
    return MinBudgetResult(
        b_star=found,
        budget=found * g,
        ratio=(found * g) / b2,
        nodes_expanded=ev.nodes_expanded,
    )
