"""The online bidding policy that realizes the matrix guarantee.

The policy tracks the opponent's budget pessimistically (it never assumes
P2 spent more than can be proven from public information) and, on every
value-1 turn at countdown pair (i, j), bids the fraction

    first-price:  r* = (x[i][j-1] - x[i-1][j]) / (1 + x[i][j-1])
    all-pay:      r* = (x[i][j-1] - x[i-1][j]) / (x[i][j-1] + 1 - alpha)

of the tracked budget, where x is the variant's countdown matrix. The two
outcomes of the turn then cost exactly the same in matrix terms, which is
what makes the guarantee inductive: winning leaves a state needing
x[i-1][j] per tracked unit, losing leaves x[i][j-1] per shrunken unit.

Two families of states bid the whole tracked budget instead: triangular
diagonals (P1 cannot afford to lose the next contested turn, and the
dealer tie rule makes a full-budget bid unbeatable) and fixed-value states
with j = 1 (P2 could take any turn P1 does not fully defend).
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction

from .core import (
    AuctionVariant,
    CountdownPair,
    DomainError,
    GameDecidedError,
    Numeric,
    Pricing,
    UnwinnableStateError,
    ValueModel,
    ceil_div,
)
from .matrices import CountdownMatrix, build_matrix, closed_form


def _entry(variant: AuctionVariant, i: int, j: int, matrix: CountdownMatrix | None, exact: bool):
    """Matrix value x[i][j] with the virtual zero row, from DP or closed form."""
    if i == 0:
        return Fraction(0) if exact else 0.0
    if matrix is not None:
        return matrix.entry(i, j)
    return closed_form(variant, i, j, exact=exact)


def optimal_bid_fraction(
    variant: AuctionVariant,
    i: int,
    j: int,
    matrix: CountdownMatrix | None = None,
    exact: bool = True,
) -> Fraction | float:
    """Fraction of the tracked opponent budget to bid at countdown (i, j).

    Pass a prebuilt matrix for all-pay variants with alpha outside {0, 1}
    (they have no closed form). Raises GameDecidedError when either
    countdown is zero and UnwinnableStateError for triangular i > j.
    """
    if i <= 0 or j <= 0:
        raise GameDecidedError(f"countdown ({i}, {j}) already decides the game")
    if variant.is_triangular and i > j:
        raise UnwinnableStateError(f"state ({i}, {j}) cannot be won under {variant.short_name}")
    one = Fraction(1) if exact else 1.0
    if variant.is_triangular and i == j:
        return one
    if variant.values is ValueModel.FIXED1 and j == 1:
        return one
    lose = _entry(variant, i, j - 1, matrix, exact)
    win = _entry(variant, i - 1, j, matrix, exact)
    if variant.pricing is Pricing.FIRST_PRICE:
        return (lose - win) / (one + lose)
    alpha = variant.alpha if exact else float(variant.alpha)
    return (lose - win) / (lose + one - alpha)


@dataclass(frozen=True)
class StrategyState:
    """What the policy knows between turns.

    ``tracked_opponent_budget`` starts at P2's true budget and only ever
    decreases; pessimistic updates keep it an upper bound on the truth,
    which is the safe side for every bid computed from it.
    """

    variant: AuctionVariant
    tracked_opponent_budget: Fraction
    countdown: CountdownPair
    matrix: CountdownMatrix | None = None

    @classmethod
    def fresh(
        cls,
        variant: AuctionVariant,
        turns: int,
        opponent_budget: Numeric,
        matrix: CountdownMatrix | None = None,
    ) -> "StrategyState":
        """Start-of-game state; builds a matrix when no closed form exists."""
        if turns < 1:
            raise DomainError(f"turns must be >= 1, got {turns}")
        h = ceil_div(turns, 2)
        if matrix is None and variant.pricing is Pricing.ALL_PAY and variant.alpha not in (0, 1):
            matrix = build_matrix(variant, h, exact=True)
        return cls(variant, Fraction(opponent_budget), CountdownPair(h, h), matrix)


def next_bid(state: StrategyState, turn_value: int) -> Fraction:
    """The policy's bid for a turn of the given value.

    Zero-value turns get a zero bid; there is nothing at stake and
    spending would only erode the guarantee.
    """
    if turn_value not in (0, 1):
        raise DomainError(f"turn value must be 0 or 1, got {turn_value!r}")
    if turn_value == 0:
        return Fraction(0)
    i, j = state.countdown.i, state.countdown.j
    fraction = optimal_bid_fraction(state.variant, i, j, matrix=state.matrix, exact=True)
    return fraction * state.tracked_opponent_budget


def observe_outcome(
    state: StrategyState,
    turn_value: int,
    my_bid: Numeric,
    i_won: bool,
    disclosed_opponent_bid: Numeric | None = None,
) -> StrategyState:
    """Advance the policy state after a settled turn.

    The winner's countdown drops on value-1 turns; zero-value turns leave
    the pair alone (the matrix indices already encode remaining need, and
    planning for the unshrunk pair is the conservative side).

    Budget tracking is pessimistic. First-price: a P2 win with no
    disclosed bid costs her at least P1's own bid (she had to beat it);
    a P1 win costs her nothing. All-pay: a P2 win is tracked the same
    way, and on a P1 win the undisclosed losing bid is assumed to be 0,
    the least she could have forfeited.
    """
    my_bid = Fraction(my_bid)
    b = state.tracked_opponent_budget
    if turn_value == 1:
        cd = state.countdown
        if i_won:
            cd = CountdownPair(max(0, cd.i - 1), cd.j)
        else:
            cd = CountdownPair(cd.i, max(0, cd.j - 1))
    else:
        cd = state.countdown

    disclosed = None if disclosed_opponent_bid is None else Fraction(disclosed_opponent_bid)
    if state.variant.pricing is Pricing.FIRST_PRICE:
        if not i_won:
            b = b - (disclosed if disclosed is not None else my_bid)
    else:
        if not i_won:
            b = b - (disclosed if disclosed is not None else my_bid)
        else:
            b = b - state.variant.alpha * (disclosed if disclosed is not None else Fraction(0))
    if b < 0:
        b = Fraction(0)
    return replace(state, tracked_opponent_budget=b, countdown=cd)
