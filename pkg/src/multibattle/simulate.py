"""Game playouts: policies, adversaries, traces, and the exhaustive sweep.

``run_game`` drives one contest between a P1 policy and an adversary and
returns a schema-stable GameTrace; identical inputs and seed give a
byte-identical JSON trace. ``exhaustive_adversary_check`` enumerates every
adversary line over a rational bid grid against the deterministic strategy
policy and either certifies a win in all of them or returns one losing
trace.

Adversaries see the full public state, including P1's remaining budget,
and all of them except the seeded-random one also see P1's bid for the
current turn before bidding (the omniscient worst-case model). Disclosed
losing bids are not modeled: P1's policy always runs on pessimistic
budget tracking.
"""

from __future__ import annotations

import random
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction

from .core import (
    AuctionVariant,
    ContestError,
    DomainError,
    FaultRecord,
    GameConfig,
    GameState,
    GameTrace,
    Numeric,
    Player,
    Pricing,
    ResourceError,
    TurnRecord,
    ValueModel,
    ceil_div,
    countdown_for,
    initial_state,
    settle_turn,
    winner_if_decided,
)
from .matrices import CountdownMatrix, build_matrix
from .oracle import GridEvaluator
from .strategy import StrategyState, next_bid, observe_outcome, optimal_bid_fraction


class StrategyPolicy:
    """P1 policy wrapping the matrix-guided bidding strategy.

    Bids are capped at the remaining budget; with a starting budget at or
    above the variant's optimal ratio the cap never binds, below it the
    policy degrades gracefully instead of overbidding. From states the
    strategy cannot plan for (already decided in its model, or unwinnable
    under a triangular variant) it bids zero.
    """

    def __init__(self, matrix: CountdownMatrix | None = None):
        self._matrix = matrix
        self._state: StrategyState | None = None

    def begin(self, config: GameConfig, budget_p1: Fraction) -> None:
        self._state = StrategyState.fresh(
            config.variant, config.turns, config.budget_p2, matrix=self._matrix
        )

    def bid(self, state: GameState, value: int) -> Fraction:
        s = self._state
        cd = s.countdown
        if cd.i <= 0 or cd.j <= 0:
            return Fraction(0)
        if s.variant.is_triangular and cd.i > cd.j:
            return Fraction(0)
        return min(next_bid(s, value), state.budget_p1)

    def observe(
        self,
        value: int,
        my_bid: Fraction,
        i_won: bool,
        disclosed_opponent_bid: Numeric | None = None,
    ) -> None:
        self._state = observe_outcome(self._state, value, my_bid, i_won, disclosed_opponent_bid)


class FixedBidsPolicy:
    """Scripted P1 that plays a fixed bid sequence (mainly for tests)."""

    def __init__(self, bids):
        self._bids = [Fraction(b) for b in bids]
        self._at = 0

    def begin(self, config: GameConfig, budget_p1: Fraction) -> None:
        self._at = 0

    def bid(self, state: GameState, value: int) -> Fraction:
        if self._at >= len(self._bids):
            return Fraction(0)
        b = self._bids[self._at]
        self._at += 1
        return b

    def observe(self, value, my_bid, i_won, disclosed_opponent_bid=None) -> None:
        pass


class AllInAdversary:
    """Always plays value 1 and bids the whole remaining budget on it."""

    def begin(self, config: GameConfig, budget_p1: Fraction) -> None:
        pass

    def choose_value(self, state: GameState, rng: random.Random) -> int:
        return 1

    def choose_bid(self, state: GameState, value: int, p1_bid: Fraction, rng) -> Fraction:
        return state.budget_p2 if value == 1 else Fraction(0)


class MatchPlusEpsilonAdversary:
    """Outbids P1 by a fixed epsilon whenever it can afford to."""

    def __init__(self, epsilon: Numeric = Fraction(1, 100)):
        self.epsilon = Fraction(epsilon)
        if self.epsilon <= 0:
            raise DomainError("epsilon must be positive")

    def begin(self, config: GameConfig, budget_p1: Fraction) -> None:
        pass

    def choose_value(self, state: GameState, rng: random.Random) -> int:
        return 1

    def choose_bid(self, state: GameState, value: int, p1_bid: Fraction, rng) -> Fraction:
        if value == 0:
            return Fraction(0)
        raised = Fraction(p1_bid) + self.epsilon
        return raised if raised <= state.budget_p2 else Fraction(0)


class RandomSeededAdversary:
    """Uniform random values and grid-random bids from a seeded generator.

    Uses Python's Mersenne Twister (``random.Random``) seeded by
    ``run_game``, so traces are reproducible across platforms. Bids are a
    uniform random multiple of budget/denominator, keeping every trace
    number rational.
    """

    def __init__(self, bid_denominator: int = 16):
        if bid_denominator < 1:
            raise DomainError("bid denominator must be >= 1")
        self.bid_denominator = bid_denominator

    def begin(self, config: GameConfig, budget_p1: Fraction) -> None:
        pass

    def choose_value(self, state: GameState, rng: random.Random) -> int:
        return rng.randrange(2)

    def choose_bid(self, state: GameState, value: int, p1_bid: Fraction, rng) -> Fraction:
        d = self.bid_denominator
        return Fraction(rng.randint(0, d), d) * state.budget_p2


class OmnipotentAdversary:
    """Best response computed by the exact grid oracle at each turn.

    Both budgets are floored onto the bid grid before each oracle query
    (giving the adversary the aggressive reading of off-grid amounts), and
    the reply to P1's bid is the smallest grid bid that beats it, when
    beating it leads to a position the oracle scores as lost for a
    grid-bidding P1. Values: it prefers a value it can win under, trying
    1 first; if the oracle sees no win anywhere it plays value 1 and
    concedes the bidding.
    """

    def __init__(self, grid_unit: Numeric | None = None):
        self.grid_unit = None if grid_unit is None else Fraction(grid_unit)
        if self.grid_unit is not None and self.grid_unit <= 0:
            raise DomainError("grid_unit must be positive")
        self._ev: GridEvaluator | None = None
        self._config: GameConfig | None = None
        self._grid: Fraction | None = None

    def begin(self, config: GameConfig, budget_p1: Fraction) -> None:
        self._config = config
        self._grid = self.grid_unit or 1 / (8 * config.budget_p2)
        if self._ev is None or self._ev.variant != config.variant:
            self._ev = GridEvaluator(config.variant)

    def _units(self, amount: Fraction) -> int:
        return int(Fraction(amount) / self._grid)

    def choose_value(self, state: GameState, rng: random.Random) -> int:
        remaining = self._config.turns - state.turn_index
        cd = state.countdown
        a = self._units(state.budget_p1)
        b = self._units(state.budget_p2)
        for value in (1, 0):
            if not self._ev.win_given_value(remaining, cd.i, cd.j, a, b, value):
                return value
        return 1

    def choose_bid(self, state: GameState, value: int, p1_bid: Fraction, rng) -> Fraction:
        if value == 0:
            return Fraction(0)
        remaining = self._config.turns - state.turn_index
        cd = state.countdown
        p = Fraction(p1_bid)
        alpha = self._config.variant.alpha
        all_pay = self._config.variant.pricing is Pricing.ALL_PAY
        # Conceding: P1 takes the turn and pays its bid.
        a_concede = self._units(state.budget_p1 - p)
        b_concede = self._units(state.budget_p2)
        if not self._ev.win(remaining - 1, cd.i - 1, cd.j, a_concede, b_concede):
            return Fraction(0)
        # Beating: one grid step above P1's bid, if affordable and winning.
        q = self._grid * (int(p / self._grid) + 1)
        if q <= state.budget_p2:
            a_beat = self._units(state.budget_p1 - (alpha * p if all_pay else 0))
            b_beat = self._units(state.budget_p2 - q)
            if not self._ev.win(remaining - 1, cd.i, cd.j - 1, a_beat, b_beat):
                return q
        return Fraction(0)


class _ScriptedAdversary:
    """Replays a fixed (value, bid) line; used to materialize traces."""

    def __init__(self, moves):
        self._moves = list(moves)
        self._at = 0

    def begin(self, config: GameConfig, budget_p1: Fraction) -> None:
        self._at = 0

    def choose_value(self, state: GameState, rng: random.Random) -> int:
        return self._moves[self._at][0] if self._at < len(self._moves) else 1

    def choose_bid(self, state: GameState, value: int, p1_bid: Fraction, rng) -> Fraction:
        q = self._moves[self._at][1] if self._at < len(self._moves) else Fraction(0)
        self._at += 1
        return q


def run_game(config: GameConfig, budget_p1: Numeric, p1, p2, seed: int = 0) -> GameTrace:
    """Play one contest to its decision and return the trace.

    Deterministic given (config, budget_p1, policies, seed). A policy
    emitting a bid outside [0, its remaining budget] ends the game with a
    fault attributed to it; the other player wins.
    """
    b1 = Fraction(budget_p1)
    if b1 < 0 or config.budget_p2 <= 0:
        raise DomainError("budgets must be positive (P1 nonnegative)")
    rng = random.Random(seed)
    state = initial_state(config, b1)
    p1.begin(config, b1)
    p2.begin(config, b1)
    records: list[TurnRecord] = []
    fault = None
    while True:
        decided = winner_if_decided(config, state)
        if decided is not None:
            winner = decided
            reason = "countdown" if state.turn_index < config.turns else "exhausted"
            break
        if config.variant.values is ValueModel.FIXED1:
            value = 1
        else:
            value = p2.choose_value(state, rng)
            if value not in (0, 1):
                raise DomainError(f"adversary chose invalid value {value!r}")
        p_bid = Fraction(p1.bid(state, value))
        if not 0 <= p_bid <= state.budget_p1:
            fault = FaultRecord(state.turn_index, Player.P1, p_bid, state.budget_p1)
            winner, reason = Player.P2, "fault"
            break
        q_bid = Fraction(p2.choose_bid(state, value, p_bid, rng))
        if not 0 <= q_bid <= state.budget_p2:
            fault = FaultRecord(state.turn_index, Player.P2, q_bid, state.budget_p2)
            winner, reason = Player.P1, "fault"
            break
        turn_winner = Player.P1 if p_bid >= q_bid else Player.P2
        new_state = settle_turn(config, state, value, p_bid, q_bid)
        records.append(
            TurnRecord(
                index=state.turn_index,
                value=value,
                bid_p1=p_bid,
                bid_p2=q_bid,
                winner=turn_winner,
                budget_p1=new_state.budget_p1,
                budget_p2=new_state.budget_p2,
                score_p1=new_state.score_p1,
                score_p2=new_state.score_p2,
            )
        )
        p1.observe(value, p_bid, turn_winner is Player.P1, None)
        state = new_state
    return GameTrace(
        config=config,
        budget_p1=b1,
        turns=tuple(records),
        winner=winner,
        reason=reason,
        fault=fault,
    )


@dataclass(frozen=True)
class AdversarySweepVerdict:
    """Result of the exhaustive adversary enumeration."""

    win_all: bool
    counterexample: GameTrace | None
    states_explored: int


def _grid_bids(b2: Fraction, denominator_bound: int) -> list[Fraction]:
    """All rationals in [0, b2] with denominator at most bound * b2."""
    bound_frac = denominator_bound * b2
    if bound_frac.denominator != 1 or bound_frac < 1:
        raise DomainError(
            f"denominator bound {denominator_bound} times b2={b2} must be a positive integer"
        )
    bound = bound_frac.numerator
    out = set()
    for q in range(1, bound + 1):
        top = (b2.numerator * q) // b2.denominator
        for p in range(top + 1):
            f = Fraction(p, q)
            if f <= b2:
                out.add(f)
    return sorted(out)


def exhaustive_adversary_check(
    config: GameConfig,
    budget_p1: Numeric,
    denominator_bound: int,
    max_states: int = 2_000_000,
) -> AdversarySweepVerdict:
    """Check the strategy policy against every adversary line on a bid grid.

    The adversary may pick any value each turn and any bid that is a
    rational with denominator at most ``denominator_bound * b2``, up to
    its remaining budget. Returns a win-all verdict or one losing trace.

    Three kinds of adversary moves are skipped because they are strictly
    dominated and cannot change the verdict: nonzero bids on zero-value
    turns, and nonzero losing bids anywhere (they waste adversary budget
    while leaving P1's observations and the scores identical; a poorer
    adversary's options are a subset of a richer one's). All winning bids
    are enumerated.

    Intended for small T (documented: T <= 5); the memo is capped at
    ``max_states`` and overruns raise ResourceError with progress counts.
    """
    variant = config.variant
    turns = config.turns
    b2 = config.budget_p2
    b1 = Fraction(budget_p1)
    bids = _grid_bids(b2, denominator_bound)
    h = ceil_div(turns, 2)
    matrix = None
    if variant.pricing is Pricing.ALL_PAY and variant.alpha not in (0, 1):
        matrix = build_matrix(variant, h, exact=True)
    alpha = variant.alpha
    all_pay = variant.pricing is Pricing.ALL_PAY
    set01 = variant.values is ValueModel.SET01

    MISS = object()
    memo: dict = {}

    def policy_bid(s1: int, s2: int, tracked: Fraction, rem: Fraction) -> Fraction:
        i_s, j_s = h - s1, h - s2
        if i_s <= 0 or j_s <= 0 or (set01 and i_s > j_s):
            return Fraction(0)
        frac = optimal_bid_fraction(variant, i_s, j_s, matrix=matrix, exact=True)
        return min(frac * tracked, rem)

    def explore(remaining, s1, s2, rem, tracked, adv_budget):
        """None when P1 wins every line below; else the losing line."""
        cd = countdown_for(turns, turns - remaining, s1, s2)
        if cd.i == 0:
            return None
        if cd.j == 0:
            return ()
        if remaining == 0:
            return None if s1 >= s2 else ()
        key = (remaining, s1, s2, rem, tracked, adv_budget)
        hit = memo.get(key, MISS)
        if hit is not MISS:
            return hit
        if len(memo) >= max_states:
            raise ResourceError(
                f"exhaustive sweep exceeded {max_states} states "
                f"(remaining={remaining}, scores {s1}-{s2})"
            )
        line = None
        if set01:
            sub = explore(remaining - 1, s1, s2, rem, tracked, adv_budget)
            if sub is not None:
                line = ((0, Fraction(0)),) + sub
        if line is None:
            p = policy_bid(s1, s2, tracked, rem)
            # Adversary concedes the value-1 turn: P1 pays its bid.
            sub = explore(remaining - 1, s1 + 1, s2, rem - p, tracked, adv_budget)
            if sub is not None:
                line = ((1, Fraction(0)),) + sub
            else:
                new_rem = rem - alpha * p if all_pay else rem
                new_tracked = tracked - p
                for q in bids[bisect_right(bids, p):]:
                    if q > adv_budget:
                        break
                    sub = explore(
                        remaining - 1, s1, s2 + 1, new_rem, new_tracked, adv_budget - q
                    )
                    if sub is not None:
                        line = ((1, q),) + sub
                        break
        memo[key] = line
        return line

    line = explore(turns, 0, 0, b1, b2, b2)
    if line is None:
        return AdversarySweepVerdict(True, None, len(memo))
    trace = run_game(config, b1, StrategyPolicy(matrix=matrix), _ScriptedAdversary(line), seed=0)
    if trace.winner is not Player.P2:
        raise ContestError(
            "internal inconsistency: enumerated losing line did not replay to a P2 win"
        )
    return AdversarySweepVerdict(False, trace, len(memo))
