"""Playouts, adversaries, trace invariants, and the exhaustive sweep."""

from fractions import Fraction

import pytest

from multibattle import (
    AP_SET01,
    FP_FIXED1,
    FP_SET01,
    AllInAdversary,
    DomainError,
    FixedBidsPolicy,
    GameConfig,
    MatchPlusEpsilonAdversary,
    OmnipotentAdversary,
    Player,
    Pricing,
    RandomSeededAdversary,
    ResourceError,
    StrategyPolicy,
    exhaustive_adversary_check,
    obr,
    run_game,
)
from multibattle.simulate import _grid_bids

F = Fraction


def test_strategy_beats_the_all_in_adversary_at_the_optimal_ratio():
    cfg = GameConfig(FP_SET01, turns=3)
    trace = run_game(cfg, F(3, 2), StrategyPolicy(), AllInAdversary())
    assert trace.winner is Player.P1
    assert trace.reason == "exhausted"
    assert len(trace.turns) == 3


def test_omnipotent_adversary_punishes_a_short_budget():
    cfg = GameConfig(FP_SET01, turns=3)
    trace = run_game(cfg, F(149, 100), StrategyPolicy(), OmnipotentAdversary())
    assert trace.winner is Player.P2
    # The known killing line: take the opening bid, then outbid twice.
    assert [t.winner for t in trace.turns].count(Player.P2) >= 2


def test_omnipotent_adversary_cannot_beat_the_optimal_budget():
    cfg = GameConfig(FP_SET01, turns=3)
    trace = run_game(cfg, F(3, 2), StrategyPolicy(), OmnipotentAdversary())
    assert trace.winner is Player.P1


def test_fixed_value_games_need_no_more_than_matching_budgets():
    cfg = GameConfig(FP_FIXED1, turns=5)
    trace = run_game(cfg, F(1), StrategyPolicy(), OmnipotentAdversary())
    assert trace.winner is Player.P1
    assert trace.reason == "countdown"


def test_strategy_beats_the_match_plus_epsilon_adversary():
    cfg = GameConfig(FP_SET01, turns=3)
    trace = run_game(cfg, F(3, 2), StrategyPolicy(), MatchPlusEpsilonAdversary())
    assert trace.winner is Player.P1


def test_winning_set01_traces_never_let_the_adversary_lead():
    for turns in (1, 3, 5, 7):
        cfg = GameConfig(FP_SET01, turns=turns)
        b1 = obr(FP_SET01, turns, exact=True)
        for adversary in (AllInAdversary(), MatchPlusEpsilonAdversary(), OmnipotentAdversary()):
            trace = run_game(cfg, b1, StrategyPolicy(), adversary)
            assert trace.winner is Player.P1, (turns, type(adversary).__name__)
            for rec in trace.turns:
                assert rec.score_p1 >= rec.score_p2


def test_traces_are_deterministic():
    cfg = GameConfig(FP_SET01, turns=9)
    kwargs = dict(seed=1234)
    a = run_game(cfg, F(2), StrategyPolicy(), RandomSeededAdversary(), **kwargs)
    b = run_game(cfg, F(2), StrategyPolicy(), RandomSeededAdversary(), **kwargs)
    assert a.to_json() == b.to_json()


@pytest.mark.parametrize("variant", [FP_SET01, AP_SET01], ids=lambda v: v.short_name)
@pytest.mark.parametrize("seed", [0, 1, 7])
def test_trace_budgets_follow_the_pricing_rule(variant, seed):
    cfg = GameConfig(variant, turns=7)
    trace = run_game(cfg, F(2), StrategyPolicy(), RandomSeededAdversary(), seed=seed)
    alpha = variant.alpha
    b1, b2 = F(2), F(1)
    for rec in trace.turns:
        if rec.winner is Player.P1:
            pay1, pay2 = rec.bid_p1, alpha * rec.bid_p2
        else:
            pay1, pay2 = (alpha * rec.bid_p1, rec.bid_p2)
        if variant.pricing is Pricing.FIRST_PRICE:
            pay1 = rec.bid_p1 if rec.winner is Player.P1 else F(0)
            pay2 = rec.bid_p2 if rec.winner is Player.P2 else F(0)
        b1 -= pay1
        b2 -= pay2
        assert (rec.budget_p1, rec.budget_p2) == (b1, b2)
        assert b1 >= 0 and b2 >= 0


def test_p1_overbid_is_a_fault():
    cfg = GameConfig(FP_SET01, turns=2)
    trace = run_game(cfg, F(1), FixedBidsPolicy([F(2)]), AllInAdversary())
    assert trace.winner is Player.P2
    assert trace.reason == "fault"
    assert trace.fault.player is Player.P1
    assert trace.fault.attempted_bid == 2
    assert trace.fault.budget == 1
    assert trace.turns == ()
    doc = trace.to_json_dict()
    assert doc["reason"] == "fault"
    assert doc["fault"]["player"] == "P1"


class _OverbiddingAdversary:
    def begin(self, config, budget_p1):
        pass

    def choose_value(self, state, rng):
        return 1

    def choose_bid(self, state, value, p1_bid, rng):
        return state.budget_p2 * 2


def test_adversary_overbid_is_a_fault_too():
    cfg = GameConfig(FP_SET01, turns=2)
    trace = run_game(cfg, F(1), StrategyPolicy(), _OverbiddingAdversary())
    assert trace.winner is Player.P1
    assert trace.reason == "fault"
    assert trace.fault.player is Player.P2


def test_grid_bids_enumerate_all_coarse_rationals():
    bids = _grid_bids(F(1), 2)
    assert bids == [F(0), F(1, 2), F(1)]
    bids = _grid_bids(F(3, 2), 2)
    assert bids[0] == 0 and bids[-1] == F(3, 2)
    assert all(b.denominator <= 3 for b in bids)
    assert sorted(set(bids)) == bids
    with pytest.raises(DomainError):
        _grid_bids(F(1, 3), 1)


def test_exhaustive_check_certifies_the_optimal_budget():
    cfg = GameConfig(FP_SET01, turns=3)
    verdict = exhaustive_adversary_check(cfg, F(3, 2), denominator_bound=8)
    assert verdict.win_all
    assert verdict.counterexample is None
    assert verdict.states_explored > 0


def test_exhaustive_check_finds_the_killing_line_below_the_optimum():
    cfg = GameConfig(FP_SET01, turns=3)
    verdict = exhaustive_adversary_check(cfg, F(3, 2) - F(1, 8), denominator_bound=8)
    assert not verdict.win_all
    trace = verdict.counterexample
    assert trace is not None
    assert trace.winner is Player.P2
    # The returned trace is a real playout, not just a claim.
    assert len(trace.turns) <= 3
    assert trace.config.turns == 3


def test_exhaustive_check_all_pay_variant():
    cfg = GameConfig(AP_SET01, turns=3)
    verdict = exhaustive_adversary_check(cfg, F(2), denominator_bound=8)
    assert verdict.win_all


def test_exhaustive_check_respects_its_state_budget():
    cfg = GameConfig(FP_SET01, turns=5)
    with pytest.raises(ResourceError):
        exhaustive_adversary_check(cfg, F(9, 5), denominator_bound=8, max_states=10)


def test_omnipotent_adversary_grid_unit_is_configurable():
    cfg = GameConfig(FP_SET01, turns=3)
    coarse = OmnipotentAdversary(grid_unit=F(1, 4))
    trace = run_game(cfg, F(149, 100), StrategyPolicy(), coarse)
    assert trace.winner in (Player.P1, Player.P2)
    with pytest.raises(DomainError):
        OmnipotentAdversary(grid_unit=0)


def test_match_adversary_epsilon_validation():
    with pytest.raises(DomainError):
        MatchPlusEpsilonAdversary(epsilon=0)


def test_random_adversary_bids_stay_on_its_grid():
    # Each bid is a quarter-multiple of whatever she still holds.
    cfg = GameConfig(FP_SET01, turns=9)
    trace = run_game(cfg, F(3), StrategyPolicy(), RandomSeededAdversary(bid_denominator=4), seed=5)
    held = F(1)
    for rec in trace.turns:
        assert (rec.bid_p2 * 4 / held).denominator == 1 or held == 0
        assert 0 <= rec.bid_p2 <= held
        held = rec.budget_p2
