"""Command-line interface.

Subcommands: obr (budget ratios), matrix (dump a countdown matrix), bid
(optimal bid for a state), oracle (grid min-max search), simulate (play a
game against an adversary), verify (exact DP vs closed form). Exit codes:
0 success, 1 domain/usage error, 2 resource-budget error, 3 verification
mismatch.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .core import (
    AuctionVariant,
    DomainError,
    GameConfig,
    Pricing,
    ResourceError,
    ValueModel,
)
from .matrices import build_matrix, handicap_obr, obr, verify_matrix
from .oracle import OracleInstance, evaluate, min_winning_budget
from .simulate import (
    AllInAdversary,
    MatchPlusEpsilonAdversary,
    OmnipotentAdversary,
    RandomSeededAdversary,
    StrategyPolicy,
    run_game,
)
from .strategy import optimal_bid_fraction

_VARIANTS = {
    "fp-set": (Pricing.FIRST_PRICE, ValueModel.SET01),
    "fp-fixed": (Pricing.FIRST_PRICE, ValueModel.FIXED1),
    "ap-set": (Pricing.ALL_PAY, ValueModel.SET01),
    "ap-fixed": (Pricing.ALL_PAY, ValueModel.FIXED1),
}

_ADVERSARIES = {
    "omnipotent": OmnipotentAdversary,
    "allin": AllInAdversary,
    "match": MatchPlusEpsilonAdversary,
    "random": RandomSeededAdversary,
}


class _Parser(argparse.ArgumentParser):
    """argparse parser that reports usage problems with exit code 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        raise _UsageError(message)


class _UsageError(Exception):
    pass


def _parse_fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise DomainError(f"not a number: {text!r}") from exc


def _variant_from(ns) -> AuctionVariant:
    pricing, values = _VARIANTS[ns.variant]
    alpha_text = getattr(ns, "alpha", None)
    if pricing is Pricing.FIRST_PRICE:
        if alpha_text is not None:
            raise DomainError("--alpha only applies to all-pay variants")
        return AuctionVariant(pricing, values)
    alpha = Fraction(1) if alpha_text is None else _parse_fraction(alpha_text)
    return AuctionVariant(pricing, values, alpha)


def _fmt_float(x: float) -> str:
    if x == int(x):
        return str(int(x))
    return repr(x)


def _fmt(value, exact: bool) -> str:
    if exact:
        return str(Fraction(value))
    return _fmt_float(float(value))


def _add_variant_arg(p, with_alpha: bool = True):
    p.add_argument("--variant", required=True, choices=sorted(_VARIANTS))
    if with_alpha:
        p.add_argument("--alpha", help="all-pay ratio (default 1 for ap variants)")


def build_parser() -> _Parser:
    parser = _Parser(prog="multibattle", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("obr", help="optimal budget ratio for a T-turn game")
    _add_variant_arg(p)
    p.add_argument("--turns", type=int, required=True)
    p.add_argument("--handicap", type=int, default=None, help="allowed final score deficit")
    p.add_argument("--exact", action="store_true", help="print an exact fraction")

    p = sub.add_parser("matrix", help="dump a countdown matrix")
    _add_variant_arg(p)
    p.add_argument("--size", type=int, required=True)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--exact", action="store_true")

    p = sub.add_parser("bid", help="optimal bid fraction and bid for a state")
    _add_variant_arg(p)
    p.add_argument("--i", type=int, required=True, help="wins P1 still needs")
    p.add_argument("--j", type=int, required=True, help="wins P2 still needs")
    p.add_argument("--opponent-budget", default="1", help="tracked P2 budget (default 1)")
    p.add_argument("--exact", action="store_true")

    p = sub.add_parser("oracle", help="exact grid-bid search")
    _add_variant_arg(p)
    p.add_argument("--turns", type=int, required=True)
    p.add_argument("--b2", type=int, required=True, help="P2 budget in grid units")
    p.add_argument("--b1", type=int, default=None, help="evaluate this P1 budget instead of searching")
    p.add_argument("--grid-unit", default="1", help="bid grid unit (rational)")

    p = sub.add_parser("simulate", help="play one game against an adversary")
    _add_variant_arg(p)
    p.add_argument("--turns", type=int, required=True)
    p.add_argument("--ratio", required=True, help="P1 budget as a multiple of b2=1")
    p.add_argument("--adversary", required=True, choices=sorted(_ADVERSARIES))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trace", default=None, metavar="PATH", help="write the JSON trace here")

    p = sub.add_parser("verify", help="check DP entries against the closed form (exact)")
    _add_variant_arg(p)
    p.add_argument("--size", type=int, required=True)

    return parser


def _cmd_obr(ns) -> int:
    variant = _variant_from(ns)
    if ns.handicap is not None:
        value = handicap_obr(variant, ns.turns, ns.handicap, exact=ns.exact)
    else:
        value = obr(variant, ns.turns, exact=ns.exact)
    print(_fmt(value, ns.exact))
    return 0


def _cmd_matrix(ns) -> int:
    variant = _variant_from(ns)
    matrix = build_matrix(variant, ns.size, exact=ns.exact)
    if ns.format == "csv":
        sys.stdout.write(matrix.to_csv())
    else:
        print(json.dumps(matrix.to_json_dict()))
    return 0


def _cmd_bid(ns) -> int:
    variant = _variant_from(ns)
    matrix = None
    if variant.pricing is Pricing.ALL_PAY and variant.alpha not in (0, 1):
        matrix = build_matrix(variant, max(ns.i, ns.j), exact=True)
    fraction = optimal_bid_fraction(variant, ns.i, ns.j, matrix=matrix, exact=True)
    budget = _parse_fraction(ns.opponent_budget)
    print(f"r* = {_fmt(fraction, ns.exact)}")
    print(f"bid = {_fmt(fraction * budget, ns.exact)}")
    return 0


def _cmd_oracle(ns) -> int:
    variant = _variant_from(ns)
    grid = _parse_fraction(ns.grid_unit)
    if ns.b1 is None:
        res = min_winning_budget(variant, ns.turns, ns.b2, grid_unit=grid)
        print(
            json.dumps(
                {
                    "b_star": res.b_star,
                    "ratio": float(res.ratio),
                    "nodes_expanded": res.nodes_expanded,
                }
            )
        )
    else:
        inst = OracleInstance(variant, ns.turns, Fraction(ns.b1), Fraction(ns.b2), grid)
        res = evaluate(inst)
        print(
            json.dumps(
                {
                    "b1": ns.b1,
                    "p1_can_win": res.can_win,
                    "nodes_expanded": res.nodes_expanded,
                }
            )
        )
    return 0


def _cmd_simulate(ns) -> int:
    variant = _variant_from(ns)
    config = GameConfig(variant, ns.turns)
    b1 = _parse_fraction(ns.ratio)
    trace = run_game(config, b1, StrategyPolicy(), _ADVERSARIES[ns.adversary](), seed=ns.seed)
    print(f"winner={trace.winner.value} reason={trace.reason} turns={len(trace.turns)}")
    if ns.trace is not None:
        with open(ns.trace, "w", encoding="utf-8") as fh:
            fh.write(trace.to_json(indent=2))
            fh.write("\n")
    return 0


def _cmd_verify(ns) -> int:
    variant = _variant_from(ns)
    report = verify_matrix(variant, ns.size)
    print(report.summary())
    return 0 if report.ok else 3


_COMMANDS = {
    "obr": _cmd_obr,
    "matrix": _cmd_matrix,
    "bid": _cmd_bid,
    "oracle": _cmd_oracle,
    "simulate": _cmd_simulate,
    "verify": _cmd_verify,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
        return _COMMANDS[ns.command](ns)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ResourceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
