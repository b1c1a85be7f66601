"""Countdown matrices: minimum budget ratios indexed by countdown pairs.

Entry (i, j) is the smallest ratio of P1's budget to P2's budget that
guarantees P1 the win from a state where P1 still needs i value-1 wins and
P2 needs j. Each of the four variants (value model x pricing) has its own
recurrence; the two value-set variants are upper triangular (with i > j the
adversary can zero out every turn P1 could take, so no budget suffices),
the two fixed-value variants are full grids.

Row and column 1 are the bases. The diagonal of a triangular matrix obeys
``x[i][i] = 1 + x[i-1][i]`` (P1 must take the next contested turn at P2's
full budget), and every other entry is fixed by the indifference between
winning and losing the turn at the optimal bid fraction:

    first-price:  x[i][j] = x[i][j-1] * (1 + x[i-1][j]) / (1 + x[i][j-1])
    all-pay:      x[i][j] = x[i-1][j] + (x[i][j-1] - x[i-1][j])
                                        / (x[i][j-1] + 1 - alpha)

Closed forms exist for every first-price variant and for all-pay at
alpha in {0, 1}; ``verify_matrix`` checks the dynamic program against them
entry by entry in exact arithmetic.

The fixed-value all-pay matrix at general alpha is an extension derived
from the same indifference argument; it is only closed-form-verified at
its alpha in {0, 1} endpoints and is flagged accordingly in reports.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from fractions import Fraction

from .core import (
    UNWINNABLE,
    AuctionVariant,
    DomainError,
    NoClosedFormError,
    Pricing,
    Ratio,
    Unwinnable,
    ValueModel,
    ceil_div,
)


class CountdownMatrix:
    """Filled grid of budget ratios for one variant.

    Rows are indexed 1..n with a virtual all-zero row 0 (a player who
    needs nothing wins for free). For triangular variants, entries with
    i > j read as the UNWINNABLE sentinel.
    """

    def __init__(self, variant: AuctionVariant, n: int, rows: list[list], exact: bool):
        self.variant = variant
        self.n = n
        self.exact = exact
        self._rows = rows

    def entry(self, i: int, j: int) -> Ratio:
        if not (0 <= i <= self.n and 1 <= j <= self.n):
            raise DomainError(f"entry ({i}, {j}) outside matrix of size {self.n}")
        if i == 0:
            return self._rows[0][j]
        if self.variant.is_triangular and i > j:
            return UNWINNABLE
        return self._rows[i][j]

    def defined_entries(self):
        """Yield (i, j, value) over all defined entries, row-major."""
        for i in range(1, self.n + 1):
            start = i if self.variant.is_triangular else 1
            row = self._rows[i]
            for j in range(start, self.n + 1):
                yield i, j, row[j]

    def _cell_text(self, i: int, j: int) -> str:
        v = self.entry(i, j)
        if isinstance(v, Unwinnable):
            return "inf"
        if self.exact:
            return str(v)
        return format(v, ".17g")

    def to_csv(self) -> str:
        out = io.StringIO()
        out.write("i\\j," + ",".join(str(j) for j in range(1, self.n + 1)) + "\n")
        for i in range(1, self.n + 1):
            cells = [self._cell_text(i, j) for j in range(1, self.n + 1)]
            out.write(f"{i}," + ",".join(cells) + "\n")
        return out.getvalue()

    def to_json_dict(self) -> dict:
        def cell(i, j):
            v = self.entry(i, j)
            if isinstance(v, Unwinnable):
                return None
            if self.exact:
                return str(v)
            return v

        return {
            "variant": self.variant.short_name,
            "alpha": float(self.variant.alpha),
            "n": self.n,
            "entries": [
                [cell(i, j) for j in range(1, self.n + 1)] for i in range(1, self.n + 1)
            ],
        }


def _fill_set01_first_price(n: int, exact: bool) -> list[list]:
    zero = Fraction(0) if exact else 0.0
    one = Fraction(1) if exact else 1.0
    rows: list[list] = [[zero] * (n + 1)]
    row1 = [zero] * (n + 1)
    for j in range(1, n + 1):
        row1[j] = Fraction(1, j) if exact else 1.0 / j
    rows.append(row1)
    for i in range(2, n + 1):
        above = rows[i - 1]
        row = [zero] * (n + 1)
        left = one + above[i]
        row[i] = left
        for j in range(i + 1, n + 1):
            left = left * (one + above[j]) / (one + left)
            row[j] = left
        rows.append(row)
    return rows


def _fill_set01_all_pay(n: int, alpha: Fraction, exact: bool) -> list[list]:
    zero = Fraction(0) if exact else 0.0
    one = Fraction(1) if exact else 1.0
    a = alpha if exact else float(alpha)
    keep = one - a  # loser's surviving share of a bid
    rows: list[list] = [[zero] * (n + 1)]
    for i in range(1, n + 1):
        above = rows[i - 1]
        row = [zero] * (n + 1)
        left = one + above[i]
        row[i] = left
        for j in range(i + 1, n + 1):
            up = above[j]
            left = (left * up + left - a * up) / (left + keep)
            row[j] = left
        rows.append(row)
    return rows


def _fill_fixed1_first_price(n: int, exact: bool) -> list[list]:
    zero = Fraction(0) if exact else 0.0
    one = Fraction(1) if exact else 1.0
    rows: list[list] = [[zero] * (n + 1)]
    row1 = [zero] * (n + 1)
    for j in range(1, n + 1):
        row1[j] = Fraction(1, j) if exact else 1.0 / j
    rows.append(row1)
    for i in range(2, n + 1):
        above = rows[i - 1]
        row = [zero] * (n + 1)
        left = Fraction(i) if exact else float(i)
        row[1] = left
        for j in range(2, n + 1):
            left = left * (one + above[j]) / (one + left)
            row[j] = left
        rows.append(row)
    return rows


def _fill_fixed1_all_pay(n: int, alpha: Fraction, exact: bool) -> list[list]:
    zero = Fraction(0) if exact else 0.0
    one = Fraction(1) if exact else 1.0
    a = alpha if exact else float(alpha)
    keep = one - a
    rows: list[list] = [[zero] * (n + 1)]
    row1 = [zero] * (n + 1)
    left = one
    row1[1] = left
    for j in range(2, n + 1):
        left = left / (left + keep)
        row1[j] = left
    rows.append(row1)
    for i in range(2, n + 1):
        above = rows[i - 1]
        row = [zero] * (n + 1)
        left = Fraction(i) if exact else float(i)
        row[1] = left
        for j in range(2, n + 1):
            up = above[j]
            left = up + (left - up) / (left + keep)
            row[j] = left
        rows.append(row)
    return rows


def build_matrix(variant: AuctionVariant, n: int, exact: bool = False) -> CountdownMatrix:
    """Build the countdown matrix of size n for the given variant.

    O(n^2) entry computations; fill is row-major with the diagonal first
    in each row (each entry needs only its left and upper neighbours).
    """
    if n < 1:
        raise DomainError(f"matrix size must be >= 1, got {n}")
    if variant.values is ValueModel.SET01:
        if variant.pricing is Pricing.FIRST_PRICE:
            rows = _fill_set01_first_price(n, exact)
        else:
            rows = _fill_set01_all_pay(n, variant.alpha, exact)
    else:
        if variant.pricing is Pricing.FIRST_PRICE:
            rows = _fill_fixed1_first_price(n, exact)
        else:
            rows = _fill_fixed1_all_pay(n, variant.alpha, exact)
    return CountdownMatrix(variant, n, rows, exact)


def closed_form(variant: AuctionVariant, i: int, j: int, exact: bool = False) -> Ratio:
    """Closed-form matrix entry, where one exists.

    set01 first-price:        i * (j - i + 3) / ((j - i + 1) * (j + 2))
    set01 all-pay, alpha=1:   1 + (i - 1) * (j - i + 3) / ((j - i + 1) * (j + 1))
    fixed first-price:        i / j
    fixed all-pay, alpha=1:   (i + j - 1) / j

    All-pay with alpha=0 reduces to the first-price form of the same value
    model; other alphas have no closed form and raise NoClosedFormError.
    Triangular variants return UNWINNABLE for i > j.
    """
    if i < 1 or j < 1:
        raise DomainError(f"closed form needs i, j >= 1, got ({i}, {j})")
    alpha = variant.alpha
    if variant.pricing is Pricing.ALL_PAY and alpha not in (0, 1):
        raise NoClosedFormError(
            f"no closed form for all-pay with alpha={alpha}; build the matrix instead"
        )
    effective_first_price = (
        variant.pricing is Pricing.FIRST_PRICE
        or (variant.pricing is Pricing.ALL_PAY and alpha == 0)
    )
    if variant.values is ValueModel.SET01:
        if i > j:
            return UNWINNABLE
        if effective_first_price:
            val = Fraction(i * (j - i + 3), (j - i + 1) * (j + 2))
        else:
            val = 1 + Fraction((i - 1) * (j - i + 3), (j - i + 1) * (j + 1))
    else:
        if effective_first_price:
            val = Fraction(i, j)
        else:
            val = Fraction(i + j - 1, j)
    return val if exact else float(val)


def _diagonal_entry(variant: AuctionVariant, h: int, exact: bool) -> Ratio:
    try:
        return closed_form(variant, h, h, exact=exact)
    except NoClosedFormError:
        return build_matrix(variant, h, exact=exact).entry(h, h)


def obr(variant: AuctionVariant, turns: int, exact: bool = False) -> Ratio:
    """Optimal budget ratio for a fresh game of the given length.

    A fresh T-turn game sits at countdown pair (ceil(T/2), ceil(T/2)).
    """
    if turns < 1:
        raise DomainError(f"turns must be >= 1, got {turns}")
    h = ceil_div(turns, 2)
    return _diagonal_entry(variant, h, exact)


def handicap_obr(variant: AuctionVariant, turns: int, k: int, exact: bool = False) -> Ratio:
    """Budget ratio guaranteeing P1 finishes at most k points behind.

    The relaxed objective shifts the start to countdown pair
    (ceil((T-k)/2), ceil((T+k)/2)); a nonpositive first index means P1
    needs nothing, so the ratio is 0.
    """
    if turns < 1:
        raise DomainError(f"turns must be >= 1, got {turns}")
    if k < 0:
        raise DomainError(f"handicap must be nonnegative, got {k}")
    i = ceil_div(turns - k, 2)
    j = ceil_div(turns + k, 2)
    if i <= 0:
        return Fraction(0) if exact else 0.0
    try:
        return closed_form(variant, i, j, exact=exact)
    except NoClosedFormError:
        return build_matrix(variant, j, exact=exact).entry(i, j)


@dataclass(frozen=True)
class MatrixVerifyReport:
    """Outcome of an exact DP-versus-closed-form sweep."""

    variant: AuctionVariant
    n: int
    ok: bool
    entries_checked: int
    first_mismatch: tuple[int, int, Fraction, Fraction] | None = None

    def summary(self) -> str:
        name = self.variant.short_name
        if self.ok:
            return f"{name} n={self.n}: {self.entries_checked} entries match closed form"
        i, j, dp, cf = self.first_mismatch
        return f"{name} n={self.n}: mismatch at ({i}, {j}): dp={dp} closed={cf}"


def verify_matrix(variant: AuctionVariant, n: int) -> MatrixVerifyReport:
    """Check every defined DP entry against the closed form, exactly.

    Raises NoClosedFormError for variants without one (all-pay with
    alpha outside {0, 1}).
    """
    closed_form(variant, 1, 1, exact=True)  # fail fast if no closed form
    matrix = build_matrix(variant, n, exact=True)
    checked = 0
    for i, j, value in matrix.defined_entries():
        expect = closed_form(variant, i, j, exact=True)
        checked += 1
        if value != expect:
            return MatrixVerifyReport(variant, n, False, checked, (i, j, value, expect))
    return MatrixVerifyReport(variant, n, True, checked)
