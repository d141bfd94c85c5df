"""Closed-form and recursive rank values for narrow grids.

Everything here is arithmetic; the exact solver appears only to fill the
handful of base cases the recurrences bottom out on, and those are
computed once per process and kept immutable.  For four-row grids two
independent forms are provided (a closed form over the binary expansion
of n+1, and a halving recursion) together with a report of where they
disagree; the disagreements are real and are surfaced, not patched.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import graphs, solve

__all__ = [
    "rank_path",
    "rank_2xn",
    "rank_3xn",
    "is_special_3xn",
    "b_of",
    "rank_4xn",
    "rank_4xn_recursive",
    "bucket_4xn",
    "BoundBucket",
    "BaseTable4xn",
    "base_table_4xn",
    "Discrepancy",
    "discrepancy_report",
]


def rank_path(n: int) -> int:
    """Rank number of the path on n vertices: floor(log2 n) + 1."""
    if n < 1:
        raise ValueError("path needs at least one vertex")
    return n.bit_length()


def _solved(m: int, n: int) -> int:
    res = solve.rank_exact(graphs.build(graphs.GraphShape.grid(m, n)))
    assert res.exact
    return res.value


# Base cases below each recurrence's reach, solver-filled on first use.
_BASES_2XN: dict[int, int] = {}
_BASES_3XN: dict[int, int] = {}


def rank_2xn(n: int) -> int:
    """Rank number of the two-row grid.

    Halves with a ceiling: 2 + rank_2xn(ceil((n-2)/2)) for n >= 4.  The
    floor variant drops below the exact value at n=5 and n=7, so the
    ceiling is used; it matches the solver on every width checked.
    """
    if n < 1:
        raise ValueError("grid needs at least one column")
    if not _BASES_2XN:
        _BASES_2XN.update({w: _solved(2, w) for w in (1, 2, 3)})
    if n <= 3:
        return _BASES_2XN[n]
    return 2 + rank_2xn((n - 1) // 2)


def is_special_3xn(n: int) -> bool:
    """Widths where the three-row recurrence pays 4 instead of 3.

    The set is {15*4^k + 7*(4^k - 1)/3 + d : k >= 0, d in {1, 2}},
    i.e. 16, 17, 68, 69, 276, 277, ...
    """
    if n < 1:
        raise ValueError("grid needs at least one column")
    k = 0
    while True:
        base = 15 * 4**k + 7 * (4**k - 1) // 3
        if base + 1 > n:
            return False
        if n in (base + 1, base + 2):
            return True
        k += 1


def rank_3xn(n: int) -> int:
    """Rank number of the three-row grid.

    For n >= 6: (4 if is_special_3xn(n) else 3) + rank_3xn(ceil((n-3)/2)).
    The recurrence does not reproduce the exact values at n=4 and n=5,
    so the base table runs through n=5.
    """
    if n < 1:
        raise ValueError("grid needs at least one column")
    if not _BASES_3XN:
        _BASES_3XN.update({w: _solved(3, w) for w in (1, 2, 3, 4, 5)})
    if n <= 5:
        return _BASES_3XN[n]
    step = 4 if is_special_3xn(n) else 3
    return step + rank_3xn((n - 2) // 2)


def b_of(n: int) -> int:
    """Twice the second most significant bit of n plus the third."""
    if n < 4:
        raise ValueError("need at least three significant bits")
    s = n.bit_length()
    return 2 * ((n >> (s - 2)) & 1) + ((n >> (s - 3)) & 1)


@dataclass(frozen=True)
class BaseTable4xn:
    """Exact four-row values for n = 1..8 with per-entry provenance."""

    values: tuple[int, ...]
    provenance: tuple[str, ...]

    def value(self, n: int) -> int:
        if not 1 <= n <= len(self.values):
            raise ValueError(f"no base entry for n={n}")
        return self.values[n - 1]


_BASE4: BaseTable4xn | None = None

# n = 3..8.  Hand-checked values; the test suite re-derives 3..6 with the
# solver on every run and 7..8 in the extended tier.
_FIXED_4XN = (6, 7, 8, 8, 9, 10)


def base_table_4xn() -> BaseTable4xn:
    """The n <= 8 table, solver-filling n=1,2 on first call."""
    global _BASE4
    if _BASE4 is None:
        computed = tuple(_solved(4, w) for w in (1, 2))
        _BASE4 = BaseTable4xn(
            values=computed + _FIXED_4XN,
            provenance=("solver",) * 2 + ("fixed",) * 6,
        )
    return _BASE4


def _special_k_4xn(n: int) -> int | None:
    """k if n is 2^k + 2^(k-2) - 2 or - 1 for some k >= 3, else None."""
    for off in (2, 1):
        t = n + off
        k = t.bit_length() - 1
        if k >= 3 and t == (1 << k) + (1 << (k - 2)):
            return k
    return None


def rank_4xn(n: int) -> int:
    """Rank number of the four-row grid, closed form.

    For n > 8 the value is 4*floor(log2(n+1)) - 3 + b_of(n+1), except
    that n in {2^k + 2^(k-2) - 2, 2^k + 2^(k-2) - 1} gives 4k - 2; at
    the first of those two widths the plain closed form is one short,
    so the override is load-bearing.
    """
    if n < 1:
        raise ValueError("grid needs at least one column")
    if n <= 8:
        return base_table_4xn().value(n)
    k = _special_k_4xn(n)
    if k is not None:
        return 4 * k - 2
    t = n + 1
    return 4 * (t.bit_length() - 1) - 3 + b_of(t)


@dataclass(frozen=True)
class BoundBucket:
    """One window of the four-row staircase: ranks in [lower, upper]."""

    k: int
    i: int
    start: int
    stop: int
    lower: int
    upper: int

    def contains(self, n: int) -> bool:
        return self.start <= n < self.stop


def bucket_4xn(n: int) -> BoundBucket:
    """The bound window containing n, for n >= 5.

    With k = floor(log2(n+3)), the widths [2^k - 3, 2^(k+1) - 3) split
    at 2^k + 2^(k-2) - 3, 2^k + 2^(k-1) - 3 and 2^k + 2^(k-1) +
    2^(k-2) - 3 into four windows; window i carries the bounds
    (4k - 4 + i, 4k - 3 + i).
    """
    if n < 5:
        raise ValueError("windows start at n=5")
    k = (n + 3).bit_length() - 1
    cuts = (
        (1 << k) - 3,
        (1 << k) + (1 << (k - 2)) - 3,
        (1 << k) + (1 << (k - 1)) - 3,
        (1 << k) + (1 << (k - 1)) + (1 << (k - 2)) - 3,
        (1 << (k + 1)) - 3,
    )
    for i in range(4):
        if cuts[i] <= n < cuts[i + 1]:
            return BoundBucket(
                k=k, i=i, start=cuts[i], stop=cuts[i + 1],
                lower=4 * k - 4 + i, upper=4 * k - 3 + i,
            )
    raise AssertionError("k-window arithmetic is off")


def _in_interval_set(n: int) -> bool:
    # Widths where the halving recursion pays 5 instead of 4.
    k = (n + 3).bit_length() - 1
    lo = 1 << k
    mid = lo + (1 << (k - 1))
    hi = mid + (1 << (k - 2))
    return lo - 1 <= n <= lo or n == mid - 2 or hi - 1 <= n <= hi


def rank_4xn_recursive(n: int) -> int:
    """The halving form: (5 or 4) + rank(ceil((n-4)/2)) above the table.

    Not everywhere equal to rank_4xn; see discrepancy_report.
    """
    if n < 1:
        raise ValueError("grid needs at least one column")
    if n <= 8:
        return base_table_4xn().value(n)
    step = 5 if _in_interval_set(n) else 4
    return step + rank_4xn_recursive((n - 3) // 2)


@dataclass(frozen=True)
class Discrepancy:
    n: int
    closed: int
    recursive: int


def discrepancy_report(lo: int, hi: int) -> list[Discrepancy]:
    """All n in [lo, hi] where the two four-row forms disagree."""
    if lo < 1 or hi < lo:
        raise ValueError("need 1 <= lo <= hi")
    out = []
    for n in range(lo, hi + 1):
        c, r = rank_4xn(n), rank_4xn_recursive(n)
        if c != r:
            out.append(Discrepancy(n=n, closed=c, recursive=r))
    return out
