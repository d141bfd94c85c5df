"""Upper and lower bound evaluators for grid rank numbers.

Two constructive upper bounds for ``G_{m,n}``: the halving bound (rank a
separator column, recurse on the wider half) and the diagonal bound (cut
along a staircase diagonal, pay for a triangle ranking once).  Lower bounds
come from the square-subgrid recursion and its rational corollaries.  All of
it is arithmetic except the tiny solver calls that finish the square
recursion below side 5.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from . import formulas
from .construct import claimed_triangle_labels
from .graphs import GraphShape, build
from .solve import rank_exact

__all__ = [
    "alpert_upper",
    "tri_bound",
    "diagonal_upper",
    "crossover_threshold",
    "ComparatorReport",
    "compare_upper",
    "square_lower",
    "corollary_lower_square",
    "corollary_lower_tri",
    "SubgridFamily",
    "subgrid_family",
    "SquareFitWitness",
    "check_app_h",
]


def _formula_value(rows: int, cols: int) -> int:
    # rows <= 4 guaranteed by callers
    if rows == 1:
        return formulas.rank_path(cols)
    if rows == 2:
        return formulas.rank_2xn(cols)
    if rows == 3:
        return formulas.rank_3xn(cols)
    return formulas.rank_4xn(cols)


@lru_cache(maxsize=None)
def _best_known(m: int, n: int) -> int:
    """Value used for the r(m, n) sub-instances inside the recurrences.

    Exact wherever a closed form exists (either side at most 4), otherwise
    one more halving step.
    """
    if m == 1 or n == 1:
        return formulas.rank_path(max(m, n))
    if m <= 4:
        return _formula_value(m, n)
    if n <= 4:
        return _formula_value(n, m)
    return m + _best_known(m, n // 2)


def alpert_upper(m: int, n: int) -> int:
    """Halving upper bound: rank one column with m fresh labels, recurse.

    The recurrence is ``r(m, n) <= m + r(m, ceil((n - 1) / 2))``; the
    sub-instance is evaluated exactly when a closed form applies.  Degenerate
    single-row or single-column grids are paths and get the path value
    directly.
    """
    if m < 1 or n < 1:
        raise ValueError("grid dimensions must be positive")
    if m == 1:
        return formulas.rank_path(n)
    if n == 1:
        return formulas.rank_path(m)
    return m + _best_known(m, n // 2)


def tri_bound(m: int) -> int:
    """Label count of the stacked-row triangle ranking with m rows."""
    return claimed_triangle_labels(m)


def diagonal_upper(m: int, n: int) -> int:
    """Diagonal-cut upper bound: corner triangles plus a recursive inner grid.

    Evaluates ``m + tri_bound(m) + r(m, ceil((n - m) / 2) - 1)`` with the
    same sub-instance values as :func:`alpert_upper`.  Only applicable for
    n >= m + 2; narrower grids leave no room for the cut.
    """
    if m < 1 or n < 1:
        raise ValueError("grid dimensions must be positive")
    if n < m + 2:
        raise ValueError(f"diagonal bound needs n >= m + 2, got {m}x{n}")
    inner = -(-(n - m) // 2) - 1
    rest = _best_known(m, inner) if inner > 0 else 0
    return m + tri_bound(m) + rest


def crossover_threshold(m: int) -> float:
    """Width beyond which the diagonal bound tends to beat the halving bound.

    Closed form ``(m+1)^(3/2) * m^(1/(2m)) / (8*sqrt(2)) - 1``.  Roughly
    0.18 at m=4 and 90.8 at m=100, so the diagonal cut only pays off for
    grids that are much wider than tall.
    """
    return (m + 1) ** 1.5 * m ** (1.0 / (2 * m)) / (8.0 * math.sqrt(2.0)) - 1.0


@dataclass(frozen=True)
class ComparatorReport:
    """Concrete values of both upper bounds plus the analytic crossover."""

    m: int
    n: int
    alpert_value: int
    diagonal_value: int | None
    tighter: str
    threshold: float

    def to_json_dict(self) -> dict[str, object]:
        return {
            "m": self.m,
            "n": self.n,
            "alpert": self.alpert_value,
            "diagonal": self.diagonal_value,
            "tighter": self.tighter,
            "threshold": self.threshold,
        }


def compare_upper(m: int, n: int) -> ComparatorReport:
    """Evaluate both upper bounds and name the strictly smaller one.

    ``tighter`` is "alpert", "diagonal", or "tie"; when the diagonal bound
    is not applicable (n < m + 2) its value is None and the halving bound
    wins by default.
    """
    a = alpert_upper(m, n)
    try:
        d: int | None = diagonal_upper(m, n)
    except ValueError:
        d = None
    if d is None or a < d:
        tighter = "alpert"
    elif d < a:
        tighter = "diagonal"
    else:
        tighter = "tie"
    return ComparatorReport(
        m=m,
        n=n,
        alpert_value=a,
        diagonal_value=d,
        tighter=tighter,
        threshold=crossover_threshold(m),
    )


@lru_cache(maxsize=None)
def square_lower(m: int) -> int:
    """Lower bound for the m x m grid via the square-subgrid recursion.

    ``r(m, m) >= m + r(s, s)`` with ``s = ceil(2m/5) - 1``; the recursion
    runs while the side is at least 5 and finishes with the exact solver on
    the small remainder.  The reported value is rounded up to the rational
    corollary wherever that is tighter (first at m=14, where the bare chain
    14 -> 5 -> 1 loses ground to rounding), so the result is always the best
    lower bound this module can certify.
    """
    if m < 1:
        raise ValueError("side must be positive")
    if m < 5:
        return rank_exact(build(GraphShape.grid(m, m))).value
    recursive = m + square_lower(-(-2 * m // 5) - 1)
    return max(recursive, math.ceil(corollary_lower_square(m)), 1)


def corollary_lower_square(m: int) -> Fraction:
    """Closed-form rational lower bound 5m/3 - 25/9 for the m x m grid.

    Callers round up and clamp to >= 1; small m go negative.
    """
    return Fraction(5 * m, 3) - Fraction(25, 9)


def corollary_lower_tri(n: int) -> Fraction:
    """Closed-form rational lower bound (5/3)*floor(n/2) - 34/9 for tri_n."""
    return Fraction(5, 3) * (n // 2) - Fraction(34, 9)


@dataclass(frozen=True)
class SubgridFamily:
    """Nested family of subgrids witnessing the square lower bound.

    Member 0 is the base grid (m, ceil((m-k)/2)); each extension trades two
    rows for one column until the row count hits zero.
    """

    m: int
    k: int
    members: tuple[tuple[int, int], ...]

    @property
    def in_regime(self) -> bool:
        """True when k sits in the range the lower-bound argument needs."""
        return 2 <= self.k <= (self.m + 2) // 3

    def to_json_dict(self) -> dict[str, object]:
        return {
            "m": self.m,
            "k": self.k,
            "members": [list(d) for d in self.members],
            "in_regime": self.in_regime,
        }


def subgrid_family(m: int, k: int) -> SubgridFamily:
    """List the base subgrid and its extensions for the given m and k.

    The family is computed for any positive m and k; queries outside the
    argument's regime are flagged via ``in_regime`` rather than rejected.
    """
    if m < 1 or k < 1:
        raise ValueError("m and k must be positive")
    y0 = -(-(m - k) // 2)
    members = [(m, y0)]
    t = 0
    while 2 * k - 3 - 2 * t > 0:
        members.append((2 * k - 3 - 2 * t, y0 + t))
        t += 1
    return SubgridFamily(m=m, k=k, members=tuple(members))


@dataclass(frozen=True)
class SquareFitWitness:
    """Dimensions of the first family extension versus the square it must hold."""

    m: int
    k: int
    dims: tuple[int, int]
    target: int

    @property
    def ok(self) -> bool:
        return min(self.dims) >= self.target

    def __bool__(self) -> bool:
        return self.ok

    def to_json_dict(self) -> dict[str, object]:
        return {
            "m": self.m,
            "k": self.k,
            "dims": list(self.dims),
            "target": self.target,
            "ok": self.ok,
        }


def check_app_h(m: int) -> SquareFitWitness:
    """Check that the deepest useful extension still contains the next square.

    With ``k = floor((m-1)/5) + 2`` the first extension has dimensions
    ``(2k-3, ceil((m-k)/2))``; the recursion in :func:`square_lower` needs a
    square of side ``ceil(2m/5) - 1`` inside it.  Returns the dimension pair
    as witness; truthiness reports the containment.
    """
    if m < 5:
        raise ValueError("defined for m >= 5")
    k = (m - 1) // 5 + 2
    dims = (2 * k - 3, -(-(m - k) // 2))
    target = -(-2 * m // 5) - 1
    return SquareFitWitness(m=m, k=k, dims=dims, target=target)
