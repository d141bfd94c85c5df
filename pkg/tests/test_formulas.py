"""Closed forms for 1..4 rows and the interval bracket around the 4-row one."""

from __future__ import annotations

import pytest

from rankgrid import formulas
from rankgrid.graphs import GraphShape, build
from rankgrid.solve import rank_exact


def test_path_values():
    assert [formulas.rank_path(n) for n in range(1, 9)] == [1, 2, 2, 3, 3, 3, 3, 4]
    assert formulas.rank_path(2**10 - 1) == 10
    assert formulas.rank_path(2**10) == 11


def test_two_rows_known_values():
    want = [2, 3, 4, 4, 5, 5, 6, 6, 6, 6]
    assert [formulas.rank_2xn(n) for n in range(1, 11)] == want


def test_three_rows_known_values():
    want = [2, 4, 5, 6, 6, 7, 7]
    assert [formulas.rank_3xn(n) for n in range(1, 8)] == want


def test_three_rows_special_widths_pay_four():
    # widths where the recurrence pays 4 instead of 3
    for n in (16, 17, 68, 69, 276, 277):
        assert formulas.rank_3xn(n) == 4 + formulas.rank_3xn((n - 2) // 2), n
    for n in (15, 18, 67, 70, 275, 278):
        assert formulas.rank_3xn(n) == 3 + formulas.rank_3xn((n - 2) // 2), n


def test_four_rows_base_table():
    assert [formulas.rank_4xn(n) for n in range(1, 9)] == [3, 4, 6, 7, 8, 8, 9, 10]
    table = formulas.base_table_4xn()
    assert table.provenance[:2] == ("solver", "solver")
    assert set(table.provenance[2:]) == {"fixed"}


def test_four_rows_small_table_matches_solver():
    for n in range(1, 5):
        assert formulas.rank_4xn(n) == rank_exact(build(GraphShape.grid(4, n))).value


def test_four_rows_closed_examples():
    assert formulas.rank_4xn(9) == 10
    assert formulas.rank_4xn(13) == 12
    assert formulas.rank_4xn(14) == 12
    assert formulas.rank_4xn(37) == 17
    assert formulas.rank_4xn(110) == 23
    assert formulas.rank_4xn(111) == 24


def test_four_rows_monotone_with_unit_steps():
    # below width 9 the table jumps by 2 once (n=2 to n=3); from there on
    # every step is 0 or 1
    prev = formulas.rank_4xn(1)
    for n in range(2, 5000):
        cur = formulas.rank_4xn(n)
        assert cur >= prev, n
        if n > 8:
            assert cur - prev in (0, 1), n
        prev = cur


def test_bucket_brackets_and_width():
    for n in range(9, 4097):
        b = formulas.bucket_4xn(n)
        assert b.upper - b.lower == 1
        assert b.lower <= formulas.rank_4xn(n) <= b.upper, n
        assert b.contains(n)
        assert b.start <= n < b.stop


def test_bucket_cut_positions():
    # the k=4 window: widths 13..15 sit in the third sub-interval
    b13 = formulas.bucket_4xn(13)
    b29 = formulas.bucket_4xn(29)
    assert b13.k == 4 and b29.k == 5
    assert formulas.bucket_4xn(12).i != b13.i


def test_recursive_form_matches_closed_mostly():
    same = sum(
        1 for n in range(9, 300)
        if formulas.rank_4xn_recursive(n) == formulas.rank_4xn(n)
    )
    assert same > 250


def test_discrepancy_report_documented_rows():
    rows = formulas.discrepancy_report(9, 4096)
    assert rows, "the literal recursion is known to disagree somewhere"
    as_tuples = [(d.n, d.closed, d.recursive) for d in rows]
    assert as_tuples[0] == (10, 10, 11)
    assert (18, 14, 13) in as_tuples
    assert (22, 14, 15) in as_tuples
    assert (38, 18, 17) in as_tuples
    # the family called out in the module notes: n = 2^k + 2^(k-1) - 2
    for k in (4, 5, 6, 7):
        n = 2**k + 2 ** (k - 1) - 2
        assert any(d.n == n for d in rows), n


def test_discrepancy_report_is_reproducible():
    a = formulas.discrepancy_report(9, 512)
    b = formulas.discrepancy_report(9, 512)
    assert a == b


def test_preconditions():
    with pytest.raises(ValueError):
        formulas.rank_path(0)
    with pytest.raises(ValueError):
        formulas.rank_2xn(0)
    with pytest.raises(ValueError):
        formulas.rank_3xn(-3)
    with pytest.raises(ValueError):
        formulas.rank_4xn(0)
    with pytest.raises(ValueError):
        formulas.bucket_4xn(4)
    with pytest.raises(ValueError):
        formulas.discrepancy_report(0, 5)
    with pytest.raises(ValueError):
        formulas.discrepancy_report(9, 8)
