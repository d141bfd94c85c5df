"""Constructive certificates: staircase merges, cuts, triangles, chains."""

from __future__ import annotations

import pytest

from rankgrid import construct, formulas
from rankgrid.graphs import GraphShape, ShapeError, build
from rankgrid.solve import rank_exact
from rankgrid.verify import validate


def test_staircase_shapes():
    one = construct.one_sticky_shape(5)
    assert one.m == 4 and one.n == 5 and len(one.decorations) == 1
    two = construct.two_sticky_shape(4, anti=True)
    sides = {d.side for d in two.decorations}
    aligns = {d.align for d in two.decorations}
    assert sides == {"left", "right"}
    assert aligns == {"bottom", "top"}
    both_bottom = construct.two_sticky_shape(4, anti=False)
    assert {d.align for d in both_bottom.decorations} == {"bottom"}


def test_base_rankings_hit_their_budgets():
    for width, lam in [(3, 6), (4, 7), (5, 8)]:
        r = construct.base_ranking(construct.one_sticky_shape(width), lam)
        assert validate(r) is None
        assert r.label_count == lam


def test_two_staircase_bases_alternate_classes():
    # exact class values for 4-row double-staircase grids: the cheaper
    # alignment flips with parity of the width
    for width, lam, anti in [(1, 5, False), (2, 6, True), (3, 7, False), (4, 8, True)]:
        r = construct.base_ranking(construct.two_sticky_shape(width, anti=anti), lam)
        assert validate(r) is None
        assert r.label_count == lam


def test_merge_two_sticky_doubles_width():
    b = construct.base_ranking(construct.two_sticky_shape(2, anti=True), 6)
    merged = construct.merge_two_sticky(b)
    assert validate(merged) is None
    shape = merged.graph.shape
    assert shape.n == 2 * 2 + 4
    assert merged.label_count == 6 + 4
    again = construct.merge_two_sticky(merged)
    assert validate(again) is None
    assert again.graph.shape.n == 2 * 8 + 4
    assert again.label_count == 14


def test_merge_handles_aligned_inputs_too():
    b = construct.base_ranking(construct.two_sticky_shape(3, anti=False), 7)
    merged = construct.merge_two_sticky(b)
    assert validate(merged) is None
    assert merged.graph.shape.n == 10
    assert merged.label_count == 11


def test_merging_lemma_output_pair():
    a = construct.base_ranking(construct.one_sticky_shape(3), 6)
    b = construct.base_ranking(construct.two_sticky_shape(2, anti=True), 6)
    out1, closed = construct.merging_lemma(a, b)
    assert validate(out1) is None and validate(closed) is None
    assert out1.graph.shape.n == 2 * 3 + 3
    assert out1.label_count == 10
    assert closed.graph.shape == GraphShape.grid(4, 4 * 3 + 10)
    assert closed.label_count == 14
    # the closure width 22 is a run endpoint: the labels are optimal
    assert formulas.rank_4xn(22) == 14


def test_vertical_cut_even_and_odd():
    sub = rank_exact(build(GraphShape.grid(3, 3))).certificate
    for n in (6, 7):
        out = construct.vertical_cut(3, n, sub)
        assert validate(out) is None
        assert out.label_count == sub.label_count + 3
        assert out.graph.shape == GraphShape.grid(3, n)


def test_vertical_cut_rejects_wrong_sub():
    sub = rank_exact(build(GraphShape.grid(3, 2))).certificate
    with pytest.raises(ShapeError):
        construct.vertical_cut(3, 7, sub)


def test_vertical_cut_known_totals():
    sub = rank_exact(build(GraphShape.grid(4, 4))).certificate
    assert sub.label_count == 7
    out = construct.vertical_cut(4, 9, sub)
    assert validate(out) is None
    assert out.label_count == 11

    tiny = construct.vertical_cut(1, 3, rank_exact(build(GraphShape.grid(1, 1))).certificate)
    assert validate(tiny) is None
    assert tiny.graph.shape == GraphShape.grid(1, 3)
    assert tiny.label_count == 2

    # doubling from a width-30 run endpoint lands back on the closed form
    base = construct.four_row_certificate(30).final
    assert base.label_count == formulas.rank_4xn(30) == 16
    wide = construct.vertical_cut(4, 61, base)
    assert validate(wide) is None
    assert wide.label_count == 20 == formulas.rank_4xn(61)


def test_triangle_ranking_small_exact():
    want = {1: 1, 2: 3, 3: 4, 4: 6, 5: 8, 6: 9}
    for s, lam in want.items():
        r = construct.triangle_ranking(s)
        assert validate(r) is None
        assert r.label_count == lam


def test_triangle_ranking_validates_larger():
    for s in (7, 10, 16):
        r = construct.triangle_ranking(s)
        assert validate(r) is None
        assert r.graph.vertex_count == s * (s + 1) // 2


def test_claimed_triangle_labels_closed_form():
    assert [construct.claimed_triangle_labels(s) for s in range(1, 9)] == [
        1, 3, 3, 5, 7, 9, 9, 11,
    ]


def test_triangle_report_shape_and_gap():
    rows = construct.triangle_report(10)
    assert [r.s for r in rows] == list(range(1, 11))
    for row in rows:
        assert row.achieved >= 1
    # by s=7 the stacked-row recursion's claim is no longer achieved
    assert rows[6].achieved > rows[6].claimed
    assert rows[3].claimed == 5 and rows[3].achieved == 6


def test_safe_triangle_ranking_counts():
    for m, lam in [(2, 3), (3, 4), (4, 6)]:
        r = construct.safe_triangle_ranking(m)
        assert validate(r) is None
        assert r.label_count == lam


def test_diagonal_cut_matches_known_totals():
    inner = rank_exact(build(GraphShape.grid(4, 4))).certificate
    tri = construct.safe_triangle_ranking(4)
    out = construct.diagonal_cut(4, 14, inner, tri)
    assert validate(out) is None
    assert out.label_count == inner.label_count + tri.label_count + 4 == 17
    odd = construct.diagonal_cut(4, 13, inner, tri)
    assert validate(odd) is None
    assert odd.label_count == 17


def test_diagonal_cut_three_rows():
    # width 7 leaves room for a single inner column
    inner = rank_exact(build(GraphShape.grid(3, 1))).certificate
    tri = construct.safe_triangle_ranking(3)
    out = construct.diagonal_cut(3, 7, inner, tri)
    assert validate(out) is None
    assert out.label_count == inner.label_count + tri.label_count + 3 == 9


def test_diagonal_cut_rejects_unsafe_triangle():
    # an exact triangle ranking that is not glue-safe must be refused,
    # not silently assembled into a broken certificate
    inner = rank_exact(build(GraphShape.grid(4, 4))).certificate
    unsafe = construct.triangle_ranking(4)
    if construct._glue_safe(unsafe):
        pytest.skip("solver happened to return a glue-safe certificate")
    with pytest.raises(ValueError):
        construct.diagonal_cut(4, 14, inner, unsafe)


def test_diagonal_cut_rejects_bad_dims():
    inner = rank_exact(build(GraphShape.grid(4, 4))).certificate
    tri = construct.safe_triangle_ranking(4)
    with pytest.raises(ShapeError):
        construct.diagonal_cut(4, 5, inner, tri)


def test_ruler_ranking_family():
    for k, (width, lam) in {3: (7, 9), 4: (17, 13), 5: (37, 17)}.items():
        r = construct.ruler_ranking(k)
        assert validate(r) is None
        assert r.graph.shape == GraphShape.grid(4, width)
        assert r.label_count == lam
        assert formulas.rank_4xn(width) == lam


def test_restrict_columns():
    r = construct.ruler_ranking(3)
    cut = construct.restrict_columns(r, 5)
    assert validate(cut) is None
    assert cut.graph.shape == GraphShape.grid(4, 5)
    # restriction never adds labels but can keep extras when it crosses
    # a run boundary; width 5 retains all 9 of the width-7 ranking
    assert cut.label_count <= r.label_count
    with pytest.raises(ShapeError):
        construct.restrict_columns(r, 8)


def test_four_row_certificate_endpoint_and_interior():
    # 10 is a run endpoint, 11 is not
    end = construct.four_row_certificate(10)
    assert end.labels == formulas.rank_4xn(10) == 10
    assert end.steps[-1].name != "restrict"
    mid = construct.four_row_certificate(11)
    assert mid.steps[-1].name == "restrict"
    assert mid.labels == formulas.rank_4xn(11)
    assert validate(mid.final) is None


def test_chain_manifest_serializes():
    chain = construct.four_row_certificate(6)
    d = chain.to_json_dict()
    assert d["ranking"]["labels"] == list(chain.final.labels)
    assert [s["name"] for s in d["steps"]] == [s.name for s in chain.steps]
    assert d["graph"]["vertex_count"] == chain.final.graph.vertex_count


def test_run_endpoint_certificates_small():
    # k_max = 4 admits endpoints up to 2^5 - 3 = 29; the last one that
    # fits is 26, and interior widths 27..29 belong to the next run
    chains = construct.run_endpoint_certificates(4)
    widths = sorted(c.width for c in chains)
    assert widths == list(range(1, 26 + 1))
    by_width = {c.width: c for c in chains}
    for n in (6, 10, 14, 22, 26):
        assert by_width[n].labels == formulas.rank_4xn(n)
    for c in chains:
        # interior widths share their run's value, so restriction is tight
        assert c.labels == formulas.rank_4xn(c.width)
        assert validate(c.final) is None
