"""Shape declarations, graph assembly, and serialization round trips."""

from __future__ import annotations

import pytest

from rankgrid.graphs import (
    Custom,
    Graph,
    GraphShape,
    RemoveCorner,
    ShapeError,
    StickyEnd,
    build,
    staircase_triangle_map,
)


def test_path_build_counts():
    g = build(GraphShape.grid(1, 5))
    assert g.vertex_count == 5
    assert len(g.edges) == 4


def test_grid_build_counts():
    g = build(GraphShape.grid(4, 5))
    assert g.vertex_count == 20
    assert len(g.edges) == 31


def test_triangle_build_counts():
    g = build(GraphShape.triangle(5))
    assert g.vertex_count == 15
    assert len(g.edges) == 30


def test_counts_match_closed_forms_up_to_12():
    for m in range(1, 13):
        for n in range(1, 13):
            g = build(GraphShape.grid(m, n))
            assert g.vertex_count == m * n
            assert len(g.edges) == m * (n - 1) + n * (m - 1)
    for s in range(1, 13):
        g = build(GraphShape.triangle(s))
        assert g.vertex_count == s * (s + 1) // 2
        assert len(g.edges) == 3 * s * (s - 1) // 2


def test_build_is_deterministic():
    a = build(GraphShape.grid(3, 7))
    b = build(GraphShape.grid(3, 7))
    assert a.edges == b.edges and a.coords == b.coords
    assert a.graph_hash == b.graph_hash


def test_path_family_matches_one_row_grid():
    p = build(GraphShape.path(6))
    row = build(GraphShape.grid(1, 6))
    assert p.edges == row.edges
    assert p.coords == row.coords


def test_sticky_end_adds_staircase():
    m = 4
    plain = build(GraphShape.grid(m, 3))
    sticky = build(GraphShape.grid(m, 3, (StickyEnd("right"),)))
    assert sticky.vertex_count == plain.vertex_count + m * (m - 1) // 2
    # the grid survives as an induced subgraph on its own coords
    core = [sticky.index_by_coord[rc] for rc in plain.coords]
    induced, _ = sticky.induced_subgraph(core)
    assert len(induced.edges) == len(plain.edges)


def test_sticky_profile_heights():
    g = build(GraphShape.grid(4, 2, (StickyEnd("right"),)))
    by_col: dict[int, int] = {}
    for r, c in g.coords:
        if c >= 2:
            by_col[c] = by_col.get(c, 0) + 1
    assert by_col == {2: 3, 3: 2, 4: 1}


def test_sticky_alignment_rows():
    bottom = build(GraphShape.grid(4, 2, (StickyEnd("right", "bottom"),)))
    top = build(GraphShape.grid(4, 2, (StickyEnd("right", "top"),)))
    assert {rc for rc in bottom.coords if rc[1] == 4} == {(3, 4)}
    assert {rc for rc in top.coords if rc[1] == 4} == {(0, 4)}


def test_two_sticky_ends_both_sides():
    g = build(GraphShape.grid(4, 1, (StickyEnd("left"), StickyEnd("right"))))
    assert g.vertex_count == 4 + 6 + 6
    assert g.is_connected()


def test_sticky_rejections():
    with pytest.raises(ShapeError):
        GraphShape.grid(1, 5, (StickyEnd("right"),))
    with pytest.raises(ShapeError):
        GraphShape.grid(4, 5, (StickyEnd("right"), StickyEnd("right")))
    with pytest.raises(ShapeError):
        GraphShape.triangle(4).__class__("triangle", 4, 4, (StickyEnd("left"),))
    with pytest.raises(ShapeError):
        StickyEnd("north")


def test_remove_corner_counts():
    base = build(GraphShape.grid(4, 3))
    cut = build(GraphShape.grid(4, 3, (RemoveCorner("NW"),)))
    assert cut.vertex_count == base.vertex_count - 1
    assert len(cut.edges) == len(base.edges) - 2
    both = build(GraphShape.grid(4, 3, (RemoveCorner("NW"), RemoveCorner("NE"))))
    assert both.vertex_count == base.vertex_count - 2


def test_remove_corner_rejections():
    with pytest.raises(ShapeError):
        RemoveCorner("N")
    with pytest.raises(ShapeError):
        GraphShape.grid(4, 3, (RemoveCorner("NW"), RemoveCorner("NW")))
    with pytest.raises(ShapeError):
        GraphShape.grid(1, 3, (RemoveCorner("NW"),))


def test_custom_decoration_and_rejections():
    shape = GraphShape.grid(2, 2, (Custom(((0, 2),), (((0, 1), (0, 2)),)),))
    g = build(shape)
    assert g.vertex_count == 5
    clash = GraphShape.grid(2, 2, (Custom(((0, 0),), ()),))
    with pytest.raises(ShapeError):
        build(clash)


def test_shape_json_round_trip():
    shapes = [
        GraphShape.path(7),
        GraphShape.grid(4, 6),
        GraphShape.triangle(5),
        GraphShape.grid(4, 2, (StickyEnd("left", "top"), StickyEnd("right"))),
        GraphShape.grid(4, 3, (RemoveCorner("NW"), RemoveCorner("NE"))),
    ]
    for shape in shapes:
        assert GraphShape.from_json_dict(shape.to_json_dict()) == shape


def test_graph_json_round_trip():
    g = build(GraphShape.grid(3, 4, (StickyEnd("right"),)))
    back = Graph.from_json_dict(g.to_json_dict())
    assert back.vertex_count == g.vertex_count
    assert back.edges == g.edges
    assert back.coords == g.coords
    assert back.graph_hash == g.graph_hash


def test_automorphism_counts():
    # coordinate symmetries: dihedral for squares, flips for rectangles,
    # the left-right mirror for triangles
    assert len(build(GraphShape.grid(4, 4)).automorphisms) == 8
    assert len(build(GraphShape.grid(3, 5)).automorphisms) == 4
    assert len(build(GraphShape.path(2)).automorphisms) == 2
    assert len(build(GraphShape.triangle(3)).automorphisms) == 2


def test_automorphisms_preserve_edges():
    g = build(GraphShape.grid(3, 4))
    for perm in g.automorphisms:
        mapped = {(min(perm[u], perm[v]), max(perm[u], perm[v])) for u, v in g.edges}
        assert mapped == set(g.edges)


def test_disconnected_custom_rejected():
    island = GraphShape.grid(2, 2, (Custom(((5, 5),), ()),))
    with pytest.raises(ShapeError):
        build(island)


def test_staircase_triangle_map_is_edge_faithful():
    m, n = 4, 3
    g = build(GraphShape.grid(m, n, (StickyEnd("right"),)))
    mapping = staircase_triangle_map(m, n, "right", "bottom")
    tri = build(GraphShape.triangle(m))
    # bijection onto the triangle's coords
    assert sorted(mapping.values()) == sorted(tri.coords)
    # every unit edge of the glued region maps to a triangle edge
    tri_idx = tri.index_by_coord
    for a, b in g.edges:
        ca, cb = g.coords[a], g.coords[b]
        if ca in mapping and cb in mapping:
            u, v = tri_idx[mapping[ca]], tri_idx[mapping[cb]]
            assert tri.has_edge(u, v)
