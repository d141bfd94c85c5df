"""Ranking validation against an independent path-enumeration oracle."""

from __future__ import annotations

import random
from itertools import product

import pytest

from conftest import random_connected_graph
from rankgrid.graphs import GraphShape, build
from rankgrid.verify import Ranking, alpha, is_minimal, is_valid, validate


def oracle_valid(g, labels) -> bool:
    """Definition checked literally: every simple path between equal labels
    must contain an interior vertex with a strictly greater label."""

    def paths(a, b):
        stack = [(a, [a])]
        while stack:
            v, path = stack.pop()
            if v == b:
                yield path
                continue
            for w in g.adjacency[v]:
                if w not in path:
                    stack.append((w, path + [w]))

    n = g.vertex_count
    for a in range(n):
        for b in range(a + 1, n):
            if labels[a] != labels[b]:
                continue
            for path in paths(a, b):
                if not any(labels[v] > labels[a] for v in path[1:-1]):
                    return False
    return True


def test_known_valid_path_ranking():
    g = build(GraphShape.path(3))
    assert validate(Ranking(g, (1, 2, 1))) is None


def test_known_invalid_path_ranking():
    g = build(GraphShape.path(3))
    bad = validate(Ranking(g, (1, 1, 2)))
    assert bad is not None
    assert bad.level == 1
    assert set(bad.witnesses) == {0, 1}


def test_violation_witness_path_is_concrete():
    g = build(GraphShape.grid(2, 3))
    bad = validate(Ranking(g, (1, 2, 1, 1, 2, 1)))
    assert bad is not None
    a, b = bad.witnesses
    path = bad.path
    assert path[0] == a and path[-1] == b
    for u, v in zip(path, path[1:]):
        assert g.has_edge(u, v)
    assert all(Ranking(g, (1, 2, 1, 1, 2, 1)).labels[v] <= bad.level for v in path)


def test_validate_agrees_with_oracle_on_random_labelings(rng):
    for _ in range(120):
        n = rng.randint(2, 7)
        g = random_connected_graph(rng, n)
        labels = tuple(rng.randint(1, max(2, n - 1)) for _ in range(n))
        got = validate(Ranking(g, labels)) is None
        assert got == oracle_valid(g, labels)


def test_validate_agrees_with_oracle_exhaustively_small():
    g = build(GraphShape.grid(2, 2))
    for labels in product(range(1, 4), repeat=4):
        got = validate(Ranking(g, labels)) is None
        assert got == oracle_valid(g, labels)


def test_order_preserving_compression_keeps_validity(rng):
    # squashing the label alphabet while keeping relative order cannot
    # create a new offending path
    for _ in range(60):
        n = rng.randint(2, 7)
        g = random_connected_graph(rng, n)
        labels = tuple(rng.randint(1, 9) for _ in range(n))
        if validate(Ranking(g, labels)) is not None:
            continue
        order = {v: i + 1 for i, v in enumerate(sorted(set(labels)))}
        squashed = tuple(order[l] for l in labels)
        assert validate(Ranking(g, squashed)) is None


def test_restriction_keeps_validity():
    g = build(GraphShape.grid(2, 3))
    r = Ranking(g, (1, 3, 1, 2, 1, 4))
    assert validate(r) is None
    keep = [0, 1, 3, 4]
    sub, idx = g.induced_subgraph(keep)
    sub_labels = tuple(r.labels[v] for v in keep)
    assert validate(Ranking(sub, sub_labels)) is None
    assert idx == keep


def test_is_valid_and_label_count():
    g = build(GraphShape.path(4))
    r = Ranking(g, (1, 2, 1, 3))
    assert is_valid(r)
    assert r.label_count == 3
    assert r.distinct_labels() == [1, 2, 3]


def test_is_minimal_flags_reducible_labels():
    g = build(GraphShape.path(3))
    assert is_minimal(Ranking(g, (1, 2, 1)))
    # 9 in the middle can drop to 2: not minimal
    assert not is_minimal(Ranking(g, (1, 9, 1)))


def test_alpha_largest_repeated_label():
    g = build(GraphShape.path(5))
    r = Ranking(g, (1, 2, 1, 3, 1))
    assert alpha(r) == 1
    g2 = build(GraphShape.grid(2, 3))
    r2 = Ranking(g2, (1, 3, 2, 2, 4, 1))
    assert alpha(r2) == 2


def test_alpha_requires_a_repeat():
    g = build(GraphShape.path(2))
    r = Ranking(g, (1, 2))
    assert alpha(r) is None


def test_ranking_rejects_bad_shapes():
    g = build(GraphShape.path(3))
    with pytest.raises(ValueError):
        Ranking(g, (1, 2))
    with pytest.raises(ValueError):
        Ranking(g, (0, 1, 2))


def test_ranking_json_and_relabel():
    g = build(GraphShape.path(3))
    r = Ranking(g, (1, 2, 1))
    d = r.to_json_dict()
    assert d["labels"] == [1, 2, 1]
    assert d["graph_hash"] == g.graph_hash
    r2 = r.relabel(2, 3)
    assert r2.labels == (1, 2, 3)
    assert r.labels == (1, 2, 1)
