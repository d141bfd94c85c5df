"""Shared helpers: seeded random graphs used by the oracle suites."""

from __future__ import annotations

import random

import pytest

from rankgrid.graphs import Graph


def random_connected_graph(rng: random.Random, n: int) -> Graph:
    """Uniform-ish connected graph: a random spanning tree plus extra edges."""
    edges: set[tuple[int, int]] = set()
    order = list(range(n))
    rng.shuffle(order)
    for i in range(1, n):
        a, b = order[rng.randrange(i)], order[i]
        edges.add((min(a, b), max(a, b)))
    extra = rng.randrange(0, n) if n > 1 else 0
    for _ in range(extra):
        a, b = rng.sample(range(n), 2) if n > 1 else (0, 0)
        if a != b:
            edges.add((min(a, b), max(a, b)))
    # coords only matter for rendering; a single row keeps them unique
    return Graph(n, tuple(sorted(edges)), tuple((0, i) for i in range(n)))


@pytest.fixture
def rng() -> random.Random:
    return random.Random(0xC0FFEE)
