"""Checking rankings: validity, minimality, and the largest repeated label.

A ranking assigns each vertex a label in 1..k such that any path between
two vertices with the same label passes through a strictly larger label.
Equivalently (and this is what validate checks): for every level c, no
connected component of the subgraph induced by labels <= c contains two
vertices labelled exactly c.  The level-set form runs in O(k(V+E)); the
path form is kept in the test suite as an independent oracle.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .graphs import Graph


@dataclass(frozen=True)
class Ranking:
    graph: Graph
    labels: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.labels) != self.graph.vertex_count:
            raise ValueError(
                f"ranking has {len(self.labels)} labels for {self.graph.vertex_count} vertices"
            )
        if self.graph.vertex_count == 0:
            raise ValueError("rankings of the empty graph are not supported")
        if any(l < 1 for l in self.labels):
            raise ValueError("labels must be positive integers")

    @property
    def label_count(self) -> int:
        return max(self.labels)

    def distinct_labels(self) -> list[int]:
        return sorted(set(self.labels))

    def to_json_dict(self) -> dict:
        return {"graph_hash": self.graph.graph_hash, "labels": list(self.labels)}

    def relabel(self, v: int, label: int) -> "Ranking":
        labels = list(self.labels)
        labels[v] = label
        return Ranking(self.graph, tuple(labels))


@dataclass(frozen=True)
class Violation:
    """Witness that a labelling is not a ranking.

    level is the offending label value, witnesses the two equal-labelled
    endpoints, and path a concrete connecting path whose interior labels
    are all <= level.
    """

    level: int
    witnesses: tuple[int, int]
    path: tuple[int, ...]

    def to_json_dict(self) -> dict:
        return {"level": self.level, "witnesses": list(self.witnesses), "path": list(self.path)}


def _witness_path(g: Graph, allowed: list[bool], a: int, b: int) -> tuple[int, ...]:
    # BFS from a to b inside the allowed vertex set; a path must exist.
    prev = {a: -1}
    q = deque([a])
    while q and b not in prev:
        u = q.popleft()
        for v in g.adjacency[u]:
            if allowed[v] and v not in prev:
                prev[v] = u
                q.append(v)
    path = [b]
    while path[-1] != a:
        path.append(prev[path[-1]])
    path.reverse()
    return tuple(path)


def validate(ranking: Ranking) -> Violation | None:
    """Return None for a valid ranking, or a Violation with a witness path.

    Vertices are merged level by level with union-find; two same-level
    vertices sharing a component expose a violation at that level.
    """
    g = ranking.graph
    labels = ranking.labels
    n = g.vertex_count
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    by_label: dict[int, list[int]] = {}
    for v, l in enumerate(labels):
        by_label.setdefault(l, []).append(v)

    in_level = [False] * n
    for c in sorted(by_label):
        verts = by_label[c]
        for v in verts:
            in_level[v] = True
            for w in g.adjacency[v]:
                if in_level[w]:
                    ra, rb = find(v), find(w)
                    if ra != rb:
                        parent[ra] = rb
        if len(verts) > 1:
            seen_root: dict[int, int] = {}
            for v in verts:
                r = find(v)
                if r in seen_root:
                    return Violation(c, (seen_root[r], v), _witness_path(g, in_level, seen_root[r], v))
                seen_root[r] = v
    return None


def is_valid(ranking: Ranking) -> bool:
    return validate(ranking) is None


def is_minimal(ranking: Ranking) -> bool:
    """True when no single vertex's label can be decreased and stay valid.

    Raises ValueError when called on an invalid ranking; minimality is
    only defined for rankings.
    """
    v = validate(ranking)
    if v is not None:
        raise ValueError(f"not a ranking: label {v.level} repeats along path {v.path}")
    for u in range(ranking.graph.vertex_count):
        for smaller in range(1, ranking.labels[u]):
            if validate(ranking.relabel(u, smaller)) is None:
                return False
    return True


def alpha(ranking: Ranking) -> int | None:
    """Largest label used more than once, or None when all labels are unique."""
    counts: dict[int, int] = {}
    for l in ranking.labels:
        counts[l] = counts.get(l, 0) + 1
    repeated = [l for l, k in counts.items() if k > 1]
    return max(repeated) if repeated else None
