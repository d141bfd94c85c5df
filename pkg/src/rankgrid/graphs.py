"""Grid-family graphs and their declarative shape descriptions.

Families: a path P_n (one row), a rectangular grid G_{m,n}, and a triangular
grid tri_s.  Coordinates are (row, col) pairs; rows grow downward.  The
triangle has rows 0..s-1 where row r holds columns 0..r, and each vertex
(r, c) is adjacent to (r, c+1), (r+1, c) and (r+1, c+1).

Decorations extend a grid core:

* a sticky end is a staircase of columns with heights m-1, m-2, ..., 1
  descending away from the grid.  By default each staircase keeps the
  bottom rows of the grid (align="bottom"); the top-aligned mirror also
  occurs, because slicing a grid along a descending diagonal leaves a
  bottom-aligned staircase on one side and a top-aligned one on the
  other.  Staircase vertices connect vertically inside their column and
  horizontally to the same-row vertex of the neighbouring column (plain
  unit grid edges, no diagonals).
* remove_corner deletes one corner vertex of the core.
* custom attaches explicitly listed vertices and edges.

Vertex order is canonical: core vertices row-major, then each decoration's
vertices sorted by (col, row) in declaration order.  Everything downstream
(hashes, caches, certificates) relies on this order being stable.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from functools import cached_property

Coord = tuple[int, int]

PATH = "path"
GRID = "grid"
TRIANGLE = "triangle"

CORNERS = ("NW", "NE", "SW", "SE")


class ShapeError(ValueError):
    """A GraphShape that cannot describe a legal graph."""


@dataclass(frozen=True)
class StickyEnd:
    side: str  # "left" or "right"
    align: str = "bottom"  # which grid rows the staircase keeps

    def __post_init__(self) -> None:
        if self.side not in ("left", "right"):
            raise ShapeError(f"sticky end side must be left or right, got {self.side!r}")
        if self.align not in ("bottom", "top"):
            raise ShapeError(f"sticky end align must be bottom or top, got {self.align!r}")


@dataclass(frozen=True)
class RemoveCorner:
    corner: str  # NW, NE, SW or SE

    def __post_init__(self) -> None:
        if self.corner not in CORNERS:
            raise ShapeError(f"corner must be one of {CORNERS}, got {self.corner!r}")


@dataclass(frozen=True)
class Custom:
    extra_vertices: tuple[Coord, ...]
    extra_edges: tuple[tuple[Coord, Coord], ...]

    def __init__(self, extra_vertices, extra_edges) -> None:
        object.__setattr__(self, "extra_vertices", tuple((int(r), int(c)) for r, c in extra_vertices))
        object.__setattr__(
            self,
            "extra_edges",
            tuple(((int(a[0]), int(a[1])), (int(b[0]), int(b[1]))) for a, b in extra_edges),
        )


Decoration = StickyEnd | RemoveCorner | Custom


@dataclass(frozen=True)
class GraphShape:
    """Declarative description of a graph; build() turns it into a Graph."""

    family: str
    m: int
    n: int
    decorations: tuple[Decoration, ...] = ()

    def __post_init__(self) -> None:
        if self.family not in (PATH, GRID, TRIANGLE):
            raise ShapeError(f"unknown family {self.family!r}")
        if self.family == PATH:
            if self.m != 1 or self.n < 1:
                raise ShapeError(f"path needs m=1 and n>=1, got m={self.m}, n={self.n}")
        elif self.family == GRID:
            if self.m < 1 or self.n < 1:
                raise ShapeError(f"grid needs m,n >= 1, got m={self.m}, n={self.n}")
        else:
            if self.m != self.n or self.m < 1:
                raise ShapeError(f"triangle needs m == n >= 1, got m={self.m}, n={self.n}")
        self._check_decorations()

    def _check_decorations(self) -> None:
        sticky_sides: set[str] = set()
        removed: set[str] = set()
        for dec in self.decorations:
            if isinstance(dec, StickyEnd):
                if self.family != GRID:
                    raise ShapeError(f"sticky ends attach only to the grid family, not {self.family}")
                if self.m < 2:
                    raise ShapeError("a sticky end needs at least 2 rows (its profile is m-1..1)")
                if dec.side in sticky_sides:
                    raise ShapeError(f"duplicate sticky end on side {dec.side!r}")
                sticky_sides.add(dec.side)
            elif isinstance(dec, RemoveCorner):
                if self.family != GRID:
                    raise ShapeError("remove_corner applies only to the grid family")
                if self.m < 2 or self.n < 2:
                    raise ShapeError("remove_corner needs a grid with m,n >= 2")
                if dec.corner in removed:
                    raise ShapeError(f"corner {dec.corner} removed twice")
                removed.add(dec.corner)
            elif isinstance(dec, Custom):
                pass  # validated against the assembled coords in build()
            else:
                raise ShapeError(f"unknown decoration {dec!r}")

    # Convenience constructors; these are the only spellings used in-repo.
    @staticmethod
    def path(n: int) -> "GraphShape":
        return GraphShape(PATH, 1, n)

    @staticmethod
    def grid(m: int, n: int, decorations: tuple[Decoration, ...] = ()) -> "GraphShape":
        return GraphShape(GRID, m, n, tuple(decorations))

    @staticmethod
    def triangle(s: int) -> "GraphShape":
        return GraphShape(TRIANGLE, s, s)

    def to_json_dict(self) -> dict:
        decs = []
        for dec in self.decorations:
            if isinstance(dec, StickyEnd):
                decs.append({"kind": f"sticky_end_{dec.side}", "align": dec.align})
            elif isinstance(dec, RemoveCorner):
                decs.append({"kind": "remove_corner", "which": dec.corner})
            else:
                decs.append(
                    {
                        "kind": "custom",
                        "extra_vertices": [list(v) for v in dec.extra_vertices],
                        "extra_edges": [[list(a), list(b)] for a, b in dec.extra_edges],
                    }
                )
        return {"family": self.family, "m": self.m, "n": self.n, "decorations": decs}

    @staticmethod
    def from_json_dict(data: dict) -> "GraphShape":
        decs: list[Decoration] = []
        for d in data.get("decorations", ()):
            kind = d["kind"]
            if kind == "sticky_end_left":
                decs.append(StickyEnd("left", d.get("align", "bottom")))
            elif kind == "sticky_end_right":
                decs.append(StickyEnd("right", d.get("align", "bottom")))
            elif kind == "remove_corner":
                decs.append(RemoveCorner(d["which"]))
            elif kind == "custom":
                decs.append(Custom(d["extra_vertices"], d["extra_edges"]))
            else:
                raise ShapeError(f"unknown decoration kind {kind!r}")
        return GraphShape(data["family"], data["m"], data["n"], tuple(decs))


def sticky_profile(m: int) -> list[int]:
    """Column heights of a sticky end on an m-row grid: [m-1, m-2, ..., 1]."""
    if m < 1:
        raise ShapeError(f"m must be positive, got {m}")
    return list(range(m - 1, 0, -1))


def _corner_coord(corner: str, m: int, n: int) -> Coord:
    return {
        "NW": (0, 0),
        "NE": (0, n - 1),
        "SW": (m - 1, 0),
        "SE": (m - 1, n - 1),
    }[corner]


def _sticky_coords(side: str, align: str, m: int, n: int) -> list[Coord]:
    """Staircase coords for one sticky end, sorted by (col, row)."""
    coords: list[Coord] = []
    for j in range(1, m):
        # j steps from the grid; the column keeps m-j rows
        col = n - 1 + j if side == "right" else -j
        rows = range(j, m) if align == "bottom" else range(0, m - j)
        coords.extend((r, col) for r in rows)
    coords.sort(key=lambda rc: (rc[1], rc[0]))
    return coords


@dataclass(frozen=True)
class Graph:
    """An undirected graph with canonical vertex order and planar coords.

    edges holds each edge once as (u, v) with u < v, sorted.  coords[i] is
    the (row, col) position of vertex i; positions are unique.
    """

    vertex_count: int
    edges: tuple[tuple[int, int], ...]
    coords: tuple[Coord, ...]
    shape: GraphShape | None = field(default=None, compare=False)

    @cached_property
    def edge_set(self) -> frozenset[tuple[int, int]]:
        return frozenset(self.edges)

    @cached_property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        nbrs: list[list[int]] = [[] for _ in range(self.vertex_count)]
        for u, v in self.edges:
            nbrs[u].append(v)
            nbrs[v].append(u)
        return tuple(tuple(sorted(b)) for b in nbrs)

    @cached_property
    def adjacency_masks(self) -> tuple[int, ...]:
        """Neighbour sets as bitmasks, for the solver."""
        masks = [0] * self.vertex_count
        for u, v in self.edges:
            masks[u] |= 1 << v
            masks[v] |= 1 << u
        return tuple(masks)

    @cached_property
    def index_by_coord(self) -> dict[Coord, int]:
        return {rc: i for i, rc in enumerate(self.coords)}

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self.edge_set

    def is_connected(self) -> bool:
        if self.vertex_count == 0:
            return True
        seen = {0}
        stack = [0]
        while stack:
            u = stack.pop()
            for v in self.adjacency[u]:
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        return len(seen) == self.vertex_count

    @cached_property
    def graph_hash(self) -> str:
        payload = json.dumps(
            {"vertex_count": self.vertex_count, "edges": [list(e) for e in self.edges],
             "coords": [list(c) for c in self.coords]},
            sort_keys=True, separators=(",", ":"),
        )
        return hashlib.sha256(payload.encode()).hexdigest()

    @cached_property
    def automorphisms(self) -> tuple[tuple[int, ...], ...]:
        """Coordinate symmetries of this graph, as vertex permutations.

        Only geometric candidates are tried (rectangle flips and, for equal
        extents, transposes; the row mirror for triangles).  Each candidate
        is verified to map the coord set onto itself and preserve edges, so
        the result is sound for any decorated shape.
        """
        rows = [r for r, _ in self.coords]
        cols = [c for _, c in self.coords]
        if not rows:
            return ((),)
        rsum = min(rows) + max(rows)
        csum = min(cols) + max(cols)
        candidates = [
            lambda r, c: (r, c),
            lambda r, c: (r, csum - c),
            lambda r, c: (rsum - r, c),
            lambda r, c: (rsum - r, csum - c),
        ]
        if self.shape is not None and self.shape.family == TRIANGLE:
            candidates = [lambda r, c: (r, c), lambda r, c: (r, r - c)]
        elif max(rows) - min(rows) == max(cols) - min(cols):
            off = min(rows) - min(cols)
            candidates += [
                lambda r, c: (c + off, r - off),
                lambda r, c: (c + off, csum - (r - off)),
                lambda r, c: (rsum - (c + off), r - off),
                lambda r, c: (rsum - (c + off), csum - (r - off)),
            ]
        found: list[tuple[int, ...]] = []
        for f in candidates:
            perm = []
            ok = True
            for rc in self.coords:
                img = f(*rc)
                j = self.index_by_coord.get(img)
                if j is None:
                    ok = False
                    break
                perm.append(j)
            if not ok:
                continue
            if all((min(perm[u], perm[v]), max(perm[u], perm[v])) in self.edge_set for u, v in self.edges):
                p = tuple(perm)
                if p not in found:
                    found.append(p)
        return tuple(found)

    def induced_subgraph(self, vertices: list[int]) -> tuple["Graph", list[int]]:
        """Subgraph induced on the given vertices (kept in canonical order).

        Returns the subgraph and the list mapping new index -> old index.
        """
        keep = sorted(set(vertices))
        pos = {old: new for new, old in enumerate(keep)}
        edges = tuple(
            sorted(
                (pos[u], pos[v])
                for u, v in self.edges
                if u in pos and v in pos
            )
        )
        coords = tuple(self.coords[old] for old in keep)
        return Graph(len(keep), edges, coords), keep

    def to_json_dict(self) -> dict:
        return {
            "shape": self.shape.to_json_dict() if self.shape is not None else None,
            "vertex_count": self.vertex_count,
            "edges": [list(e) for e in self.edges],
            "coords": [list(c) for c in self.coords],
        }

    @staticmethod
    def from_json_dict(data: dict) -> "Graph":
        shape = None
        if data.get("shape"):
            shape = GraphShape.from_json_dict(data["shape"])
        edges = tuple(sorted((min(u, v), max(u, v)) for u, v in data["edges"]))
        coords = tuple((int(r), int(c)) for r, c in data["coords"])
        g = Graph(int(data["vertex_count"]), edges, coords, shape)
        if shape is not None and build(shape).graph_hash != g.graph_hash:
            raise ShapeError("graph JSON does not match its embedded shape")
        return g


def _unit_edges(coords: list[Coord]) -> set[tuple[Coord, Coord]]:
    present = set(coords)
    out: set[tuple[Coord, Coord]] = set()
    for r, c in coords:
        for nr, nc in ((r, c + 1), (r + 1, c)):
            if (nr, nc) in present:
                out.add(((r, c), (nr, nc)))
    return out


def _triangle_edges(coords: list[Coord]) -> set[tuple[Coord, Coord]]:
    present = set(coords)
    out: set[tuple[Coord, Coord]] = set()
    for r, c in coords:
        for nr, nc in ((r, c + 1), (r + 1, c), (r + 1, c + 1)):
            if (nr, nc) in present:
                out.add(((r, c), (nr, nc)))
    return out


def build(shape: GraphShape) -> Graph:
    """Materialize a GraphShape into its canonical Graph.

    Raises ShapeError if the decorations are inconsistent (duplicate
    vertices or edges, dangling custom edges, or a disconnected result).
    """
    if shape.family == TRIANGLE:
        core = [(r, c) for r in range(shape.m) for c in range(r + 1)]
    else:
        core = [(r, c) for r in range(shape.m) for c in range(shape.n)]

    removed: set[Coord] = set()
    for dec in shape.decorations:
        if isinstance(dec, RemoveCorner):
            rc = _corner_coord(dec.corner, shape.m, shape.n)
            removed.add(rc)
    core = [rc for rc in core if rc not in removed]

    ordered: list[Coord] = list(core)  # row-major already
    seen = set(core)
    explicit_edges: list[tuple[Coord, Coord]] = []
    for dec in shape.decorations:
        if isinstance(dec, StickyEnd):
            for rc in _sticky_coords(dec.side, dec.align, shape.m, shape.n):
                if rc in seen:
                    raise ShapeError(f"sticky end vertex {rc} duplicates an existing vertex")
                seen.add(rc)
                ordered.append(rc)
        elif isinstance(dec, Custom):
            for rc in sorted(dec.extra_vertices, key=lambda rc: (rc[1], rc[0])):
                if rc in seen:
                    raise ShapeError(f"custom vertex {rc} duplicates an existing vertex")
                seen.add(rc)
                ordered.append(rc)
            explicit_edges.extend(dec.extra_edges)

    # Unit-rule edges cover the core and sticky staircases; custom vertices
    # are wired only by their explicit edge list.
    custom_coords = {rc for dec in shape.decorations if isinstance(dec, Custom) for rc in dec.extra_vertices}
    auto_base = [rc for rc in ordered if rc not in custom_coords]
    if shape.family == TRIANGLE:
        coord_edges = _triangle_edges(auto_base)
    else:
        coord_edges = _unit_edges(auto_base)

    for a, b in explicit_edges:
        if a not in seen or b not in seen:
            raise ShapeError(f"custom edge {a}-{b} references a missing vertex")
        if a == b:
            raise ShapeError(f"custom edge {a}-{b} is a self-loop")
        key = (min(a, b), max(a, b))
        if key in coord_edges:
            raise ShapeError(f"custom edge {a}-{b} duplicates an existing edge")
        coord_edges.add(key)

    index = {rc: i for i, rc in enumerate(ordered)}
    edges = tuple(
        sorted(
            (min(index[a], index[b]), max(index[a], index[b]))
            for a, b in coord_edges
        )
    )
    g = Graph(len(ordered), edges, tuple(ordered), shape)
    if g.vertex_count and not g.is_connected():
        raise ShapeError("decorations leave the graph disconnected")
    return g


def staircase_triangle_map(
    m: int, n: int, side: str = "right", align: str = "bottom"
) -> dict[Coord, Coord]:
    """Map a sticky end plus its adjacent full column onto tri_m coords.

    The staircase column of height m-j becomes triangle row m-1-j; every
    unit edge of the staircase lands on a triangle edge, so the staircase
    is a spanning subgraph of tri_m.  That is what lets a triangle
    ranking be copied onto it.
    """
    out: dict[Coord, Coord] = {}
    for j in range(m):  # j=0 is the adjacent full column of the grid itself
        col = n - 1 + j if side == "right" else -j
        if align == "bottom":
            for r in range(j, m):
                out[(r, col)] = (m - 1 - j, r - j)
        else:
            for r in range(0, m - j):
                out[(r, col)] = (m - 1 - j, r)
    return out
