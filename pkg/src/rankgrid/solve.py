"""Exact rank-number computation.

Two independent routes:

* rank_exact / rank_decision run a separator recursion: the rank of a
  connected graph is 1 + min over vertices v of the max rank among the
  components left after deleting v.  Subproblems are connected vertex
  subsets, memoized as bitmasks (canonicalized under the graph's
  geometric automorphisms) with [lb, ub] intervals.
* brute_force enumerates labelings outright with backtracking.  It knows
  nothing about separators and serves as the oracle for the engine.

Both respect wall-clock / node budgets.  Budget exhaustion is never
silent: rank_exact degrades to a proven interval with the flag set,
rank_decision reports "unknown".
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from .graphs import Graph
from .verify import Ranking, validate

__all__ = [
    "Budget",
    "RankResult",
    "DecisionOutcome",
    "rank_exact",
    "rank_decision",
    "brute_force",
]


@dataclass(frozen=True)
class Budget:
    """Caps on a solver call; None means unlimited."""

    seconds: float | None = None
    nodes: int | None = None

    def __post_init__(self) -> None:
        if self.seconds is not None and self.seconds <= 0:
            raise ValueError(f"budget seconds must be positive, got {self.seconds}")
        if self.nodes is not None and self.nodes <= 0:
            raise ValueError(f"budget nodes must be positive, got {self.nodes}")


@dataclass(frozen=True)
class RankResult:
    """Outcome of an exact computation.

    lb == ub when solved; otherwise the pair is a proven interval and
    budget_exhausted is set.  certificate, when present, is a valid
    ranking with exactly ub labels.
    """

    lb: int
    ub: int
    method: str
    certificate: Ranking | None
    elapsed: float
    budget_exhausted: bool = False

    @property
    def exact(self) -> bool:
        return self.lb == self.ub

    @property
    def value(self) -> int:
        if not self.exact:
            raise ValueError(f"no exact value, only the interval [{self.lb}, {self.ub}]")
        return self.lb

    def to_json_dict(self) -> dict:
        out: dict = {"method": self.method, "elapsed": round(self.elapsed, 6),
                     "budget_exhausted": self.budget_exhausted}
        if self.exact:
            out["value"] = self.lb
        else:
            out["interval"] = [self.lb, self.ub]
        if self.certificate is not None:
            out["labels"] = list(self.certificate.labels)
        return out


@dataclass(frozen=True)
class DecisionOutcome:
    """rank_decision result: a certificate, a proven 'no', or budget out."""

    ranking: Ranking | None
    proven: bool
    budget_exhausted: bool
    elapsed: float

    @property
    def feasible(self) -> bool | None:
        if self.ranking is not None:
            return True
        return False if self.proven else None


class _BudgetExhausted(Exception):
    pass


def _popcount(x: int) -> int:
    return x.bit_count() if hasattr(x, "bit_count") else bin(x).count("1")


class _Engine:
    """Separator-recursion search over connected bitmask subproblems."""

    def __init__(self, graph: Graph, budget: Budget | None = None) -> None:
        self.g = graph
        self.n = graph.vertex_count
        self.adj = list(graph.adjacency_masks)
        self.memo: dict[int, tuple[int, int]] = {}
        self.nodes = 0
        self._node_limit = budget.nodes if budget else None
        self._deadline = (time.monotonic() + budget.seconds) if budget and budget.seconds else None
        # static tie-break: central vertices first (good separators early)
        if self.n:
            rows = [r for r, _ in graph.coords]
            cols = [c for _, c in graph.coords]
            cr = (min(rows) + max(rows)) / 2
            cc = (min(cols) + max(cols)) / 2
            cent = [abs(r - cr) + abs(c - cc) for r, c in graph.coords]
            self.static_order = sorted(range(self.n), key=lambda v: (cent[v], v))
            self.static_pos = [0] * self.n
            for i, v in enumerate(self.static_order):
                self.static_pos[v] = i
        self._perm_tables = self._build_perm_tables()

    # -- symmetry ---------------------------------------------------------

    def _build_perm_tables(self) -> list[list[list[int]]]:
        """Per-byte lookup tables for each nontrivial automorphism."""
        tables = []
        for perm in self.g.automorphisms:
            if perm == tuple(range(self.n)):
                continue
            nbytes = (self.n + 7) // 8
            tab = []
            for byte_idx in range(nbytes):
                row = []
                for byte in range(256):
                    out = 0
                    b = byte
                    while b:
                        low = b & -b
                        v = byte_idx * 8 + low.bit_length() - 1
                        if v < self.n:
                            out |= 1 << perm[v]
                        b ^= low
                    row.append(out)
                tab.append(row)
            tables.append(tab)
        return tables

    def canon(self, mask: int) -> int:
        best = mask
        for tab in self._perm_tables:
            img = 0
            m = mask
            i = 0
            while m:
                img |= tab[i][m & 0xFF]
                m >>= 8
                i += 1
            if img < best:
                best = img
        return best

    # -- plumbing ---------------------------------------------------------

    def tick(self) -> None:
        self.nodes += 1
        if self._node_limit is not None and self.nodes > self._node_limit:
            raise _BudgetExhausted()
        if self._deadline is not None and self.nodes % 256 == 0 and time.monotonic() > self._deadline:
            raise _BudgetExhausted()

    def components(self, mask: int) -> list[int]:
        comps = []
        rem = mask
        while rem:
            comp = rem & -rem
            frontier = comp
            while frontier:
                nxt = 0
                f = frontier
                while f:
                    b = f & -f
                    f ^= b
                    nxt |= self.adj[b.bit_length() - 1]
                frontier = nxt & mask & ~comp
                comp |= frontier
            comps.append(comp)
            rem &= ~comp
        return comps

    def path_lb(self, mask: int) -> int:
        """Bit-length bound from a longest shortest path (double BFS sweep)."""
        far = self._bfs_far(mask, mask & -mask)
        d = self._bfs_depth(mask, far)
        return (d + 1).bit_length()

    def _bfs_far(self, mask: int, src: int) -> int:
        seen = src
        frontier = src
        last = src
        while frontier:
            nxt = 0
            f = frontier
            while f:
                b = f & -f
                f ^= b
                nxt |= self.adj[b.bit_length() - 1]
            nxt &= mask & ~seen
            if nxt:
                last = nxt
            seen |= nxt
            frontier = nxt
        return last & -last

    def _bfs_depth(self, mask: int, src: int) -> int:
        seen = src
        frontier = src
        d = 0
        while frontier:
            nxt = 0
            f = frontier
            while f:
                b = f & -f
                f ^= b
                nxt |= self.adj[b.bit_length() - 1]
            nxt &= mask & ~seen
            if nxt:
                d += 1
            seen |= nxt
            frontier = nxt
        return d

    def candidates(self, mask: int) -> list[int]:
        """Branch vertices: degree >= 2 inside the mask when possible,
        densest and most central first."""
        verts = []
        m = mask
        while m:
            b = m & -m
            m ^= b
            verts.append(b.bit_length() - 1)
        degs = {v: _popcount(self.adj[v] & mask) for v in verts}
        if any(d >= 2 for d in degs.values()):
            # deleting a degree-1 vertex is never better than deleting its
            # neighbour, so leaves are skipped
            verts = [v for v in verts if degs[v] >= 2]
        verts.sort(key=lambda v: (-degs[v], self.static_pos[v]))
        return verts

    # -- exact search -----------------------------------------------------

    def bounds_of(self, mask: int) -> tuple[int, int]:
        key = self.canon(mask)
        ent = self.memo.get(key)
        if ent is None:
            ent = (max(self.path_lb(mask), 2), _popcount(mask))
            self.memo[key] = ent
        return ent

    def search(self, mask: int, limit: int) -> int:
        """Exact rank of the connected subproblem if <= limit, else limit+1."""
        if mask & (mask - 1) == 0:
            return 1 if limit >= 1 else limit + 1
        self.tick()
        key = self.canon(mask)
        lb, ub = self.bounds_of(mask)
        if lb > limit:
            return limit + 1
        if lb == ub:
            return lb
        best = ub
        for v in self.candidates(mask):
            cl = min(limit, best - 1) - 1
            if cl < 1:
                break
            rem = mask & ~(1 << v)
            worst = 0
            feasible = True
            for comp in self.components(rem):
                r = self.search(comp, cl)
                if r > cl:
                    feasible = False
                    break
                if r > worst:
                    worst = r
            if feasible:
                if 1 + worst < best:
                    best = 1 + worst
                    self.memo[key] = (lb, best)
                if best <= lb:
                    break
        if best <= limit:
            self.memo[key] = (best, best)
            return best
        self.memo[key] = (max(lb, limit + 1), best)
        return limit + 1

    # -- pure decision search ---------------------------------------------

    def feasible(self, mask: int, k: int) -> bool:
        """Is the connected subproblem rankable within k labels?  Stops at
        the first workable separator instead of minimizing."""
        if k < 1:
            return False
        if mask & (mask - 1) == 0:
            return True
        self.tick()
        key = self.canon(mask)
        lb, ub = self.bounds_of(mask)
        if ub <= k:
            return True
        if lb > k:
            return False
        for v in self.candidates(mask):
            rem = mask & ~(1 << v)
            if all(self.feasible(comp, k - 1) for comp in self.components(rem)):
                if k < ub:
                    self.memo[key] = (lb, k)
                return True
        self.memo[key] = (max(lb, k + 1), ub)
        return False

    # -- certificates ------------------------------------------------------

    def greedy(self, mask: int, labels: dict[int, int]) -> int:
        """Balanced-separator heuristic ranking; returns its label count."""
        if mask & (mask - 1) == 0:
            labels[mask.bit_length() - 1] = 1
            return 1
        best_v, best_size = -1, None
        for v in self.candidates(mask):
            comps = self.components(mask & ~(1 << v))
            size = max(_popcount(c) for c in comps)
            if best_size is None or size < best_size:
                best_v, best_size = v, size
        worst = 0
        for comp in self.components(mask & ~(1 << best_v)):
            worst = max(worst, self.greedy(comp, labels))
        labels[best_v] = worst + 1
        return worst + 1

    def extract(self, mask: int, labels: dict[int, int]) -> int:
        """Rebuild an optimal ranking from the solved memo; returns rank."""
        if mask & (mask - 1) == 0:
            labels[mask.bit_length() - 1] = 1
            return 1
        t = self.search(mask, _popcount(mask))
        for v in self.candidates(mask):
            comps = self.components(mask & ~(1 << v))
            if all(self.search(c, t - 1) <= t - 1 for c in comps):
                labels[v] = t
                for c in comps:
                    self.extract(c, labels)
                return t
        raise AssertionError("no separator matches the solved value; memo corrupted")

    def extract_decision(self, mask: int, k: int, labels: dict[int, int]) -> None:
        if mask & (mask - 1) == 0:
            labels[mask.bit_length() - 1] = 1
            return
        lb, ub = self.bounds_of(mask)
        if ub < k:
            k = ub
        for v in self.candidates(mask):
            comps = self.components(mask & ~(1 << v))
            if all(self.feasible(c, k - 1) for c in comps):
                labels[v] = k
                for c in comps:
                    self.extract_decision(c, k - 1, labels)
                return
        raise AssertionError("decision replay failed; memo corrupted")


def _compress(labels: list[int]) -> list[int]:
    """Order-preserving relabel onto 1..d (d = number of distinct labels)."""
    ordered = sorted(set(labels))
    remap = {l: i + 1 for i, l in enumerate(ordered)}
    return [remap[l] for l in labels]


def _checked(g: Graph, labels: list[int]) -> Ranking:
    r = Ranking(g, tuple(labels))
    bad = validate(r)
    if bad is not None:
        raise AssertionError(f"solver produced an invalid ranking: {bad}")
    return r


def rank_exact(g: Graph, budget: Budget | None = None, jobs: int = 1) -> RankResult:
    """Exact rank number with certificate, or a proven interval on budget.

    jobs > 1 spreads root branches over threads sharing the memo; values
    are identical either way, certificates may differ.
    """
    if g.vertex_count == 0:
        raise ValueError("rank_exact needs a nonempty graph")
    start = time.monotonic()
    eng = _Engine(g, budget)
    full = (1 << g.vertex_count) - 1
    comps = eng.components(full)

    heur: dict[int, int] = {}
    heur_vals = [eng.greedy(c, heur) for c in comps]
    ub0 = max(heur_vals)

    lb_total, ub_total = 1, ub0
    exhausted = False
    values: list[int] = []
    try:
        for comp, hv in zip(comps, heur_vals):
            if jobs > 1 and len(comps) == 1:
                v = _root_parallel(eng, comp, hv, jobs)
            else:
                v = min(eng.search(comp, hv - 1), hv)
            values.append(v)
    except _BudgetExhausted:
        exhausted = True

    elapsed = time.monotonic() - start
    if exhausted:
        lb_total = max(
            [eng.memo.get(eng.canon(c), (2, 0))[0] if _popcount(c) > 1 else 1 for c in comps]
        )
        lb_total = max(lb_total, *(values or [1]))
        cert = _checked(g, _compress([heur[v] for v in range(g.vertex_count)]))
        return RankResult(lb_total, ub0, "exact", cert, elapsed, budget_exhausted=True)

    value = max(values)
    labels: dict[int, int] = {}
    for comp in comps:
        eng.extract(comp, labels)
    cert = _checked(g, [labels[v] for v in range(g.vertex_count)])
    if cert.label_count != value:
        raise AssertionError(
            f"certificate has {cert.label_count} labels but the solved value is {value}"
        )
    return RankResult(value, value, "exact", cert, time.monotonic() - start)


def _root_parallel(eng: _Engine, comp: int, hv: int, jobs: int) -> int:
    """Warm the memo by exploring root branches in a thread pool, then let
    the sequential search settle the value against the hot memo.  Results
    from the pool are not trusted directly: a branch hitting its cutoff
    reports a floor, not a value."""
    from concurrent.futures import ThreadPoolExecutor

    def branch(v: int) -> None:
        for c in eng.components(comp & ~(1 << v)):
            eng.search(c, hv - 2)

    with ThreadPoolExecutor(max_workers=jobs) as pool:
        list(pool.map(branch, eng.candidates(comp)))
    return min(eng.search(comp, hv - 1), hv)


def rank_decision(g: Graph, k: int, budget: Budget | None = None) -> DecisionOutcome:
    """Search for a ranking within k labels; proven 'no' reported as such."""
    if g.vertex_count == 0:
        raise ValueError("rank_decision needs a nonempty graph")
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    start = time.monotonic()
    eng = _Engine(g, budget)
    full = (1 << g.vertex_count) - 1
    comps = eng.components(full)
    try:
        ok = all(eng.feasible(c, k) for c in comps)
    except _BudgetExhausted:
        return DecisionOutcome(None, False, True, time.monotonic() - start)
    if not ok:
        return DecisionOutcome(None, True, False, time.monotonic() - start)
    labels: dict[int, int] = {}
    for c in comps:
        eng.extract_decision(c, k, labels)
    cert = _checked(g, _compress([labels[v] for v in range(g.vertex_count)]))
    if cert.label_count > k:
        raise AssertionError("decision certificate exceeds k labels")
    return DecisionOutcome(cert, True, False, time.monotonic() - start)


# -- enumeration oracle ----------------------------------------------------


def brute_force(g: Graph, cap: int = 8, budget: Budget | None = None) -> RankResult:
    """Smallest k admitting any valid labeling, by direct enumeration.

    Backtracks vertex by vertex in BFS order; a prefix is abandoned as
    soon as two equal labels connect through assigned vertices at or
    below their level.  Exponential, hence the vertex cap.
    """
    if g.vertex_count == 0:
        raise ValueError("brute_force needs a nonempty graph")
    if g.vertex_count > cap:
        raise ValueError(f"brute_force capped at {cap} vertices, got {g.vertex_count}")
    start = time.monotonic()
    deadline = (start + budget.seconds) if budget and budget.seconds else None

    full = (1 << g.vertex_count) - 1
    eng = _Engine(g)  # reused only for component splitting
    total_labels = [0] * g.vertex_count
    value = 0
    for comp in eng.components(full):
        verts = _bfs_order(g, comp)
        found = None
        for k in range(1, len(verts) + 1):
            found = _enumerate(g, verts, k, deadline)
            if found is not None:
                break
        assert found is not None  # k = |comp| always works
        for v, l in found.items():
            total_labels[v] = l
        value = max(value, max(found.values()))
    labels = _compress(total_labels)
    cert = _checked(g, labels)
    value = cert.label_count
    return RankResult(value, value, "brute_force", cert, time.monotonic() - start)


def _bfs_order(g: Graph, mask: int) -> list[int]:
    src = (mask & -mask).bit_length() - 1
    order = [src]
    seen = {src}
    i = 0
    while i < len(order):
        for w in g.adjacency[order[i]]:
            if (mask >> w) & 1 and w not in seen:
                seen.add(w)
                order.append(w)
        i += 1
    return order


def _enumerate(g: Graph, verts: list[int], k: int, deadline: float | None) -> dict[int, int] | None:
    """DFS over labelings of verts with labels 1..k; None when none is valid."""
    labels: dict[int, int] = {}

    def ok(v: int, label: int) -> bool:
        # flood from v through assigned vertices labelled <= label; meeting
        # an equal label means the prefix already violates the definition
        seen = {v}
        stack = [v]
        while stack:
            u = stack.pop()
            for w in g.adjacency[u]:
                if w in labels and w not in seen:
                    if labels[w] == label:
                        return False
                    if labels[w] < label:
                        seen.add(w)
                        stack.append(w)
        return True

    def full_check() -> bool:
        # the incremental flood only tracks pairs ending at the new vertex,
        # so accept a leaf only after a complete validation
        sub, old = g.induced_subgraph(verts)
        r = Ranking(sub, tuple(labels[v] for v in old))
        return validate(r) is None

    counter = 0

    def rec(i: int) -> bool:
        nonlocal counter
        if i == len(verts):
            return full_check()
        counter += 1
        if deadline is not None and counter % 4096 == 0 and time.monotonic() > deadline:
            raise _BudgetExhausted()
        v = verts[i]
        for label in range(1, k + 1):
            if ok(v, label):
                labels[v] = label
                if rec(i + 1):
                    return True
                del labels[v]
        return False

    return dict(labels) if rec(0) else None
