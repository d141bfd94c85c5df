"""Persistent cache of solved instances.

Plain JSONL, append-only: a version header line followed by one record
per result.  Records are keyed by the graph hash, so any way of arriving
at the same canonical graph shares entries.  Unreadable lines are
skipped with a warning rather than failing the run; the cache is an
accelerator, never an authority.
"""

from __future__ import annotations

import json
import logging
import os
from pathlib import Path

from .graphs import Graph

log = logging.getLogger(__name__)

CACHE_VERSION = 1
ENV_VAR = "RANKGRID_CACHE"

__all__ = ["SolutionCache", "resolve_cache_path", "CACHE_VERSION", "ENV_VAR"]


def resolve_cache_path(explicit: str | None = None) -> Path:
    """--cache flag beats RANKGRID_CACHE beats the default user data dir."""
    if explicit:
        return Path(explicit)
    env = os.environ.get(ENV_VAR)
    if env:
        return Path(env)
    base = os.environ.get("XDG_DATA_HOME") or os.path.join(os.path.expanduser("~"), ".local", "share")
    return Path(base) / "rankgrid" / "cache.jsonl"


class SolutionCache:
    """In-memory view over one cache file, with append write-through."""

    def __init__(self, path: str | Path) -> None:
        self.path = Path(path)
        self.writable = True
        self._exact: dict[str, dict] = {}
        self._decision: dict[tuple[str, int], dict] = {}
        self._load()

    def _load(self) -> None:
        if not self.path.exists():
            return
        with open(self.path, encoding="utf-8") as fh:
            first = fh.readline()
            if not first.strip():
                return
            try:
                header = json.loads(first)
                version = header["rankgrid_cache"]
            except (json.JSONDecodeError, TypeError, KeyError):
                log.warning("cache %s has no valid header; ignoring file", self.path)
                self.writable = False
                return
            if version != CACHE_VERSION:
                log.warning(
                    "cache %s is version %s, expected %s; ignoring file",
                    self.path, version, CACHE_VERSION,
                )
                self.writable = False
                return
            for lineno, line in enumerate(fh, start=2):
                if not line.strip():
                    continue
                try:
                    rec = json.loads(line)
                    self._absorb(rec)
                except (json.JSONDecodeError, TypeError, KeyError, ValueError):
                    log.warning("cache %s line %d is corrupt; skipped", self.path, lineno)

    def _absorb(self, rec: dict) -> None:
        kind = rec["kind"]
        if kind == "exact":
            key = rec["key"]
            lb, ub = int(rec["lb"]), int(rec["ub"])
            if lb > ub:
                raise ValueError("inverted interval")
            old = self._exact.get(key)
            # keep the tightest information seen
            if old is None or (lb, -ub) > (old["lb"], -old["ub"]):
                self._exact[key] = rec
        elif kind == "decision":
            self._decision[(rec["key"], int(rec["k"]))] = rec
        else:
            raise ValueError(f"unknown record kind {kind!r}")

    def _append(self, rec: dict) -> None:
        if not self.writable:
            return
        self.path.parent.mkdir(parents=True, exist_ok=True)
        new = not self.path.exists() or self.path.stat().st_size == 0
        with open(self.path, "a", encoding="utf-8") as fh:
            if new:
                fh.write(json.dumps({"rankgrid_cache": CACHE_VERSION}) + "\n")
            fh.write(json.dumps(rec, sort_keys=True) + "\n")

    # -- exact results -----------------------------------------------------

    def get_exact(self, g: Graph) -> dict | None:
        return self._exact.get(g.graph_hash)

    def put_exact(self, g: Graph, lb: int, ub: int, labels: list[int] | None,
                  elapsed: float, provenance: str = "exact") -> None:
        rec = {
            "kind": "exact",
            "key": g.graph_hash,
            "lb": lb,
            "ub": ub,
            "labels": list(labels) if labels is not None else None,
            "elapsed": round(elapsed, 6),
            "provenance": provenance,
        }
        self._absorb(rec)
        self._append(rec)

    # -- decision results --------------------------------------------------

    def get_decision(self, g: Graph, k: int) -> dict | None:
        return self._decision.get((g.graph_hash, k))

    def put_decision(self, g: Graph, k: int, feasible: bool,
                     labels: list[int] | None, elapsed: float) -> None:
        rec = {
            "kind": "decision",
            "key": g.graph_hash,
            "k": k,
            "feasible": feasible,
            "labels": list(labels) if labels is not None else None,
            "elapsed": round(elapsed, 6),
        }
        self._absorb(rec)
        self._append(rec)

    # -- introspection -----------------------------------------------------

    def entries(self) -> list[dict]:
        out = list(self._exact.values())
        out.extend(self._decision.values())
        return sorted(out, key=lambda r: (r["kind"], r["key"], r.get("k", 0)))

    def __len__(self) -> int:
        return len(self._exact) + len(self._decision)
