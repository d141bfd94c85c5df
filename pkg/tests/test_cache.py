"""Append-only result store shared by the solver and the CLI."""

from __future__ import annotations

import json

import pytest

from rankgrid.cache import CACHE_VERSION, ENV_VAR, SolutionCache, resolve_cache_path
from rankgrid.graphs import GraphShape, build


@pytest.fixture
def g():
    return build(GraphShape.grid(2, 3))


def test_round_trip(tmp_path, g):
    path = tmp_path / "cache.jsonl"
    c = SolutionCache(path)
    assert len(c) == 0
    c.put_exact(g, 4, 4, [1, 2, 3, 1, 4, 1], 0.01)
    c.put_decision(g, 3, False, None, 0.002)

    again = SolutionCache(path)
    rec = again.get_exact(g)
    assert rec is not None and (rec["lb"], rec["ub"]) == (4, 4)
    assert rec["labels"] == [1, 2, 3, 1, 4, 1]
    dec = again.get_decision(g, 3)
    assert dec is not None and dec["feasible"] is False
    assert again.get_decision(g, 4) is None
    assert len(again) == 2


def test_header_written_once(tmp_path, g):
    path = tmp_path / "cache.jsonl"
    c = SolutionCache(path)
    c.put_exact(g, 4, 4, None, 0.0)
    c.put_decision(g, 4, True, None, 0.0)
    lines = path.read_text().splitlines()
    assert json.loads(lines[0]) == {"rankgrid_cache": CACHE_VERSION}
    assert sum(1 for ln in lines if "rankgrid_cache" in ln) == 1


def test_version_mismatch_is_read_only(tmp_path, g):
    path = tmp_path / "cache.jsonl"
    path.write_text(json.dumps({"rankgrid_cache": CACHE_VERSION + 1}) + "\n")
    c = SolutionCache(path)
    assert not c.writable
    c.put_exact(g, 4, 4, None, 0.0)
    # nothing appended to the foreign file
    assert path.read_text().count("\n") == 1
    assert c.get_exact(g) is not None  # still usable in memory


def test_missing_header_is_read_only(tmp_path, g):
    path = tmp_path / "cache.jsonl"
    path.write_text("not json\n")
    c = SolutionCache(path)
    assert not c.writable
    c.put_decision(g, 2, False, None, 0.0)
    assert path.read_text() == "not json\n"


def test_corrupt_line_skipped(tmp_path, g):
    path = tmp_path / "cache.jsonl"
    c = SolutionCache(path)
    c.put_exact(g, 4, 4, None, 0.0)
    with open(path, "a") as fh:
        fh.write("{broken\n")
    c2 = SolutionCache(path)
    assert c2.get_exact(g) is not None
    assert len(c2) == 1


def test_keeps_tightest_interval(tmp_path, g):
    path = tmp_path / "cache.jsonl"
    c = SolutionCache(path)
    c.put_exact(g, 2, 6, None, 0.0, provenance="budget")
    c.put_exact(g, 4, 4, None, 0.0)
    c.put_exact(g, 2, 6, None, 0.0, provenance="budget")
    rec = SolutionCache(path).get_exact(g)
    assert (rec["lb"], rec["ub"]) == (4, 4)


def test_entries_sorted_and_counted(tmp_path, g):
    h = build(GraphShape.path(5))
    c = SolutionCache(tmp_path / "c.jsonl")
    c.put_decision(g, 5, True, None, 0.0)
    c.put_exact(h, 3, 3, None, 0.0)
    c.put_exact(g, 4, 4, None, 0.0)
    kinds = [r["kind"] for r in c.entries()]
    assert kinds == ["decision", "exact", "exact"]
    assert len(c) == 3


def test_resolve_cache_path_priority(monkeypatch, tmp_path):
    monkeypatch.setenv(ENV_VAR, str(tmp_path / "env.jsonl"))
    assert resolve_cache_path("explicit.jsonl").name == "explicit.jsonl"
    assert resolve_cache_path(None) == tmp_path / "env.jsonl"
    monkeypatch.delenv(ENV_VAR)
    monkeypatch.setenv("XDG_DATA_HOME", str(tmp_path / "xdg"))
    assert resolve_cache_path(None) == tmp_path / "xdg" / "rankgrid" / "cache.jsonl"


def test_distinct_graphs_do_not_collide(tmp_path):
    a = build(GraphShape.grid(2, 3))
    b = build(GraphShape.grid(3, 2))
    c = SolutionCache(tmp_path / "c.jsonl")
    c.put_exact(a, 4, 4, None, 0.0)
    assert c.get_exact(b) is None
