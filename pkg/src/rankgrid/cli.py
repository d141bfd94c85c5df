"""Command-line front end: solve, evaluate, construct, sweep, compare, draw.

Exit codes: 0 success, 1 usage or bad input, 2 budget exhausted (an interval
is still printed), 3 internal invariant violation (a construction failed its
own verifier; this should never happen and aborts loudly).
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import dataclass

from . import bounds, construct, formulas
from .cache import CACHE_VERSION, SolutionCache, resolve_cache_path
from .graphs import Graph, GraphShape, ShapeError, StickyEnd, build
from .render import render_ascii, render_svg
from .solve import Budget, rank_decision, rank_exact
from .verify import Ranking

__all__ = ["main"]


def _emit(payload: object, out: str | None = None) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


# -- shared flag handling --------------------------------------------------


def _parse_dims(text: str) -> tuple[int, int]:
    try:
        m_str, n_str = text.lower().split("x", 1)
        return int(m_str), int(n_str)
    except ValueError:
        raise ShapeError(f"expected MxN, got {text!r}") from None


def _parse_sticky(text: str) -> StickyEnd:
    side, _, align = text.partition(":")
    return StickyEnd(side=side, align=align or "bottom")


def _shape_from_args(args: argparse.Namespace) -> GraphShape:
    picked = [name for name in ("grid", "path", "triangle")
              if getattr(args, name, None) is not None]
    if len(picked) != 1:
        raise ShapeError("give exactly one of --grid MxN, --path N, --triangle S")
    if args.grid is not None:
        m, n = _parse_dims(args.grid)
        decorations = tuple(_parse_sticky(s) for s in (args.sticky or []))
        return GraphShape.grid(m, n, decorations)
    if args.path is not None:
        if args.sticky:
            raise ShapeError("sticky ends attach only to grids")
        return GraphShape.path(args.path)
    if args.sticky:
        raise ShapeError("sticky ends attach only to grids")
    return GraphShape.triangle(args.triangle)


def _budget_from_args(args: argparse.Namespace) -> Budget | None:
    if args.budget is None and args.budget_nodes is None:
        return None
    return Budget(seconds=args.budget, nodes=args.budget_nodes)


def _add_shape_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--grid", metavar="MxN", help="grid with M rows and N columns")
    p.add_argument("--path", type=int, metavar="N", help="path on N vertices")
    p.add_argument("--triangle", type=int, metavar="S", help="triangle grid with S rows")
    p.add_argument("--sticky", action="append", metavar="SIDE[:ALIGN]",
                   help="staircase attachment (left|right, align bottom|top); repeatable")


def _add_solver_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--budget", type=float, metavar="SECONDS",
                   help="wall-clock cap; exceeded solves report an interval")
    p.add_argument("--budget-nodes", type=int, metavar="N",
                   help="search-node cap")
    p.add_argument("--jobs", type=int, default=1, metavar="J",
                   help="root-level solver threads (solver only)")
    p.add_argument("--deterministic", action="store_true",
                   help="single task, no cache traffic, zeroed timings")
    p.add_argument("--cache", metavar="PATH",
                   help="cache file (default: RANKGRID_CACHE or the user data dir)")
    p.add_argument("--no-cache", action="store_true", help="skip the cache entirely")


def _open_cache(args: argparse.Namespace) -> SolutionCache | None:
    if getattr(args, "no_cache", False) or getattr(args, "deterministic", False):
        return None
    return SolutionCache(resolve_cache_path(getattr(args, "cache", None)))


# -- subcommands -----------------------------------------------------------


def _cmd_exact(args: argparse.Namespace) -> int:
    g = build(_shape_from_args(args))
    store = _open_cache(args)
    if store is not None:
        hit = store.get_exact(g)
        if hit is not None and hit["lb"] == hit["ub"]:
            payload = {"method": "cache", "elapsed": 0.0, "budget_exhausted": False,
                       "value": hit["lb"]}
            if hit.get("labels"):
                payload["labels"] = hit["labels"]
            _emit(payload)
            return 0
    jobs = 1 if args.deterministic else args.jobs
    res = rank_exact(g, budget=_budget_from_args(args), jobs=jobs)
    if store is not None:
        labels = list(res.certificate.labels) if res.certificate else None
        store.put_exact(g, res.lb, res.ub, labels, res.elapsed)
    payload = res.to_json_dict()
    if args.deterministic:
        payload["elapsed"] = 0.0
    _emit(payload)
    return 2 if res.budget_exhausted and not res.exact else 0


def _cmd_decide(args: argparse.Namespace) -> int:
    g = build(_shape_from_args(args))
    store = _open_cache(args)
    if store is not None:
        hit = store.get_decision(g, args.k)
        if hit is not None:
            _emit({"k": args.k, "feasible": hit["feasible"], "proven": True,
                   "elapsed": 0.0, "labels": hit.get("labels"), "method": "cache"})
            return 0
    out = rank_decision(g, args.k, budget=_budget_from_args(args))
    if store is not None and out.feasible is not None:
        labels = list(out.ranking.labels) if out.ranking else None
        store.put_decision(g, args.k, out.feasible, labels, out.elapsed)
    payload = {
        "k": args.k,
        "feasible": out.feasible,
        "proven": out.proven,
        "elapsed": 0.0 if args.deterministic else round(out.elapsed, 6),
        "labels": list(out.ranking.labels) if out.ranking else None,
        "method": "search",
    }
    _emit(payload)
    return 2 if out.feasible is None else 0


def _formula_value(m: int, n: int, recursive: bool) -> int:
    if m == 1:
        return formulas.rank_path(n)
    if m == 2:
        return formulas.rank_2xn(n)
    if m == 3:
        return formulas.rank_3xn(n)
    return formulas.rank_4xn_recursive(n) if recursive else formulas.rank_4xn(n)


def _cmd_formula(args: argparse.Namespace) -> int:
    if args.recursive and args.m != 4:
        raise ShapeError("--recursive applies only to --m 4")
    value = _formula_value(args.m, args.n, args.recursive)
    bucket = None
    if args.m == 4 and args.n >= 5:
        b = formulas.bucket_4xn(args.n)
        bucket = [b.lower, b.upper]
    _emit({
        "n": args.n,
        "value": value,
        "form": "recursive" if args.recursive else "closed",
        "bucket": bucket,
    })
    return 0


def _cmd_bounds(args: argparse.Namespace) -> int:
    if args.triangle is not None:
        if args.m is not None or args.n is not None:
            raise ShapeError("--triangle excludes --m/--n")
        s = args.triangle
        _emit({
            "n": s,
            "lower": {"cor2": str(bounds.corollary_lower_tri(s))},
            "upper": {"stacked": bounds.tri_bound(s)},
        })
        return 0
    if args.m is None:
        raise ShapeError("give --m (with optional --n) or --triangle")
    m = args.m
    n = args.n if args.n is not None else m
    side = min(m, n)
    payload: dict[str, object] = {
        "m": m,
        "lower": {
            "thm2": bounds.square_lower(side),
            "cor1": str(bounds.corollary_lower_square(side)),
        },
        "upper": {
            "alpert": bounds.alpert_upper(m, n),
            "diagonal": bounds.diagonal_upper(m, n) if n >= m + 2 else None,
        },
        "comparator": bounds.compare_upper(m, n).to_json_dict(),
    }
    if args.n is not None:
        payload["n"] = n
    _emit(payload)
    return 0


def _cmd_construct(args: argparse.Namespace) -> int:
    picked = [x for x in ("four_rows", "triangle", "endpoints") if getattr(args, x) is not None]
    if len(picked) != 1:
        raise ShapeError("give exactly one of --four-rows N, --triangle S, --endpoints KMAX")
    if args.four_rows is not None:
        _emit(construct.four_row_certificate(args.four_rows).to_json_dict(), args.out)
        return 0
    if args.triangle is not None:
        r = construct.triangle_ranking(args.triangle)
        _emit({
            "steps": [{"name": "triangle-rows", "inputs": [],
                       "output": r.graph.shape.to_json_dict(), "labels": r.label_count}],
            "graph": r.graph.to_json_dict(),
            "ranking": r.to_json_dict(),
        }, args.out)
        return 0
    chains = construct.run_endpoint_certificates(args.endpoints)
    _emit({
        "count": len(chains),
        "chains": [{"width": c.width, "labels": c.labels,
                    "steps": [s.name for s in c.steps]} for c in chains],
    }, args.out)
    return 0


# -- sweep -----------------------------------------------------------------

_SWEEP_COLUMNS = ["m", "n", "formula", "exact_lo", "exact_hi", "bucket_lo",
                  "bucket_hi", "alpert", "diagonal", "cert_labels", "flags"]
_SWEEP_METHODS = ("formula", "exact", "bucket", "bounds", "cert")


@dataclass
class SweepRow:
    """One width of a sweep; flags are recomputed from the numbers on write."""

    m: int
    n: int
    formula: int | None = None
    exact_lo: int | None = None
    exact_hi: int | None = None
    bucket_lo: int | None = None
    bucket_hi: int | None = None
    alpert: int | None = None
    diagonal: int | None = None
    cert_labels: int | None = None

    def flags(self) -> str:
        toks = []
        if self.formula is not None and self.exact_lo is not None:
            if self.exact_lo == self.exact_hi == self.formula:
                toks.append("formula_exact")
        if self.formula is not None and self.bucket_lo is not None:
            if self.bucket_lo <= self.formula <= self.bucket_hi:
                toks.append("bucket_brackets")
        if self.formula is not None and self.cert_labels is not None:
            if self.cert_labels == self.formula:
                toks.append("cert_matches")
        if self.formula is not None and self.alpert is not None:
            if self.alpert >= self.formula and (
                    self.diagonal is None or self.diagonal >= self.formula):
                toks.append("upper_dominates")
        return ";".join(toks)

    def as_record(self) -> dict[str, object]:
        rec = {c: getattr(self, c) for c in _SWEEP_COLUMNS[:-1]}
        rec["flags"] = self.flags()
        return rec


def _sweep_row(m: int, n: int, methods: set[str], budget: Budget | None) -> SweepRow:
    row = SweepRow(m=m, n=n)
    if "formula" in methods and m <= 4:
        row.formula = _formula_value(m, n, recursive=False)
    if "exact" in methods:
        res = rank_exact(build(GraphShape.grid(m, n)), budget=budget)
        row.exact_lo, row.exact_hi = res.lb, res.ub
    if "bucket" in methods and m == 4 and n >= 5:
        b = formulas.bucket_4xn(n)
        row.bucket_lo, row.bucket_hi = b.lower, b.upper
    if "bounds" in methods:
        row.alpert = bounds.alpert_upper(m, n)
        if n >= m + 2:
            row.diagonal = bounds.diagonal_upper(m, n)
    if "cert" in methods and m == 4:
        row.cert_labels = construct.four_row_certificate(n).labels
    return row


def _parse_range(text: str) -> range:
    try:
        lo_str, hi_str = text.replace("..", ":").split(":", 1)
        lo, hi = int(lo_str), int(hi_str)
    except ValueError:
        raise ShapeError(f"expected LO:HI, got {text!r}") from None
    if lo < 1 or hi < lo:
        raise ShapeError(f"empty or invalid range {text!r}")
    return range(lo, hi + 1)


def _cmd_sweep(args: argparse.Namespace) -> int:
    span = _parse_range(args.n_range)
    methods = set(args.methods.split(","))
    unknown = methods.difference(_SWEEP_METHODS)
    if unknown:
        raise ShapeError(f"unknown methods: {sorted(unknown)}; pick from {_SWEEP_METHODS}")
    budget = _budget_from_args(args)
    out = sys.stdout if args.out in (None, "-") else open(args.out, "w", encoding="utf-8", newline="")
    rows: list[dict[str, object]] = []
    try:
        if args.format == "csv":
            writer = csv.DictWriter(out, fieldnames=_SWEEP_COLUMNS)
            writer.writeheader()
            for n in span:
                writer.writerow(_sweep_row(args.m, n, methods, budget).as_record())
                out.flush()
        else:
            try:
                for n in span:
                    rows.append(_sweep_row(args.m, n, methods, budget).as_record())
            finally:
                # interrupted sweeps still flush what they have
                json.dump({"columns": _SWEEP_COLUMNS, "rows": rows}, out,
                          indent=2, sort_keys=True)
                out.write("\n")
    finally:
        if out is not sys.stdout:
            out.close()
    return 0


def _cmd_compare(args: argparse.Namespace) -> int:
    _emit(bounds.compare_upper(args.m, args.n).to_json_dict())
    return 0


def _load_ranking(path: str) -> Ranking:
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    try:
        g = Graph.from_json_dict(data["graph"])
        if "ranking" in data:
            stored = data["ranking"]
            if stored.get("graph_hash") not in (None, g.graph_hash):
                raise ValueError("ranking file hash does not match its graph")
            labels = stored["labels"]
        else:
            labels = data["labels"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed ranking file {path}: missing {exc}") from None
    return Ranking(g, tuple(int(l) for l in labels))


def _cmd_render(args: argparse.Namespace) -> int:
    ranking = _load_ranking(args.file)
    text = render_svg(ranking) if args.format == "svg" else render_ascii(ranking) + "\n"
    if args.out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    return 0


def _cmd_cache_inspect(args: argparse.Namespace) -> int:
    path = resolve_cache_path(args.cache)
    store = SolutionCache(path)
    records = store.entries()
    payload: dict[str, object] = {
        "path": str(path),
        "version": CACHE_VERSION,
        "entries": len(store),
        "exact": sum(1 for r in records if r["kind"] == "exact"),
        "decisions": sum(1 for r in records if r["kind"] == "decision"),
    }
    if args.verbose:
        payload["records"] = records
    _emit(payload)
    return 0


# -- parser ----------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # noqa: A003 - argparse API
        self.print_usage(sys.stderr)
        raise ShapeError(message)


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="rankgrid",
                     description="Vertex-ranking toolkit for grid graphs.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("exact", help="exact rank number with certificate")
    _add_shape_flags(p)
    _add_solver_flags(p)
    p.set_defaults(func=_cmd_exact)

    p = sub.add_parser("decide", help="is there a ranking with at most k labels")
    _add_shape_flags(p)
    _add_solver_flags(p)
    p.add_argument("--k", type=int, required=True, help="label budget")
    p.set_defaults(func=_cmd_decide)

    p = sub.add_parser("formula", help="closed-form values for 1..4 rows")
    p.add_argument("--m", type=int, required=True, choices=(1, 2, 3, 4))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--recursive", action="store_true",
                   help="use the interval recursion instead of the closed form (m=4)")
    p.set_defaults(func=_cmd_formula)

    p = sub.add_parser("bounds", help="lower and upper bounds")
    p.add_argument("--m", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--triangle", type=int, metavar="S")
    p.set_defaults(func=_cmd_bounds)

    p = sub.add_parser("construct", help="build verified ranking certificates")
    p.add_argument("--four-rows", type=int, metavar="N",
                   help="certificate chain for the 4xN grid")
    p.add_argument("--triangle", type=int, metavar="S",
                   help="row-stacked triangle ranking")
    p.add_argument("--endpoints", type=int, metavar="KMAX",
                   help="summary of all run-endpoint chains up to 2^(KMAX+1)-3")
    p.add_argument("--out", metavar="FILE", help="write JSON here instead of stdout")
    p.set_defaults(func=_cmd_construct)

    p = sub.add_parser("sweep", help="tabulate methods over a width range")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n-range", required=True, metavar="LO:HI")
    p.add_argument("--methods", default="formula,bucket",
                   help=f"comma list from {','.join(_SWEEP_METHODS)}")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", metavar="FILE")
    p.add_argument("--budget", type=float, metavar="SECONDS")
    p.add_argument("--budget-nodes", type=int, metavar="N")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("compare", help="halving vs diagonal upper bound")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=_cmd_compare)

    p = sub.add_parser("render", help="draw a ranking file as ascii or svg")
    p.add_argument("file", help="JSON with 'graph' plus 'ranking' or 'labels'")
    p.add_argument("--format", choices=("ascii", "svg"), default="ascii")
    p.add_argument("--out", metavar="FILE")
    p.set_defaults(func=_cmd_render)

    p = sub.add_parser("cache-inspect", help="show cache location and contents")
    p.add_argument("--cache", metavar="PATH")
    p.add_argument("--verbose", action="store_true", help="list every record")
    p.set_defaults(func=_cmd_cache_inspect)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except ShapeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except AssertionError as exc:
        print(f"internal invariant violation: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
