"""Command-line entry point: ``clusterx <command> ...``.

Exit codes: 0 when every check passes, 1 on a counterexample or mismatch,
2 when a resource limit stops the run (a partial JSON report is still
printed).  Primary output goes to stdout (or ``--output``) and contains no
timings, so identical arguments give byte-identical output; timings and
progress go to stderr.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from math import comb
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence

from . import explorer, geometric, surfaces
from .seeds import DynkinTypeError, cartan_matrix

EXIT_OK, EXIT_FAIL, EXIT_RESOURCE = 0, 1, 2

CACHE_ENV = "CLUSTERX_CACHE_DIR"

# Published numbers of X-variables with universal and with principal
# coefficients; these are the only built-in expected values.
PUBLISHED_UNIVERSAL: Dict[str, Callable[[int], int]] = {
    "A": lambda n: 2 * comb(n + 3, 4),
    "B": lambda n: n * (n + 1) * (n * n + 2) // 3,
    "C": lambda n: n * (n + 1) * (n * n + 2) // 3,
    "D": lambda n: n * (n - 1) * (n * n + 4 * n - 6) // 3,
}
PUBLISHED_UNIVERSAL_EXCEPTIONAL = {("E", 6): 770, ("E", 7): 2100, ("E", 8): 6240, ("F", 4): 196, ("G", 2): 16}
PUBLISHED_PRINCIPAL: Dict[str, Callable[[int], int]] = {
    "A": lambda n: n * (n + 1),
    "B": lambda n: 2 * n * n,
    "C": lambda n: 2 * n * n,
    "D": lambda n: 2 * n * (n - 1),
}
PUBLISHED_PRINCIPAL_EXCEPTIONAL = {("E", 6): 72, ("E", 7): 126, ("E", 8): 240, ("F", 4): 48, ("G", 2): 12}

# Universal runs that take minutes to hours; they need --allow-long.
LONG_RUNS = {("E", 7), ("E", 8)}

SURFACE_ALIASES = {
    "plain": "plain",
    "punctured": "punctured",
    "folded-plain": "folded_plain",
    "folded_plain": "folded_plain",
    "folded-punctured": "folded_punctured",
    "folded_punctured": "folded_punctured",
}


def expected_count(kind: str, n: int, semifield: str) -> Optional[int]:
    kind = kind.upper()
    if semifield == "universal":
        table, exceptional = PUBLISHED_UNIVERSAL, PUBLISHED_UNIVERSAL_EXCEPTIONAL
    elif semifield == "principal":
        table, exceptional = PUBLISHED_PRINCIPAL, PUBLISHED_PRINCIPAL_EXCEPTIONAL
    else:
        return None
    if kind in table:
        return table[kind](n)
    return exceptional.get((kind, n))


# ---------------------------------------------------------------------------
# Output helpers


class UsageError(ValueError):
    pass


def _emit(args, text: str) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if getattr(args, "output", None):
        path = Path(args.output)
        try:
            path.write_text(text)
        except OSError as exc:
            raise OSError(f"cannot write {path}: {exc}") from exc
    else:
        sys.stdout.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)


def _table(rows: List[dict], columns: Sequence[str]) -> str:
    widths = [max(len(c), *(len(str(r.get(c, ""))) for r in rows)) for c in columns]
    lines = ["  ".join(c.ljust(w) for c, w in zip(columns, widths))]
    for r in rows:
        lines.append("  ".join(str(r.get(c, "")).ljust(w) for c, w in zip(columns, widths)))
    return "\n".join(lines)


def _log(msg: str) -> None:
    print(msg, file=sys.stderr)


def _type_arg(args) -> tuple:
    kind = args.type.upper()
    if kind not in "ABCDEFG" or len(kind) != 1:
        raise UsageError(f"unknown Dynkin type {args.type!r}")
    try:
        cartan_matrix(kind, args.rank)
    except DynkinTypeError as exc:
        raise UsageError(str(exc)) from exc
    return kind, args.rank


def _surface(args) -> surfaces.MarkedPolygon:
    kind = SURFACE_ALIASES.get(args.surface)
    if kind is None:
        raise UsageError(f"unknown surface {args.surface!r}")
    try:
        return surfaces.MarkedPolygon(kind, args.n)
    except surfaces.SurfaceError as exc:
        raise UsageError(str(exc)) from exc


def _limits(args) -> dict:
    return {"max_nodes": args.max_nodes, "max_seconds": args.max_seconds}


def _check_long(args, kind: str, n: int, semifield: str) -> None:
    if semifield == "universal" and (kind, n) in LONG_RUNS and not args.allow_long:
        raise UsageError(
            f"{kind}{n} with universal coefficients takes minutes to hours; pass --allow-long to run it"
        )


# ---------------------------------------------------------------------------
# count-xvars


def _cached_graph(kind: str, n: int, semifield: str, limits: dict):
    cache = os.environ.get(CACHE_ENV)
    path = Path(cache) / f"{kind}{n}-{semifield}.json" if cache else None
    if path is not None and path.exists():
        _log(f"loading cached graph {path}")
        return explorer.load_graph(path)
    g = explorer.explore(explorer.initial_xseed(kind, n, semifield), **limits)
    if path is not None:
        path.parent.mkdir(parents=True, exist_ok=True)
        explorer.save_graph(g, path)
    return g


def cmd_count_xvars(args) -> int:
    kind, n = _type_arg(args)
    _check_long(args, kind, n, args.semifield)
    t0 = time.monotonic()
    row = {"type": kind, "rank": n, "semifield": args.semifield}
    try:
        g = _cached_graph(kind, n, args.semifield, _limits(args))
    except explorer.PartialExplorationError as exc:
        row.update(
            status="partial",
            reason=str(exc),
            seeds=len(exc.graph.nodes),
            xvars=len(exc.graph.xvars),
        )
        _emit(args, _dump(row))
        return EXIT_RESOURCE
    _log(f"explored {kind}{n} ({args.semifield}) in {time.monotonic() - t0:.2f}s")
    row.update(seeds=len(g.nodes), xvars=len(g.xvars))
    status = EXIT_OK
    if args.expect_published:
        exp = expected_count(kind, n, args.semifield)
        row["expected"] = exp
        row["match"] = exp == len(g.xvars)
        if not row["match"]:
            status = EXIT_FAIL
    if args.format == "table":
        _emit(args, _table([row], [c for c in ("type", "rank", "semifield", "seeds", "xvars", "expected", "match") if c in row]))
    else:
        _emit(args, _dump(row))
    return status


# ---------------------------------------------------------------------------
# verify


def _verify_bijection(args) -> dict:
    kind, n = _type_arg(args)
    return surfaces.verify_bijection(kind, n)


def _verify_quad_counts(args) -> dict:
    P = _surface(args)
    quads = surfaces.enumerate_quadrilaterals(P)
    expected = surfaces.closed_form_quad_count(P)
    report = {
        "surface": P.kind,
        "n": P.m,
        "quadrilaterals_with_diagonal": len(quads),
        "quadrilaterals": len(quads) // 2,
        "closed_form": expected,
        "ok": len(quads) == 2 * expected,
    }
    if P.kind == "folded_plain":
        dec = surfaces.verify_type_c_decomposition(P.m // 2 - 1)
        report["type_c_decomposition"] = dec
        report["ok"] = report["ok"] and dec["ok"]
    return report


def _verify_geometric(args) -> dict:
    kind, n = _type_arg(args)
    if kind not in "ABCD":
        raise UsageError("geometric realizations exist for types A, B, C, D only")
    report = geometric.verify_distinctness(kind, n, trials=args.trials, rng_seed=args.rng_seed)
    mut = geometric.verify_recipe_mutation(kind, n, seed=args.rng_seed)
    report["recipe_mutation"] = mut
    if not args.witnesses:
        report.pop("witnesses")
    return report


def _verify_pairs(args) -> dict:
    kind, n = _type_arg(args)
    census = explorer.exchangeable_pairs(kind, n, **_limits(args))
    expected = expected_count(kind, n, "universal")
    violations = explorer.unique_exchange_violations(kind, n, **_limits(args))
    return {
        "type": kind,
        "rank": n,
        "ordered_pairs": census.ordered,
        "unordered_pairs": census.unordered,
        "expected_ordered": expected,
        "unique_exchange_violations": violations[:20],
        "ok": census.ordered == expected and not violations,
    }


def _verify_coincide(args) -> dict:
    kind, n = _type_arg(args)
    from .seeds import ASeed, dynkin_initial_matrix

    B = dynkin_initial_matrix(kind, n)
    ga = explorer.explore(ASeed.initial(B, "trivial"), collect_xvars=False, **_limits(args))
    gx = explorer.explore(explorer.initial_xseed(kind, n, "universal"), collect_xvars=False, **_limits(args))
    same = explorer.graphs_isomorphic(ga, gx)
    return {
        "type": kind,
        "rank": n,
        "a_pattern": {"nodes": len(ga.nodes), "edges": len(ga.undirected_edges())},
        "x_pattern": {"nodes": len(gx.nodes), "edges": len(gx.undirected_edges())},
        "isomorphic": same,
        "ok": same,
    }


VERIFIERS = {
    "bijection": _verify_bijection,
    "quad-counts": _verify_quad_counts,
    "geometric": _verify_geometric,
    "pairs": _verify_pairs,
    "exchange-graph-coincide": _verify_coincide,
}


def cmd_verify(args) -> int:
    t0 = time.monotonic()
    try:
        report = VERIFIERS[args.check](args)
    except explorer.PartialExplorationError as exc:
        _emit(args, _dump({"check": args.check, "status": "partial", "reason": str(exc), "seeds": len(exc.graph.nodes)}))
        return EXIT_RESOURCE
    _log(f"{args.check} finished in {time.monotonic() - t0:.2f}s")
    report = {"check": args.check, **report}
    if args.format == "table":
        flat = [{k: v for k, v in report.items() if not isinstance(v, (list, dict))}]
        _emit(args, _table(flat, list(flat[0])))
    else:
        _emit(args, _dump(report))
    return EXIT_OK if report.get("ok") else EXIT_FAIL


# ---------------------------------------------------------------------------
# emit


def cmd_emit(args) -> int:
    what = args.artifact
    if what in ("exchange-graph", "xvars"):
        kind, n = _type_arg(args)
        _check_long(args, kind, n, args.semifield)
        try:
            g = explorer.explore(explorer.initial_xseed(kind, n, args.semifield), **_limits(args))
        except explorer.PartialExplorationError as exc:
            _emit(args, _dump({"status": "partial", "reason": str(exc), "seeds": len(exc.graph.nodes)}))
            return EXIT_RESOURCE
        if what == "xvars":
            from .semifield import value_to_json

            _emit(args, _dump({"type": kind, "rank": n, "semifield": args.semifield, "xvars": [value_to_json(v) for v in g.sorted_xvars()]}))
        elif args.format == "dot":
            _emit(args, explorer.to_dot(g, name=f"{kind}{n}"))
        else:
            _emit(args, json.dumps(explorer.graph_to_json(g), sort_keys=True))
        return EXIT_OK
    if what == "load-graph":
        g = explorer.load_graph(args.input)
        _emit(args, _dump(explorer.graph_content(g)))
        return EXIT_OK
    P = _surface(args)
    if what == "flip-graph":
        _emit(args, surfaces.flip_graph_dot(P))
    elif what == "quadrilaterals":
        _emit(args, surfaces.census_csv(P))
    elif what == "xhat":
        kind = {"plain": "A", "punctured": "D", "folded_plain": "C", "folded_punctured": "B"}[P.kind]
        _emit(args, _dump(geometric.expressions_listing(kind, P.rank)))
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing


def _add_type(p: argparse.ArgumentParser) -> None:
    p.add_argument("--type", required=True, help="Dynkin letter A..G")
    p.add_argument("--rank", type=int, required=True)


def _add_common(p: argparse.ArgumentParser, formats=("json", "table")) -> None:
    p.add_argument("--format", choices=formats, default=formats[0])
    p.add_argument("--output", help="write the primary output here instead of stdout")
    p.add_argument("--max-nodes", type=int, default=None, help="stop exploration after this many seeds")
    p.add_argument("--max-seconds", type=float, default=None, help="stop exploration after this wall-clock time")
    p.add_argument(
        "--threads",
        type=int,
        default=os.cpu_count() or 1,
        help="accepted for interface stability; exploration is serial so results never depend on it",
    )
    p.add_argument("--rng-seed", type=int, default=0)
    p.add_argument("--allow-long", action="store_true", help="permit E7/E8 universal runs")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="clusterx", description="Cluster X-variable enumeration and verification")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("count-xvars", help="count X-variables of a finite-type X-pattern")
    _add_type(p)
    p.add_argument("--semifield", choices=("universal", "principal"), default="universal")
    p.add_argument(
        "--expect-published",
        "--expect-paper",
        dest="expect_published",
        action="store_true",
        help="compare with the published counts; exit 1 on mismatch",
    )
    _add_common(p)
    p.set_defaults(func=cmd_count_xvars)

    p = sub.add_parser("verify", help="run one verification")
    p.add_argument("check", choices=sorted(VERIFIERS))
    p.add_argument("--type")
    p.add_argument("--rank", type=int)
    p.add_argument("--surface", choices=sorted(SURFACE_ALIASES))
    p.add_argument("--n", type=int, help="number of boundary vertices of the surface")
    p.add_argument("--trials", type=int, default=100, help="random configurations for the geometric check")
    p.add_argument("--witnesses", action="store_true", help="include every separating witness in the report")
    _add_common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("emit", help="write graphs, censuses and expression lists")
    p.add_argument("artifact", choices=("exchange-graph", "xvars", "flip-graph", "quadrilaterals", "xhat", "load-graph"))
    p.add_argument("--type")
    p.add_argument("--rank", type=int)
    p.add_argument("--semifield", choices=("universal", "principal"), default="universal")
    p.add_argument("--surface", choices=sorted(SURFACE_ALIASES))
    p.add_argument("--n", type=int)
    p.add_argument("--input", help="graph file for load-graph")
    _add_common(p, formats=("json", "dot", "csv"))
    p.set_defaults(func=cmd_emit)
    return parser


def _validate(args) -> None:
    needs_type = {
        ("count-xvars", None),
        ("verify", "bijection"),
        ("verify", "geometric"),
        ("verify", "pairs"),
        ("verify", "exchange-graph-coincide"),
        ("emit", "exchange-graph"),
        ("emit", "xvars"),
    }
    needs_surface = {("verify", "quad-counts"), ("emit", "flip-graph"), ("emit", "quadrilaterals"), ("emit", "xhat")}
    key = (args.command, getattr(args, "check", None) or getattr(args, "artifact", None))
    if key in needs_type and (args.type is None or args.rank is None):
        raise UsageError("--type and --rank are required")
    if key in needs_surface and (args.surface is None or args.n is None):
        raise UsageError("--surface and --n are required")
    if key == ("emit", "load-graph") and not args.input:
        raise UsageError("--input is required")
    if getattr(args, "trials", 0) is not None and getattr(args, "trials", 0) < 0:
        raise UsageError("--trials must be non-negative")


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _validate(args)
        return args.func(args)
    except (UsageError, ValueError) as exc:
        parser.error(str(exc))
    except OSError as exc:
        print(f"clusterx: {exc}", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_FAIL


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
