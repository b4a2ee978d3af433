"""Breadth-first enumeration of exchange graphs with seed deduplication."""

from __future__ import annotations

import json
import time
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Set, Tuple, Union

from .semifield import FactorBasis, Trivial, Tropical, Universal, value_from_json
from .seeds import (
    ASeed,
    ExchangeMatrix,
    SeedKey,
    XSeed,
    canonical_key,
    dynkin_initial_matrix,
    principal_xseed,
    universal_xseed,
)

GRAPH_FORMAT_VERSION = 1

Seed = Union[XSeed, ASeed]


class ExplorationError(RuntimeError):
    pass


class PartialExplorationError(ExplorationError):
    """A node or time limit was hit; ``graph`` holds what was found so far."""

    def __init__(self, message: str, graph: "ExchangeGraph"):
        super().__init__(message)
        self.graph = graph


class CanonicalCollisionError(ExplorationError):
    """Two inequivalent seeds produced the same canonical encoding."""


class VersionError(ValueError):
    pass


class CorruptFileError(ValueError):
    pass


@dataclass
class ExchangeGraph:
    root: Seed
    nodes: Dict[str, Seed] = field(default_factory=dict)
    edges: List[Tuple[str, int, str]] = field(default_factory=list)
    xvars: Set = field(default_factory=set)
    stats: Dict[str, object] = field(default_factory=dict)
    complete: bool = False
    meta: Dict[str, object] = field(default_factory=dict)

    @property
    def rank(self) -> int:
        return self.root.n

    def undirected_edges(self) -> Set[frozenset]:
        return {frozenset((a, b)) for a, _, b in self.edges}

    def sorted_xvars(self) -> List:
        return sorted(self.xvars, key=_value_sort_key)

    def adjacency(self) -> Dict[str, Dict[int, str]]:
        adj: Dict[str, Dict[int, str]] = {k: {} for k in self.nodes}
        for a, k, b in self.edges:
            adj[a][k] = b
        return adj


def _value_sort_key(v) -> tuple:
    if isinstance(v, Universal):
        rf = v.rational_function()
        return (0, json.dumps(rf.to_json()))
    return v.sort_token()


def explore(
    root: Seed,
    max_nodes: Optional[int] = None,
    max_seconds: Optional[float] = None,
    collect_xvars: bool = True,
) -> ExchangeGraph:
    """Enumerate all seeds reachable from ``root`` up to simultaneous relabeling.

    Nodes are stored as canonical representatives, so edge directions refer
    to the representative's labeling.  Expansion is serial and in BFS order,
    which makes every output deterministic.
    """
    start = time.monotonic()
    graph = ExchangeGraph(root=root)
    key = canonical_key(root)
    rep = root.permuted(key.perm)
    graph.nodes[key.hex] = rep
    encodings: Dict[tuple, str] = {key.encoding: key.hex}
    if collect_xvars:
        graph.xvars.update(rep.x)
    queue = deque([key.hex])
    n = root.n
    while queue:
        if max_seconds is not None and time.monotonic() - start > max_seconds:
            graph.stats.update(_stats(graph, start))
            raise PartialExplorationError(f"time limit of {max_seconds}s reached", graph)
        h = queue.popleft()
        seed = graph.nodes[h]
        for k in range(n):
            m = seed.mutate(k)
            mk = canonical_key(m)
            target = encodings.get(mk.encoding)
            mrep = m.permuted(mk.perm)
            if target is None:
                if max_nodes is not None and len(graph.nodes) >= max_nodes:
                    graph.stats.update(_stats(graph, start))
                    raise PartialExplorationError(f"node limit of {max_nodes} reached", graph)
                target = mk.hex
                if target in graph.nodes:
                    raise CanonicalCollisionError(f"digest collision on {target}")
                encodings[mk.encoding] = target
                graph.nodes[target] = mrep
                if collect_xvars:
                    graph.xvars.update(mrep.x)
                queue.append(target)
            elif not mrep.same_as(graph.nodes[target]):
                raise CanonicalCollisionError(f"inequivalent seeds share key {target}")
            graph.edges.append((h, k, target))
    graph.complete = True
    graph.stats.update(_stats(graph, start))
    return graph


def _stats(graph: ExchangeGraph, start: float) -> Dict[str, object]:
    out: Dict[str, object] = {
        "nodes": len(graph.nodes),
        "labeled_edges": len(graph.edges),
        "edges": len(graph.undirected_edges()),
        "xvars": len(graph.xvars),
        "seconds": round(time.monotonic() - start, 3),
    }
    basis = _basis_of(graph.root)
    if basis is not None:
        out["basis_size"] = len(basis)
        out["max_expanded_terms"] = basis.max_terms_seen
    return out


def _basis_of(seed: Seed) -> Optional[FactorBasis]:
    if isinstance(seed, ASeed):
        return seed.basis
    v = seed.x[0] if seed.x else None
    return v.basis if isinstance(v, Universal) else None


def check_regular(graph: ExchangeGraph) -> List[str]:
    """Problems with n-regularity or edge symmetry (empty list if none)."""
    problems = []
    adj = graph.adjacency()
    n = graph.rank
    for h, out in adj.items():
        if sorted(out) != list(range(n)):
            problems.append(f"node {h} has directions {sorted(out)}")
    und: Dict[str, List[str]] = {h: [] for h in adj}
    for a, _, b in graph.edges:
        und[a].append(b)
    for a, outs in und.items():
        for b in outs:
            if a not in und[b]:
                problems.append(f"edge {a}->{b} has no reverse")
    return problems


# ---------------------------------------------------------------------------
# Counting


def initial_xseed(kind: str, n: int, semifield: str) -> XSeed:
    B = dynkin_initial_matrix(kind, n)
    if semifield == "universal":
        return universal_xseed(B)
    if semifield == "principal":
        return principal_xseed(B)
    raise ValueError(f"unknown semifield {semifield!r}")


def count_xvars(kind: str, n: int, semifield: str = "universal", **limits) -> int:
    return len(explore(initial_xseed(kind, n, semifield), **limits).xvars)


@dataclass
class PairCensus:
    pairs: Set[frozenset]

    @property
    def unordered(self) -> int:
        return len(self.pairs)

    @property
    def ordered(self) -> int:
        return 2 * len(self.pairs)


def exchangeable_pairs(kind: str, n: int, **limits) -> PairCensus:
    """Unordered pairs ``{a_k, a_k'}`` over all edges of the coefficient-free A-pattern."""
    graph = explore(ASeed.initial(dynkin_initial_matrix(kind, n), "trivial"), collect_xvars=False, **limits)
    pairs: Set[frozenset] = set()
    for seed in graph.nodes.values():
        for k in range(n):
            pairs.add(frozenset((seed.a[k], seed.mutate(k).a[k])))
    return PairCensus(pairs)


def unique_exchange_violations(kind: str, n: int, **limits) -> List[dict]:
    """Monomial pairs that occur in exchange relations for two different variable pairs.

    Uses principal coefficients, whose extended exchange matrix has full rank.
    """
    graph = explore(ASeed.initial(dynkin_initial_matrix(kind, n), "principal"), collect_xvars=False, **limits)
    seen: Dict[frozenset, frozenset] = {}
    bad = []
    for seed in graph.nodes.values():
        for k in range(n):
            p, q = seed.exchange_monomials(k)
            mono = frozenset((p, q))
            exchanged = frozenset((seed.a[k], seed.mutate(k).a[k]))
            prev = seen.setdefault(mono, exchanged)
            if prev != exchanged:
                bad.append({"monomials": [p.format(), q.format()]})
    return bad


# ---------------------------------------------------------------------------
# Exchange-graph coincidence


class _PairSeed:
    """Two seeds mutated in lockstep; canonicalized jointly."""

    __slots__ = ("s1", "s2")

    def __init__(self, s1: Seed, s2: Seed):
        self.s1, self.s2 = s1, s2

    @property
    def B(self):
        return self.s1.B

    @property
    def n(self):
        return self.s1.n

    def tokens(self):
        return list(zip(self.s1.tokens(), self.s2.tokens()))

    def permuted(self, perm):
        return _PairSeed(self.s1.permuted(perm), self.s2.permuted(perm))

    def mutate(self, k):
        return _PairSeed(self.s1.mutate(k), self.s2.mutate(k))


def graphs_isomorphic(g1: ExchangeGraph, g2: ExchangeGraph) -> bool:
    """Whether the map sending a seed of ``g1`` to the seed of ``g2`` reached by
    the same mutation sequence is a well-defined injection, with equal node and
    edge counts.
    """
    if not (g1.complete and g2.complete):
        raise ExplorationError("graphs_isomorphic needs complete graphs")
    if g1.root.B != g2.root.B:
        return False
    if len(g1.nodes) != len(g2.nodes) or len(g1.undirected_edges()) != len(g2.undirected_edges()):
        return False
    forward: Dict[tuple, tuple] = {}
    backward: Dict[tuple, tuple] = {}
    start = _PairSeed(g1.root, g2.root)
    seen = {canonical_key(start).encoding}
    queue = deque([start])
    while queue:
        p = queue.popleft()
        k1 = canonical_key(p.s1).encoding
        k2 = canonical_key(p.s2).encoding
        if forward.setdefault(k1, k2) != k2 or backward.setdefault(k2, k1) != k1:
            return False
        for k in range(p.n):
            q = p.mutate(k)
            key = canonical_key(q).encoding
            if key not in seen:
                seen.add(key)
                queue.append(q)
    return len(forward) == len(g1.nodes)


# ---------------------------------------------------------------------------
# Persistence


def _seed_to_json(seed: Seed) -> dict:
    return seed.to_json()


def graph_to_json(g: ExchangeGraph) -> dict:
    return {
        "version": GRAPH_FORMAT_VERSION,
        "type": g.meta.get("type"),
        "rank": g.rank,
        "semifield": g.meta.get("semifield", _semifield_name(g.root)),
        "complete": g.complete,
        "root": _seed_to_json(g.root),
        "nodes": [{"key": k, "seed": _seed_to_json(g.nodes[k])} for k in sorted(g.nodes)],
        "edges": [[a, k, b] for a, k, b in sorted(g.edges)],
        "xvars": [v.to_json() for v in g.sorted_xvars()],
    }


def _semifield_name(seed: Seed) -> str:
    v = seed.x[0]
    if isinstance(v, Universal):
        return "universal"
    if isinstance(v, Tropical):
        return "tropical"
    return "trivial"


def save_graph(g: ExchangeGraph, path) -> None:
    with open(path, "w") as fh:
        json.dump(graph_to_json(g), fh, sort_keys=True)


def _seed_from_json(data: dict, basis: Optional[FactorBasis]):
    B = ExchangeMatrix(data["B"], data["D"])
    x = [value_from_json(v, basis) for v in data["x"]]
    if "a" in data:
        a = [value_from_json(v, basis) for v in data["a"]]
        return ASeed(a, x, B, basis)
    return XSeed(x, B)


def load_graph(path) -> ExchangeGraph:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise CorruptFileError(f"{path}: {exc}") from exc
    if not isinstance(data, dict) or "version" not in data:
        raise CorruptFileError(f"{path}: missing version field")
    if data["version"] != GRAPH_FORMAT_VERSION:
        raise VersionError(f"{path}: format version {data['version']} is not supported")
    try:
        root = data["root"]
        nvars = _nvars_hint(root)
        basis = FactorBasis(nvars) if nvars else None
        g = ExchangeGraph(root=_seed_from_json(root, basis))
        g.nodes = {item["key"]: _seed_from_json(item["seed"], basis) for item in data["nodes"]}
        g.edges = [(a, int(k), b) for a, k, b in data["edges"]]
        g.xvars = {value_from_json(v, basis) for v in data["xvars"]}
        g.complete = bool(data.get("complete", True))
        g.meta = {"type": data.get("type"), "semifield": data.get("semifield")}
        g.stats = {"nodes": len(g.nodes), "edges": len(g.undirected_edges()), "xvars": len(g.xvars)}
    except (KeyError, TypeError, ValueError) as exc:
        raise CorruptFileError(f"{path}: {exc}") from exc
    return g


def _nvars_hint(seed: dict) -> int:
    best = 0
    for group in ("x", "a"):
        for v in seed.get(group, []):
            if "num" in v:
                for part in ("num", "den"):
                    for _, exps in v[part]:
                        best = max(best, len(exps))
    return best


def graph_content(g: ExchangeGraph) -> dict:
    """Comparable summary (keys, edges, rendered X-variables)."""
    return {
        "nodes": sorted(g.nodes),
        "edges": sorted(g.edges),
        "xvars": sorted(json.dumps(v.to_json(), sort_keys=True) for v in g.xvars),
    }


def to_dot(g: ExchangeGraph, name: str = "exchange_graph") -> str:
    lines = [f"graph {name} {{"]
    for k in sorted(g.nodes):
        lines.append(f'  "{k[:8]}";')
    done = set()
    for a, k, b in sorted(g.edges):
        e = (min(a, b), max(a, b))
        if e in done:
            continue
        done.add(e)
        lines.append(f'  "{a[:8]}" -- "{b[:8]}" [label="{k + 1}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
