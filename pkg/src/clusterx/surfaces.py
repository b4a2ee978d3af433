"""Tagged arcs, triangulations, flips, quivers and quadrilaterals of marked polygons.

Four polygons are modelled:

* ``plain`` ``m``-gon (type A_{m-3}),
* once-punctured ``m``-gon (type D_m),
* ``folded_plain``: centrally symmetric triangulations of a ``2n+2``-gon (type C_n),
* ``folded_punctured``: tag-symmetric triangulations of a once-punctured
  ``n+1``-gon (type B_n).

Vertices are labelled ``1..m`` clockwise.  A chord of a punctured polygon is
identified with the clockwise run of vertices it cuts off from the puncture:
``Chord(i, j, "direct")`` (``i < j``) cuts off ``i, i+1, .., j`` and
``Chord(i, j, "around")`` cuts off ``j, j+1, .., m, 1, .., i``.  The around
chords are exactly the ones crossing a cut from the puncture to the boundary
segment between ``m`` and ``1``.
"""

from __future__ import annotations

import csv
import io
import itertools
import math
from collections import Counter, deque
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple, Union

from .seeds import ExchangeMatrix, XSeed, universal_xseed

DIRECT, AROUND = "direct", "around"
PLAIN, NOTCHED = "plain", "notched"
KINDS = ("plain", "punctured", "folded_plain", "folded_punctured")


class SurfaceError(ValueError):
    pass


class FlipError(RuntimeError):
    """A flip found zero or several replacement arcs."""


@dataclass(frozen=True)
class Chord:
    i: int
    j: int
    winding: str = DIRECT

    def sort_key(self) -> tuple:
        return (1, self.i, self.j, self.winding == AROUND, 0)

    def __str__(self):
        return f"c{self.i}-{self.j}" + ("~" if self.winding == AROUND else "")


@dataclass(frozen=True)
class Radius:
    i: int
    tag: str = PLAIN

    def sort_key(self) -> tuple:
        return (2, self.i, 0, False, self.tag == NOTCHED)

    def __str__(self):
        return f"r{self.i}" + ("*" if self.tag == NOTCHED else "")


@dataclass(frozen=True)
class Boundary:
    """Boundary segment from vertex ``i`` to its clockwise neighbour."""

    i: int

    def sort_key(self) -> tuple:
        return (0, self.i, 0, False, 0)

    def __str__(self):
        return f"b{self.i}"


Arc = Union[Chord, Radius, Boundary]


def arc_sort_key(a) -> tuple:
    if isinstance(a, frozenset):
        return min(x.sort_key() for x in a)
    return a.sort_key()


def sort_arcs(arcs: Iterable) -> Tuple:
    return tuple(sorted(arcs, key=arc_sort_key))


def arc_to_json(a: Arc) -> dict:
    if isinstance(a, Chord):
        return {"chord": [a.i, a.j], "winding": a.winding}
    if isinstance(a, Radius):
        return {"radius": a.i, "tag": a.tag}
    return {"boundary": a.i}


def arc_from_json(d: dict) -> Arc:
    if "chord" in d:
        return Chord(d["chord"][0], d["chord"][1], d.get("winding", DIRECT))
    if "radius" in d:
        return Radius(d["radius"], d.get("tag", PLAIN))
    return Boundary(d["boundary"])


def _interleave(a: Tuple[int, int], b: Tuple[int, int]) -> bool:
    """Strict interleaving of two chords of a convex polygon."""
    (p, q), (r, s) = sorted(a), sorted(b)
    if len({p, q, r, s}) < 4:
        return False
    return (p < r < q) != (p < s < q)


class MarkedPolygon:
    """One of the four polygons; ``m`` is its number of boundary vertices."""

    def __init__(self, kind: str, m: int):
        if kind not in KINDS:
            raise SurfaceError(f"unknown polygon kind {kind!r}")
        if kind == "plain" and m < 4:
            raise SurfaceError("a plain polygon needs at least 4 vertices")
        if kind == "punctured" and m < 3:
            raise SurfaceError("a punctured polygon needs at least 3 vertices")
        if kind == "folded_plain" and (m % 2 or m < 6):
            raise SurfaceError("a folded plain polygon needs an even number >= 6 of vertices")
        if kind == "folded_punctured" and m < 3:
            raise SurfaceError("a folded punctured polygon needs at least 3 vertices")
        self.kind = kind
        self.m = m
        self._arcs: Optional[Tuple] = None
        self._compat: Dict[Tuple, bool] = {}

    # ------------------------------------------------------------------
    @classmethod
    def for_type(cls, kind: str, n: int) -> "MarkedPolygon":
        kind = kind.upper()
        if kind == "A":
            return cls("plain", n + 3)
        if kind == "D":
            return cls("punctured", n)
        if kind == "B":
            return cls("folded_punctured", n + 1)
        if kind == "C":
            return cls("folded_plain", 2 * n + 2)
        raise SurfaceError(f"no polygon model for type {kind}")

    @property
    def punctured(self) -> bool:
        return self.kind in ("punctured", "folded_punctured")

    @property
    def folded(self) -> bool:
        return self.kind.startswith("folded")

    @property
    def rank(self) -> int:
        return {
            "plain": self.m - 3,
            "punctured": self.m,
            "folded_plain": self.m // 2 - 1,
            "folded_punctured": self.m - 1,
        }[self.kind]

    def __repr__(self):
        return f"MarkedPolygon({self.kind!r}, {self.m})"

    def __eq__(self, other):
        return isinstance(other, MarkedPolygon) and (self.kind, self.m) == (other.kind, other.m)

    def __hash__(self):
        return hash((self.kind, self.m))

    # ------------------------------------------------------------------
    # intervals (punctured kinds)

    def interval(self, a: Arc) -> Tuple[int, int]:
        """Clockwise vertex run ``(start, end)`` cut off from the puncture."""
        if isinstance(a, Boundary):
            return (a.i, a.i % self.m + 1)
        if isinstance(a, Chord):
            return (a.i, a.j) if a.winding == DIRECT else (a.j, a.i)
        raise SurfaceError("radii have no interval")

    def run_length(self, start: int, end: int) -> int:
        return (end - start) % self.m + 1

    def from_interval(self, start: int, end: int) -> Arc:
        if end == start % self.m + 1:
            return Boundary(start)
        if start < end:
            return Chord(start, end, DIRECT)
        return Chord(end, start, AROUND)

    def in_run(self, v: int, start: int, end: int, strict: bool = True) -> bool:
        off = (v - start) % self.m
        span = (end - start) % self.m
        return 0 < off < span if strict else off <= span

    # ------------------------------------------------------------------
    def boundary_segments(self) -> Tuple[Boundary, ...]:
        return tuple(Boundary(i) for i in range(1, self.m + 1))

    def all_arcs(self) -> Tuple:
        """Every tagged arc; for folded kinds, every orbit (as a frozenset)."""
        if self._arcs is None:
            self._arcs = self._orbits() if self.folded else self._raw_arcs()
        return self._arcs

    def raw_arcs(self) -> Tuple[Arc, ...]:
        return self._raw_arcs()

    def _raw_arcs(self) -> Tuple[Arc, ...]:
        m = self.m
        out: List[Arc] = []
        if self.punctured:
            for start in range(1, m + 1):
                for d in range(2, m):
                    out.append(self.from_interval(start, (start - 1 + d) % m + 1))
            out += [Radius(i, t) for i in range(1, m + 1) for t in (PLAIN, NOTCHED)]
        else:
            out = [Chord(i, j) for i in range(1, m + 1) for j in range(i + 2, m + 1) if not (i == 1 and j == m)]
        return sort_arcs(out)

    def _orbits(self) -> Tuple[FrozenSet, ...]:
        return sort_arcs({self.orbit(a) for a in self._raw_arcs()})

    def g_action(self, a: Arc) -> Arc:
        """The involution defining the folding."""
        if self.kind == "folded_plain":
            h = self.m // 2
            if isinstance(a, Boundary):
                return Boundary((a.i - 1 + h) % self.m + 1)
            p, q = sorted(((a.i - 1 + h) % self.m + 1, (a.j - 1 + h) % self.m + 1))
            return Chord(p, q)
        if self.kind == "folded_punctured":
            if isinstance(a, Radius):
                return Radius(a.i, NOTCHED if a.tag == PLAIN else PLAIN)
            return a
        return a

    def orbit(self, a: Arc) -> FrozenSet:
        return frozenset((a, self.g_action(a)))

    def lift_to_double_cover(self, a: Arc) -> Tuple[Tuple[int, int], ...]:
        """Chord lifts in the ``2m``-gon; a radius lifts to a diameter."""
        m = self.m
        if isinstance(a, Radius):
            return ((a.i, a.i + m),)
        if isinstance(a, Chord):
            if a.winding == DIRECT:
                return ((a.i, a.j), (a.i + m, a.j + m))
            return ((a.i, a.j + m), (a.i + m, a.j))
        raise SurfaceError("boundary segments have no lift")

    def compatible(self, a: Arc, b: Arc) -> bool:
        key = (a, b)
        got = self._compat.get(key)
        if got is None:
            got = self._compatible(a, b)
            self._compat[key] = self._compat[(b, a)] = got
        return got

    def _compatible(self, a: Arc, b: Arc) -> bool:
        if a == b:
            return True
        if not self.punctured:
            return not _interleave((a.i, a.j), (b.i, b.j))
        if isinstance(a, Radius) and isinstance(b, Radius):
            return a.tag == b.tag or a.i == b.i
        return not any(_interleave(x, y) for x in self.lift_to_double_cover(a) for y in self.lift_to_double_cover(b))

    def segments(self, a: Arc) -> FrozenSet[int]:
        """Boundary segments on the cut-off side of an interval arc."""
        st, e = self.interval(a)
        return frozenset((st - 1 + t) % self.m + 1 for t in range(self.run_length(st, e) - 1))

    def compatible_by_intervals(self, a: Arc, b: Arc) -> bool:
        """Independent crossing rule in the interval picture (used as a cross-check)."""
        if a == b:
            return True
        if isinstance(a, Radius) and isinstance(b, Radius):
            return a.tag == b.tag or a.i == b.i
        if isinstance(a, Radius) or isinstance(b, Radius):
            r, c = (a, b) if isinstance(a, Radius) else (b, a)
            st, e = self.interval(c)
            return not self.in_run(r.i, st, e)
        s1, s2 = self.segments(a), self.segments(b)
        return s1 <= s2 or s2 <= s1 or not (s1 & s2)

    # ------------------------------------------------------------------
    def initial_triangulation(self) -> "Triangulation":
        m = self.m
        if self.kind == "plain":
            arcs = [Chord(1, j) for j in range(3, m)]
        elif self.kind == "punctured":
            arcs = [Radius(i) for i in range(1, m + 1)]
        elif self.kind == "folded_punctured":
            arcs = [Radius(1, PLAIN), Radius(1, NOTCHED)] + [Chord(1, j) for j in range(3, m + 1)]
        else:
            h = m // 2
            arcs = [Chord(1, j) for j in range(3, h + 2)] + [Chord(h + 1, j) for j in range(h + 3, m + 1)]
        return Triangulation.from_arcs(self, arcs)

    def orbit_count(self) -> int:
        return self.rank


class Triangulation:
    """A tagged triangulation, with its arcs grouped into labelled positions.

    ``slots`` is a tuple of orbits (frozensets); for unfolded polygons each
    orbit is a singleton.  Slot ``k`` corresponds to mutation direction ``k``.
    """

    __slots__ = ("polygon", "slots", "arcs", "_faces", "_quiver")

    def __init__(self, polygon: MarkedPolygon, slots: Sequence[FrozenSet]):
        self.polygon = polygon
        self.slots = tuple(slots)
        self.arcs = frozenset(a for s in self.slots for a in s)
        self._faces = None
        self._quiver = None

    @classmethod
    def from_arcs(cls, polygon: MarkedPolygon, arcs: Iterable[Arc]) -> "Triangulation":
        arcs = set(arcs)
        slots = []
        for a in sort_arcs(arcs):
            o = polygon.orbit(a) if polygon.folded else frozenset((a,))
            if o not in slots:
                slots.append(o)
        t = cls(polygon, slots)
        t.validate()
        return t

    @property
    def key(self) -> FrozenSet:
        return self.arcs

    def validate(self) -> None:
        P = self.polygon
        arcs = sort_arcs(self.arcs)
        for a, b in itertools.combinations(arcs, 2):
            if not P.compatible(a, b):
                raise SurfaceError(f"{a} and {b} are not compatible")
        if P.folded:
            for a in arcs:
                if P.g_action(a) not in self.arcs:
                    raise SurfaceError(f"{a} has its image outside the triangulation")
        if len(self.slots) != P.rank:
            raise SurfaceError(f"expected {P.rank} positions, found {len(self.slots)}")

    def __eq__(self, other):
        return isinstance(other, Triangulation) and self.arcs == other.arcs

    def __hash__(self):
        return hash(self.arcs)

    def __repr__(self):
        return "Triangulation(" + ", ".join(str(a) for a in sort_arcs(self.arcs)) + ")"

    def index_of(self, a: Arc) -> int:
        for k, s in enumerate(self.slots):
            if a in s:
                return k
        raise SurfaceError(f"{a} is not in the triangulation")

    # ------------------------------------------------------------------
    def flip(self, k: int) -> Tuple["Triangulation", FrozenSet]:
        """Flip every arc of slot ``k``; returns the new triangulation and new slot."""
        if not 0 <= k < len(self.slots):
            raise IndexError(f"slot {k} out of range")
        current = set(self.arcs)
        new_members = []
        for gamma in sort_arcs(self.slots[k]):
            current.discard(gamma)
            repl = _unique_replacement(self.polygon, current, gamma)
            current.add(repl)
            new_members.append(repl)
        slot = frozenset(new_members)
        slots = list(self.slots)
        slots[k] = slot
        return Triangulation(self.polygon, slots), slot

    def flip_arc(self, gamma: Arc) -> Tuple["Triangulation", FrozenSet]:
        return self.flip(self.index_of(gamma))

    # ------------------------------------------------------------------
    def faces(self) -> "FaceData":
        if self._faces is None:
            self._faces = _faces(self)
        return self._faces

    def quiver(self) -> Counter:
        """Signed arrow counts between arcs and boundary segments (2-cycles cancelled)."""
        if self._quiver is None:
            self._quiver = self.faces().arrows
        return self._quiver

    def exchange_matrix(self) -> ExchangeMatrix:
        return exchange_matrix(self)

    def extended_matrix(self) -> Tuple[Tuple[int, ...], ...]:
        """Rows for the slots followed by boundary segments, columns for the slots."""
        return extended_matrix(self)

    def to_json(self) -> dict:
        return {
            "polygon": {"kind": self.polygon.kind, "m": self.polygon.m},
            "slots": [[arc_to_json(a) for a in sort_arcs(s)] for s in self.slots],
        }


def _unique_replacement(P: MarkedPolygon, rest: Set[Arc], gamma: Arc) -> Arc:
    found = []
    for cand in P.raw_arcs():
        if cand == gamma or cand in rest:
            continue
        if all(P.compatible(cand, a) for a in rest):
            found.append(cand)
    if len(found) != 1:
        raise FlipError(f"flip of {gamma} has {len(found)} candidates: {[str(f) for f in found]}")
    return found[0]


# ---------------------------------------------------------------------------
# Faces, quivers and adjacency


@dataclass
class FaceData:
    triangles: List[Tuple]  # clockwise sides (s1, s2, s3), arrows s1 -> s2 -> s3 -> s1
    digon: Optional[Tuple]  # (alpha, beta, radii) for a once-punctured digon
    arrows: Counter  # (u, v) -> signed count, u -> v positive
    adjacent: Dict  # arc -> set of adjacent arcs / boundary segments


def _polygon_triangles(vertices: Sequence, edge) -> List[Tuple]:
    """Triangles of a triangulated polygon with clockwise ``vertices``."""
    out = []
    L = len(vertices)
    for p, q, r in itertools.combinations(range(L), 3):
        e1 = edge(vertices[p], vertices[q])
        if e1 is None:
            continue
        e2 = edge(vertices[q], vertices[r])
        if e2 is None:
            continue
        e3 = edge(vertices[p], vertices[r])
        if e3 is None:
            continue
        out.append((e1, e2, e3))
    return out


def _find_digon(T: Triangulation) -> Optional[Tuple[Arc, Arc, int, int]]:
    P = T.polygon
    present = set(T.arcs) | set(P.boundary_segments())
    radii = [a for a in T.arcs if isinstance(a, Radius)]
    ends = {r.i for r in radii}
    for i in sorted(ends):
        for j in range(1, P.m + 1):
            if j == i:
                continue
            alpha, beta = P.from_interval(i, j), P.from_interval(j, i)
            if alpha in present and beta in present:
                return alpha, beta, i, j
    return None


def _faces(T: Triangulation) -> FaceData:
    P = T.polygon
    m = P.m
    present = set(T.arcs) | set(P.boundary_segments())
    triangles: List[Tuple] = []
    digon = None
    arrows: Counter = Counter()
    if not P.punctured:

        def edge(a, b):
            p, q = sorted((a, b))
            if q == p + 1:
                return Boundary(p)
            if (p, q) == (1, m):
                return Boundary(m)
            c = Chord(p, q)
            return c if c in present else None

        triangles = _polygon_triangles(list(range(1, m + 1)), edge)
    else:
        radii = sorted((a for a in T.arcs if isinstance(a, Radius)), key=lambda r: r.i)
        tags = {r.tag for r in radii}
        rad_at = {r.i: r for r in radii}

        def run_edge(a, b):
            arc = P.from_interval(a, b)
            return arc if arc in present else None

        if len(tags) == 2:
            # plain and notched radius at the same vertex: a once-punctured digon
            found = _find_digon(T)
            if found is None:
                raise SurfaceError(f"tagged pair without enclosing digon in {T}")
            alpha, beta, i, j = found
            for s, e in ((i, j), (j, i)):
                verts = [(s - 1 + t) % m + 1 for t in range(P.run_length(s, e))]
                if len(verts) >= 3:
                    triangles += _polygon_triangles(verts, run_edge)
            digon = (alpha, beta, tuple(radii))
        else:
            ends = [r.i for r in radii]
            PUNCT = 0
            for idx, s in enumerate(ends):
                e = ends[(idx + 1) % len(ends)]
                verts = [PUNCT] + [(s - 1 + t) % m + 1 for t in range(P.run_length(s, e) if e != s else m + 1)]

                def edge(a, b, _verts=verts):
                    if a == PUNCT or b == PUNCT:
                        v = b if a == PUNCT else a
                        return rad_at.get(v)
                    return run_edge(a, b)

                triangles += _polygon_triangles(verts, edge)
            found = _find_digon(T)
            if found is not None:
                alpha, beta, i, j = found
                digon = (alpha, beta, tuple(r for r in radii if r.i in (i, j)))
    for s1, s2, s3 in triangles:
        for u, v in ((s1, s2), (s2, s3), (s3, s1)):
            arrows[(u, v)] += 1
            arrows[(v, u)] -= 1
    if digon is not None and len({r.i for r in digon[2]}) == 1:
        alpha, beta, rs = digon
        for u, v in [(alpha, beta)] + [(beta, r) for r in rs] + [(r, alpha) for r in rs]:
            arrows[(u, v)] += 1
            arrows[(v, u)] -= 1
    arrows = Counter({k: v for k, v in arrows.items() if v})
    adjacent: Dict = {a: set() for a in T.arcs}
    for tri in triangles:
        for a in tri:
            if a in adjacent:
                adjacent[a].update(x for x in tri if x != a)
    if digon is not None:
        alpha, beta, rs = digon
        for r in rs:
            adjacent[r].update((alpha, beta))
            for side in (alpha, beta):
                if side in adjacent:
                    adjacent[side].add(r)
        if len({r.i for r in rs}) == 1:
            # the sides of a digon holding a single (tag-doubled) radius are adjacent
            if alpha in adjacent:
                adjacent[alpha].add(beta)
            if beta in adjacent:
                adjacent[beta].add(alpha)
        # the two radii inside the digon are not adjacent
        for r in rs:
            for r2 in rs:
                adjacent[r].discard(r2)
    return FaceData(triangles, digon, arrows, adjacent)


def exchange_matrix(T: Triangulation) -> ExchangeMatrix:
    arrows = T.quiver()
    n = len(T.slots)
    rows = [[0] * n for _ in range(n)]
    for I, si in enumerate(T.slots):
        for J, sj in enumerate(T.slots):
            if I == J:
                continue
            j = min(sj, key=arc_sort_key)
            rows[I][J] = sum(arrows.get((i, j), 0) for i in si)
    return ExchangeMatrix(rows)


def extended_matrix(T: Triangulation) -> Tuple[Tuple[int, ...], ...]:
    arrows = T.quiver()
    n = len(T.slots)
    rows_from = list(T.slots) + [frozenset((b,)) for b in T.polygon.boundary_segments()]
    out = []
    for si in rows_from:
        row = []
        for J, sj in enumerate(T.slots):
            j = min(sj, key=arc_sort_key)
            row.append(sum(arrows.get((i, j), 0) for i in si if i != j))
        out.append(tuple(row))
    return tuple(out)


# ---------------------------------------------------------------------------
# Quadrilaterals


@dataclass(frozen=True)
class QuadrilateralWithDiagonal:
    quad: Tuple  # sorted arcs and boundary segments
    diagonal: Union[Arc, FrozenSet]
    digon_case: bool = False
    m: int = field(default=0, compare=False)  # polygon size, for boundary endpoints

    @property
    def key(self) -> tuple:
        return (
            tuple(a.sort_key() for a in self.quad),
            arc_sort_key(self.diagonal),
            self.digon_case,
        )

    def vertices(self) -> Tuple[int, ...]:
        vs = set()
        for a in self.quad:
            if isinstance(a, Chord):
                vs.update((a.i, a.j))
            elif isinstance(a, Radius):
                vs.add(a.i)
            elif isinstance(a, Boundary) and self.m:
                vs.update((a.i, a.i % self.m + 1))
        return tuple(sorted(vs))

    def label(self) -> str:
        d = self.diagonal
        dl = "/".join(str(x) for x in sort_arcs(d)) if isinstance(d, frozenset) else str(d)
        return "{" + ",".join(str(a) for a in self.quad) + "}|" + dl + ("|digon" if self.digon_case else "")

    def __str__(self):
        return self.label()


def _radius_in_digon(T: Triangulation, gamma: Arc) -> Optional[Tuple[Arc, Arc, int]]:
    if not isinstance(gamma, Radius):
        return None
    fd = T.faces()
    if fd.digon is None:
        return None
    alpha, beta, rs = fd.digon
    if gamma not in rs:
        return None
    P = T.polygon
    s, e = P.interval(alpha)
    other = e if gamma.i == s else s
    return alpha, beta, other


def quadrilateral(T: Triangulation, gamma: Union[Arc, FrozenSet]) -> QuadrilateralWithDiagonal:
    P = T.polygon
    fd = T.faces()
    if P.folded:
        orbit = gamma if isinstance(gamma, frozenset) else P.orbit(gamma)
        if orbit not in T.slots:
            raise SurfaceError(f"{gamma} is not in the triangulation")
        quad = set()
        for g in orbit:
            quad |= fd.adjacent[g]
        return QuadrilateralWithDiagonal(sort_arcs(quad), orbit, False, P.m)
    if gamma not in T.arcs:
        raise SurfaceError(f"{gamma} is not in the triangulation")
    dig = _radius_in_digon(T, gamma)
    if dig is not None:
        alpha, beta, j = dig
        other_tag = NOTCHED if gamma.tag == PLAIN else PLAIN
        quad = {alpha, beta, Radius(gamma.i, other_tag), Radius(j, gamma.tag)}
        return QuadrilateralWithDiagonal(sort_arcs(quad), gamma, True, P.m)
    return QuadrilateralWithDiagonal(sort_arcs(fd.adjacent[gamma]), gamma, False, P.m)


def quadrilaterals_of(T: Triangulation) -> List[QuadrilateralWithDiagonal]:
    """Quadrilateral of each slot, in slot order."""
    return [quadrilateral(T, s if T.polygon.folded else next(iter(s))) for s in T.slots]


# ---------------------------------------------------------------------------
# Enumeration


DEFAULT_SIZE_GUARD = 200000


def flip_graph(P: MarkedPolygon, size_guard: int = DEFAULT_SIZE_GUARD):
    """BFS over triangulations; returns (list of triangulations, edge list of index pairs)."""
    start = P.initial_triangulation()
    index = {start.key: 0}
    order = [start]
    edges = []
    queue = deque([start])
    while queue:
        T = queue.popleft()
        a = index[T.key]
        for k in range(len(T.slots)):
            T2, _ = T.flip(k)
            b = index.get(T2.key)
            if b is None:
                if len(order) >= size_guard:
                    raise SurfaceError(f"more than {size_guard} triangulations")
                b = index[T2.key] = len(order)
                order.append(T2)
                queue.append(T2)
            if a < b:
                edges.append((a, b))
    return order, edges


def enumerate_triangulations(P: MarkedPolygon, size_guard: int = DEFAULT_SIZE_GUARD) -> List[Triangulation]:
    return flip_graph(P, size_guard)[0]


def enumerate_quadrilaterals(P: MarkedPolygon, size_guard: int = DEFAULT_SIZE_GUARD) -> Dict[tuple, QuadrilateralWithDiagonal]:
    out: Dict[tuple, QuadrilateralWithDiagonal] = {}
    for T in enumerate_triangulations(P, size_guard):
        for q in quadrilaterals_of(T):
            out.setdefault(q.key, q)
    return out


def quadrilateral_census(P: MarkedPolygon) -> List[Tuple[QuadrilateralWithDiagonal, int]]:
    """Each quadrilateral-with-diagonal and the number of triangulations containing it."""
    counts: Counter = Counter()
    reps: Dict[tuple, QuadrilateralWithDiagonal] = {}
    for T in enumerate_triangulations(P):
        for q in quadrilaterals_of(T):
            counts[q.key] += 1
            reps.setdefault(q.key, q)
    return [(reps[k], counts[k]) for k in sorted(reps)]


def census_csv(P: MarkedPolygon) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["key", "diagonal", "count"])
    for q, c in quadrilateral_census(P):
        d = q.diagonal
        dl = "/".join(str(x) for x in sort_arcs(d)) if isinstance(d, frozenset) else str(d)
        w.writerow([q.label(), dl, c])
    return buf.getvalue()


def flip_graph_dot(P: MarkedPolygon) -> str:
    order, edges = flip_graph(P)
    lines = [f"graph flip_graph_{P.kind}_{P.m} {{"]
    for i, T in enumerate(order):
        label = " ".join(str(a) for a in sort_arcs(T.arcs))
        lines.append(f'  t{i} [label="{label}"];')
    for a, b in edges:
        lines.append(f"  t{a} -- t{b};")
    lines.append("}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Closed forms


def closed_form_quad_count(P: MarkedPolygon) -> int:
    C = math.comb
    if P.kind == "plain":
        return C(P.m, 4)
    if P.kind == "punctured":
        n = P.m
        return 4 * C(n, 4) + 9 * C(n, 3) + 2 * C(n, 2)
    if P.kind == "folded_punctured":
        return 4 * C(P.m, 4) + 3 * C(P.m, 3) + C(P.m, 2)
    n = P.m // 2 - 1
    return q1_closed_form(n) // 2 + C(n + 1, 2)


def closed_form_quad_count_polynomial(P: MarkedPolygon) -> Tuple[int, int]:
    """The same count through the factored polynomial, as (numerator, 6)."""
    if P.kind == "plain":
        n = P.m - 3
        return (n + 3) * (n + 2) * (n + 1) * n // 4, 6
    if P.kind == "punctured":
        n = P.m
        return n * (n - 1) * (n * n + 4 * n - 6), 6
    n = P.rank
    return n * (n + 1) * (n * n + 2), 6


def q1_closed_form(n: int) -> int:
    return (math.comb(2 * n + 2, 4) - math.comb(n + 1, 2)) // 2


def arc_count_closed_form(P: MarkedPolygon) -> int:
    if P.kind == "plain":
        n = P.m - 3
        return n * (n + 3) // 2
    if P.kind == "punctured":
        return P.m * P.m
    n = P.rank
    return n * (n + 1)


def classify_plain_quads(n: int) -> Dict[str, List[Tuple[int, ...]]]:
    """Split the 4-vertex subsets of a ``2n+2``-gon into half-disk, other and fixed classes."""
    N = 2 * n + 2
    h = n + 1

    def flip_v(v):
        return (v - 1 + h) % N + 1

    def in_half_disk(q):
        for i in range(1, N + 1):
            if all((v - i) % N <= h for v in q):
                return True
        return False

    out = {"Q1": [], "Q2": [], "fixed": []}
    for q in itertools.combinations(range(1, N + 1), 4):
        if in_half_disk(q):
            out["Q1"].append(q)
        elif set(q) == {q[0], q[1], flip_v(q[0]), flip_v(q[1])}:
            out["fixed"].append(q)
        else:
            out["Q2"].append(q)
    return out


def half_disk_flip_map(n: int, q: Tuple[int, ...]) -> Tuple[int, ...]:
    """Send a half-disk quadrilateral (a, b, c, d) to {a, c, d, b'}.

    ``a`` is the vertex whose clockwise closed half-disk contains ``q``.
    """
    N = 2 * n + 2
    h = n + 1
    for a in q:
        if all((v - a) % N <= h for v in q):
            _, b, c, d = sorted(q, key=lambda v: (v - a) % N)
            return tuple(sorted((a, c, d, (b - 1 + h) % N + 1)))
    raise SurfaceError(f"{q} is not contained in a half-disk")


def verify_type_c_decomposition(n: int) -> dict:
    """Brute-force check of the half-disk classification and the flip bijection."""
    cls = classify_plain_quads(n)
    images = [half_disk_flip_map(n, q) for q in cls["Q1"]]
    q2 = set(cls["Q2"])
    bijective = len(set(images)) == len(images) and set(images) == q2
    P = MarkedPolygon("folded_plain", 2 * n + 2)
    from_triangulations = set()
    for T in enumerate_triangulations(P):
        faces = T.faces().triangles
        # quadrilaterals of the unfolded triangulation = vertex sets of two adjacent triangles
        for a in T.arcs:
            verts = set()
            for tri in faces:
                if a in tri:
                    for s in tri:
                        if isinstance(s, Chord):
                            verts.update((s.i, s.j))
                        else:
                            verts.update((s.i, s.i % P.m + 1))
            from_triangulations.add(tuple(sorted(verts)))
    in_q1_or_fixed = all(q in set(cls["Q1"]) or q in set(cls["fixed"]) for q in from_triangulations)
    return {
        "n": n,
        "Q1": len(cls["Q1"]),
        "Q2": len(cls["Q2"]),
        "fixed": len(cls["fixed"]),
        "Q1_closed_form": q1_closed_form(n),
        "fixed_closed_form": math.comb(n + 1, 2),
        "total": math.comb(2 * n + 2, 4),
        "flip_map_bijective": bijective,
        "symmetric_quads_in_Q1_or_fixed": in_q1_or_fixed,
        "ok": (
            len(cls["Q1"]) == q1_closed_form(n)
            and len(cls["fixed"]) == math.comb(n + 1, 2)
            and bijective
            and in_q1_or_fixed
        ),
    }


# ---------------------------------------------------------------------------
# Bijection between quadrilaterals and X-variables


def verify_bijection(kind: str, n: int, size_guard: int = DEFAULT_SIZE_GUARD) -> dict:
    """Propagate a universal X-seed over the flip graph and test the quadrilateral bijection."""
    P = MarkedPolygon.for_type(kind, n)
    T0 = P.initial_triangulation()
    seed0 = universal_xseed(exchange_matrix(T0))
    problems: List[dict] = []
    x_of_key: Dict[tuple, object] = {}
    key_of_x: Dict[object, tuple] = {}
    diagonals: Dict[tuple, Dict[tuple, object]] = {}
    quad_obj: Dict[tuple, QuadrilateralWithDiagonal] = {}
    seen: Dict[FrozenSet, Dict] = {}
    queue = deque([(T0, seed0)])
    seen[T0.key] = {s: seed0.x[k] for k, s in enumerate(T0.slots)}
    checked_commutation = 0
    while queue:
        T, seed = queue.popleft()
        if len(seen) > size_guard:
            raise SurfaceError("size guard exceeded")
        quads = quadrilaterals_of(T)
        for k, q in enumerate(quads):
            x = seed.x[k]
            prev = x_of_key.setdefault(q.key, x)
            quad_obj.setdefault(q.key, q)
            if prev != x:
                problems.append({"check": "single-valued", "quadrilateral": q.label()})
            other = key_of_x.setdefault(x, q.key)
            if other != q.key:
                problems.append({"check": "injective", "quadrilaterals": [q.label(), quad_obj[other].label()]})
            diagonals.setdefault(q.key[0], {})[q.key[1:]] = x
        for k in range(len(T.slots)):
            T2, _ = T.flip(k)
            seed2 = seed.mutate(k)
            checked_commutation += 1
            if exchange_matrix(T2) != seed2.B:
                problems.append({"check": "flip-mutation", "triangulation": repr(T), "direction": k})
            flipped = T.slots[k]
            for j, q in enumerate(quads):
                if j == k:
                    continue
                if not (flipped & set(q.quad)) and seed2.x[j] != seed.x[j]:
                    problems.append({"check": "locality", "triangulation": repr(T), "direction": k, "arc": j})
            values = {s: seed2.x[j] for j, s in enumerate(T2.slots)}
            known = seen.get(T2.key)
            if known is None:
                seen[T2.key] = values
                queue.append((T2, seed2))
            elif known != values:
                problems.append({"check": "path-consistency", "triangulation": repr(T2)})
    for quad, diags in diagonals.items():
        if len(diags) != 2:
            problems.append({"check": "two-diagonals", "quadrilateral": str(quad), "count": len(diags)})
            continue
        a, b = diags.values()
        if a * b != type(a).one(a.basis):
            problems.append({"check": "diagonal-inverse", "quadrilateral": str(quad)})
    expected = 2 * closed_form_quad_count(P)
    return {
        "type": kind.upper(),
        "rank": n,
        "polygon": {"kind": P.kind, "m": P.m},
        "triangulations": len(seen),
        "quadrilaterals_with_diagonal": len(x_of_key),
        "xvars": len(key_of_x),
        "expected": expected,
        "flips_checked": checked_commutation,
        "problems": problems[:50],
        "problem_count": len(problems),
        "ok": not problems and len(x_of_key) == expected == len(key_of_x),
    }
