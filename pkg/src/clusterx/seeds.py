"""Exchange matrices, labeled X- and A-seeds, mutation, and canonical seed keys.

Indices are 0-based throughout the Python API.
"""

from __future__ import annotations

import hashlib
import itertools
import math
from collections import deque
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from .semifield import (
    FactorBasis,
    SemifieldError,
    SemifieldValue,
    Trivial,
    Tropical,
    Universal,
    one_like,
)

DEFAULT_CANON_BOUND = 9


class SkewSymmetrizabilityError(ValueError):
    pass


class CapabilityError(RuntimeError):
    """Requested rank exceeds the canonicalization bound."""


class DynkinTypeError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Exchange matrices


Matrix = Tuple[Tuple[int, ...], ...]


def _as_matrix(rows: Sequence[Sequence[int]]) -> Matrix:
    m = tuple(tuple(int(v) for v in r) for r in rows)
    if any(len(r) != len(m) for r in m):
        raise ValueError("exchange matrix must be square")
    return m


def find_skew_symmetrizer(rows: Sequence[Sequence[int]]) -> Optional[Tuple[int, ...]]:
    """Minimal positive integer diagonal D with D*B skew-symmetric, or None."""
    b = _as_matrix(rows)
    n = len(b)
    for i in range(n):
        if b[i][i] != 0:
            return None
        for j in range(n):
            if (b[i][j] == 0) != (b[j][i] == 0):
                return None
            if b[i][j] and (b[i][j] > 0) == (b[j][i] > 0):
                return None
    ratio: List[Optional[Fraction]] = [None] * n
    comp = [0] * n
    ncomp = 0
    for s in range(n):
        if ratio[s] is not None:
            continue
        ratio[s] = Fraction(1)
        comp[s] = ncomp
        queue = deque([s])
        while queue:
            i = queue.popleft()
            for j in range(n):
                if b[i][j] == 0:
                    continue
                # d_i b_ij = -d_j b_ji
                want = ratio[i] * b[i][j] / -b[j][i]
                if ratio[j] is None:
                    ratio[j] = want
                    comp[j] = ncomp
                    queue.append(j)
                elif ratio[j] != want:
                    return None
        ncomp += 1
    d = [0] * n
    for c in range(ncomp):
        members = [i for i in range(n) if comp[i] == c]
        lcm = math.lcm(*(ratio[i].denominator for i in members))
        ints = [int(ratio[i] * lcm) for i in members]
        g = math.gcd(*ints)
        for i, v in zip(members, ints):
            d[i] = v // g
    return tuple(d)


class ExchangeMatrix:
    """Skew-symmetrizable integer matrix with a positive diagonal witness ``D``."""

    __slots__ = ("n", "entries", "D", "_hash")

    def __init__(self, entries: Sequence[Sequence[int]], D: Optional[Sequence[int]] = None):
        self.entries = _as_matrix(entries)
        self.n = len(self.entries)
        if D is None:
            D = find_skew_symmetrizer(self.entries)
            if D is None:
                raise SkewSymmetrizabilityError(f"not skew-symmetrizable: {self.entries}")
        self.D = tuple(int(d) for d in D)
        if len(self.D) != self.n or any(d <= 0 for d in self.D):
            raise SkewSymmetrizabilityError("witness must be a positive vector of length n")
        for i in range(self.n):
            for j in range(self.n):
                if self.D[i] * self.entries[i][j] != -self.D[j] * self.entries[j][i]:
                    raise SkewSymmetrizabilityError(f"D*B is not skew-symmetric at ({i}, {j})")
        self._hash = hash(self.entries)

    def __getitem__(self, ij: Tuple[int, int]) -> int:
        return self.entries[ij[0]][ij[1]]

    def __eq__(self, other):
        if not isinstance(other, ExchangeMatrix):
            return NotImplemented
        return self.entries == other.entries

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"ExchangeMatrix({[list(r) for r in self.entries]})"

    def _check(self, k: int) -> None:
        if not 0 <= k < self.n:
            raise IndexError(f"direction {k} out of range for rank {self.n}")

    def mutate(self, k: int) -> "ExchangeMatrix":
        self._check(k)
        b = self.entries
        bk = b[k]
        out = []
        for i in range(self.n):
            row = b[i]
            if i == k:
                out.append(tuple(-v for v in row))
                continue
            bik = row[k]
            new = list(row)
            new[k] = -bik
            if bik:
                for j in range(self.n):
                    if j != k and bik * bk[j] > 0:
                        new[j] = row[j] + bik * abs(bk[j])
            out.append(tuple(new))
        m = ExchangeMatrix.__new__(ExchangeMatrix)
        m.entries = tuple(out)
        m.n = self.n
        m.D = self.D
        m._hash = hash(m.entries)
        return m

    def permuted(self, perm: Sequence[int]) -> "ExchangeMatrix":
        """Entry (i, j) of the result is entry (perm[i], perm[j]) of self."""
        b = self.entries
        return ExchangeMatrix(
            [[b[p][q] for q in perm] for p in perm], [self.D[p] for p in perm]
        )

    def cartan_counterpart(self) -> Matrix:
        return cartan_counterpart(self)

    def to_json(self) -> dict:
        return {"B": [list(r) for r in self.entries], "D": list(self.D)}


def mutate_matrix(B: ExchangeMatrix, k: int) -> ExchangeMatrix:
    return B.mutate(k)


def cartan_counterpart(B: Union[ExchangeMatrix, Sequence[Sequence[int]]]) -> Matrix:
    b = B.entries if isinstance(B, ExchangeMatrix) else _as_matrix(B)
    n = len(b)
    return tuple(tuple(2 if i == j else -abs(b[i][j]) for j in range(n)) for i in range(n))


# ---------------------------------------------------------------------------
# Dynkin data


def cartan_matrix(kind: str, n: int) -> Matrix:
    """Standard Cartan matrix, Bourbaki numbering (0-based here)."""
    kind = kind.upper()
    if kind in ("E", "F", "G"):
        kind = f"{kind}{n}"
    c = [[2 if i == j else 0 for j in range(n)] for i in range(n)]

    def bond(i, j, aij=-1, aji=-1):
        c[i][j], c[j][i] = aij, aji

    if kind == "A" and n >= 1:
        for i in range(n - 1):
            bond(i, i + 1)
    elif kind in ("B", "C") and n >= 2:
        for i in range(n - 2):
            bond(i, i + 1)
        if kind == "B":
            bond(n - 2, n - 1, -1, -2)
        else:
            bond(n - 2, n - 1, -2, -1)
    elif kind == "D" and n >= 2:
        for i in range(n - 3):
            bond(i, i + 1)
        if n >= 3:
            bond(n - 3, n - 2)
            bond(n - 3, n - 1)
    elif kind in ("E6", "E7", "E8") and n == int(kind[1]):
        bond(0, 2)
        bond(1, 3)
        for i in range(2, n - 1):
            bond(i, i + 1)
    elif kind == "F4" and n == 4:
        bond(0, 1)
        bond(1, 2, -2, -1)
        bond(2, 3)
    elif kind == "G2" and n == 2:
        bond(0, 1, -1, -3)
    else:
        raise DynkinTypeError(f"no Dynkin diagram of type {kind} and rank {n}")
    return tuple(tuple(r) for r in c)


def dynkin_initial_matrix(kind: str, n: int) -> ExchangeMatrix:
    """Bipartite orientation of the Dynkin diagram with the given Cartan counterpart."""
    c = cartan_matrix(kind, n)
    color = [-1] * n
    for s in range(n):
        if color[s] >= 0:
            continue
        color[s] = 0
        queue = deque([s])
        while queue:
            i = queue.popleft()
            for j in range(n):
                if j != i and c[i][j] and color[j] < 0:
                    color[j] = 1 - color[i]
                    queue.append(j)
    rows = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            if i != j and c[i][j]:
                rows[i][j] = -c[i][j] if color[i] == 0 else c[i][j]
    return ExchangeMatrix(rows)


def parse_type(text: str) -> Tuple[str, Optional[int]]:
    """``'E6'`` -> ``('E', 6)``; ``'A'`` -> ``('A', None)``."""
    text = text.strip().upper()
    letter, rest = text[:1], text[1:]
    if letter not in "ABCDEFG" or not letter:
        raise DynkinTypeError(f"unknown Dynkin type {text!r}")
    return letter, int(rest) if rest else None


# ---------------------------------------------------------------------------
# Seeds


def _embed(v: SemifieldValue, basis: FactorBasis, offset: int) -> Universal:
    """Image of a coefficient in the ambient field of an A-seed."""
    if isinstance(v, Trivial):
        return Universal.one(basis)
    if isinstance(v, Tropical):
        out = Universal.one(basis)
        for i, e in enumerate(v.exps):
            if e:
                out = out * Universal.generator(basis, offset + i) ** e
        return out
    if isinstance(v, Universal):
        if v.basis is not basis:
            raise SemifieldError("universal coefficients must share the ambient factor basis")
        return v
    raise SemifieldError(f"unsupported coefficient {v!r}")


def _mutate_x(x: Sequence[SemifieldValue], B: ExchangeMatrix, k: int) -> List[SemifieldValue]:
    xk = x[k]
    bk = B.entries[k]
    s = xk.oplus_one() if isinstance(xk, Universal) else xk.oplus(one_like(xk))
    s_inv_side = None  # x_k^{-1} (+) 1 = (x_k (+) 1) / x_k
    out = list(x)
    out[k] = xk.inverse()
    for j in range(B.n):
        b = bk[j]
        if j == k or b == 0:
            continue
        if b < 0:
            out[j] = x[j] * s ** (-b)
        else:
            if s_inv_side is None:
                s_inv_side = s / xk
            out[j] = x[j] * s_inv_side ** (-b)
    return out


class XSeed:
    """Labeled X-seed ``(x, B)``."""

    __slots__ = ("x", "B")

    def __init__(self, x: Sequence[SemifieldValue], B: ExchangeMatrix):
        if len(x) != B.n:
            raise ValueError(f"cluster length {len(x)} does not match rank {B.n}")
        kinds = {type(v) for v in x}
        if len(kinds) > 1:
            raise SemifieldError("mixed semifield variants in one seed")
        self.x = tuple(x)
        self.B = B

    @property
    def n(self) -> int:
        return self.B.n

    def mutate(self, k: int) -> "XSeed":
        self.B._check(k)
        return XSeed(_mutate_x(self.x, self.B, k), self.B.mutate(k))

    def permuted(self, perm: Sequence[int]) -> "XSeed":
        return XSeed([self.x[p] for p in perm], self.B.permuted(perm))

    def tokens(self) -> List[tuple]:
        return [v.sort_token() for v in self.x]

    def values(self) -> Tuple:
        return self.x

    def same_as(self, other: "XSeed") -> bool:
        return self.B == other.B and all(a == b for a, b in zip(self.x, other.x))

    def to_json(self) -> dict:
        return {**self.B.to_json(), "x": [v.to_json() for v in self.x]}

    def __repr__(self):
        return f"XSeed(x={list(self.x)}, B={[list(r) for r in self.B.entries]})"


def mutate_x(s: XSeed, k: int) -> XSeed:
    return s.mutate(k)


class ASeed:
    """Labeled A-seed ``(a, x, B)``.

    ``a`` lives in the ambient field, represented by universal values over
    ``basis``.  By convention ``basis`` variables ``0..n-1`` are the initial
    cluster variables and, for tropical coefficients, variables ``offset..``
    are the frozen generators.
    """

    __slots__ = ("a", "x", "B", "basis", "offset")

    def __init__(self, a: Sequence[Universal], x: Sequence[SemifieldValue], B: ExchangeMatrix, basis: FactorBasis, offset: Optional[int] = None):
        if not (len(a) == len(x) == B.n):
            raise ValueError("a, x and B must have matching rank")
        self.a = tuple(a)
        self.x = tuple(x)
        self.B = B
        self.basis = basis
        self.offset = B.n if offset is None else offset

    @classmethod
    def initial(cls, B: ExchangeMatrix, coefficients: str = "trivial") -> "ASeed":
        """Initial seed with cluster variables as generators.

        ``coefficients`` is ``"trivial"`` (coefficient-free), ``"principal"``
        (tropical generators) or ``"universal"`` (independent ambient
        generators ``y_1..y_n``).
        """
        n = B.n
        if coefficients == "trivial":
            basis = FactorBasis(n)
            x = [Trivial()] * n
        elif coefficients == "principal":
            basis = FactorBasis(2 * n)
            x = [Tropical.generator(n, i) for i in range(n)]
        elif coefficients == "universal":
            basis = FactorBasis(2 * n)
            x = [Universal.generator(basis, n + i) for i in range(n)]
        else:
            raise ValueError(f"unknown coefficient kind {coefficients!r}")
        a = [Universal.generator(basis, i) for i in range(n)]
        return cls(a, x, B, basis, n)

    @property
    def n(self) -> int:
        return self.B.n

    def mutate(self, k: int) -> "ASeed":
        B = self.B
        B._check(k)
        one = Universal.one(self.basis)
        pos, neg = one, one
        for i in range(B.n):
            b = B.entries[i][k]
            if b > 0:
                pos = pos * self.a[i] ** b
            elif b < 0:
                neg = neg * self.a[i] ** (-b)
        xk = self.x[k]
        denom = _embed(xk.oplus(one_like(xk)), self.basis, self.offset)
        ak = (_embed(xk, self.basis, self.offset) * pos).oplus(neg) / (denom * self.a[k])
        a = list(self.a)
        a[k] = ak
        return ASeed(a, _mutate_x(self.x, B, k), B.mutate(k), self.basis, self.offset)

    def exchange_monomials(self, k: int) -> Tuple[Universal, Universal]:
        """The two monomials on the right of the exchange relation in direction ``k``."""
        one = Universal.one(self.basis)
        pos, neg = one, one
        for i in range(self.B.n):
            b = self.B.entries[i][k]
            if b > 0:
                pos = pos * self.a[i] ** b
            elif b < 0:
                neg = neg * self.a[i] ** (-b)
        return _embed(self.x[k], self.basis, self.offset) * pos, neg

    def permuted(self, perm: Sequence[int]) -> "ASeed":
        return ASeed([self.a[p] for p in perm], [self.x[p] for p in perm], self.B.permuted(perm), self.basis, self.offset)

    def tokens(self) -> List[tuple]:
        return [(a.sort_token(), x.sort_token()) for a, x in zip(self.a, self.x)]

    def values(self) -> Tuple:
        return self.a + self.x

    def same_as(self, other: "ASeed") -> bool:
        return (
            self.B == other.B
            and all(p == q for p, q in zip(self.a, other.a))
            and all(p == q for p, q in zip(self.x, other.x))
        )

    def to_json(self) -> dict:
        return {**self.B.to_json(), "x": [v.to_json() for v in self.x], "a": [v.to_json() for v in self.a]}

    def __repr__(self):
        return f"ASeed(a={list(self.a)}, x={list(self.x)}, B={[list(r) for r in self.B.entries]})"


def mutate_a(s: ASeed, k: int) -> ASeed:
    return s.mutate(k)


def hat(s: ASeed) -> XSeed:
    """X-seed in the ambient field with entries ``x_j * prod_i a_i ** b_ij``."""
    out = []
    for j in range(s.n):
        v = _embed(s.x[j], s.basis, s.offset)
        for i in range(s.n):
            b = s.B.entries[i][j]
            if b:
                v = v * s.a[i] ** b
        out.append(v)
    return XSeed(out, s.B)


def universal_xseed(B: ExchangeMatrix, basis: Optional[FactorBasis] = None) -> XSeed:
    """X-seed whose cluster is the algebraically independent generators."""
    basis = basis or FactorBasis(B.n)
    return XSeed(Universal.generators(basis)[: B.n], B)


def principal_xseed(B: ExchangeMatrix) -> XSeed:
    return XSeed([Tropical.generator(B.n, i) for i in range(B.n)], B)


def tropical_ones_xseed(B: ExchangeMatrix, k: Optional[int] = None) -> XSeed:
    k = B.n if k is None else k
    return XSeed([Tropical.one(k)] * B.n, B)


# ---------------------------------------------------------------------------
# Canonical keys


Seed = Union[XSeed, ASeed, ExchangeMatrix]


class SeedKey:
    """Canonical encoding of a seed up to simultaneous relabeling."""

    __slots__ = ("encoding", "perm", "_hex")

    def __init__(self, encoding: tuple, perm: Tuple[int, ...]):
        self.encoding = encoding
        self.perm = perm
        self._hex = None

    @property
    def hex(self) -> str:
        if self._hex is None:
            self._hex = hashlib.blake2b(repr(self.encoding).encode(), digest_size=16).hexdigest()
        return self._hex

    def __eq__(self, other):
        return isinstance(other, SeedKey) and self.encoding == other.encoding

    def __hash__(self):
        return hash(self.encoding)

    def __str__(self):
        return self.hex

    def __repr__(self):
        return f"SeedKey({self.hex})"


def _refine(b: Matrix, colors: List) -> List[int]:
    """Colour refinement on the weighted digraph of ``b``; returns dense ranks."""
    n = len(b)
    ranks = _dense(colors)
    while True:
        sig = [
            (ranks[i], tuple(sorted((ranks[j], b[i][j], b[j][i]) for j in range(n) if j != i and (b[i][j] or b[j][i]))))
            for i in range(n)
        ]
        new = _dense(sig)
        if len(set(new)) == len(set(ranks)):
            return new
        ranks = new


def _dense(values: List) -> List[int]:
    order = {v: r for r, v in enumerate(sorted(set(values)))}
    return [order[v] for v in values]


def canonical_key(seed: Seed, bound: int = DEFAULT_CANON_BOUND) -> SeedKey:
    """Minimal encoding of ``seed`` over relabelings; ``key.perm`` realizes it.

    ``seed.permuted(key.perm)`` is the canonical representative.  Only
    permutations respecting a colour-refined invariant ordering are tried,
    which never excludes the minimum of the restricted encoding.
    """
    if isinstance(seed, ExchangeMatrix):
        B, tokens = seed, [()] * seed.n
    else:
        B, tokens = seed.B, seed.tokens()
    n = B.n
    if n > bound:
        raise CapabilityError(f"rank {n} exceeds canonicalization bound {bound}")
    b = B.entries
    ranks = _refine(b, [(t, B.D[i]) for i, t in enumerate(tokens)])
    groups: Dict[int, List[int]] = {}
    for i, r in enumerate(ranks):
        groups.setdefault(r, []).append(i)
    ordered = [groups[r] for r in sorted(groups)]
    best = None
    best_perm = None
    for choice in itertools.product(*(itertools.permutations(g) for g in ordered)):
        perm = tuple(i for part in choice for i in part)
        enc = tuple(b[p][q] for p in perm for q in perm)
        if best is None or enc < best:
            best, best_perm = enc, perm
    tok = tuple(tokens[p] for p in best_perm)
    dvec = tuple(B.D[p] for p in best_perm)
    return SeedKey((n, best, dvec, tok), best_perm)


def mutation_class(B: ExchangeMatrix, limit: int = 100000) -> Dict[tuple, ExchangeMatrix]:
    """All matrices mutation-equivalent to ``B`` up to relabeling, keyed canonically."""
    seen: Dict[tuple, ExchangeMatrix] = {canonical_key(B).encoding: B}
    queue = deque([B])
    while queue:
        m = queue.popleft()
        for k in range(m.n):
            m2 = m.mutate(k)
            key = canonical_key(m2).encoding
            if key not in seen:
                if len(seen) >= limit:
                    raise RuntimeError("mutation class exceeds limit")
                seen[key] = m2
                queue.append(m2)
    return seen


def in_mutation_class(B: ExchangeMatrix, target: ExchangeMatrix) -> bool:
    if B.n != target.n:
        return False
    return canonical_key(target).encoding in mutation_class(B)
