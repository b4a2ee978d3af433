"""Sparse multivariate polynomials over the integers.

A :class:`Polynomial` is an immutable map from exponent tuples to nonzero
Python ints.  Terms are ordered graded-lexicographically (total degree
first, then lexicographic on the exponent tuple) whenever an order is
needed: leading terms, serialization, sign normalization.

The GCD is a recursive primitive polynomial remainder sequence.  Before
running it, a cheap modular certificate is tried: if every univariate
image modulo a large prime has a constant GCD, the true GCD is a constant.
"""

from __future__ import annotations

import heapq
import math
import random
from fractions import Fraction
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

Exp = Tuple[int, ...]

# 62-bit prime used for modular images and fingerprints.
PRIME = 4611686018427387847


class DimensionError(ValueError):
    """Operands live in rings with different numbers of indeterminates."""


class UndefinedInputError(ValueError):
    """The operation is undefined for the given inputs (e.g. gcd(0, 0))."""


def grlex_key(e: Exp) -> Tuple[int, Exp]:
    return (sum(e), e)


class Polynomial:
    __slots__ = ("nvars", "terms", "_hash")

    def __init__(self, nvars: int, terms: Optional[Dict[Exp, int]] = None, *, _trusted: bool = False):
        self.nvars = nvars
        if terms is None:
            terms = {}
        elif not _trusted:
            clean = {}
            for e, c in terms.items():
                e = tuple(e)
                if len(e) != nvars:
                    raise DimensionError(f"exponent {e} has length {len(e)}, expected {nvars}")
                if any(x < 0 for x in e):
                    raise ValueError(f"negative exponent in {e}")
                if c:
                    clean[e] = clean.get(e, 0) + int(c)
            terms = {e: c for e, c in clean.items() if c}
        self.terms = terms
        self._hash = None

    # construction -----------------------------------------------------
    @classmethod
    def zero(cls, nvars: int) -> "Polynomial":
        return cls(nvars, {}, _trusted=True)

    @classmethod
    def constant(cls, nvars: int, c: int) -> "Polynomial":
        return cls(nvars, {(0,) * nvars: int(c)} if c else {}, _trusted=True)

    @classmethod
    def one(cls, nvars: int) -> "Polynomial":
        return cls.constant(nvars, 1)

    @classmethod
    def var(cls, nvars: int, i: int, power: int = 1) -> "Polynomial":
        if not 0 <= i < nvars:
            raise IndexError(f"variable index {i} out of range for {nvars} indeterminates")
        e = [0] * nvars
        e[i] = power
        return cls(nvars, {tuple(e): 1}, _trusted=True)

    @classmethod
    def monomial(cls, e: Sequence[int], c: int = 1) -> "Polynomial":
        return cls(len(e), {tuple(e): c})

    # basic queries ----------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and (0,) * self.nvars in self.terms)

    def constant_value(self) -> int:
        if not self.is_constant():
            raise ValueError("not a constant polynomial")
        return self.terms.get((0,) * self.nvars, 0)

    def is_one(self) -> bool:
        return len(self.terms) == 1 and self.terms.get((0,) * self.nvars) == 1

    def __len__(self) -> int:
        return len(self.terms)

    def sorted_terms(self) -> List[Tuple[Exp, int]]:
        """Terms in descending graded-lex order."""
        return sorted(self.terms.items(), key=lambda t: grlex_key(t[0]), reverse=True)

    def leading_term(self) -> Tuple[Exp, int]:
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        e = max(self.terms, key=grlex_key)
        return e, self.terms[e]

    def leading_coefficient(self) -> int:
        return self.leading_term()[1]

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def degree(self, i: int) -> int:
        return max((e[i] for e in self.terms), default=-1)

    def min_degree(self, i: int) -> int:
        return min((e[i] for e in self.terms), default=0)

    def degrees(self) -> Exp:
        if not self.terms:
            return (0,) * self.nvars
        return tuple(max(col) for col in zip(*self.terms))

    def min_degrees(self) -> Exp:
        if not self.terms:
            return (0,) * self.nvars
        return tuple(min(col) for col in zip(*self.terms))

    def content(self) -> int:
        g = 0
        for c in self.terms.values():
            g = math.gcd(g, c)
            if g == 1:
                break
        return g

    # arithmetic -------------------------------------------------------
    def _check(self, other: "Polynomial") -> None:
        if self.nvars != other.nvars:
            raise DimensionError(f"{self.nvars} vs {other.nvars} indeterminates")

    def __add__(self, other):
        if isinstance(other, int):
            other = Polynomial.constant(self.nvars, other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._check(other)
        if len(self.terms) < len(other.terms):
            small, big = self.terms, other.terms
        else:
            small, big = other.terms, self.terms
        out = dict(big)
        for e, c in small.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                del out[e]
        return Polynomial(self.nvars, out, _trusted=True)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.nvars, {e: -c for e, c in self.terms.items()}, _trusted=True)

    def __sub__(self, other):
        if isinstance(other, int):
            other = Polynomial.constant(self.nvars, other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c: int) -> "Polynomial":
        if not c:
            return Polynomial.zero(self.nvars)
        return Polynomial(self.nvars, {e: v * c for e, v in self.terms.items()}, _trusted=True)

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._check(other)
        a, b = self.terms, other.terms
        if len(a) > len(b):
            a, b = b, a
        if len(a) == 1:
            (ea, ca), = a.items()
            if not any(ea):
                return other.scale(ca) if a is self.terms else self.scale(ca)
        out: Dict[Exp, int] = {}
        get = out.get
        bitems = list(b.items())
        for ea, ca in a.items():
            for eb, cb in bitems:
                e = tuple([x + y for x, y in zip(ea, eb)])
                out[e] = get(e, 0) + ca * cb
        return Polynomial(self.nvars, {e: c for e, c in out.items() if c}, _trusted=True)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Polynomial":
        if k < 0:
            raise ValueError("negative power of a polynomial")
        result = Polynomial.one(self.nvars)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def mul_monomial(self, e: Exp, c: int = 1) -> "Polynomial":
        return Polynomial(
            self.nvars,
            {tuple([x + y for x, y in zip(t, e)]): v * c for t, v in self.terms.items()},
            _trusted=True,
        )

    def divexact(self, other: "Polynomial") -> Optional["Polynomial"]:
        """Return ``self / other`` if the division is exact, else ``None``."""
        self._check(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        if self.is_zero():
            return Polynomial.zero(self.nvars)
        if len(other.terms) == 1:
            (ge, gc), = other.terms.items()
            out = {}
            for e, c in self.terms.items():
                if c % gc:
                    return None
                q = tuple([x - y for x, y in zip(e, ge)])
                if min(q) < 0:
                    return None
                out[q] = c // gc
            return Polynomial(self.nvars, out, _trusted=True)
        # cheap necessary conditions
        fd, gd = self.degrees(), other.degrees()
        if any(x < y for x, y in zip(fd, gd)):
            return None
        fm, gm = self.min_degrees(), other.min_degrees()
        if any(x < y for x, y in zip(fm, gm)):
            return None
        if len(other.terms) > len(self.terms):
            return None
        lte, ltc = other.leading_term()
        rest = [(e, c) for e, c in other.terms.items() if e != lte]
        rem = dict(self.terms)
        heap = [(-sum(e), tuple(-x for x in e)) for e in rem]
        heapq.heapify(heap)
        queued = set(rem)
        quot: Dict[Exp, int] = {}
        while heap:
            _, ne = heapq.heappop(heap)
            e = tuple(-x for x in ne)
            queued.discard(e)
            c = rem.pop(e, 0)
            if not c:
                continue
            if c % ltc:
                return None
            qe = tuple([x - y for x, y in zip(e, lte)])
            if min(qe) < 0:
                return None
            qc = c // ltc
            quot[qe] = qc
            for ge, gc in rest:
                m = tuple([x + y for x, y in zip(qe, ge)])
                v = rem.get(m, 0) - qc * gc
                if v:
                    rem[m] = v
                    if m not in queued:
                        queued.add(m)
                        heapq.heappush(heap, (-sum(m), tuple(-x for x in m)))
                else:
                    rem.pop(m, None)
        return Polynomial(self.nvars, quot, _trusted=True)

    def __floordiv__(self, other: "Polynomial") -> "Polynomial":
        q = self.divexact(other)
        if q is None:
            raise ArithmeticError("inexact polynomial division")
        return q

    def primitive(self) -> Tuple[int, "Polynomial"]:
        """Split into (signed content, primitive part with positive leading coefficient)."""
        if self.is_zero():
            return 0, self
        c = self.content()
        if self.leading_coefficient() < 0:
            c = -c
        if c == 1:
            return 1, self
        return c, Polynomial(self.nvars, {e: v // c for e, v in self.terms.items()}, _trusted=True)

    def normalized(self) -> "Polynomial":
        """Same polynomial up to sign, with positive leading coefficient."""
        if self.terms and self.leading_coefficient() < 0:
            return -self
        return self

    # evaluation -------------------------------------------------------
    def evaluate(self, point: Sequence) -> Fraction:
        total = Fraction(0)
        for e, c in self.terms.items():
            t = Fraction(c)
            for x, k in zip(point, e):
                if k:
                    t *= Fraction(x) ** k
            total += t
        return total

    def evaluate_int(self, point: Sequence[int]) -> int:
        """Exact value at an integer point, with per-variable power tables."""
        tables = []
        for i, x in enumerate(point):
            d = self.degree(i) if self.terms else 0
            row = [1] * (d + 1)
            for k in range(1, d + 1):
                row[k] = row[k - 1] * x
            tables.append(row)
        total = 0
        for e, c in self.terms.items():
            t = c
            for row, k in zip(tables, e):
                if k:
                    t *= row[k]
            total += t
        return total

    def evaluate_mod(self, point: Sequence[int], p: int = PRIME) -> int:
        total = 0
        for e, c in self.terms.items():
            t = c % p
            for x, k in zip(point, e):
                if k:
                    t = t * pow(x, k, p) % p
            total += t
        return total % p

    def univariate_image(self, v: int, point: Sequence[int], p: int = PRIME) -> List[int]:
        """Coefficients (low to high) of the image in ``x_v`` after substituting ``point`` elsewhere."""
        d = self.degree(v)
        out = [0] * (d + 1)
        for e, c in self.terms.items():
            t = c % p
            for i, (x, k) in enumerate(zip(point, e)):
                if k and i != v:
                    t = t * pow(x, k, p) % p
            out[e[v]] = (out[e[v]] + t) % p
        return out

    # comparison / hashing ---------------------------------------------
    def __eq__(self, other):
        if isinstance(other, int):
            return self.is_constant() and self.constant_value() == other
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self.terms.items())))
        return self._hash

    # serialization ----------------------------------------------------
    def to_json(self) -> list:
        return [[str(c), list(e)] for e, c in self.sorted_terms()]

    @classmethod
    def from_json(cls, data: list, nvars: Optional[int] = None) -> "Polynomial":
        if nvars is None:
            if not data:
                raise ValueError("cannot infer indeterminate count of an empty term list")
            nvars = len(data[0][1])
        return cls(nvars, {tuple(e): int(c) for c, e in data})

    def format(self, names: Optional[Sequence[str]] = None) -> str:
        if not self.terms:
            return "0"
        if names is None:
            names = [f"x{i + 1}" for i in range(self.nvars)]
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                names[i] if k == 1 else f"{names[i]}^{k}" for i, k in enumerate(e) if k
            )
            if not mono:
                s = str(abs(c))
            elif abs(c) == 1:
                s = mono
            else:
                s = f"{abs(c)}*{mono}"
            parts.append(("-" if c < 0 else "+", s))
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, s in parts[1:]:
            out += f" {sign} {s}"
        return out

    def __str__(self):
        return self.format()

    def __repr__(self):
        return f"Polynomial({self.format()!r}, nvars={self.nvars})"


def poly_arith(a: Polynomial, b: Polynomial, op: str) -> Polynomial:
    if a.nvars != b.nvars:
        raise DimensionError(f"{a.nvars} vs {b.nvars} indeterminates")
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")


# --- univariate arithmetic modulo a prime (for the coprimality certificate)


def _trim(a: List[int]) -> List[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _uni_gcd_degree(a: List[int], b: List[int], p: int = PRIME) -> int:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        if len(a) < len(b):
            a, b = b, a
            continue
        inv = pow(b[-1], p - 2, p)
        while len(a) >= len(b) and a:
            f = a[-1] * inv % p
            shift = len(a) - len(b)
            for i, c in enumerate(b):
                a[shift + i] = (a[shift + i] - f * c) % p
            _trim(a)
        a, b = b, a
    return len(a) - 1


_CERT_POINT: Dict[int, List[int]] = {}


def _cert_point(nvars: int) -> List[int]:
    pt = _CERT_POINT.get(nvars)
    if pt is None:
        rng = random.Random(0xC1A55 + nvars)
        pt = [rng.randrange(2, PRIME - 1) for _ in range(nvars)]
        _CERT_POINT[nvars] = pt
    return pt


def certify_coprime(a: Polynomial, b: Polynomial) -> bool:
    """True only if gcd(a, b) is certainly a constant.

    For each variable appearing in both, the univariate images at a fixed
    point mod PRIME must keep their degree and have a unit gcd.  A False
    answer is inconclusive.
    """
    pt = _cert_point(a.nvars)
    da, db = a.degrees(), b.degrees()
    for v in range(a.nvars):
        if da[v] == 0 or db[v] == 0:
            continue
        ia = a.univariate_image(v, pt)
        ib = b.univariate_image(v, pt)
        if ia[-1] == 0 or ib[-1] == 0:
            return False
        if _uni_gcd_degree(ia, ib) != 0:
            return False
    return True


# --- recursive primitive PRS ------------------------------------------------


def _split(f: Polynomial, v: int) -> Dict[int, Polynomial]:
    parts: Dict[int, Dict[Exp, int]] = {}
    for e, c in f.terms.items():
        d = e[v]
        if d:
            e = e[:v] + (0,) + e[v + 1:]
        parts.setdefault(d, {})[e] = c
    return {d: Polynomial(f.nvars, t, _trusted=True) for d, t in parts.items()}


def _content_v(f: Polynomial, v: int) -> Polynomial:
    g = Polynomial.zero(f.nvars)
    for c in sorted(_split(f, v).values(), key=len):
        g = poly_gcd(g, c) if not g.is_zero() else c.normalized()
        if g.is_one():
            break
    return g


def _pp_v(f: Polynomial, v: int) -> Polynomial:
    c = _content_v(f, v)
    if c.is_one():
        return f.normalized()
    return (f // c).normalized()


def _prem(f: Polynomial, g: Polynomial, v: int) -> Polynomial:
    dg = g.degree(v)
    gparts = _split(g, v)
    lcg = gparts[dg]
    r = f
    while not r.is_zero() and r.degree(v) >= dg:
        dr = r.degree(v)
        lcr = _split(r, v)[dr]
        shift = [0] * f.nvars
        shift[v] = dr - dg
        r = r * lcg - (g * lcr).mul_monomial(tuple(shift))
    return r


def poly_gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    """Greatest common divisor with positive leading coefficient.

    The integer content is included: ``gcd(6x, 4x^2) == 2x``.
    """
    if a.nvars != b.nvars:
        raise DimensionError(f"{a.nvars} vs {b.nvars} indeterminates")
    n = a.nvars
    if a.is_zero() and b.is_zero():
        raise UndefinedInputError("gcd(0, 0) is undefined")
    if a.is_zero():
        return b.normalized()
    if b.is_zero():
        return a.normalized()
    if a.is_constant() or b.is_constant():
        return Polynomial.constant(n, math.gcd(a.content(), b.content()))
    if a == b or a == -b:
        return a.normalized()
    if certify_coprime(a, b):
        return Polynomial.constant(n, math.gcd(a.content(), b.content()))
    da, db = a.degrees(), b.degrees()
    v = next(i for i in range(n) if da[i] or db[i])
    if da[v] == 0:
        return poly_gcd(a, _content_v(b, v))
    if db[v] == 0:
        return poly_gcd(_content_v(a, v), b)
    ca, cb = _content_v(a, v), _content_v(b, v)
    c = poly_gcd(ca, cb)
    f, g = a // ca, b // cb
    if f.degree(v) < g.degree(v):
        f, g = g, f
    while not g.is_zero() and g.degree(v) > 0:
        r = _prem(f, g, v)
        f = g
        g = _pp_v(r, v) if not r.is_zero() else r
    h = _pp_v(f, v) if g.is_zero() else Polynomial.one(n)
    return (c * h).normalized()


def poly_lcm(a: Polynomial, b: Polynomial) -> Polynomial:
    return (a * b // poly_gcd(a, b)).normalized()


def parse_poly(text: str, names: Sequence[str]) -> Polynomial:
    """Parse a polynomial written with ``+ - * ^`` and integer literals (test helper)."""
    import ast

    idx = {name: i for i, name in enumerate(names)}
    n = len(names)

    def walk(node) -> Polynomial:
        if isinstance(node, ast.Expression):
            return walk(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return Polynomial.constant(n, node.value)
        if isinstance(node, ast.Name):
            return Polynomial.var(n, idx[node.id])
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub):
            return -walk(node.operand)
        if isinstance(node, ast.BinOp):
            if isinstance(node.op, ast.Add):
                return walk(node.left) + walk(node.right)
            if isinstance(node.op, ast.Sub):
                return walk(node.left) - walk(node.right)
            if isinstance(node.op, ast.Mult):
                return walk(node.left) * walk(node.right)
            if isinstance(node.op, ast.Pow):
                return walk(node.left) ** node.right.value
        raise ValueError(f"cannot parse {ast.dump(node)}")

    return walk(ast.parse(text.replace("^", "**"), mode="eval"))
