"""Acceptance criteria 1-9, one test each; every test prints a PASS/FAIL line.

Set CLUSTERX_ALLOW_LONG=1 to include the E7 and E8 universal counts in
criterion 1 (tens of minutes to hours).
"""

from __future__ import annotations

import os
import random
from fractions import Fraction

import pytest

from clusterx.cli import expected_count
from clusterx.explorer import (
    exchangeable_pairs,
    explore,
    graphs_isomorphic,
    initial_xseed,
    unique_exchange_violations,
)
from clusterx.geometric import verify_distinctness
from clusterx.semifield import FactorBasis, Tropical, Universal
from clusterx.seeds import ASeed, ExchangeMatrix, XSeed, dynkin_initial_matrix, hat
from clusterx.surfaces import (
    MarkedPolygon,
    closed_form_quad_count,
    enumerate_quadrilaterals,
    enumerate_triangulations,
    exchange_matrix,
    quadrilateral,
    verify_bijection,
    verify_type_c_decomposition,
)

ALLOW_LONG = os.environ.get("CLUSTERX_ALLOW_LONG") == "1"

RANKS = (
    [("A", n) for n in range(2, 7)]
    + [("B", n) for n in (2, 3, 4)]
    + [("C", n) for n in (2, 3, 4)]
    + [("D", 4), ("D", 5), ("G", 2), ("F", 4), ("E", 6)]
)


def report(capsys, number: int, ok: bool, detail: str) -> None:
    with capsys.disabled():
        print(f"\nCRITERION {number}: {'PASS' if ok else 'FAIL'} - {detail}")


def _counts(semifield: str, cases):
    rows = []
    for kind, n in cases:
        got = len(explore(initial_xseed(kind, n, semifield)).xvars)
        rows.append((f"{kind}{n}", got, expected_count(kind, n, semifield)))
    return rows


def _summary(rows) -> str:
    return ", ".join(f"{name}={got}" + ("" if got == exp else f"(expected {exp})") for name, got, exp in rows)


def test_criterion_1_universal_counts(capsys):
    cases = RANKS + ([("E", 7), ("E", 8)] if ALLOW_LONG else [])
    rows = _counts("universal", cases)
    ok = all(got == exp for _, got, exp in rows)
    note = "" if ALLOW_LONG else "; E7/E8 not run (set CLUSTERX_ALLOW_LONG=1)"
    report(capsys, 1, ok, _summary(rows) + note)
    assert ok


def test_criterion_2_principal_counts(capsys):
    rows = _counts("principal", RANKS)
    ok = all(got == exp for _, got, exp in rows)
    report(capsys, 2, ok, _summary(rows))
    assert ok


def test_criterion_3_degenerate_example(capsys):
    B = ExchangeMatrix([[0, 1, 0], [-1, 0, 1], [0, -1, 0]])
    basis = FactorBasis(3)
    x1, x2, x3 = Universal.generators(basis)
    one = Universal.one(basis)
    s1 = XSeed([one / x2, x1 / x3, x2], B)
    s2 = XSeed([x1, x2, x3], B)
    step1 = s1.mutate(0).x == (x2, x1 / (x3 * (one.oplus(x2))), x2)
    step2 = s2.mutate(0).x == (one / x1, x1 * x2 / (one.oplus(x1)), x3)
    n1 = len(explore(s1).xvars)
    n2 = len(explore(s2).xvars)
    ok = step1 and step2 and (n1, n2) == (18, 30)
    report(capsys, 3, ok, f"|X(S1)|={n1}, |X(S2)|={n2}, one-step mutations reproduced: {step1 and step2}")
    assert ok


def test_criterion_4_quadrilateral_counts(capsys):
    cases = (
        [MarkedPolygon("plain", n + 3) for n in range(1, 7)]
        + [MarkedPolygon("punctured", n) for n in range(3, 7)]
        + [MarkedPolygon("folded_plain", 2 * n + 2) for n in range(2, 5)]
        + [MarkedPolygon("folded_punctured", n + 1) for n in range(2, 5)]
    )
    bad = []
    for P in cases:
        got = len(enumerate_quadrilaterals(P))
        if got != 2 * closed_form_quad_count(P):
            bad.append(f"{P}: {got} vs 2*{closed_form_quad_count(P)}")
    decomposition = [verify_type_c_decomposition(n) for n in range(2, 5)]
    dec_ok = all(d["ok"] for d in decomposition)
    ok = not bad and dec_ok
    report(
        capsys,
        4,
        ok,
        f"{len(cases)} polygons checked, mismatches {bad or 'none'}; "
        f"type C |Q1| = {[d['Q1'] for d in decomposition]} for n=2..4 ({'ok' if dec_ok else 'failed'})",
    )
    assert ok


def test_criterion_5_bijection(capsys):
    cases = [("A", n) for n in range(2, 6)] + [("B", 2), ("B", 3), ("C", 2), ("C", 3), ("D", 4), ("D", 5)]
    results = [verify_bijection(k, n) for k, n in cases]
    ok = all(r["ok"] for r in results)
    detail = ", ".join(f"{r['type']}{r['rank']}:{r['xvars']}/{r['expected']}" + ("" if r["ok"] else "!") for r in results)
    report(capsys, 5, ok, detail)
    assert ok


# ---------------------------------------------------------------- criterion 6

PROPERTY_TYPES = [("A", 3), ("B", 3), ("C", 3), ("D", 4), ("G", 2)]
CASES_PER_TYPE = 1000


def _random_walk(seed, rng, length):
    for _ in range(length):
        seed = seed.mutate(rng.randrange(seed.n))
    return seed


def _involution_failures(rng) -> int:
    bad = 0
    for kind, n in PROPERTY_TYPES:
        B0 = dynkin_initial_matrix(kind, n)
        x0 = initial_xseed(kind, n, "universal")
        a0 = ASeed.initial(B0, "principal")
        for case in range(CASES_PER_TYPE):
            length = rng.randrange(6)
            k = rng.randrange(n)
            which = case % 3
            if which == 0:
                B = _random_walk(B0, rng, length)
                bad += B.mutate(k).mutate(k) != B
            elif which == 1:
                s = _random_walk(x0, rng, length)
                bad += not s.mutate(k).mutate(k).same_as(s)
            else:
                s = _random_walk(a0, rng, length)
                bad += not s.mutate(k).mutate(k).same_as(s)
    return bad


def _hat_failures(rng) -> int:
    bad = 0
    for kind, n in PROPERTY_TYPES:
        for coeffs in ("trivial", "principal", "universal"):
            s0 = ASeed.initial(dynkin_initial_matrix(kind, n), coeffs)
            for _ in range(40):
                s = _random_walk(s0, rng, rng.randrange(6))
                k = rng.randrange(n)
                bad += not hat(s.mutate(k)).same_as(hat(s).mutate(k))
    return bad


def _flip_failures() -> int:
    bad = 0
    for kind, n in [("A", 4), ("B", 3), ("C", 3), ("D", 4), ("D", 5)]:
        for T in enumerate_triangulations(MarkedPolygon.for_type(kind, n)):
            B = exchange_matrix(T)
            for k in range(len(T.slots)):
                bad += exchange_matrix(T.flip(k)[0]) != B.mutate(k)
    return bad


def _semifield_failures(rng) -> int:
    basis = FactorBasis(3)
    gens = Universal.generators(basis)
    bad = 0

    def rand_value():
        v = gens[rng.randrange(3)]
        for _ in range(rng.randrange(4)):
            g = gens[rng.randrange(3)]
            op = rng.randrange(3)
            v = v * g if op == 0 else v / g if op == 1 else v.oplus(g)
        return v

    for _ in range(300):
        a, b, c = rand_value(), rand_value(), rand_value()
        bad += a.oplus(b) != b.oplus(a)
        bad += a.oplus(b).oplus(c) != a.oplus(b.oplus(c))
        bad += a * b.oplus(c) != (a * b).oplus(a * c)
        bad += (a * b) * c != a * (b * c)
        bad += a * a.inverse() != Universal.one(basis)
    for _ in range(300):
        e = [Tropical([rng.randint(-5, 5), rng.randint(-5, 5)]) for _ in range(3)]
        bad += e[0] * e[1].oplus(e[2]) != (e[0] * e[1]).oplus(e[0] * e[2])
    return bad


def _positivity_failures(rng) -> int:
    bad = 0
    for kind, n in PROPERTY_TYPES:
        g = explore(initial_xseed(kind, n, "universal"))
        for _ in range(5):
            pt = [Fraction(rng.randint(1, 30), rng.randint(1, 30)) for _ in range(n)]
            bad += sum(1 for v in g.xvars if v.evaluate(pt) <= 0)
    return bad


def _locality_failures() -> int:
    bad = 0
    for kind, n in [("A", 4), ("B", 3), ("C", 3), ("D", 4), ("D", 5)]:
        P = MarkedPolygon.for_type(kind, n)
        for T in enumerate_triangulations(P):
            for j, slot in enumerate(T.slots):
                gamma = slot if P.folded else next(iter(slot))
                q = quadrilateral(T, gamma)
                for k, other in enumerate(T.slots):
                    if k == j or other & set(q.quad):
                        continue
                    bad += quadrilateral(T.flip(k)[0], gamma).key != q.key
    return bad


def test_criterion_6_property_suites(capsys):
    rng = random.Random(20180601)
    results = {
        "mutation involutivity": _involution_failures(rng),
        "hat/mutation commutation": _hat_failures(rng),
        "flip/matrix mutation": _flip_failures(),
        "semifield axioms": _semifield_failures(rng),
        "positivity": _positivity_failures(rng),
        "locality": _locality_failures(),
    }
    ok = not any(results.values())
    report(capsys, 6, ok, ", ".join(f"{k}: {v} failures" for k, v in results.items()))
    assert ok


def test_criterion_7_exchangeable_pairs(capsys):
    cases = [("A", 2), ("A", 3), ("A", 4), ("B", 2), ("B", 3), ("C", 2), ("C", 3), ("D", 4), ("G", 2)]
    rows = []
    violations = 0
    for kind, n in cases:
        rows.append((f"{kind}{n}", exchangeable_pairs(kind, n).ordered, expected_count(kind, n, "universal")))
        violations += len(unique_exchange_violations(kind, n))
    ok = all(got == exp for _, got, exp in rows) and violations == 0
    report(capsys, 7, ok, _summary(rows) + f"; unique-exchange violations: {violations}")
    assert ok


def test_criterion_8_exchange_graph_coincidence(capsys):
    details = []
    ok = True
    for kind, n in [("A", 3), ("B", 3), ("D", 4)]:
        B = dynkin_initial_matrix(kind, n)
        ga = explore(ASeed.initial(B, "trivial"), collect_xvars=False)
        gx = explore(initial_xseed(kind, n, "universal"), collect_xvars=False)
        same = graphs_isomorphic(ga, gx)
        counts = (len(ga.nodes), len(ga.undirected_edges()), len(gx.nodes), len(gx.undirected_edges()))
        ok = ok and same and counts[:2] == counts[2:]
        details.append(f"{kind}{n}: {counts[0]} nodes/{counts[1]} edges, isomorphic={same}")
    report(capsys, 8, ok, "; ".join(details))
    assert ok


def test_criterion_9_geometric_distinctness(capsys):
    details = []
    ok = True
    for kind, n in [("A", 3), ("A", 4), ("B", 3), ("C", 3), ("D", 4)]:
        rep = verify_distinctness(kind, n, trials=100, rng_seed=0)
        ok = ok and rep["ok"]
        details.append(f"{kind}{n}: {rep['separated']}/{rep['pairs_total']} pairs separated")
    report(capsys, 9, ok, "; ".join(details))
    assert ok
