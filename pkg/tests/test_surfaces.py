from __future__ import annotations

import itertools
from math import comb

import pytest

from clusterx.seeds import dynkin_initial_matrix, in_mutation_class
from clusterx.surfaces import (
    AROUND,
    DIRECT,
    NOTCHED,
    PLAIN,
    Boundary,
    Chord,
    FlipError,
    MarkedPolygon,
    Radius,
    SurfaceError,
    Triangulation,
    arc_count_closed_form,
    census_csv,
    classify_plain_quads,
    closed_form_quad_count,
    enumerate_quadrilaterals,
    enumerate_triangulations,
    exchange_matrix,
    flip_graph,
    flip_graph_dot,
    q1_closed_form,
    quadrilateral,
    verify_bijection,
    verify_type_c_decomposition,
)

SURFACES = {
    "plain": [4, 5, 6, 7],
    "punctured": [3, 4, 5],
    "folded_plain": [6, 8, 10],
    "folded_punctured": [3, 4, 5],
}
ALL = [(k, m) for k, ms in SURFACES.items() for m in ms]


def test_polygon_size_validation():
    with pytest.raises(SurfaceError):
        MarkedPolygon("plain", 3)
    with pytest.raises(SurfaceError):
        MarkedPolygon("folded_plain", 7)


# ---------------------------------------------------------------- compatibility


def test_double_cover_lifts():
    P = MarkedPolygon("punctured", 4)
    assert P.lift_to_double_cover(Radius(2, PLAIN)) == ((2, 6),)
    assert P.lift_to_double_cover(Chord(1, 3, DIRECT)) == ((1, 3), (5, 7))
    assert P.lift_to_double_cover(Chord(1, 3, AROUND)) == ((1, 7), (5, 3))


def test_tagged_radius_rules():
    P = MarkedPolygon("punctured", 4)
    assert P.compatible(Radius(1, PLAIN), Radius(1, NOTCHED))
    assert not P.compatible(Radius(1, PLAIN), Radius(2, NOTCHED))
    assert P.compatible(Radius(1, NOTCHED), Radius(3, NOTCHED))
    assert not P.compatible(Radius(2, PLAIN), Chord(1, 3, DIRECT))
    assert P.compatible(Radius(1, PLAIN), Chord(1, 3, DIRECT))


@pytest.mark.parametrize("m", [3, 4, 5, 6])
def test_lift_and_interval_crossing_rules_agree(m):
    P = MarkedPolygon("punctured", m)
    arcs = P.raw_arcs()
    for a, b in itertools.combinations(arcs, 2):
        assert P.compatible(a, b) == P.compatible_by_intervals(a, b), (a, b)


def test_incompatible_arcs_rejected():
    P = MarkedPolygon("plain", 5)
    with pytest.raises(SurfaceError):
        Triangulation.from_arcs(P, [Chord(1, 3), Chord(2, 4)])


# ---------------------------------------------------------------- enumeration


@pytest.mark.parametrize("kind,m", ALL)
def test_arc_counts(kind, m):
    P = MarkedPolygon(kind, m)
    assert len(P.all_arcs()) == arc_count_closed_form(P)


@pytest.mark.parametrize("m,count", [(4, 2), (5, 5), (6, 14), (7, 42)])
def test_catalan_flip_graphs(m, count):
    tris, edges = flip_graph(MarkedPolygon("plain", m))
    assert len(tris) == count
    assert len(edges) == count * (m - 3) // 2


@pytest.mark.parametrize("kind,n,count", [("D", 4, 50), ("D", 5, 182), ("B", 3, 20), ("C", 3, 20), ("B", 2, 6), ("C", 2, 6)])
def test_cluster_complex_sizes(kind, n, count):
    assert len(enumerate_triangulations(MarkedPolygon.for_type(kind, n))) == count


@pytest.mark.parametrize("kind,m", ALL)
def test_every_triangulation_is_valid_and_full(kind, m):
    P = MarkedPolygon(kind, m)
    for T in enumerate_triangulations(P):
        T.validate()
        assert len(T.slots) == P.rank


@pytest.mark.parametrize("kind,m", ALL)
def test_flip_is_involutive(kind, m):
    P = MarkedPolygon(kind, m)
    for T in enumerate_triangulations(P):
        for k in range(len(T.slots)):
            T2, _ = T.flip(k)
            assert T2.flip(k)[0] == T


@pytest.mark.parametrize("kind,m", ALL)
def test_flip_commutes_with_matrix_mutation(kind, m):
    P = MarkedPolygon(kind, m)
    for T in enumerate_triangulations(P):
        B = exchange_matrix(T)
        for k in range(len(T.slots)):
            assert exchange_matrix(T.flip(k)[0]) == B.mutate(k)


@pytest.mark.parametrize("kind,n", [("A", 3), ("B", 3), ("C", 3), ("D", 4), ("B", 4), ("C", 4)])
def test_polygon_model_has_right_mutation_type(kind, n):
    B = exchange_matrix(MarkedPolygon.for_type(kind, n).initial_triangulation())
    assert in_mutation_class(B, dynkin_initial_matrix(kind, n))


def test_folding_distinguishes_b_and_c():
    B = exchange_matrix(MarkedPolygon.for_type("B", 3).initial_triangulation())
    C = exchange_matrix(MarkedPolygon.for_type("C", 3).initial_triangulation())
    assert not in_mutation_class(B, dynkin_initial_matrix("C", 3))
    assert not in_mutation_class(C, dynkin_initial_matrix("B", 3))


def test_punctured_triangle_is_type_a3():
    B = exchange_matrix(MarkedPolygon("punctured", 3).initial_triangulation())
    assert in_mutation_class(B, dynkin_initial_matrix("A", 3))


# ---------------------------------------------------------------- quadrilaterals


def test_fan_quadrilateral_in_pentagon():
    P = MarkedPolygon("plain", 5)
    T = P.initial_triangulation()
    q = quadrilateral(T, Chord(1, 3))
    assert set(q.quad) == {Boundary(1), Boundary(2), Boundary(3), Chord(1, 4)}
    assert q.vertices() == (1, 2, 3, 4)


def test_digon_radius_quadrilateral():
    P = MarkedPolygon("punctured", 3)
    T = Triangulation.from_arcs(P, [Radius(1, PLAIN), Radius(1, NOTCHED), Chord(1, 2, AROUND)])
    q = quadrilateral(T, Radius(1, PLAIN))
    assert q.digon_case
    assert Radius(1, NOTCHED) in q.quad


@pytest.mark.parametrize("kind,m", ALL)
def test_quadrilateral_counts_match_closed_form(kind, m):
    P = MarkedPolygon(kind, m)
    assert len(enumerate_quadrilaterals(P)) == 2 * closed_form_quad_count(P)


@pytest.mark.parametrize("m", [4, 5, 6, 7])
def test_plain_closed_form_is_binomial(m):
    assert closed_form_quad_count(MarkedPolygon("plain", m)) == comb(m, 4)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_type_c_quadrilateral_decomposition(n):
    rep = verify_type_c_decomposition(n)
    assert rep["ok"]
    cls = classify_plain_quads(n)
    assert len(cls["Q1"]) == len(cls["Q2"]) == q1_closed_form(n)
    assert len(cls["fixed"]) == comb(n + 1, 2)


def test_locality_of_quadrilateral():
    """The quadrilateral of an arc does not change when flipping an arc outside it."""
    P = MarkedPolygon("plain", 7)
    for T in enumerate_triangulations(P):
        for g in T.arcs:
            q = quadrilateral(T, g)
            for k, slot in enumerate(T.slots):
                (a,) = slot
                if a == g or a in q.quad:
                    continue
                assert quadrilateral(T.flip(k)[0], g).key == q.key


@pytest.mark.parametrize("kind,n", [("A", 2), ("A", 3), ("B", 2), ("C", 2), ("D", 4)])
def test_bijection_small(kind, n):
    rep = verify_bijection(kind, n)
    assert rep["ok"], rep["problems"][:3]
    assert rep["xvars"] == rep["quadrilaterals_with_diagonal"]


# ---------------------------------------------------------------- outputs


def test_census_csv_and_dot():
    P = MarkedPolygon("plain", 6)
    csv_text = census_csv(P)
    assert csv_text.splitlines()[0].count(",") >= 1
    assert len(csv_text.strip().splitlines()) == 1 + 2 * comb(6, 4)
    dot = flip_graph_dot(P)
    assert dot.count(" -- ") == 14 * 3 // 2
