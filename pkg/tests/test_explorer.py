from __future__ import annotations

import json

import pytest

from clusterx.explorer import (
    CorruptFileError,
    PartialExplorationError,
    VersionError,
    check_regular,
    count_xvars,
    exchangeable_pairs,
    explore,
    graph_content,
    graphs_isomorphic,
    initial_xseed,
    load_graph,
    save_graph,
    to_dot,
    unique_exchange_violations,
)
from clusterx.semifield import FactorBasis, Universal
from clusterx.seeds import ASeed, ExchangeMatrix, XSeed, dynkin_initial_matrix, tropical_ones_xseed

LINEAR_A3 = ExchangeMatrix([[0, 1, 0], [-1, 0, 1], [0, -1, 0]])


@pytest.mark.parametrize("kind,n,nodes", [("A", 2, 5), ("A", 3, 14), ("B", 2, 6), ("G", 2, 8), ("D", 4, 50)])
def test_exchange_graph_sizes(kind, n, nodes):
    g = explore(initial_xseed(kind, n, "universal"))
    assert g.complete
    assert len(g.nodes) == nodes
    assert check_regular(g) == []
    assert len(g.undirected_edges()) == nodes * n // 2


def test_tropical_ones_pattern_has_one_variable():
    g = explore(tropical_ones_xseed(LINEAR_A3))
    assert len(g.xvars) == 1


def test_degenerate_initial_cluster_has_fewer_variables():
    basis = FactorBasis(3)
    x1, x2, x3 = Universal.generators(basis)
    one = Universal.one(basis)
    s1 = explore(XSeed([one / x2, x1 / x3, x2], LINEAR_A3))
    s2 = explore(XSeed([x1, x2, x3], LINEAR_A3))
    assert len(s1.xvars) < len(s2.xvars)


def test_node_limit_raises_partial():
    with pytest.raises(PartialExplorationError) as info:
        explore(initial_xseed("D", 4, "universal"), max_nodes=10)
    assert len(info.value.graph.nodes) == 10
    assert not info.value.graph.complete


def test_time_limit_raises_partial():
    with pytest.raises(PartialExplorationError):
        explore(initial_xseed("D", 5, "universal"), max_seconds=0.0)


def test_exploration_is_deterministic():
    g1 = explore(initial_xseed("B", 3, "universal"))
    g2 = explore(initial_xseed("B", 3, "universal"))
    assert graph_content(g1) == graph_content(g2)
    assert to_dot(g1) == to_dot(g2)


def test_pentagon_dot():
    dot = to_dot(explore(ASeed.initial(dynkin_initial_matrix("A", 2), "trivial")))
    assert dot.startswith("graph")
    assert dot.count(" -- ") == 5


@pytest.mark.parametrize("semifield", ["universal", "principal"])
def test_save_load_roundtrip(tmp_path, semifield):
    g = explore(initial_xseed("A", 3, semifield))
    path = tmp_path / "g.json"
    save_graph(g, path)
    h = load_graph(path)
    assert graph_content(h) == graph_content(g)


def test_load_rejects_bad_files(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(CorruptFileError):
        load_graph(bad)
    old = tmp_path / "old.json"
    old.write_text(json.dumps({"version": 99}))
    with pytest.raises(VersionError):
        load_graph(old)


def test_pairs_and_unique_exchange_small():
    assert exchangeable_pairs("A", 2).ordered == 10
    assert unique_exchange_violations("A", 3) == []


def test_graphs_isomorphic_detects_mismatch():
    ga = explore(ASeed.initial(dynkin_initial_matrix("A", 3), "trivial"))
    gx = explore(initial_xseed("A", 3, "universal"))
    gt = explore(tropical_ones_xseed(dynkin_initial_matrix("A", 3)))
    assert graphs_isomorphic(ga, gx)
    assert not graphs_isomorphic(ga, gt)


def test_count_xvars_small():
    assert count_xvars("A", 2) == 10
    assert count_xvars("A", 2, "principal") == 6
