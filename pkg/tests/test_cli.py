from __future__ import annotations

import json

import pytest

from clusterx.cli import CACHE_ENV, expected_count, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_count_xvars_matches_table(capsys):
    code, out = run(capsys, "count-xvars", "--type", "A", "--rank", "3", "--semifield", "universal", "--expect-paper")
    data = json.loads(out)
    assert code == 0
    assert data["xvars"] == 30 and data["match"]


def test_count_xvars_principal_f4(capsys):
    code, out = run(capsys, "count-xvars", "--type", "F", "--rank", "4", "--semifield", "principal", "--expect-paper")
    assert code == 0
    assert json.loads(out)["xvars"] == 48


def test_count_xvars_table_format(capsys):
    code, out = run(capsys, "count-xvars", "--type", "G", "--rank", "2", "--format", "table")
    assert code == 0
    assert out.splitlines()[0].split()[:2] == ["type", "rank"]


def test_node_limit_gives_exit_2_with_partial_json(capsys):
    code, out = run(capsys, "count-xvars", "--type", "D", "--rank", "4", "--max-nodes", "5")
    assert code == 2
    assert json.loads(out)["status"] == "partial"


def test_long_runs_are_gated(capsys):
    with pytest.raises(SystemExit) as info:
        main(["count-xvars", "--type", "E", "--rank", "8"])
    assert info.value.code == 2


def test_bad_type_is_usage_error(capsys):
    with pytest.raises(SystemExit):
        main(["count-xvars", "--type", "H", "--rank", "3"])
    with pytest.raises(SystemExit):
        main(["verify", "quad-counts", "--surface", "plain"])


def test_verify_bijection(capsys):
    code, out = run(capsys, "verify", "bijection", "--type", "D", "--rank", "4")
    assert code == 0
    assert json.loads(out)["problem_count"] == 0


def test_verify_quad_counts(capsys):
    code, out = run(capsys, "verify", "quad-counts", "--surface", "punctured", "--n", "5")
    data = json.loads(out)
    assert code == 0
    assert data["quadrilaterals"] == data["closed_form"] == 130


def test_verify_quad_counts_folded_plain_includes_decomposition(capsys):
    code, out = run(capsys, "verify", "quad-counts", "--surface", "folded-plain", "--n", "8")
    assert code == 0
    assert json.loads(out)["type_c_decomposition"]["ok"]


def test_verify_pairs(capsys):
    code, out = run(capsys, "verify", "pairs", "--type", "G", "--rank", "2")
    data = json.loads(out)
    assert code == 0
    assert data["ordered_pairs"] == data["expected_ordered"] == 16


def test_verify_coincide(capsys):
    code, out = run(capsys, "verify", "exchange-graph-coincide", "--type", "B", "--rank", "3")
    assert code == 0
    assert json.loads(out)["isomorphic"]


def test_verify_geometric_and_seed_reproducibility(capsys):
    args = ["verify", "geometric", "--type", "C", "--rank", "3", "--rng-seed", "3", "--witnesses"]
    code1, out1 = run(capsys, *args)
    code2, out2 = run(capsys, *args)
    assert code1 == code2 == 0
    assert out1 == out2
    assert json.loads(out1)["unseparated"] == []


def test_emit_exchange_graph_dot(capsys):
    code, out = run(capsys, "emit", "exchange-graph", "--type", "A", "--rank", "2", "--format", "dot")
    assert code == 0
    assert out.count(" -- ") == 5


def test_emit_flip_graph(capsys):
    code, out = run(capsys, "emit", "flip-graph", "--surface", "plain", "--n", "6")
    assert code == 0
    assert out.count(" -- ") == 21


def test_emit_xvars(capsys):
    code, out = run(capsys, "emit", "xvars", "--type", "B", "--rank", "2")
    assert code == 0
    assert len(json.loads(out)["xvars"]) == expected_count("B", 2, "universal") == 12


def test_emit_quadrilaterals_csv(capsys):
    code, out = run(capsys, "emit", "quadrilaterals", "--surface", "plain", "--n", "5")
    assert code == 0
    assert len(out.strip().splitlines()) == 1 + 10


def test_output_file_and_graph_reload(tmp_path, capsys):
    path = tmp_path / "g.json"
    assert main(["emit", "exchange-graph", "--type", "A", "--rank", "3", "--output", str(path)]) == 0
    code, out = run(capsys, "emit", "load-graph", "--input", str(path))
    assert code == 0
    assert len(json.loads(out)["nodes"]) == 14


def test_cache_directory(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv(CACHE_ENV, str(tmp_path))
    code1, out1 = run(capsys, "count-xvars", "--type", "A", "--rank", "3")
    assert (tmp_path / "A3-universal.json").exists()
    code2, out2 = run(capsys, "count-xvars", "--type", "A", "--rank", "3")
    assert code1 == code2 == 0
    assert out1 == out2


def test_expected_counts_table():
    assert [expected_count("A", n, "universal") for n in range(2, 7)] == [10, 30, 70, 140, 252]
    assert [expected_count("D", n, "universal") for n in (4, 5)] == [104, 260]
    assert expected_count("E", 8, "universal") == 6240
    assert expected_count("E", 6, "principal") == 72
