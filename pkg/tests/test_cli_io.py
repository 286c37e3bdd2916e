import csv
import io
import json

import numpy as np
import pytest

from starsampling import estimators as est
from starsampling.cli_io import (RESULT_COLUMNS, EdgeListError, graph_summary, load_edge_list,
                                 main, rerun, write_edge_list)
from starsampling.er_model import ErParams, generate_er


def write(tmp_path, text, name="g.txt"):
    p = tmp_path / name
    p.write_text(text)
    return p


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_load_basic(tmp_path):
    g = load_edge_list(write(tmp_path, "# comment\n0 1\n1 0\n"))
    assert (g.n, g.m) == (2, 1)


def test_load_string_ids_first_appearance(tmp_path):
    g, labels = load_edge_list(write(tmp_path, "% mm\nb\ta 3.5\nc b\n\nb b\n"), return_labels=True)
    assert labels == ["b", "a", "c"]
    assert (g.n, g.m) == (3, 2)
    assert g.has_edge(0, 1) and g.has_edge(0, 2)


def test_load_errors(tmp_path):
    with pytest.raises(EdgeListError, match=":3:"):
        load_edge_list(write(tmp_path, "0 1\n1 2\n7\n"))
    with pytest.raises(EdgeListError, match="no edges"):
        load_edge_list(write(tmp_path, "# only comments\n"))


def test_round_trip(tmp_path):
    g = generate_er(ErParams(120, 0.05), np.random.default_rng(0))
    p = tmp_path / "er.txt"
    write_edge_list(g, p, comment="test")
    h = load_edge_list(p)
    # isolated vertices vanish from an edge list; compare on the non-isolated part
    keep = g.degrees > 0
    assert h.m == g.m and h.n == keep.sum()
    assert sorted(h.degrees.tolist()) == sorted(g.degrees[keep].tolist())


def test_graph_summary(tmp_path):
    g = load_edge_list(write(tmp_path, "0 1\n1 2\n2 3\n"))
    s = graph_summary(g)
    assert s == {"n": 4, "m": 3, "s": 0.5, "alpha": pytest.approx(-0.5), "d_max": 2}


def test_stats_command(tmp_path, capsys):
    p = write(tmp_path, "0 1\n1 2\n")
    labels = tmp_path / "labels.tsv"
    code, out, _ = run_cli(capsys, "stats", str(p), "--labels-out", str(labels))
    assert code == 0
    row = next(csv.DictReader(io.StringIO(out)))
    assert (row["n"], row["m"], row["d_max"]) == ("3", "2", "2")
    assert labels.read_text().splitlines()[1:] == ["0\t0", "1\t1", "2\t2"]


def test_estimate_sss_matches_schedule(capsys):
    code, out, _ = run_cli(capsys, "estimate", "--n", "1000", "--n0", "2", "--s", "0.001",
                           "--variant", "sss", "--cost-model", "unit")
    assert code == 0
    (row,) = list(csv.DictReader(io.StringIO(out)))
    expected = est.sss_schedule(est.EstimatorInput(1000, 2, 0.001)).c_u_approx
    assert float(row["estimate_lo"]) == expected == float(row["estimate_hi"])


def test_estimate_on_graph(tmp_path, capsys):
    p = write(tmp_path, "0 1\n1 2\n")
    code, out, _ = run_cli(capsys, "estimate", "--graph", str(p), "--target", "0",
                           "--variant", "ssr", "--format", "json")
    rows = [json.loads(line) for line in out.splitlines()]
    assert code == 0 and rows[0]["estimate_lo"] == 1.5


def test_simulate_deterministic(capsys):
    args = ("simulate", "--er", "1000", "0.01", "--n0", "2", "--variant", "ssr",
            "--trials", "1000", "--seed", "7")
    _, a, _ = run_cli(capsys, *args)
    _, b, _ = run_cli(capsys, *args, "--threads", "4")
    assert a == b
    rows = list(csv.DictReader(io.StringIO(a)))
    assert tuple(rows[0]) == RESULT_COLUMNS
    assert {r["cost_model"] for r in rows} == {"unit", "linear"}
    assert all(r["seed"] == "7" for r in rows)


def test_rerun_from_embedded_config(tmp_path, capsys):
    p = write(tmp_path, "0 1\n1 2\n2 3\n3 0\n0 2\n4 5\n")
    _, out, _ = run_cli(capsys, "table", str(p), "--n0", "1", "--trials", "200", "--seed", "3")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 6 and len({r["config_hash"] for r in rows}) == 1
    again = rerun(rows[0]["config"])
    assert [repr(r["mean"]) for r in again] == [r["mean"] for r in rows]


def test_sweep_long_form(capsys):
    code, out, _ = run_cli(capsys, "sweep", "--n", "200", "--n0", "2", "--s-values", "0.001", "0.01",
                           "--trials", "50", "--variant", "ssc", "--format", "json")
    rows = [json.loads(line) for line in out.splitlines()]
    assert code == 0 and len(rows) == 4
    assert {(r["s"], r["cost_model"]) for r in rows} == {(0.001, "unit"), (0.001, "linear"),
                                                          (0.01, "unit"), (0.01, "linear")}


def test_csv_quoting(tmp_path, capsys):
    _, out, _ = run_cli(capsys, "simulate", "--er", "50", "0.1", "--n0", "1", "--variant", "ssc",
                        "--trials", "10")
    row = next(csv.DictReader(io.StringIO(out)))
    assert row["graph"] == "er(n=50,s=0.1)"
    assert json.loads(row["config"])["command"] == "simulate"


def test_exit_codes(tmp_path, capsys):
    assert run_cli(capsys, "bogus")[0] == 2
    assert run_cli(capsys, "simulate", "--n0", "2")[0] == 2
    assert run_cli(capsys, "estimate", "--n", "10")[0] == 2
    code, _, err = run_cli(capsys, "estimate", "--n", "10", "--n0", "20", "--s", "0.1")
    assert code == 1 and "n0*" in err
    code, _, err = run_cli(capsys, "estimate", "--n", "10", "--n0", "2", "--s", "0", "--variant", "sss")
    assert code == 1 and "0 < s < 1" in err
    assert run_cli(capsys, "stats", str(tmp_path / "missing.txt"))[0] == 1
    assert run_cli(capsys, "--help")[0] == 0


def test_load_matrix_market(tmp_path):
    text = "%%MatrixMarket matrix coordinate pattern symmetric\n% note\n4 4 3\n2 1\n3 1\n4 3\n"
    g, labels = load_edge_list(write(tmp_path, text, "g.mtx"), return_labels=True)
    assert (g.n, g.m) == (4, 3) and labels == ["2", "1", "3", "4"]
