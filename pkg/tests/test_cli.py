import csv
import io
import json

import pytest

from sparsetww.cli import RECORD_FIELDS, fit_slope, main
from sparsetww.formats import read_edge_list, read_sequence, write_edge_list
from sparsetww.graph import Graph, replay


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def k4(tmp_path):
    path = tmp_path / "k4.txt"
    write_edge_list(Graph.complete(4), path)
    return str(path)


def test_mad_k4(k4, capsys):
    assert run(["mad", k4], capsys)[:2] == (0, "3/1\n")
    code, out, _ = run(["mad", k4, "--witness"], capsys)
    assert out.splitlines() == ["3/1", "0 1 2 3"]


@pytest.mark.parametrize("seed", range(20))
def test_gen_contract_verify_round_trip(seed, tmp_path, capsys):
    g_path, s_path = str(tmp_path / "g.txt"), str(tmp_path / "s.txt")
    assert run(["gen", "--model", "regular", "--n", "300", "--d", "3", "--seed", str(seed), "--out", g_path], capsys)[0] == 0
    code, out, _ = run(["contract", g_path, "--auto", "--seed", str(seed), "--out", s_path], capsys)
    assert code == 0
    stats = json.loads(out)
    assert stats["method"] == "pipeline"
    code, out, _ = run(["verify", g_path, s_path, "--width", str(stats["width"])], capsys)
    assert code == 0 and out == f"ok width={stats['width']}\n"
    assert replay(read_edge_list(g_path), read_sequence(s_path)).width == stats["width"]


def test_tampered_sequence(tmp_path, capsys):
    g_path, s_path = tmp_path / "g.txt", tmp_path / "s.txt"
    write_edge_list(Graph.cycle(4), g_path)
    s_path.write_text("4 3\n0 1\n0 2\n4 5\n")
    code, _, err = run(["verify", str(g_path), str(s_path)], capsys)
    assert code == 1 and "step 1" in err


def test_verify_width_too_small(tmp_path, capsys):
    g_path, s_path = tmp_path / "g.txt", tmp_path / "s.txt"
    write_edge_list(Graph.cycle(4), g_path)
    s_path.write_text("4 3\n0 1\n2 3\n4 5\n")
    assert run(["verify", str(g_path), str(s_path), "--width", "1"], capsys)[0] == 1
    assert run(["verify", str(g_path), str(s_path), "--width", "2"], capsys)[0] == 0


def test_usage_and_domain_exit_codes(k4, tmp_path, capsys):
    with pytest.raises(SystemExit) as info:
        main(["contract"])
    assert info.value.code == 2
    capsys.readouterr()
    assert run(["mad", str(tmp_path / "missing.txt")], capsys)[0] == 1
    bad = tmp_path / "bad.txt"
    bad.write_text("3 1\n0 9\n")
    assert run(["mad", str(bad)], capsys)[0] == 1
    # manual parameters below mad/2 are a domain error
    code, _, err = run(["contract", k4, "--a", "1", "--b", "1", "--r", "2", "--q", "2"], capsys)
    assert code == 1 and "error" in err


def test_contract_greedy_fallback_and_csv(tmp_path, capsys):
    g_path = tmp_path / "c.txt"
    write_edge_list(Graph.cycle(30), g_path)
    code, out, _ = run(["contract", str(g_path), "--auto", "--format", "csv"], capsys)
    assert code == 0
    (row,) = list(csv.DictReader(io.StringIO(out)))
    assert row["method"] == "greedy" and row["out_of_theory"] == "True"


def test_contract_manual(tmp_path, capsys):
    g_path = tmp_path / "c.txt"
    write_edge_list(Graph.cycle(100), g_path)
    code, out, _ = run(["contract", str(g_path), "--a", "1", "--b", "1", "--r", "3", "--q", "2"], capsys)
    assert code == 0 and json.loads(out)["q"] == 2


def test_exact_and_extract(tmp_path, capsys):
    g_path, s_path = tmp_path / "p.txt", tmp_path / "w.txt"
    write_edge_list(Graph.path(4), g_path)
    code, out, _ = run(["exact", str(g_path), "--out", str(s_path)], capsys)
    assert code == 0 and out == "2\n"
    code, out, _ = run(["extract-partition", str(g_path), str(s_path), "--K", "2"], capsys)
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and 1 <= len(rows) <= 2
    assert sum(int(r["size"]) for r in rows) == 4


def test_bounds(capsys):
    code, out, _ = run(["bounds", "--n", "1000", "--d", "3"], capsys)
    (row,) = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and row["exponent"] == "1/4"
    assert run(["bounds", "--n", "1000", "--d", "2"], capsys)[0] == 1


def read_rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_experiment_single_row(capsys):
    code, out, _ = run(["experiment", "--model", "regular", "--d", "3", "--n-grid", "2^10", "--trials", "1"], capsys)
    assert code == 0
    assert out.splitlines()[0].split(",") == RECORD_FIELDS
    rows = read_rows(out)
    assert [r["model"] for r in rows] == ["regular", "summary"]
    assert int(rows[0]["width"]) >= 3 and rows[0]["n"] == "1024"


def test_experiment_empty_grid(capsys):
    code, out, _ = run(["experiment", "--model", "regular", "--d", "3", "--n-grid", ""], capsys)
    assert code == 0 and out.splitlines() == [",".join(RECORD_FIELDS)]


def test_experiment_gnm_sparse_flagged(capsys):
    code, out, _ = run(["experiment", "--model", "gnm", "--m", "150", "--n-grid", "200", "--trials", "2"], capsys)
    rows = read_rows(out)
    assert code == 0
    assert all(r["out_of_theory"] == "1" for r in rows if r["model"] == "gnm")


def test_experiment_jobs_order_is_deterministic(capsys):
    argv = ["experiment", "--model", "regular", "--d", "3", "--n-grid", "64,128", "--trials", "2", "--seed", "5"]
    _, serial, _ = run(argv, capsys)
    _, parallel, _ = run(argv + ["--jobs", "2"], capsys)
    strip = lambda text: [{k: v for k, v in r.items() if k != "runtime_ms"} for r in read_rows(text)]
    assert strip(serial) == strip(parallel)


def test_fit_slope():
    assert fit_slope([2**k for k in range(4)], [2 ** (k / 2) for k in range(4)]) == pytest.approx(0.5)
    assert fit_slope([8, 8], [3, 4]) is None
