import csv
import json
import subprocess
import sys

import pytest

from netcoherence.cli import BENCHMARK_COLUMNS, main, run_benchmark
from netcoherence.generators import barabasi_albert, erdos_renyi, generate
from netcoherence.graph import is_connected, new_graph
from netcoherence.io import FormatError, format_edge_list, parse_edge_list, read_edge_list, write_edge_list


@pytest.fixture
def path4(tmp_path):
    p = tmp_path / "path4.txt"
    write_edge_list(new_graph(4, [(0, 1), (1, 2), (2, 3)]), p)
    return p


def test_edge_list_format_is_exact(tmp_path):
    g = new_graph(3, [(2, 1, 0.1), (0, 1, 2.0)])
    text = format_edge_list(g)
    assert text == "n 3\n0\t1\t2\n1\t2\t0.10000000000000001\n"
    assert parse_edge_list(text) == g


def test_edge_list_round_trip_bytes(tmp_path):
    g, _ = generate("er", 25, seed=2)
    g = new_graph(g.n, [(u, v, 1 / (u + v + 1)) for u, v, _ in g.edges])
    a = tmp_path / "a.txt"
    b = tmp_path / "b.txt"
    write_edge_list(g, a)
    write_edge_list(read_edge_list(a), b)
    assert a.read_bytes() == b.read_bytes()


def test_edge_list_comments_and_errors():
    g = parse_edge_list("# header\nn 3\n# edge\n0\t2\t1.5\n\n")
    assert g.edges == ((0, 2, 1.5),)
    with pytest.raises(FormatError):
        parse_edge_list("0\t1\t1\n")
    with pytest.raises(FormatError):
        parse_edge_list("n 3\n0\t1\tabc\n")
    with pytest.raises(ValueError):
        parse_edge_list("n 3\n0\t1\t1\n1\t0\t1\n")


def test_generators():
    c4, _ = generate("cycle", 4)
    assert [e[:2] for e in c4.edges] == [(0, 1), (0, 3), (1, 2), (2, 3)]
    tree = barabasi_albert(5, 1, seed=3)
    assert tree.num_edges == 4 and is_connected(tree)
    ba = barabasi_albert(40, 2, seed=3)
    assert ba.num_edges == 1 + 2 * 38 and is_connected(ba)
    er, attempts = erdos_renyi(30, 1.1, seed=4)
    assert is_connected(er) and attempts >= 1
    assert generate("er", 30, seed=4)[0] == er
    assert generate("complete", 5)[0].num_edges == 10
    with pytest.raises(ValueError):
        generate("er", 10)
    with pytest.raises(ValueError):
        generate("ba", 3, seed=1, m=3)
    with pytest.raises(ValueError):
        generate("cycle", 2)
    with pytest.raises(RuntimeError):
        erdos_renyi(40, 0.05, seed=1, max_retries=3)


def test_generate_command(tmp_path, capsys):
    out = tmp_path / "g.txt"
    assert main(["generate", "--kind", "er", "--n", "30", "--seed", "5", "--output", str(out)]) == 0
    meta = json.loads(capsys.readouterr().out)
    assert meta["seed"] == 5 and meta["c"] == 1.1 and meta["attempts"] >= 1
    assert is_connected(read_edge_list(out))


def test_coherence_command(path4, capsys):
    assert main(["coherence", "--input", str(path4)]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["trace_pinv"] == pytest.approx(2.5)
    assert out["coherence"] == pytest.approx(1.25)
    assert out["connected"] is True


def test_coherence_command_disconnected(tmp_path, capsys):
    p = tmp_path / "d.txt"
    write_edge_list(new_graph(3, [(0, 1)]), p)
    assert main(["coherence", "--input", str(p)]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["connected"] is False and out["coherence"] is None


REPORT_KEYS = {
    "algorithm", "seed", "config", "selected", "gains", "trace_before", "trace_after",
    "coherence_before", "coherence_after", "eval_counts", "wall_times_s",
}


def test_greedy_command(path4, tmp_path):
    out = tmp_path / "r.json"
    aug = tmp_path / "aug.txt"
    rc = main(["greedy-add", "--input", str(path4), "--k", "1", "--alg", "both",
               "--output", str(out), "--graph-output", str(aug)])
    assert rc == 0
    both = json.loads(out.read_text())
    assert both["identical_selection"] is True
    for rep in both["reports"]:
        assert set(rep) == REPORT_KEYS
        assert rep["selected"] == [[0, 3, 1.0]]
        assert len(rep["gains"]) == len(rep["eval_counts"]) == len(rep["wall_times_s"]) == 1
        assert rep["coherence_after"] == pytest.approx(0.625)
    assert read_edge_list(aug).has_edge(0, 3)


def test_greedy_command_k_zero(path4, tmp_path):
    out = tmp_path / "r.json"
    assert main(["greedy-add", "--input", str(path4), "--k", "0", "--alg", "naive", "--output", str(out)]) == 0
    rep = json.loads(out.read_text())
    assert rep["selected"] == [] and rep["trace_after"] == rep["trace_before"]


def test_greedy_report_is_byte_stable(tmp_path):
    g = tmp_path / "g.txt"
    main(["generate", "--kind", "er", "--n", "40", "--seed", "7", "--output", str(g)])
    args = ["greedy-add", "--input", str(g), "--k", "15", "--alg", "lazy", "--seed", "7", "--no-timings"]
    main(args + ["--output", str(tmp_path / "a.json")])
    main(args + ["--output", str(tmp_path / "b.json")])
    assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()
    assert json.loads((tmp_path / "a.json").read_text())["seed"] == 7


def test_greedy_rejects_disconnected(tmp_path, capsys):
    p = tmp_path / "d.txt"
    write_edge_list(new_graph(3, [(0, 1)]), p)
    assert main(["greedy-add", "--input", str(p), "--k", "1"]) == 2


def test_build_tree_command(tmp_path):
    out, rep = tmp_path / "t.txt", tmp_path / "t.json"
    assert main(["build-tree", "--n", "6", "--output", str(out), "--report", str(rep)]) == 0
    tree = read_edge_list(out)
    assert [e[:2] for e in tree.edges] == [(0, i) for i in range(1, 6)]
    assert json.loads(rep.read_text())["trace_after"] == pytest.approx(25 / 6)


def test_build_tree_attach_and_weights(tmp_path, path4):
    out = tmp_path / "t.txt"
    assert main(["build-tree", "--attach", str(path4), "--new-nodes", "2", "--output", str(out),
                 "--report", str(tmp_path / "r.json")]) == 0
    assert read_edge_list(out).n == 6
    wfile = tmp_path / "w.txt"
    write_edge_list(new_graph(3, [(0, 1, 1.0), (1, 2, 1.0)]), wfile)
    assert main(["build-tree", "--weights", str(wfile), "--output", str(out),
                 "--report", str(tmp_path / "r2.json")]) == 0
    assert [e[:2] for e in read_edge_list(out).edges] == [(0, 1), (1, 2)]


def test_oracle_command(path4, tmp_path):
    out = tmp_path / "o.json"
    assert main(["oracle", "--input", str(path4), "--k", "1", "--output", str(out)]) == 0
    res = json.loads(out.read_text())
    assert res["best_witness"] == [[0, 3, 1.0]]
    assert main(["oracle", "--tree", "--n", "5", "--output", str(out)]) == 0
    assert json.loads(out.read_text())["instances_examined"] == 125


def test_simulate_command(tmp_path):
    g = tmp_path / "k3.txt"
    write_edge_list(new_graph(3, [(0, 1), (0, 2), (1, 2)]), g)
    out = tmp_path / "s.json"
    assert main(["simulate", "--input", str(g), "--seed", "3", "--output", str(out)]) == 0
    est = json.loads(out.read_text())
    assert est["seed"] == 3
    assert abs(est["coherence_hat"] - 1 / 3) <= 3 * est["std_error"]


def test_benchmark_csv(tmp_path):
    out = tmp_path / "b.csv"
    rows = run_benchmark([20], seed=1, output=str(out))
    assert len(rows) == 2
    with open(out) as fh:
        parsed = list(csv.DictReader(fh))
    assert list(parsed[0]) == BENCHMARK_COLUMNS
    assert {r["algorithm"] for r in parsed} == {"naive", "lazy"}
    assert int(parsed[1]["evals"]) <= int(parsed[0]["evals"])
    run_benchmark([], seed=1, output=str(out))
    assert out.read_text() == ",".join(BENCHMARK_COLUMNS) + "\n"


def test_usage_errors_exit_1(path4):
    assert main(["generate", "--kind", "ba", "--n", "5", "--output", "x"]) == 1
    with pytest.raises(SystemExit) as exc:
        main(["greedy-add", "--input", str(path4)])
    assert exc.value.code == 1
    with pytest.raises(SystemExit) as exc:
        main(["no-such-command"])
    assert exc.value.code == 1


def test_runtime_errors_exit_2(tmp_path):
    assert main(["coherence", "--input", str(tmp_path / "missing.txt")]) == 2
    bad = tmp_path / "bad.txt"
    bad.write_text("n 2\n0\t0\t1\n")
    assert main(["coherence", "--input", str(bad)]) == 2


def test_module_entry_point(path4):
    proc = subprocess.run([sys.executable, "-m", "netcoherence", "coherence", "--input", str(path4)],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["trace_pinv"] == pytest.approx(2.5)
