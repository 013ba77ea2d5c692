import json
import subprocess
import sys

import pytest

from patrolrange.cli import EXIT_DOMAIN, EXIT_INPUT, EXIT_OK, EXIT_UNDECIDED, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def doc(out):
    return json.loads(out)


def test_solve_figure_and_cycle(capsys):
    code, out, _ = run(capsys, "solve", "--family", "figure1")
    assert code == EXIT_OK and doc(out)["result"]["range"] == 2
    code, out, _ = run(capsys, "solve", "--family", "cycle", "-p", "n=6", "--emit-witness")
    result = doc(out)["result"]
    assert result["range"] == 2 and result["results"][-1]["witness"]


def test_solve_tiny_budget_is_undecided(capsys):
    code, _, err = run(capsys, "solve", "--family", "cycle", "-p", "n=8", "--budget", "5")
    assert code == EXIT_UNDECIDED and "undecided" in err


def test_budget_from_environment():
    env = {"PATROLRANGE_BUDGET": "5", "PATH": ""}
    proc = subprocess.run([sys.executable, "-m", "patrolrange", "solve", "--family", "cycle",
                           "-p", "n=8"], capture_output=True, text=True, env=env)
    assert proc.returncode == EXIT_UNDECIDED


def test_certificate_file(capsys, tmp_path):
    path = tmp_path / "c6.cert"
    code, out, _ = run(capsys, "solve", "--family", "cycle", "-p", "n=6",
                       "--emit-certificate", str(path))
    assert code == EXIT_OK and path.read_bytes().startswith(b"PATROLCERT 1 n=6 rho=1")
    assert str(path) in doc(out)["manifest"]["outputs"]


@pytest.mark.parametrize("content, suffix", [
    ("0 1\n1\n", ".txt"),
    ('{"n": 2, "edges": [[0, "x"]]}', ".json"),
    ('{"n": 2, "edges": [[0, 1]', ".json"),
    ("0 1\n2 3\n", ".txt"),
    ('{"n": 0, "edges": []}', ".json"),
])
def test_malformed_inputs_exit_1(capsys, tmp_path, content, suffix):
    path = tmp_path / f"g{suffix}"
    path.write_text(content)
    code, _, err = run(capsys, "solve", "--graph", str(path))
    assert code == EXIT_INPUT and str(path) in err


def test_missing_graph_and_file(capsys, tmp_path):
    assert run(capsys, "solve")[0] == EXIT_INPUT
    assert run(capsys, "solve", "--graph", str(tmp_path / "nope.json"))[0] == EXIT_INPUT
    assert run(capsys, "family", "grid", "-p", "n")[0] == EXIT_INPUT


def test_domain_errors_exit_3(capsys):
    assert run(capsys, "family", "cycle_triod", "-p", "k=0", "-p", "l=1")[0] == EXIT_DOMAIN
    assert run(capsys, "patrol", "--family", "cycle", "-p", "n=5", "--strategy", "tree_dfs")[0] == EXIT_DOMAIN
    assert run(capsys, "conjecture", "--n", "8", "--count", "1", "--rho", "1")[0] == EXIT_DOMAIN


def test_reruns_differ_only_in_timing(capsys):
    argv = ("solve", "--family", "random_tree", "-p", "n=12", "-p", "seed=3", "--emit-witness")
    a, b = doc(run(capsys, *argv)[1]), doc(run(capsys, *argv)[1])
    a.pop("timing"), b.pop("timing")
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)
    assert len(a["manifest"]["hash"]) == 64


def test_seed_changes_the_manifest(capsys):
    a = doc(run(capsys, "conjecture", "--n", "8", "--count", "2", "--seed", "1")[1])
    b = doc(run(capsys, "conjecture", "--n", "8", "--count", "2", "--seed", "2")[1])
    assert a["manifest"]["hash"] != b["manifest"]["hash"] and a["manifest"]["seed"] == 1


def test_family_and_predict(capsys):
    code, out, _ = run(capsys, "family", "grid", "-p", "n=4", "-p", "m=6")
    assert code == EXIT_OK and doc(out)["result"]["n"] == 24
    code, out, _ = run(capsys, "predict", "--family", "grid", "-p", "n=11", "-p", "m=14")
    values = {p["kind"]: p["value"] for p in doc(out)["result"]["predictions"]}
    assert values["lower_bound"] == "29/8" and values["upper_bound"] == "11/2"


def test_patrol_simulate_export(capsys, tmp_path):
    code, out, _ = run(capsys, "patrol", "--family", "grid", "-p", "n=11", "-p", "m=14",
                       "--strategy", "grid_fiber", "--check")
    plan = doc(out)["result"]
    assert code == EXIT_OK and plan["captures_best_response"] and plan["rho"] == 5
    walk = tmp_path / "fiber.json"
    walk.write_text(json.dumps(plan))
    code, out, _ = run(capsys, "simulate", "--family", "grid", "-p", "n=11", "-p", "m=14",
                       "--patrol", str(walk), "--rho", "3")
    result = doc(out)["result"]
    assert result["automaton"]["evaded"] and not result["best_response"]["captured"]
    code, out, _ = run(capsys, "export", "--family", "grid", "-p", "n=11", "-p", "m=14",
                       "--walk", str(walk), "--dot")
    assert code == EXIT_OK and out.startswith("// manifest ") and "0\\n" not in out.split("\n")[0]
    assert 'graph "grid11x14"' in out and "penwidth" in out


def test_simulate_rejects_bad_walk(capsys, tmp_path):
    walk = tmp_path / "w.json"
    walk.write_text('{"walk": [0, 5]}')
    code, _, err = run(capsys, "simulate", "--family", "path", "-p", "n=6", "--patrol", str(walk),
                       "--rho", "0")
    assert code == EXIT_INPUT and "adjacent" in err
    assert run(capsys, "simulate", "--family", "path", "-p", "n=6", "--patrol", str(walk))[0] == EXIT_INPUT


def test_table_over_small_trees(capsys):
    code, out, _ = run(capsys, "table", "trees:9")
    lines = out.splitlines()
    assert code == EXIT_OK and lines[0].startswith("# manifest ")
    assert lines[1] == "graph-id,n,predictions,solver-range,agreement"
    rows = lines[2:]
    assert len(rows) == 95 and all(r.endswith(",True") for r in rows)


def test_table_mixed_and_bad_corpus(capsys, tmp_path):
    out_file = tmp_path / "t.csv"
    code, _, _ = run(capsys, "table", "cycles:3:6", "grids:3x4", "figures", "--out", str(out_file))
    rows = out_file.read_text().splitlines()[2:]
    assert code == EXIT_OK and len(rows) == 10 and all(r.endswith(",True") for r in rows)
    assert json.loads((tmp_path / "t.csv.manifest.json").read_text())["manifest"]["hash"]
    assert run(capsys, "table", "cubes:3")[0] == EXIT_INPUT
    assert run(capsys, "table", "cycles:x")[0] == EXIT_INPUT


def test_console_script_entry():
    proc = subprocess.run([sys.executable, "-m", "patrolrange", "--version"], capture_output=True,
                          text=True)
    assert proc.returncode == 0 and proc.stdout.strip() == "0.1.0"
