import json

from scentt.cli import main
from scentt.phaseclk import random_dag


def run(capsys, *argv):
    rc = main(list(argv))
    return rc, capsys.readouterr().out


def test_verify_ntt_ok(capsys):
    rc, out = run(capsys, "verify", "ntt", "--n", "16", "--q", "257", "--cases", "5",
                  "--l-bu", "2", "--l-mem", "8")
    doc = json.loads(out)
    assert rc == 0 and doc["ok"] and doc["mismatches"] == 0
    assert doc["output_permutation_is_bit_reverse"]


def test_verify_bad_params(capsys):
    rc, out = run(capsys, "verify", "ntt", "--n", "8", "--q", "15")
    assert rc == 2 and json.loads(out)["error"] == "NotPrime"


def test_seed_from_env(capsys, monkeypatch):
    monkeypatch.setenv("SCE_NTT_SEED", "42")
    rc, out = run(capsys, "verify", "ntt", "--n", "8", "--q", "17", "--cases", "2",
                  "--l-bu", "1", "--l-mem", "4")
    assert rc == 0 and json.loads(out)["seed"] == 42


def test_sim_run(tmp_path, capsys):
    cfg = tmp_path / "sim.cfg"
    cfg.write_text("n = 16\nq = 17\nl_bu = 3\nl_mem = 8, 8, 9, 10  # per PE\ntransforms = 3\n"
                   "bubble_rate = 0.1\n")
    trace, report = tmp_path / "t.jsonl", tmp_path / "r.json"
    rc, out = run(capsys, "sim", "run", "--config", str(cfg), "--trace", str(trace),
                  "--report", str(report))
    assert rc == 0
    assert json.loads(out)["details"]["mismatches"] == 0
    assert json.loads(report.read_text())["cycles"] == 4 * 3 + 35
    first = json.loads(trace.read_text().splitlines()[0])
    assert set(first) == {"cycle", "pe", "event", "value"}


def test_sim_run_bad_config(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("n = 16\ncolour = blue\n")
    rc, out = run(capsys, "sim", "run", "--config", str(cfg))
    assert rc == 2 and "colour" in json.loads(out)["message"]


def test_phase_assign(tmp_path, capsys):
    g = tmp_path / "g.txt"
    g.write_text(random_dag(25, seed=3).to_edgelist())
    out_csv = tmp_path / "a.csv"
    rc, out = run(capsys, "phase", "assign", "--graph", str(g), "--k", "2", "--out", str(out_csv))
    doc = json.loads(out)
    assert rc == 0 and doc["hold_violations"] == []
    assert doc["total_dff"] <= doc["dff_at_k1"]
    assert doc["clock_hz"] == 17e9
    assert out_csv.read_text().startswith("gate,slot,phase")


def test_cost_table4(capsys):
    rc, out = run(capsys, "cost", "table4")
    assert rc == 0 and "1036 cycles" in out and "531.25M NTT/s" in out


def test_cost_json_csv(capsys):
    rc, out = run(capsys, "cost", "big-ntt", "--format", "json")
    assert rc == 0 and json.loads(out)["cycles"] == 16784
    rc, out = run(capsys, "cost", "keyswitch", "--format", "csv")
    assert rc == 0 and "cycles,20800" in out


def test_params_check(capsys):
    rc, out = run(capsys, "params", "check", "--n", "8192", "--lambda", "80", "--logpql", "310")
    assert rc == 0 and json.loads(out)["satisfied"]
    rc, out = run(capsys, "params", "check", "--n", "1024", "--lambda", "128", "--logpql", "300")
    assert rc == 1 and not json.loads(out)["satisfied"]
