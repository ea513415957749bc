import json

import pytest

from aqd.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_groups(capsys):
    code, out, _ = run_cli(capsys, "groups", "G1")
    assert code == 0 and "I, X, iY, Z" in out
    code, out, _ = run_cli(capsys, "groups", "G2", "--subgroups", "8", "--json")
    doc = json.loads(out)
    names = {s["name"] for s in doc["subgroups"]}
    assert {f"G2^{i}(8)" for i in range(1, 12)} <= names
    assert len(doc["subgroups"]) == 15
    code, _, err = run_cli(capsys, "groups", "NOPE")
    assert code == 2 and "unknown group" in err


def test_unknown_command_and_option(capsys):
    with pytest.raises(SystemExit) as e:
        main(["bogus"])
    assert e.value.code == 2
    with pytest.raises(SystemExit) as e:
        main(["sweep", "--colour", "red"])
    assert e.value.code == 2


def test_states(capsys):
    code, out, _ = run_cli(capsys, "states", "--json")
    assert code == 0 and any(s["name"] == "cluster4" for s in json.loads(out))


def test_verify_tables(capsys, tmp_path):
    code, out, _ = run_cli(capsys, "verify-tables", "--json")
    doc = json.loads(out)
    assert code == 0 and doc["ok"]
    assert json.loads(json.dumps(doc)) == doc
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps([{"name": "bell", "n": 2, "amplitudes": [[1, 0], [0, 0], [0, 0], [0, 0]]}]))
    code, out, _ = run_cli(capsys, "verify-tables", "--states", str(bad))
    assert code == 1 and "FAIL" in out


def test_run_recovers_and_is_deterministic(capsys, tmp_path):
    args = ["run", "--state", "cluster4", "--bob", "G2", "--alice", "G1", "--copies", "3", "--seed", "7"]
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    code, out, _ = run_cli(capsys, *args, "--out", str(a))
    assert code == 0 and "exact recovery" in out
    run_cli(capsys, *args, "--out", str(b))
    assert a.read_bytes() == b.read_bytes()


def test_run_eve_abort(capsys):
    code, out, _ = run_cli(capsys, "run", "--state", "cluster4", "--bob", "G2", "--alice", "G1",
                           "--seed", "7", "--eve", "intercept-resend", "--decoys", "200",
                           "--threshold", "0.05", "--json")
    doc = json.loads(out)
    assert code == 0 and doc["aborted"]


def test_run_from_config_file(capsys, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"state_name": "bell", "bob_group_name": "G1",
                               "alice_group_name": "g1", "copies": 4}))
    code, out, _ = run_cli(capsys, "run", "--config", str(cfg), "--json")
    assert code == 0 and json.loads(out)["exact_recovery"]


def test_run_config_error(capsys):
    code, _, err = run_cli(capsys, "run", "--state", "bell", "--bob", "g1", "--alice", "G1")
    assert code == 1 and "config error" in err


def test_sweep(capsys, tmp_path):
    out_csv = tmp_path / "ad1.csv"
    code, out, _ = run_cli(capsys, "sweep", "--model", "AD", "--travel", "1", "--step", "0.05",
                           "--out", str(out_csv))
    lines = out_csv.read_text().splitlines()
    assert code == 0 and len(lines) == 22
    assert max(float(r.split(",")[-1]) for r in lines[1:]) < 1e-10
    code, out, _ = run_cli(capsys, "sweep", "--model", "PD", "--travel", "2")
    rows = [r.split(",") for r in out.splitlines() if r.startswith("PD")]
    assert (float(rows[0][2]), float(rows[0][4])) == (0.0, pytest.approx(1.0))
    assert (float(rows[-1][2]), float(rows[-1][4])) == (1.0, pytest.approx(0.5))
    code, _, _ = run_cli(capsys, "sweep", "--step", "0")
    assert code == 2


def test_efficiency(capsys):
    code, out, _ = run_cli(capsys, "efficiency", "--preset", "bell-qd", "--json")
    doc = json.loads(out)
    assert code == 0 and doc["percent"] == 66.7 and doc["ratio"] == "4/6"
    _, out, _ = run_cli(capsys, "efficiency", "--preset", "cluster-aqd", "--json")
    assert json.loads(out)["percent"] == 60.0
    _, out, _ = run_cli(capsys, "efficiency", "--c", "5", "--Q", "3", "--t", "1", "--b", "3", "--json")
    assert json.loads(out)["efficiency"] == "5/8"
    _, out, _ = run_cli(capsys, "efficiency", "--preset", "bell-qd", "--qsdc", "--json")
    doc = json.loads(out)
    assert doc["efficiency"] == "2/3" and doc["leakage_bits"] == 0
    code, _, _ = run_cli(capsys, "efficiency", "--c", "0", "--Q", "0", "--t", "0", "--b", "0")
    assert code == 2
