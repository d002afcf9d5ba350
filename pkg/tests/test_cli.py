import csv
import io
import json

import pytest

from guessgame import cli, repro
from guessgame.repro import Check

ALICE = '{"v":1,"role":"alice","kind":"threshold","params":{"family":"discrete_uniform","params":[2,5]}}'
BOB = '{"v":1,"role":"bob","kind":"consecutive_uniform","params":{"m":4}}'


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_finite_game_certificate(capsys):
    code, out, _ = run(capsys, "finite-game", "--m", "4")
    assert code == 0
    d = json.loads(out)
    for key in ("value", "alice_guarantee", "bob_cap"):
        assert d[key] == {"num": "5", "den": "8"}


def test_finite_game_csv_prints_rationals(capsys):
    code, out, _ = run(capsys, "finite-game", "--m", "4", "--format", "csv")
    rows = dict(csv.reader(io.StringIO(out)))
    assert rows["value"] == rows["bob_cap"] == "5/8"


def test_two_pile_eval(capsys):
    code, out, _ = run(capsys, "two-pile", "--n", "4", "--k", "2", "--delta", "0.01", "eval")
    d = json.loads(out)
    assert code == 0
    assert d["game_value"] == {"num": "1", "den": "2"}
    assert 0.5 < d["best_response_quadrature"] <= 0.51
    assert d["iid_value"] == 0.75 and d["epsilon_check"] is True


def test_sweep_minimum_row(capsys):
    code, out, _ = run(capsys, "sweep", "--target", "iid-two-pile", "--ratio", "0.05:0.95:0.01")
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["ratio", "value"] and len(rows) == 92
    r, v = min(((float(a), float(b)) for a, b in rows[1:]), key=lambda t: t[1])
    assert abs(r - 0.587) <= 0.005 and abs(v - 0.741) <= 0.005


def test_sweep_other_targets(capsys):
    code, out, _ = run(capsys, "sweep", "--target", "finite-game", "--m-range", "1:5:1")
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[1] == ["1", "1", "1", "1"] and rows[4][1] == "5/8"
    code, out, _ = run(capsys, "sweep", "--target", "scale-mixture", "--delta-range", "0.01:0.02:0.01",
                       "--format", "json")
    assert len(json.loads(out)) == 2


def test_eval_exact(capsys):
    code, out, _ = run(capsys, "eval", "--alice", ALICE, "--bob", BOB)
    d = json.loads(out)
    assert d["win_probability"] == {"num": "5", "den": "8"} and d["minimax"] is True


def test_simulate_is_deterministic(capsys):
    argv = ["simulate", "--alice", ALICE, "--bob", BOB, "--trials", "20000", "--seed", "3"]
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv, "--workers", "3")
    assert first == second
    assert json.loads(first)["trials"] == 20000


def test_simulate_repeated_trace(capsys, tmp_path):
    out_path = tmp_path / "trace.csv"
    code, out, _ = run(capsys, "simulate", "--alice", '{"kind":"step","params":{"t":2.5}}',
                       "--repeated", "50", "--format", "csv", "--out", str(out_path))
    assert code == 0 and out == ""
    rows = list(csv.reader(out_path.open(encoding="utf-8", newline="")))
    assert rows[0] == ["round", "frequency"] and len(rows) == 51


def test_best_response(capsys):
    code, out, _ = run(capsys, "best-response", "--bob", BOB)
    d = json.loads(out)
    assert d["value"] == {"num": "5", "den": "8"} and d["exact"] is True
    code, out, _ = run(capsys, "best-response", "--bob", BOB, "--table", "--format", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["x", "pi", "probability", "accept"]
    assert rows[1] == ["1", "0", "1/8", "0"]


def test_two_pile_deals_csv(capsys):
    code, out, _ = run(capsys, "two-pile", "deals", "--n", "3", "--k", "2", "--trials", "5")
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0][:4] == ["a", "z_1", "z_2", "z_3"] and len(rows) == 6


@pytest.mark.parametrize("argv", [
    ["eval", "--alice", "{broken", "--bob", BOB],
    ["eval", "--alice", ALICE, "--bob", '{"kind":"iid_uniform_pair"}'],
    ["eval", "--alice", '{"kind":"mystery"}', "--bob", BOB],
    ["finite-game", "--m", "0"],
    ["finite-game", "--m", "25"],
    ["two-pile", "--n", "4"],
    ["two-pile", "--n", "4", "--k", "4"],
    ["sweep", "--target", "iid-two-pile", "--ratio", "0.9:0.1:0.1"],
])
def test_config_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and "error" in err


def test_argparse_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as e:
        cli.main(["finite-game"])
    assert e.value.code == 2
    with pytest.raises(SystemExit) as e:
        cli.main(["simulate", "--trials", "0"])
    assert e.value.code == 2


def test_repro_exit_codes(capsys, monkeypatch):
    monkeypatch.setattr(repro, "CHECKS", [lambda: Check(1, "ok", True, "")])
    assert run(capsys, "repro")[0] == 0
    monkeypatch.setattr(repro, "CHECKS", [lambda: Check(1, "ok", True, ""), lambda: Check(2, "bad", False, "")])
    code, out, _ = run(capsys, "repro", "--format", "csv")
    assert code == 1
    assert list(csv.reader(io.StringIO(out)))[2][2] == "False"
