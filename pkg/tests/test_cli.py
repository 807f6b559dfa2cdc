import json
import os

import pytest

from qstime.cli import main


def run(args):
    return main(args)


def test_analyze_cycle4(tmp_path, capsys):
    out = tmp_path / "analyze"
    code = run(["analyze", "--graph", "cycle:n=4", "--set", "0", "--out", str(out)])
    assert code == 0
    report = json.loads((out / "report.json").read_text())
    assert report["r_m"] == pytest.approx(0.27144660940672627, abs=1e-9)
    assert report["pi_A"] == pytest.approx(0.25)
    assert all(v["passed"] for v in report["verdicts"].values())
    assert (out / "report.txt").exists()
    assert (out / "tails.png").exists()
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["command"] == "analyze"
    assert "tails.png" in manifest["artifacts"]
    assert "R_M" in capsys.readouterr().out


def test_analyze_rejects_full_target(tmp_path, capsys):
    code = run(["analyze", "--graph", "cycle:n=4", "--set", "0,1,2,3", "--out", str(tmp_path)])
    assert code == 2
    assert "proper subset" in capsys.readouterr().err


def test_analyze_complete4_all_pass(tmp_path):
    code = run(["analyze", "--graph", "complete:n=4", "--set", "0", "--out", str(tmp_path),
                "--no-figures"])
    assert code == 0
    assert not (tmp_path / "tails.png").exists()


def test_analyze_bad_graph_spec(tmp_path, capsys):
    code = run(["analyze", "--graph", "blob:n=4", "--set", "0", "--out", str(tmp_path)])
    assert code == 2
    assert "unknown graph family" in capsys.readouterr().err


def test_verify_instance_file(tmp_path):
    listing = tmp_path / "instances.txt"
    listing.write_text(
        "# toy suite\n"
        "cycle:n=4 0\n"
        "complete:n=4 0,1\n"
        "cycle:n=8 0,4\n"
    )
    out = tmp_path / "verify"
    code = run(["verify", str(listing), "--out", str(out), "--no-figures"])
    assert code == 0
    import csv

    with open(out / "margins.csv", newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert rows and set(rows[0]) == {"graph", "set", "verdict", "passed", "margin", "tolerance"}
    assert all(row["passed"] == "1" for row in rows)
    assert {row["set"] for row in rows} == {"0", "0,1", "0,4"}


def test_verify_parallel_matches_serial(tmp_path):
    listing = tmp_path / "instances.txt"
    listing.write_text("cycle:n=8 0\ncycle:n=8 0,4\nhypercube:k=3 0\n")
    out1, out2 = tmp_path / "serial", tmp_path / "parallel"
    assert run(["verify", str(listing), "--out", str(out1), "--no-figures"]) == 0
    assert run(["verify", str(listing), "--out", str(out2), "--jobs", "3", "--no-figures"]) == 0
    assert (out1 / "margins.csv").read_text() == (out2 / "margins.csv").read_text()


def test_verify_empty_list_warns(tmp_path, capsys):
    listing = tmp_path / "empty.txt"
    listing.write_text("# nothing here\n")
    code = run(["verify", str(listing), "--out", str(tmp_path / "out")])
    assert code == 0
    assert "empty instance list" in capsys.readouterr().err


def test_verify_corrupt_file_exits_2(tmp_path, capsys):
    listing = tmp_path / "bad.txt"
    listing.write_text("cycle:n=4 0\nblob:q=3 0\n")
    code = run(["verify", str(listing), "--out", str(tmp_path / "out")])
    assert code == 2
    err = capsys.readouterr().err
    assert "bad.txt:2" in err


def test_sweep_torus(tmp_path):
    out = tmp_path / "sweep"
    code = run(["sweep-torus", "--dim", "2", "--m-list", "4,6,8", "--out", str(out)])
    assert code == 0
    rows = (out / "sweep.csv").read_text().strip().splitlines()
    assert rows[0] == "m,t_rel,e_pi_to,ab_error,refined_error,beta_gamma"
    assert len(rows) == 4
    fits = json.loads((out / "sweep_fits.json").read_text())
    assert set(fits) == {"t_rel", "e_pi_to", "ab_error", "refined_error", "beta_gamma"}
    assert (out / "sweep.png").exists()


def test_sweep_torus_empty_mlist(tmp_path, capsys):
    code = run(["sweep-torus", "--dim", "2", "--m-list", "", "--out", str(tmp_path)])
    assert code == 2
    assert "empty m list" in capsys.readouterr().err


def test_simulate(tmp_path):
    out = tmp_path / "sim"
    code = run([
        "simulate", "--graph", "complete:n=4", "--set", "0", "--start", "vertex:1",
        "--samples", "5000", "--seed", "3", "--out", str(out),
    ])
    assert code == 0
    rows = (out / "simulate.csv").read_text().strip().splitlines()
    assert rows[0] == "t,exact,empirical,lower,upper,in_band"
    assert len(rows) == 21
    assert (out / "simulate.png").exists()
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["arguments"]["seed"] == 3


def test_seed_env_fallback(tmp_path, monkeypatch):
    monkeypatch.setenv("QSTIME_SEED", "777")
    out = tmp_path / "sim"
    code = run([
        "simulate", "--graph", "complete:n=4", "--set", "0", "--start", "pi",
        "--samples", "1000", "--out", str(out), "--no-figures",
    ])
    assert code == 0
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["arguments"]["seed"] == 777


def test_simulate_reproducible(tmp_path):
    outs = []
    for tag in ("a", "b"):
        out = tmp_path / tag
        assert run([
            "simulate", "--graph", "cycle:n=8", "--set", "0,4", "--start", "qs",
            "--samples", "2000", "--seed", "11", "--out", str(out), "--no-figures",
        ]) == 0
        outs.append((out / "simulate.csv").read_text())
    assert outs[0] == outs[1]


def test_version_flag(capsys):
    code = run(["--version"])
    assert code == 0
    assert "qstime" in capsys.readouterr().out
