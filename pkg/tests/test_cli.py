import csv
import io

import pytest

from kscore.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, list(csv.DictReader(io.StringIO(out))), err


def test_solve(capsys):
    code, rows, _ = run(capsys, "solve", "--dist", "pmf:1=0.1,3=0.9", "--grid", "20000")
    assert code == 0 and len(rows) == 1
    r = rows[0]
    assert float(r["alpha_low"]) == pytest.approx(0.0787280709, abs=1e-9)
    assert r["stable"] == "true" and r["degenerate"] == "false"
    assert float(r["core_fraction"]) == pytest.approx(0.776903112, abs=1e-9)


def test_validation_exit_code(capsys):
    code, _, err = run(capsys, "solve", "--dist", "pmf:1=0.1,x=0.9")
    assert code == 2 and "'x'" in err
    code, _, err = run(capsys, "solve", "--dist", "pmf:2=1")
    assert code == 2
    code, _, err = run(capsys, "experiment", "--dist", "pmf:3=1", "--n", "100")
    assert code == 2 and "force" in err


def test_internal_error_exit_code(capsys, monkeypatch):
    from kscore import cli
    from kscore.errors import InternalError

    def boom(args):
        raise InternalError("broken invariant")
    monkeypatch.setattr(cli, "cmd_solve", boom)
    assert main(["solve", "--dist", "pmf:1=0.1,3=0.9"]) == 1


def test_argparse_errors_exit_2():
    with pytest.raises(SystemExit) as exc:
        main(["peel"])
    assert exc.value.code == 2


def test_peel_and_wp_agree(capsys):
    _, peel_rows, _ = run(capsys, "peel", "--dist", "pmf:1=0.1,3=0.9", "--n", "2000", "--seed", "3")
    _, wp_rows, _ = run(capsys, "wp", "--dist", "pmf:1=0.1,3=0.9", "--n", "2000", "--seed", "3", "--trace")
    assert list(peel_rows[0]) == ["n", "core_size", "core_fraction", "rounds", "phase1_matching_size"]
    assert float(wp_rows[-1]["core_fraction"]) == float(peel_rows[0]["core_fraction"])
    assert wp_rows[0]["frac_U"] == "1" and wp_rows[0]["t"] == "0"
    assert all(r["core_fraction"] == "" for r in wp_rows[:-1])
    _, last, _ = run(capsys, "wp", "--dist", "pmf:1=0.1,3=0.9", "--n", "2000", "--seed", "3")
    assert last == wp_rows[-1:]


def test_gw(capsys):
    code, rows, _ = run(capsys, "gw", "--dist", "pmf:1=0.1,3=0.9", "--t", "2", "--trials", "20000", "--seed", "1")
    assert code == 0
    r = rows[0]
    assert set(r) == {"t", "mc_estimate", "stderr", "analytic_value", "z_score"}
    assert abs(float(r["z_score"])) < 4


def test_experiment_sweep_probe(capsys, tmp_path):
    out = tmp_path / "e.csv"
    code, _, _ = run(capsys, "experiment", "--dist", "pmf:1=0.1,3=0.9", "--n", "200,400",
                     "--trials", "2", "--seed", "5", "--out", str(out))
    assert code == 0 and len(out.read_text().splitlines()) == 1 + 2 * 4
    code, rows, _ = run(capsys, "sweep", "--q", "0.005", "--p-step", "0.5", "--grid", "5000")
    assert code == 0 and [r["p"] for r in rows] == ["0", "0.5", "1"]
    code, rows, _ = run(capsys, "probe", "--dist", "pmf:1=0.1,3=0.9", "--n", "1000", "--t", "0,100")
    assert code == 0 and rows[-1]["changed_fraction"] == "0"
