import json

import pytest

from symrotor import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def run_config(tmp_path):
    cfg = {
        "params": {"A": 1, "C": 2, "delta": 1},
        "subspaces": [[1, 1], [1, 0]],
        "N": 4,
        "initial": [{"label": [1, 1, 1], "amplitude": [1.0, 0.0]}, [1, 1, 0, 0.6], [2, 1, 0, 0.0, 0.8]],
        "control": {"type": "sine_sum", "shift": 1.0, "components": [[0.1, 3.7]]},
        "t_final": 0.5,
        "decimation": 50,
    }
    path = tmp_path / "run.json"
    path.write_text(json.dumps(cfg))
    return path, cfg


def test_spectrum_energies(capsys):
    code, out, _ = run(capsys, "spectrum", "--k", "1", "--m", "1", "--n", "5", "--A", "1", "--C", "2", "--delta", "1")
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0].startswith("j,E,b_diag,b_offdiag")
    assert [float(l.split(",")[1]) for l in lines[1:]] == [3, 7, 13, 21, 31]


def test_unknown_subcommand_prints_usage(capsys):
    code, _, err = run(capsys, "frobnicate")
    assert code == 2 and "usage" in err
    code, _, err = run(capsys)
    assert code == 2 and "usage" in err


def test_graph_text_and_csv(capsys):
    code, out, _ = run(capsys, "graph", "--k", "0", "--m", "0", "--n", "4")
    assert code == 0 and "non-resonant" in out
    code, out, _ = run(capsys, "graph", "--k", "0", "--m", "0", "--n", "4", "--csv")
    assert out.split("\n")[1] == "link,0,1,2,,,"


def test_simtest_reports_counts(capsys):
    code, out, err = run(capsys, "simtest", "1,6", "2,3", "6,1", "--jmax", "12")
    assert code == 0
    assert "outside the canonical set" in err
    assert "lifted-second-order=" in out and "unresolved=0" in out and "simultaneous=yes" in out


def test_related_prints_residual(capsys):
    code, out, _ = run(capsys, "related", "--k", "1", "--m", "2", "--tag", "3", "--tfinal", "2")
    assert code == 0
    vals = dict(line.split("=") for line in out.strip().split("\n"))
    assert float(vals["residual"]) < 1e-10 and vals["target"] == "(-2,-1)"


def test_related_rejects_noncanonical_source(capsys):
    code, _, _ = run(capsys, "related", "--k", "2", "--m", "1", "--tag", "2")
    assert code == 2


def test_synth_writes_a_law_that_simulate_accepts(capsys, tmp_path, run_config):
    law_path = tmp_path / "law.json"
    code, out, _ = run(capsys, "synth", "--out", str(law_path))
    assert code == 0 and "predicted transfer time" in out
    law = json.loads(law_path.read_text())
    assert [c[0] * 25 for c in law["control"]["components"]][0] == pytest.approx(2.3844, abs=1e-3)
    path, cfg = run_config
    cfg["control"] = law["control"]
    path.write_text(json.dumps(cfg))
    code, _, _ = run(capsys, "simulate", "--config", str(path), "--out", str(tmp_path / "t.csv"))
    assert code == 0


def test_simulate_is_byte_identical_across_runs(capsys, tmp_path, run_config):
    path, _ = run_config
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run(capsys, "simulate", "--config", str(path), "--out", str(a))[0] == 0
    assert run(capsys, "simulate", "--config", str(path), "--out", str(b))[0] == 0
    assert a.read_bytes() == b.read_bytes()
    lines = a.read_text().split("\n")
    assert lines[0] == "t,subspace,j,k,m,re,im,pop"
    assert lines[1] == "0,8,1,1,1,1,0,1"
    assert lines[6] == "0,7,2,1,0,0,0.8,0.64"
    assert b"\r" not in a.read_bytes()


def test_simulate_normalises_small_errors(capsys, tmp_path, run_config):
    path, cfg = run_config
    cfg["initial"][0]["amplitude"] = [1.0 + 5e-7, 0.0]
    path.write_text(json.dumps(cfg))
    code, _, err = run(capsys, "simulate", "--config", str(path), "--out", str(tmp_path / "o.csv"))
    assert code == 0 and "normalising" in err


@pytest.mark.parametrize(
    "patch",
    [
        {"initial": [[1, 1, 1, 1.1], [1, 1, 0, 1]]},
        {"initial": [[1, 1, 1, 1.0]]},
        {"initial": [[9, 1, 1, 1.0], [1, 1, 0, 1]]},
        {"subspaces": [[1, 1], [1, 1]]},
        {"control": {"type": "chirp"}},
        {"t_final": -1},
        {"N": "many"},
    ],
)
def test_simulate_rejects_bad_configs_without_output(capsys, tmp_path, run_config, patch):
    path, cfg = run_config
    cfg.update(patch)
    path.write_text(json.dumps(cfg))
    out = tmp_path / "never.csv"
    code, _, _ = run(capsys, "simulate", "--config", str(path), "--out", str(out))
    assert code == 2 and not out.exists()


def test_malformed_json_exits_2(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    out = tmp_path / "never.csv"
    code, _, err = run(capsys, "simulate", "--config", str(bad), "--out", str(out))
    assert code == 2 and "malformed" in err and not out.exists()


def test_bound_prints_key_value_lines(capsys):
    code, out, _ = run(capsys, "bound", "--tfinal", "10")
    assert code == 0
    vals = dict(line.split("=") for line in out.strip().split("\n"))
    assert set(vals) == {"N", "N1", "l1_norm_u", "boundary_coupling_abs", "sup_term", "bound", "grid_points"}
    assert float(vals["bound"]) < 1e-6
    assert run(capsys, "bound")[0] == 2


def test_runtime_failures_exit_1(capsys, monkeypatch):
    def boom(*a, **k):
        raise RuntimeError("eigensolver exploded")

    monkeypatch.setattr(cli, "build_galerkin", boom)
    code, _, err = run(capsys, "spectrum", "--k", "1", "--m", "1", "--n", "3")
    assert code == 1 and "exploded" in err


def test_reproduce_command_reports_each_criterion(capsys):
    code, out, _ = run(capsys, "reproduce-fig2")
    verdicts = [l.split()[1].rstrip(":") for l in out.split("\n") if l[:2] in ("A1", "A2", "A3")]
    assert len(verdicts) == 3 and set(verdicts) <= {"PASS", "FAIL"}
    assert code == (0 if verdicts == ["PASS"] * 3 else 1)
