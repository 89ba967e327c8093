import json
import math

import pytest

from polylab.cli import main, read_config
from polylab.errors import ConfigurationError


def run(tmp_path, *args):
    out = tmp_path / "out"
    code = main([*args, "--out", str(out)])
    return code, out


def test_tail_command(tmp_path):
    code, out = run(tmp_path, "tail", "--dist", "gaussian", "--n", "16", "--rmax", "8", "--trials", "100000", "--seed", "7")
    assert code == 0
    rep = json.loads((out / "report.json").read_text())
    assert math.isfinite(rep["metrics"]["slope"]) and rep["seed"] == 7
    assert (out / "tail_curve.svg").exists()
    lines = (out / "trials.csv").read_bytes().split(b"\r\n")
    assert lines[0] == b"r,p_hat,stderr,ci_low,ci_high,underpowered,oracle"
    assert len([x for x in lines[1:] if x]) == 4
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["subcommand"] == "tail" and "report.json" in manifest["outputs"]


def test_gauge_crosspolytope(tmp_path):
    code, out = run(tmp_path, "gauge", "--fixture", "crosspolytope", "--n", "5", "--v", "1,1,1,1,1")
    assert code == 0
    assert json.loads((out / "report.json").read_text())["metrics"]["value"] == pytest.approx(5.0)


def test_invalid_alpha(tmp_path, capsys):
    code, _ = run(tmp_path, "tail", "--alpha", "1.5")
    assert code == 2
    assert "0 < alpha < 1" in capsys.readouterr().err


def test_argparse_errors_exit_two(tmp_path):
    with pytest.raises(SystemExit) as info:
        main(["tail", "--fixture", "simplex"])
    assert info.value.code == 2


def test_failed_check_exit_four(tmp_path, monkeypatch):
    from polylab import experiments

    def broken(cfg):
        rep = experiments.ExperimentReport("norms", cfg.to_dict(), cfg.seed)
        rep.checks["always_false"] = False
        return rep

    monkeypatch.setattr(experiments, "campaign_holmstedt", broken)
    code, _ = run(tmp_path, "norms", "--trials", "3")
    assert code == 4


def test_solver_error_exit_three(tmp_path, monkeypatch):
    from polylab import experiments
    from polylab.errors import SolverError

    def broken(cfg, v=None):
        raise SolverError("iteration limit", {"iterations": 1})

    monkeypatch.setattr(experiments, "campaign_gauge", broken)
    assert run(tmp_path, "gauge")[0] == 3


def test_config_file_layering(tmp_path):
    cfg = tmp_path / "c.ini"
    cfg.write_text("[experiment]\nseed = 5\nn = 8\nN = 80\ntrials = 5000\n\n[tail]\nc_prime = 0.5\nrmax = 4\n")
    code, out = run(tmp_path, "tail", "--config", str(cfg), "--seed", "9")
    assert code == 0
    rep = json.loads((out / "report.json").read_text())
    assert rep["config"]["n"] == 8 and rep["config"]["N"] == 80
    assert rep["config"]["c_prime"] == 0.5 and rep["seed"] == 9
    manifest = json.loads((out / "manifest.json").read_text())
    import hashlib

    assert manifest["config_sha256"] == hashlib.sha256(cfg.read_bytes()).hexdigest()


def test_config_unknown_key(tmp_path):
    cfg = tmp_path / "c.ini"
    cfg.write_text("[experiment]\nbogus = 1\n")
    with pytest.raises(ConfigurationError):
        read_config(cfg, "tail")
    assert run(tmp_path, "tail", "--config", str(cfg))[0] == 2
    assert run(tmp_path, "tail", "--config", str(tmp_path / "missing.ini"))[0] == 2


def test_rerun_byte_identical_across_workers(tmp_path, monkeypatch):
    args = ["containment", "--n", "4", "--N", "60", "--draws", "4", "--directions", "300", "--seed", "3"]
    assert main([*args, "--out", str(tmp_path / "a"), "--workers", "1"]) == 0
    monkeypatch.setenv("POLYLAB_WORKERS", "2")
    assert main([*args, "--out", str(tmp_path / "b")]) == 0
    for name in ("trials.csv", "report.json", "c_hat_histogram.svg"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_all_subcommand(tmp_path):
    cfg = tmp_path / "c.ini"
    cfg.write_text(
        "[experiment]\ntrials = 2000\ndraws = 3\ndirections = 100\n"
        "[norms]\nn = 30\ntrials = 50\n[partition]\nn = 20\ntrials = 20\n"
        "[gauge]\nn = 3\nN = 12\ntrials = 5\n[cardinality]\nc_prime = 0.5\n"
        "[end2end]\nn = 3\nN = 100\nrho = 0.3\nnet_radius = 0.2\nc_prime = 0.5\nprobe_budget = 4000\n"
    )
    code, out = run(tmp_path, "all", "--config", str(cfg))
    assert code == 0
    for sub in ("norms", "partition", "gauge", "tail", "cardinality", "oscillation", "containment", "end2end"):
        assert (out / sub / "report.json").exists() and (out / sub / "trials.csv").exists()
