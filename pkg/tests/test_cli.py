import json
import os
import subprocess
import sys

import pytest

from pomlab import cli
from pomlab.errors import PomlabError


def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out


def test_demo_reports_success_bound_and_leakage(capsys):
    code, out = run_cli(capsys, "demo", "--n", "2")
    assert code == 0
    report = json.loads(out)
    assert report["tool"] == "pomlab"
    assert report["command"] == "demo"
    assert report["argv"] == ["demo", "--n", "2"]
    assert report["results"]["success"] == 0.853553390593
    assert report["results"]["nc_bound"] == 0.75
    assert report["results"]["violation_margin"] == 0.103553390593
    assert report["results"]["per_parity_leakage"] == {"11": 0.5}


def test_demo_n3(capsys):
    code, out = run_cli(capsys, "demo", "--n", "3")
    assert code == 0
    report = json.loads(out)
    assert report["results"]["success"] == 0.788675134595
    assert report["results"]["nc_bound"] == 0.666666666667


def test_demo_rejects_unsupported_n(capsys):
    code, _ = run_cli(capsys, "demo", "--n", "5")
    assert code == 2


def test_classical_agreement(capsys):
    code, out = run_cli(capsys, "classical", "--n", "2", "--alphabet", "2")
    assert code == 0
    report = json.loads(out)
    assert report["results"]["agree"] is True
    assert report["results"]["oracle"] == 0.75
    assert report["results"]["note"] is None


def test_classical_alphabet_limited(capsys):
    code, out = run_cli(capsys, "classical", "--n", "2", "--alphabet", "1")
    assert code == 0
    report = json.loads(out)
    assert report["results"]["oracle"] == 0.5
    assert report["results"]["agree"] is False
    assert report["results"]["note"] == "alphabet-limited"


@pytest.mark.slow
def test_classical_large_alphabet_uses_the_reduced_decoder_path(capsys):
    code, out = run_cli(capsys, "classical", "--n", "3", "--alphabet", "6")
    assert code == 0
    report = json.loads(out)
    assert report["results"]["agree"] is True
    assert abs(report["results"]["oracle"] - 2 / 3) < 1e-9


def test_classical_caps(capsys):
    code, _ = run_cli(capsys, "classical", "--n", "4", "--alphabet", "2")
    assert code == 2
    code, _ = run_cli(capsys, "classical", "--n", "2", "--alphabet", "9")
    assert code == 2


def test_simulate_rejects_zero_counts(capsys):
    code, _ = run_cli(capsys, "simulate", "--n", "2", "--counts", "0")
    assert code == 2


def test_simulate_report_shape(capsys):
    code, out = run_cli(
        capsys,
        "simulate", "--n", "2", "--counts", "1e4", "--seed", "7",
        "--depolarizing", "0.005",
    )
    assert code == 0
    report = json.loads(out)
    assert report["seed"] == 7
    assert report["inputs"]["counts_per_setting"] == 10000
    assert 0.8 < report["results"]["success"]["value"] < 0.9
    assert report["results"]["success"]["std_error"] > 0
    assert report["results"]["success"]["method"] == "binomial-counting"
    assert report["results"]["success"]["seed"] == 7
    leak = report["results"]["tomographic_leakage"]
    assert leak["max_mask"] == "11"
    assert 0.45 < leak["max"]["value"] < 0.6


@pytest.mark.slow
def test_simulate_reproduces_calibrated_target_at_reported_scale(capsys):
    from pomlab import experiment

    strength = experiment.calibrate_depolarizing(2, 0.851929)
    code, out = run_cli(
        capsys,
        "simulate", "--n", "2", "--counts", "3.5e7", "--seed", "3",
        "--depolarizing", f"{strength:.12g}", "--two-photon", "0.007",
    )
    assert code == 0
    report = json.loads(out)
    success = report["results"]["success"]
    assert abs(success["value"] - 0.851929) <= 5 * success["std_error"]
    assert report["results"]["model_weighted_leakage"]["max"] < 0.504


def test_optimize_smoke(capsys):
    code, out = run_cli(capsys, "optimize", "--n", "2", "--seeds", "1", "--iterations", "1")
    assert code == 0
    report = json.loads(out)
    assert report["results"]["exploratory"] is False
    assert "protocol" in report["results"]
    assert len(report["results"]["protocol"]["preparations"]) == 4


def test_optimize_report_round_trips_through_protocol_format(capsys):
    from pomlab import protocol

    code, out = run_cli(capsys, "optimize", "--n", "2", "--seeds", "2", "--iterations", "5")
    assert code == 0
    report = json.loads(out)
    loaded = protocol.protocol_from_dict(report["results"]["protocol"])
    reloaded_success = protocol.success_probability(loaded).overall
    assert abs(reloaded_success - report["results"]["success"]) < 1e-9


def test_leakage_command(capsys):
    code, out = run_cli(capsys, "leakage", "--n", "2", "--two-photon", "0.007")
    assert code == 0
    report = json.loads(out)
    entry = report["results"]["per_parity"]["11"]
    assert entry["single_photon"] == 0.5
    assert entry["two_photon"] == 0.75
    assert entry["weighted"] == 0.501737835154
    assert report["results"]["max_weighted"] == 0.501737835154


def test_csv_format(capsys):
    code, out = run_cli(capsys, "demo", "--n", "2", "--format", "csv")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "key,value"
    values = dict(line.split(",", 1) for line in lines[1:])
    assert values["results.success"] == "0.853553390593"


def test_out_file_is_written_atomically(tmp_path, capsys):
    target = tmp_path / "report.json"
    code, out = run_cli(capsys, "demo", "--n", "2", "--out", str(target))
    assert code == 0
    assert out == ""
    report = json.loads(target.read_text())
    assert report["results"]["success"] == 0.853553390593
    leftovers = [p for p in os.listdir(tmp_path) if p.startswith(".pomlab-")]
    assert leftovers == []


def test_unwritable_out_path_is_a_usage_error(capsys):
    code, _ = run_cli(capsys, "demo", "--n", "2", "--out", "/nonexistent/dir/report.json")
    assert code == 2


def test_internal_errors_exit_3(monkeypatch, capsys):
    def boom(n):
        raise PomlabError("synthetic failure")

    monkeypatch.setattr(cli, "standard_protocol", boom)
    code, _ = run_cli(capsys, "demo", "--n", "2")
    assert code == 3


def _run_subprocess(args, env_overrides=None):
    env = dict(os.environ)
    env.update(env_overrides or {})
    result = subprocess.run(
        [sys.executable, "-m", "pomlab", *args],
        capture_output=True,
        env=env,
        check=True,
    )
    return result.stdout


@pytest.mark.slow
def test_simulate_reports_are_byte_identical_across_runs_and_thread_counts():
    args = ["simulate", "--n", "2", "--counts", "1e5", "--seed", "123",
            "--depolarizing", "0.0046", "--jitter", "0.001"]
    first = _run_subprocess(args, {"POMLAB_THREADS": "1"})
    second = _run_subprocess(args, {"POMLAB_THREADS": "1"})
    threaded = _run_subprocess(args, {"POMLAB_THREADS": "8"})
    assert first == second
    assert first == threaded
