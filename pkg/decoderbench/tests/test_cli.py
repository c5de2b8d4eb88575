# SPDX-FileCopyrightText: 2026 decoderbench contributors
#
# SPDX-License-Identifier: MIT

import json
from pathlib import Path

import pytest

from decoderbench.ansatz import read_checkpoint, write_checkpoint
from decoderbench.cli import EXIT_DOMAIN, EXIT_FILE, EXIT_FINGERPRINT, EXIT_USAGE, build_parser, main
from decoderbench.config import configure
from decoderbench.dem.parser import dem_fingerprint, parse_dem
from decoderbench.sampler import read_shots
from decoderbench.tests import exact_d3_ansatz, exact_d3_params


@pytest.fixture(autouse=True)
def reset_settings():
    yield
    configure(None)


def _run(*argv) -> int:
    return main([str(a) for a in argv])


def _code_capacity(out: Path) -> Path:
    args = ("--distance", 3, "--noise", "code-capacity", "--p", 0.05, "--out", out)
    assert _run("gen-dem", "--family", "repetition", *args) == 0
    return out / "model.dem"


def test_gen_dem(tmp_path, capsys):
    assert _run("gen-dem", "--family", "repetition", "--distance", 3, "--rounds", 1, "--p", 0.1, "--out", tmp_path) == 0
    assert "m=4 L=1" in capsys.readouterr().out
    model = parse_dem((tmp_path / "model.dem").read_text())
    assert model.num_detectors == 4

    args = ("--distance", 3, "--noise", "code-capacity", "--p", 0.01, "--name", "surface.dem", "--out", tmp_path)
    assert _run("gen-dem", "--family", "rotated-surface", *args) == 0
    model = parse_dem((tmp_path / "surface.dem").read_text())
    assert (model.num_detectors, model.num_observables) == (8, 2)

    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert manifest["command"] == "gen-dem"
    assert manifest["options"]["family"] == "rotated-surface"
    assert manifest["seeds"] == {}
    assert "sentry_dsn" not in manifest["settings"]


def test_usage_errors(tmp_path):
    assert _run("gen-dem", "--family", "repetition", "--distance", 3, "--out", tmp_path) == EXIT_USAGE
    assert _run("frobnicate") == EXIT_USAGE
    config = tmp_path / "run.conf"
    config.write_text("no_such_key = 1\n")
    args = ("--distance", 3, "--p", 0.1, "--config", config, "--out", tmp_path)
    assert _run("gen-dem", "--family", "repetition", *args) == EXIT_USAGE


def test_paper_scale_flag():
    argv = ["train", "--dem", "m.dem", "--train", "a.01", "--test", "b.01", "--seed", "1"]
    assert build_parser().parse_args(argv + ["--paper-scale"]).paper_scale
    assert not build_parser().parse_args(argv).paper_scale


def test_domain_error(tmp_path):
    assert _run("gen-dem", "--family", "repetition", "--distance", 4, "--p", 0.1, "--out", tmp_path) == EXIT_DOMAIN


def test_file_errors(tmp_path):
    assert _run("sample", "--dem", tmp_path / "missing.dem", "--shots", 10, "--seed", 1, "--out", tmp_path) == EXIT_FILE
    (tmp_path / "bad.dem").write_text("error(x) D0\n")
    assert _run("sample", "--dem", tmp_path / "bad.dem", "--shots", 10, "--seed", 1, "--out", tmp_path) == EXIT_FILE


def test_fingerprint_mismatch(tmp_path):
    for p, name in ((0.1, "a.dem"), (0.05, "b.dem")):
        args = ("--distance", 3, "--p", p, "--name", name, "--out", tmp_path)
        assert _run("gen-dem", "--family", "repetition", *args) == 0
    args = ("--shots", 20, "--split", 0.5, "--seed", 1, "--out", tmp_path)
    assert _run("sample", "--dem", tmp_path / "a.dem", *args) == 0
    train = ("--train", tmp_path / "train.01", "--test", tmp_path / "test.01", "--epochs", 1)
    assert _run("train", "--dem", tmp_path / "b.dem", *train, "--seed", 1, "--out", tmp_path) == EXIT_FINGERPRINT
    args = ("--shots", tmp_path / "test.01", "--out", tmp_path)
    assert _run("mwpm", "--dem", tmp_path / "b.dem", *args) == EXIT_FINGERPRINT


def test_shots_for_a_different_code_are_a_fingerprint_error(tmp_path):
    args = ("--distance", 3, "--rounds", 1, "--p", 0.1, "--name", "rounds.dem", "--out", tmp_path)
    assert _run("gen-dem", "--family", "repetition", *args) == 0
    args = ("--shots", 20, "--seed", 1, "--out", tmp_path)
    assert _run("sample", "--dem", tmp_path / "rounds.dem", *args) == 0
    dem = _code_capacity(tmp_path)
    for name in ("mwpm", "mld"):
        assert _run(name, "--dem", dem, "--shots", tmp_path / "shots.01", "--out", tmp_path) == EXIT_FINGERPRINT


def test_full_flow(tmp_path, capsys):
    dem = _code_capacity(tmp_path)
    assert _run("sample", "--dem", dem, "--shots", 400, "--split", 0.75, "--seed", 1, "--out", tmp_path) == 0
    train_shots = read_shots((tmp_path / "train.01").read_text())
    assert train_shots.size == 300
    assert train_shots.fingerprint == dem_fingerprint(parse_dem(dem.read_text()))

    shots = ("--train", tmp_path / "train.01", "--test", tmp_path / "test.01")
    circuit = ("--qubits", 2, "--blocks", 2, "--readout", 1, "--epochs", 2, "--batch-size", 50, "--eval-every", 1)
    assert _run("train", "--dem", dem, *shots, *circuit, "--p", 0.05, "--seed", 2, "--out", tmp_path) == 0
    trace = (tmp_path / "trace.csv").read_text().splitlines()
    assert trace[0] == "epoch,train_loss,train_ler,test_ler,seconds"
    assert len(trace) == 3 and trace[1].endswith(",")
    ansatz, _ = read_checkpoint((tmp_path / "best.ckpt").read_text())
    assert ansatz.readout == (1,)
    summary = json.loads((tmp_path / "summary.json").read_text())
    assert summary["physical_error_rate"] == 0.05
    assert summary["test_shots"] == 100

    test = ("--shots", tmp_path / "test.01", "--dem", dem)
    assert _run("eval", "--checkpoint", tmp_path / "best.ckpt", *test, "--out", tmp_path) == 0
    estimate = json.loads((tmp_path / "eval.json").read_text())
    assert estimate["shots"] == 100

    checkpoint = ("--checkpoint", tmp_path / "best.ckpt")
    assert _run("decode", *checkpoint, *test, "--mode", "sample", "--out", tmp_path) == EXIT_USAGE
    assert _run("decode", *checkpoint, *test, "--out", tmp_path) == 0
    predictions = read_shots((tmp_path / "predictions.01").read_text())
    assert predictions.size == 100

    for name in ("mwpm", "mld"):
        assert _run(name, "--dem", dem, "--shots", tmp_path / "test.01", "--out", tmp_path) == 0
        report = json.loads((tmp_path / f"{name}.json").read_text())
        assert report["failures"] == 0
        assert read_shots((tmp_path / f"{name}-predictions.01").read_text()).size == 100

    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert manifest["command"] == "mld"
    assert set(manifest["inputs"]) == {str(dem), str(tmp_path / "test.01")}


def test_selfcorrect(tmp_path):
    checkpoint = tmp_path / "exact.ckpt"
    checkpoint.write_text(write_checkpoint(exact_d3_ansatz, exact_d3_params()))
    args = ("--checkpoint", checkpoint, "--p", 0.05, "--shots", 2000, "--seed", 4, "--out", tmp_path)
    assert _run("selfcorrect", *args) == 0
    result = json.loads((tmp_path / "selfcorrect.json").read_text())
    assert result["equivalence_passed"] is True
    assert result["exact_logical_error_rate"] == pytest.approx(3 * 0.05**2 * 0.95 + 0.05**3)
    assert result["uncorrected_flip_rate"] == 0.05
    rows = (tmp_path / "patterns.csv").read_text().splitlines()
    assert len(rows) == 9
    assert json.loads((tmp_path / "manifest.json").read_text())["seeds"] == {"seed": 4}


def test_selfcorrect_needs_two_syndrome_bits(tmp_path):
    dem = _code_capacity(tmp_path)
    assert _run("sample", "--dem", dem, "--shots", 40, "--split", 0.5, "--seed", 1, "--out", tmp_path) == 0
    shots = ("--train", tmp_path / "train.01", "--test", tmp_path / "test.01")
    circuit = ("--qubits", 2, "--blocks", 1, "--epochs", 1)
    assert _run("train", "--dem", dem, *shots, *circuit, "--seed", 1, "--out", tmp_path) == 0
    # readout defaults to qubit 0, which selfcorrect accepts as the control qubit
    assert _run("selfcorrect", "--checkpoint", tmp_path / "best.ckpt", "--p", 0.05, "--seed", 1, "--out", tmp_path) == 0

    big = tmp_path / "big"
    assert _run("gen-dem", "--family", "repetition", "--distance", 3, "--p", 0.1, "--out", big) == 0
    assert _run("sample", "--dem", big / "model.dem", "--shots", 40, "--split", 0.5, "--seed", 1, "--out", big) == 0
    shots = ("--train", big / "train.01", "--test", big / "test.01")
    assert _run("train", "--dem", big / "model.dem", *shots, "--epochs", 1, "--seed", 1, "--out", big) == 0
    assert _run("selfcorrect", "--checkpoint", big / "best.ckpt", "--p", 0.05, "--seed", 1, "--out", big) == EXIT_DOMAIN


def test_training_output_does_not_depend_on_workers(tmp_path):
    dem = _code_capacity(tmp_path)
    assert _run("sample", "--dem", dem, "--shots", 300, "--split", 0.8, "--seed", 5, "--out", tmp_path) == 0
    shots = ("--train", tmp_path / "train.01", "--test", tmp_path / "test.01")
    circuit = ("--qubits", 2, "--blocks", 2, "--epochs", 3, "--batch-size", 40)
    for workers in (1, 4):
        out = tmp_path / f"w{workers}"
        assert _run("train", "--dem", dem, *shots, *circuit, "--seed", 6, "--workers", workers, "--out", out) == 0
    for name in ("trace.csv", "best.ckpt"):
        assert (tmp_path / "w1" / name).read_bytes() == (tmp_path / "w4" / name).read_bytes()
