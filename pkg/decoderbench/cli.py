# SPDX-FileCopyrightText: 2026 decoderbench contributors
#
# SPDX-License-Identifier: MIT

"""
Command-line entry point: ``python -m decoderbench <command>``.

Every command writes its artifacts and a ``manifest.json`` into ``--out``. Exit codes: 0 success, 1 domain error,
2 usage error, 3 fingerprint mismatch, 4 file error.
"""

import argparse
import json
import logging
import sys
import time
from pathlib import Path
from typing import Any, Callable

import numpy as np
import sentry_sdk
import xxhash
from pydantic import BaseModel, ValidationError

from decoderbench import __version__
from decoderbench.ansatz import AnsatzConfig, Entangler, ParameterSet, read_checkpoint, write_checkpoint
from decoderbench.baselines import MldDecoder, MwpmDecoder, decode_shots, extract_matching_graph
from decoderbench.config import Settings, configure, load_settings
from decoderbench.dem import CodeFamily, CodeSpec, DetectorErrorModel, NoiseKind
from decoderbench.dem.builders import build_dem
from decoderbench.dem.parser import dem_fingerprint, parse_dem, serialize_dem
from decoderbench.errors import (
    CheckpointFormatError,
    ConfigurationMismatchError,
    DecoderBenchError,
    DemSyntaxError,
    FingerprintMismatchError,
    ShotFormatError,
)
from decoderbench.helpers import binomial_interval, int_to_bits
from decoderbench.sampler import ShotSet, check_fingerprint, read_shots, sample_shots, split_train_test, write_shots
from decoderbench.selfcorrect import (
    SelfCorrectConfig,
    equivalence_check,
    exact_logical_error_rate,
    run_selfcorrect,
    uncorrected_flip_rate,
)
from decoderbench.storage import Storage
from decoderbench.storage.errors import SavingFailedError
from decoderbench.trainer import PredictMode, TrainConfig, evaluate, predict_batch, summarize, train

logger = logging.getLogger(__name__)

EXIT_DOMAIN = 1
EXIT_USAGE = 2
EXIT_FINGERPRINT = 3
EXIT_FILE = 4

PAPER_SCALE = {"qubits": 3, "blocks": 10, "epochs": 10_000}


class UsageError(Exception):
    pass


class RunManifest(BaseModel):
    command: str
    options: dict[str, Any]
    settings: dict[str, Any]
    seeds: dict[str, int]
    inputs: dict[str, str]
    version: str
    wall_time: float


class Run:
    """
    State shared by one command: resolved settings, the output storage and the inputs read so far.
    """

    def __init__(self, args: argparse.Namespace, config: Settings):
        self.args = args
        self.settings = config
        self.storage = Storage(backend=config.storage_backend, storage_path=args.out)
        self.inputs: dict[str, str] = {}

    def read(self, path: str) -> str:
        data = Path(path).read_bytes()
        hash_obj = xxhash.xxh3_128()
        hash_obj.update(data)
        self.inputs[path] = hash_obj.hexdigest()
        return data.decode("utf-8")

    def model(self, path: str) -> DetectorErrorModel:
        return parse_dem(self.read(path))

    def shots(
        self, path: str, model: DetectorErrorModel | None = None, widths: tuple[int, int] | None = None
    ) -> ShotSet:
        fingerprint = None
        if model is not None:
            widths = (model.num_detectors, model.num_observables)
            fingerprint = dem_fingerprint(model)
        shots = read_shots(self.read(path), *(widths or (None, None)), fingerprint=fingerprint)
        if model is not None:
            check_fingerprint(shots, model)
        return shots

    def write(self, name: str, content: str | BaseModel | dict) -> None:
        if isinstance(content, BaseModel):
            content = content.model_dump_json(indent=2) + "\n"
        elif isinstance(content, dict):
            content = json.dumps(content, indent=2) + "\n"
        self.storage.upload(name, content)
        logger.info(f"wrote {self.storage.path(name)}")


def cmd_gen_dem(run: Run) -> None:
    a = run.args
    spec = CodeSpec(family=a.family, distance=a.distance, rounds=a.rounds, noise=a.noise, p=a.p)
    model = build_dem(spec)
    run.write(a.name, serialize_dem(model))
    print(f"m={model.num_detectors} L={model.num_observables} mechanisms={len(model.mechanisms)}")
    print(f"fingerprint {dem_fingerprint(model)}")


def cmd_sample(run: Run) -> None:
    a = run.args
    model = run.model(a.dem)
    shots = sample_shots(model, a.shots, a.seed, workers=run.settings.workers)
    if a.split is None:
        run.write("shots.01", write_shots(shots))
    else:
        train_set, test_set = split_train_test(shots, a.split)
        run.write("train.01", write_shots(train_set))
        run.write("test.01", write_shots(test_set))
    print(f"{shots.size} shots, nonzero labels {float(np.mean(shots.labels.any(axis=1))):.6f}")


def _ansatz_from_args(a: argparse.Namespace, model: DetectorErrorModel) -> AnsatzConfig:
    readout = tuple(range(model.num_observables)) if a.readout is None else tuple(a.readout)
    return AnsatzConfig(
        qubits=a.qubits,
        blocks=a.blocks,
        syndrome_length=model.num_detectors,
        readout=readout,
        entangler=a.entangler,
    )


def cmd_train(run: Run) -> None:
    a = run.args
    if a.paper_scale:
        a.qubits, a.blocks, a.epochs = PAPER_SCALE["qubits"], PAPER_SCALE["blocks"], PAPER_SCALE["epochs"]
    model = run.model(a.dem)
    data = run.shots(a.train, model)
    test = run.shots(a.test, model)
    ansatz = _ansatz_from_args(a, model)
    cfg = TrainConfig.from_settings(
        a.seed,
        run.settings,
        epochs=a.epochs,
        batch_size=a.batch_size,
        learning_rate=a.learning_rate,
        init_scale=a.init_scale,
        eval_every=a.eval_every,
    )
    best, trace = train(model, ansatz, data, test, cfg, workers=run.settings.workers)
    summary = summarize(ansatz, cfg, trace, best, data, test, physical_error_rate=a.p)
    run.write("trace.csv", trace.to_csv(timing=run.settings.trace_timing))
    run.write("best.ckpt", write_checkpoint(ansatz, best))
    run.write("summary.json", summary)
    print(
        f"best epoch {summary.best_epoch}: test LER {summary.best_test.rate:.6f} +- {summary.best_test.stderr:.6f} "
        f"(always-0 decoder {summary.trivial_test_ler:.6f})"
    )


def _load_checkpoint(run: Run, path: str) -> tuple[AnsatzConfig, ParameterSet]:
    return read_checkpoint(run.read(path))


def _shots_for_checkpoint(run: Run, ansatz: AnsatzConfig) -> ShotSet:
    a = run.args
    if a.dem is not None:
        return run.shots(a.shots, run.model(a.dem))
    return run.shots(a.shots, widths=(ansatz.syndrome_length, ansatz.num_labels))


def cmd_eval(run: Run) -> None:
    ansatz, params = _load_checkpoint(run, run.args.checkpoint)
    shots = _shots_for_checkpoint(run, ansatz)
    estimate = evaluate(params, ansatz, shots)
    run.write("eval.json", estimate)
    print(
        f"LER {estimate.rate:.6f} +- {estimate.stderr:.6f} "
        f"(95% CI [{estimate.low:.6f}, {estimate.high:.6f}], {estimate.shots} shots)"
    )


def cmd_decode(run: Run) -> None:
    a = run.args
    mode = PredictMode(a.mode)
    if mode != PredictMode.ARGMAX and a.seed is None:
        raise UsageError(f"--mode {mode.value} needs --seed")
    ansatz, params = _load_checkpoint(run, a.checkpoint)
    shots = _shots_for_checkpoint(run, ansatz)
    values = predict_batch(params, ansatz, shots.syndromes, mode=mode, seed=a.seed, votes=a.votes)
    bits = int_to_bits(values, ansatz.num_labels)
    run.write("predictions.01", write_shots(shots.with_labels(bits)))
    estimate = binomial_interval(int(np.count_nonzero(values != shots.label_values())), shots.size)
    print(f"{mode.value} LER {estimate.rate:.6f} +- {estimate.stderr:.6f}")


def _baseline(run: Run, name: str, decoder_factory: Callable[[DetectorErrorModel], Any]) -> None:
    a = run.args
    model = run.model(a.dem)
    shots = run.shots(a.shots, model)
    report = decode_shots(decoder_factory(model), shots, workers=run.settings.workers)
    bits = int_to_bits(report.predictions, model.num_observables)
    run.write(f"{name}-predictions.01", write_shots(shots.with_labels(bits)))
    run.write(f"{name}.json", {"failures": report.failures, "estimate": report.estimate.model_dump()})
    print(f"{name} LER {report.estimate.rate:.6f} +- {report.estimate.stderr:.6f} ({report.failures} failures)")


def cmd_mwpm(run: Run) -> None:
    _baseline(run, "mwpm", lambda model: MwpmDecoder(extract_matching_graph(model), run.settings.mwpm_max_defects))


def cmd_mld(run: Run) -> None:
    _baseline(run, "mld", lambda model: MldDecoder(model, run.settings.mld_max_mechanisms))


def cmd_selfcorrect(run: Run) -> None:
    a = run.args
    ansatz, params = _load_checkpoint(run, a.checkpoint)
    if ansatz.syndrome_length != 2 or ansatz.num_labels != 1:
        raise ConfigurationMismatchError("self-correction needs a checkpoint with m = 2 and one readout qubit")
    cfg = SelfCorrectConfig(
        decode_qubits=ansatz.qubits,
        blocks=ansatz.blocks,
        params=params,
        p=a.p,
        control_qubit=ansatz.readout[0],
        shots=a.shots,
        seed=a.seed,
        entangler=ansatz.entangler,
    )
    report = equivalence_check(cfg, ansatz, params)
    result = run_selfcorrect(cfg, workers=run.settings.workers)
    run.write("patterns.csv", report.to_csv())
    run.write(
        "selfcorrect.json",
        {
            "p": cfg.p,
            "estimate": result.estimate.model_dump(),
            "exact_logical_error_rate": exact_logical_error_rate(cfg),
            "uncorrected_flip_rate": uncorrected_flip_rate(cfg.p),
            "equivalence_max_abs_diff": report.max_abs_diff,
            "equivalence_passed": report.passed,
        },
    )
    print(
        f"self-corrected LER {result.estimate.rate:.6f} +- {result.estimate.stderr:.6f}, "
        f"uncorrected {uncorrected_flip_rate(cfg.p):.6f}, equivalence max diff {report.max_abs_diff:.2e}"
    )


COMMANDS: dict[str, Callable[[Run], None]] = {
    "gen-dem": cmd_gen_dem,
    "sample": cmd_sample,
    "train": cmd_train,
    "eval": cmd_eval,
    "decode": cmd_decode,
    "mwpm": cmd_mwpm,
    "mld": cmd_mld,
    "selfcorrect": cmd_selfcorrect,
}


def _csv_ints(value: str) -> list[int]:
    try:
        return [int(v) for v in value.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got '{value}'")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="file of 'key = value' settings, overridden by flags")
    common.add_argument("--workers", type=int, help="worker threads; results do not depend on it")
    common.add_argument("--out", default=".", help="directory for artifacts and manifest.json")
    common.add_argument("--log-level", help="logging level")

    def seeded(p: argparse.ArgumentParser, required: bool = True) -> None:
        p.add_argument("--seed", type=int, required=required)

    parser = argparse.ArgumentParser(prog="decoderbench", description="Decoding-circuit workbench")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-dem", parents=[common], help="write a detector error model")
    p.add_argument("--family", type=CodeFamily, choices=list(CodeFamily), required=True)
    p.add_argument("--distance", type=int, required=True)
    p.add_argument("--rounds", type=int, default=1)
    p.add_argument("--noise", type=NoiseKind, choices=list(NoiseKind), default=NoiseKind.PHENOMENOLOGICAL)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--name", default="model.dem", help="output file name")

    p = sub.add_parser("sample", parents=[common], help="draw shots from a model")
    p.add_argument("--dem", required=True)
    p.add_argument("--shots", type=int, required=True)
    p.add_argument("--split", type=float, help="write train.01/test.01 with this train fraction")
    seeded(p)

    p = sub.add_parser("train", parents=[common], help="train a decoding circuit")
    p.add_argument("--dem", required=True)
    p.add_argument("--train", required=True)
    p.add_argument("--test", required=True)
    p.add_argument("--qubits", type=int, default=3)
    p.add_argument("--blocks", type=int, default=2)
    p.add_argument("--epochs", type=int)
    p.add_argument("--batch-size", type=int)
    p.add_argument("--learning-rate", type=float)
    p.add_argument("--init-scale", type=float)
    p.add_argument("--eval-every", type=int)
    p.add_argument("--entangler", type=Entangler, choices=list(Entangler), default=Entangler.CZ_CHAIN)
    p.add_argument("--readout", type=_csv_ints, help="readout qubits, default 0..L-1")
    p.add_argument("--p", type=float, help="physical error rate, for the break-even comparison")
    p.add_argument("--paper-scale", action="store_true", help="3 qubits, 10 blocks, 10^4 epochs")
    seeded(p)

    for name, text in (("eval", "logical error rate of a checkpoint"), ("decode", "write predicted labels")):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("--checkpoint", required=True)
        p.add_argument("--shots", required=True)
        p.add_argument("--dem", help="check the shots against this model")
        if name == "decode":
            p.add_argument("--mode", choices=[m.value for m in PredictMode], default=PredictMode.ARGMAX.value)
            p.add_argument("--votes", type=int, default=9)
            seeded(p, required=False)

    for name in ("mwpm", "mld"):
        p = sub.add_parser(name, parents=[common], help=f"{name} baseline on a shot file")
        p.add_argument("--dem", required=True)
        p.add_argument("--shots", required=True)

    p = sub.add_parser("selfcorrect", parents=[common], help="coherent self-correction of the d=3 repetition code")
    p.add_argument("--checkpoint", required=True, help="decoder trained with m = 2 and one readout qubit")
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--shots", type=int, default=20_000)
    seeded(p)
    return parser


def _setup(args: argparse.Namespace) -> Settings:
    try:
        config = load_settings(args.config, workers=args.workers, log_level=args.log_level)
    except (ValueError, ValidationError) as e:
        raise UsageError(str(e))
    configure(config)
    logging.basicConfig(level=config.log_level, format="%(asctime)s %(levelname)s %(name)s: %(message)s")
    if config.sentry_dsn:
        sentry_sdk.init(dsn=config.sentry_dsn)
    return config


def _options(args: argparse.Namespace) -> dict[str, Any]:
    return {k: (v.value if hasattr(v, "value") else v) for k, v in sorted(vars(args).items())}


def execute(args: argparse.Namespace) -> None:
    config = _setup(args)
    Path(args.out).mkdir(parents=True, exist_ok=True)
    run = Run(args, config)
    started = time.perf_counter()
    COMMANDS[args.command](run)
    manifest = RunManifest(
        command=args.command,
        options=_options(args),
        settings=config.model_dump(exclude={"sentry_dsn"}),
        seeds={"seed": args.seed} if getattr(args, "seed", None) is not None else {},
        inputs=run.inputs,
        version=__version__,
        wall_time=time.perf_counter() - started,
    )
    run.write("manifest.json", manifest)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        execute(args)
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except FingerprintMismatchError as e:
        print(f"fingerprint mismatch: {e}", file=sys.stderr)
        return EXIT_FINGERPRINT
    except (OSError, DemSyntaxError, ShotFormatError, CheckpointFormatError, SavingFailedError) as e:
        print(f"file error: {e}", file=sys.stderr)
        return EXIT_FILE
    except (DecoderBenchError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DOMAIN
    except Exception as e:
        sentry_sdk.capture_exception(e)
        raise e
    return 0


def main_entry() -> None:
    sys.exit(main())
