# SPDX-FileCopyrightText: 2026 decoderbench contributors
#
# SPDX-License-Identifier: MIT

"""
Mini-batch Adam on the cross-entropy of the decoding circuit, plus prediction and evaluation.

Random streams, all Philox keyed by the training seed: ``(seed, 0)`` initialises the coefficients and
``(seed, 1, epoch)`` shuffles that epoch. Batch gradients are summed over fixed chunks of shots in shot order, so a
run is bit-identical for any worker count.
"""

import io
import logging
import time
from enum import Enum

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from decoderbench.ansatz import AnsatzConfig, ParameterSet
from decoderbench.config import Settings, settings
from decoderbench.dem import DetectorErrorModel
from decoderbench.errors import EmptyShotSetError, ShapeMismatchError
from decoderbench.helpers import BinomialEstimate, binomial_interval, int_to_bits, make_rng, ordered_map
from decoderbench.sampler import ShotSet, check_fingerprint, trivial_decoder_ler
from decoderbench.simulator import batch_loss_and_gradient, batch_readout_distribution
from decoderbench.trainer.adam import Adam

logger = logging.getLogger(__name__)

# shots per gradient work item; fixes the summation order
REDUCTION_CHUNK = 32


class TrainConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    epochs: int = Field(gt=0)
    batch_size: int = Field(gt=0)
    learning_rate: float = Field(gt=0)
    adam_beta1: float = Field(gt=0, lt=1)
    adam_beta2: float = Field(gt=0, lt=1)
    adam_eps: float = Field(gt=0)
    init_scale: float = Field(gt=0)
    eval_every: int = Field(gt=0)
    seed: int = Field(ge=0)

    @classmethod
    def from_settings(cls, seed: int, config: Settings | None = None, **overrides) -> "TrainConfig":
        config = config or settings()
        values = {name: getattr(config, name) for name in cls.model_fields if name != "seed"}
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(seed=seed, **values)


class TraceRecord(BaseModel):
    epoch: int
    train_loss: float
    train_ler: float
    test_ler: float
    seconds: float


class TrainingTrace(BaseModel):
    records: list[TraceRecord] = []
    best_epoch: int | None = None
    best_test_ler: float | None = None

    @model_validator(mode="after")
    def epochs_increase(self) -> "TrainingTrace":
        epochs = [r.epoch for r in self.records]
        if any(a >= b for a, b in zip(epochs, epochs[1:])):
            raise ValueError("trace epochs must be strictly increasing")
        return self

    def to_csv(self, timing: bool = False) -> str:
        """
        ``epoch,train_loss,train_ler,test_ler,seconds``; the seconds column stays empty unless ``timing`` is set.
        """
        out = io.StringIO()
        out.write("epoch,train_loss,train_ler,test_ler,seconds\n")
        for r in self.records:
            seconds = format(r.seconds, ".3f") if timing else ""
            out.write(f"{r.epoch},{r.train_loss!r},{r.train_ler!r},{r.test_ler!r},{seconds}\n")
        return out.getvalue()


class PredictMode(str, Enum):
    ARGMAX = "argmax"
    SAMPLE = "sample"
    VOTE = "vote"


def init_params(config: AnsatzConfig, scale: float, seed: int) -> ParameterSet:
    """
    Coefficients drawn i.i.d. uniform on ``[-scale, scale]``.
    """
    if scale <= 0:
        raise ValueError(f"scale must be positive, got {scale}")
    rng = make_rng(seed, 0)
    return ParameterSet.from_flat(config, rng.uniform(-scale, scale, size=config.num_parameters))


def _check_shapes(model: DetectorErrorModel, ansatz: AnsatzConfig) -> None:
    if ansatz.syndrome_length != model.num_detectors:
        raise ShapeMismatchError(
            f"circuit reads {ansatz.syndrome_length} syndrome bits, model has {model.num_detectors}"
        )
    if ansatz.num_labels != model.num_observables:
        raise ShapeMismatchError(f"circuit reads {ansatz.num_labels} label bits, model has {model.num_observables}")


def predict_values(params: ParameterSet, ansatz: AnsatzConfig, syndromes: np.ndarray) -> np.ndarray:
    """
    Argmax label value for each syndrome row; every distinct syndrome is simulated once.
    """
    syndromes = np.asarray(syndromes, dtype=np.uint8)
    if syndromes.shape[0] == 0:
        return np.zeros(0, dtype=np.int64)
    unique, inverse = np.unique(syndromes, axis=0, return_inverse=True)
    probs = batch_readout_distribution(ansatz, params, unique)
    return np.argmax(probs, axis=1)[inverse.reshape(-1)]


def predict(
    params: ParameterSet,
    ansatz: AnsatzConfig,
    syndrome: np.ndarray,
    mode: PredictMode = PredictMode.ARGMAX,
    seed: int | None = None,
    votes: int = 9,
) -> np.ndarray:
    """
    Decodes one syndrome.

    :param mode: ``argmax`` picks the most likely label (ties to the lowest value), ``sample`` draws one label from
        the circuit's distribution, ``vote`` draws ``votes`` labels and keeps the most frequent
    :param seed: Required by ``sample`` and ``vote``
    :return: label bits
    """
    syndrome = np.asarray(syndrome, dtype=np.uint8)
    if syndrome.shape != (ansatz.syndrome_length,):
        raise ShapeMismatchError(f"syndrome has shape {syndrome.shape}, expected ({ansatz.syndrome_length},)")
    if mode != PredictMode.ARGMAX and seed is None:
        raise ValueError(f"{mode.value} mode needs a seed")
    probs = batch_readout_distribution(ansatz, params, syndrome[None, :])[0]
    rng = make_rng(seed) if seed is not None else None
    return int_to_bits(_choose(probs, mode, rng, votes), ansatz.num_labels)


def _choose(probs: np.ndarray, mode: PredictMode, rng: np.random.Generator | None, votes: int) -> int:
    if mode == PredictMode.ARGMAX:
        return int(np.argmax(probs))
    draws = rng.choice(probs.shape[0], size=1 if mode == PredictMode.SAMPLE else votes, p=probs / probs.sum())
    return int(np.argmax(np.bincount(draws, minlength=probs.shape[0])))


def predict_batch(
    params: ParameterSet,
    ansatz: AnsatzConfig,
    syndromes: np.ndarray,
    mode: PredictMode = PredictMode.ARGMAX,
    seed: int | None = None,
    votes: int = 9,
) -> np.ndarray:
    """
    Label values for every syndrome row. Random modes draw shot ``k`` from the stream ``(seed, k)``.
    """
    if mode == PredictMode.ARGMAX:
        return predict_values(params, ansatz, syndromes)
    if seed is None:
        raise ValueError(f"{mode.value} mode needs a seed")
    probs = batch_readout_distribution(ansatz, params, np.asarray(syndromes, dtype=np.uint8))
    return np.array([_choose(row, mode, make_rng(seed, k), votes) for k, row in enumerate(probs)], dtype=np.int64)


def evaluate(params: ParameterSet, ansatz: AnsatzConfig, shots: ShotSet) -> BinomialEstimate:
    if shots.size == 0:
        raise EmptyShotSetError("no shots to evaluate")
    errors = int(np.count_nonzero(predict_values(params, ansatz, shots.syndromes) != shots.label_values()))
    return binomial_interval(errors, shots.size)


def logical_error_rate(params: ParameterSet, ansatz: AnsatzConfig, shots: ShotSet) -> float:
    return evaluate(params, ansatz, shots).rate


def _batch_gradient(
    ansatz: AnsatzConfig,
    params: ParameterSet,
    syndromes: np.ndarray,
    labels: np.ndarray,
    workers: int,
) -> tuple[float, np.ndarray]:
    chunks = [slice(start, start + REDUCTION_CHUNK) for start in range(0, syndromes.shape[0], REDUCTION_CHUNK)]
    parts = ordered_map(
        lambda s: batch_loss_and_gradient(ansatz, params, syndromes[s], labels[s], reduction="sum"), chunks, workers
    )
    loss_sum = 0.0
    grad = np.zeros(ansatz.num_parameters)
    for losses, chunk_grad in parts:
        loss_sum += float(np.sum(losses))
        grad += chunk_grad.flat()
    return loss_sum, grad / syndromes.shape[0]


def train(
    model: DetectorErrorModel,
    ansatz: AnsatzConfig,
    data: ShotSet,
    test: ShotSet,
    cfg: TrainConfig,
    workers: int = 1,
) -> tuple[ParameterSet, TrainingTrace]:
    """
    Runs ``cfg.epochs`` full passes over ``data`` in shuffled mini-batches.

    Every ``eval_every`` epochs (and after the last one) the train and test logical error rates are recorded; the
    returned parameters are those with the lowest test LER, the earliest on ties.
    """
    check_fingerprint(data, model)
    check_fingerprint(test, model)
    _check_shapes(model, ansatz)
    if data.size == 0:
        raise EmptyShotSetError("no training shots")
    if test.size == 0:
        raise EmptyShotSetError("no test shots")

    syndromes = data.syndromes
    labels = data.label_values()
    params = init_params(ansatz, cfg.init_scale, cfg.seed)
    adam = Adam(lr=cfg.learning_rate, beta1=cfg.adam_beta1, beta2=cfg.adam_beta2, eps=cfg.adam_eps)
    trace = TrainingTrace()
    best = params
    started = time.perf_counter()
    logger.info(
        f"training {ansatz.num_parameters} coefficients on {data.size} shots "
        f"({cfg.epochs} epochs, batch {cfg.batch_size}, lr {cfg.learning_rate})"
    )

    for epoch in range(1, cfg.epochs + 1):
        order = make_rng(cfg.seed, 1, epoch).permutation(data.size)
        epoch_loss = 0.0
        for start in range(0, data.size, cfg.batch_size):
            idx = order[start : start + cfg.batch_size]
            loss_sum, grad = _batch_gradient(ansatz, params, syndromes[idx], labels[idx], workers)
            epoch_loss += loss_sum
            params = ParameterSet.from_flat(ansatz, adam.step(params.flat(), grad))

        if epoch % cfg.eval_every != 0 and epoch != cfg.epochs:
            continue
        record = TraceRecord(
            epoch=epoch,
            train_loss=epoch_loss / data.size,
            train_ler=logical_error_rate(params, ansatz, data),
            test_ler=logical_error_rate(params, ansatz, test),
            seconds=time.perf_counter() - started,
        )
        trace.records.append(record)
        if trace.best_test_ler is None or record.test_ler < trace.best_test_ler:
            trace.best_epoch, trace.best_test_ler, best = epoch, record.test_ler, params
        logger.info(
            f"epoch {epoch}: loss {record.train_loss:.6f} train LER {record.train_ler:.5f} "
            f"test LER {record.test_ler:.5f}"
        )
    return best, trace


class TrainingSummary(BaseModel):
    ansatz: AnsatzConfig
    train_config: TrainConfig
    train_shots: int
    test_shots: int
    final: TraceRecord
    best_epoch: int
    best_test: BinomialEstimate
    trivial_test_ler: float
    physical_error_rate: float | None = None
    # None when the physical error rate is unknown
    below_break_even: bool | None = None


def summarize(
    ansatz: AnsatzConfig,
    cfg: TrainConfig,
    trace: TrainingTrace,
    best: ParameterSet,
    data: ShotSet,
    test: ShotSet,
    physical_error_rate: float | None = None,
) -> TrainingSummary:
    best_test = evaluate(best, ansatz, test)
    return TrainingSummary(
        ansatz=ansatz,
        train_config=cfg,
        train_shots=data.size,
        test_shots=test.size,
        final=trace.records[-1],
        best_epoch=trace.best_epoch,
        best_test=best_test,
        trivial_test_ler=trivial_decoder_ler(test),
        physical_error_rate=physical_error_rate,
        below_break_even=None if physical_error_rate is None else best_test.rate < physical_error_rate,
    )
