# SPDX-FileCopyrightText: 2026 decoderbench contributors
#
# SPDX-License-Identifier: MIT

"""
Monte-Carlo (syndrome, label) pairs drawn from a detector error model.

Shots are generated in fixed chunks of ``sampler_chunk_size``; chunk ``c`` draws from the Philox stream
``(seed, c)``, so the result only depends on ``(model, n, seed, chunk size)`` and never on the worker count.
"""

import logging
import math
from typing import Iterable, Iterator, TextIO

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator

from decoderbench.config import settings
from decoderbench.dem import DetectorErrorModel
from decoderbench.dem.parser import dem_fingerprint
from decoderbench.errors import EmptyShotSetError, FingerprintMismatchError, ShapeMismatchError, ShotFormatError
from decoderbench.helpers import bits_to_int, make_rng, ordered_map

logger = logging.getLogger(__name__)


class Shot(BaseModel):
    model_config = ConfigDict(frozen=True)

    syndrome: tuple[int, ...]
    label: tuple[int, ...]


class ShotSet(BaseModel):
    """
    Shots stored as packed bit rows (``np.packbits`` along the last axis, big bit order).
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    fingerprint: str
    seed: int
    num_detectors: int
    num_observables: int
    size: int
    packed_syndromes: np.ndarray
    packed_labels: np.ndarray

    @field_validator("packed_syndromes", "packed_labels")
    @classmethod
    def read_only(cls, v: np.ndarray) -> np.ndarray:
        v = np.array(v, dtype=np.uint8)
        v.setflags(write=False)
        return v

    @classmethod
    def from_bits(cls, syndromes: np.ndarray, labels: np.ndarray, fingerprint: str, seed: int) -> "ShotSet":
        syndromes = np.asarray(syndromes, dtype=np.uint8)
        labels = np.asarray(labels, dtype=np.uint8)
        if syndromes.ndim != 2 or labels.ndim != 2 or syndromes.shape[0] != labels.shape[0]:
            raise ShapeMismatchError(f"syndromes {syndromes.shape} and labels {labels.shape} do not line up")
        return cls(
            fingerprint=fingerprint,
            seed=seed,
            num_detectors=syndromes.shape[1],
            num_observables=labels.shape[1],
            size=syndromes.shape[0],
            packed_syndromes=np.packbits(syndromes, axis=1),
            packed_labels=np.packbits(labels, axis=1),
        )

    @property
    def syndromes(self) -> np.ndarray:
        return np.unpackbits(self.packed_syndromes, axis=1, count=self.num_detectors)

    @property
    def labels(self) -> np.ndarray:
        return np.unpackbits(self.packed_labels, axis=1, count=self.num_observables)

    def label_values(self) -> np.ndarray:
        return bits_to_int(self.labels)

    def __len__(self) -> int:
        return self.size

    def iter_shots(self) -> Iterator[Shot]:
        for syndrome, label in zip(self.syndromes, self.labels):
            yield Shot(syndrome=tuple(int(b) for b in syndrome), label=tuple(int(b) for b in label))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ShotSet):
            return NotImplemented
        return (
            self.fingerprint == other.fingerprint
            and self.seed == other.seed
            and self.num_detectors == other.num_detectors
            and self.num_observables == other.num_observables
            and np.array_equal(self.packed_syndromes, other.packed_syndromes)
            and np.array_equal(self.packed_labels, other.packed_labels)
        )

    def slice(self, start: int, stop: int) -> "ShotSet":
        return self.model_copy(
            update={
                "size": len(range(self.size)[start:stop]),
                "packed_syndromes": self.packed_syndromes[start:stop],
                "packed_labels": self.packed_labels[start:stop],
            }
        )

    def with_labels(self, labels: np.ndarray) -> "ShotSet":
        """
        Same syndromes, other labels (used to export decoder predictions).
        """
        labels = np.asarray(labels, dtype=np.uint8)
        if labels.shape != (self.size, self.num_observables):
            raise ShapeMismatchError(f"expected labels of shape {(self.size, self.num_observables)}")
        return self.model_copy(update={"packed_labels": np.packbits(labels, axis=1)})


def check_fingerprint(shots: ShotSet, model: DetectorErrorModel) -> None:
    expected = dem_fingerprint(model)
    if shots.fingerprint != expected:
        raise FingerprintMismatchError(f"shots were drawn from {shots.fingerprint}, model is {expected}")
    if shots.num_detectors != model.num_detectors or shots.num_observables != model.num_observables:
        raise ShapeMismatchError("shot widths do not match the model")


def _sample_chunk(
    probabilities: np.ndarray, detectors: np.ndarray, observables: np.ndarray, seed: int, chunk: int, count: int
) -> tuple[np.ndarray, np.ndarray]:
    rng = make_rng(seed, chunk)
    fired = (rng.random((count, probabilities.shape[0])) < probabilities).astype(np.int64)
    return (fired @ detectors) % 2, (fired @ observables) % 2


def sample_shots(
    model: DetectorErrorModel, n: int, seed: int, workers: int = 1, chunk_size: int | None = None
) -> ShotSet:
    """
    Fires every mechanism independently with its probability and XORs its flips into each shot.

    :param model: Source model
    :param n: Number of shots, at least one
    :param seed: Non-negative seed
    :param workers: Threads used for the chunks
    :param chunk_size: Shots per RNG stream, defaults to ``settings().sampler_chunk_size``
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if seed < 0:
        raise ValueError(f"seed must be non-negative, got {seed}")
    chunk_size = chunk_size or settings().sampler_chunk_size
    arrays = model.as_arrays()
    detectors = arrays.detectors.astype(np.int64)
    observables = arrays.observables.astype(np.int64)
    chunks = [(c, min(chunk_size, n - start)) for c, start in enumerate(range(0, n, chunk_size))]
    parts = ordered_map(
        lambda item: _sample_chunk(arrays.probabilities, detectors, observables, seed, *item), chunks, workers
    )
    syndromes = np.concatenate([s for s, _ in parts]).astype(np.uint8)
    labels = np.concatenate([o for _, o in parts]).astype(np.uint8)
    logger.debug(f"sampled {n} shots in {len(chunks)} chunks from {len(model.mechanisms)} mechanisms")
    return ShotSet.from_bits(syndromes, labels, fingerprint=dem_fingerprint(model), seed=seed)


def split_train_test(shots: ShotSet, fraction: float) -> tuple[ShotSet, ShotSet]:
    """
    Prefix/suffix split; the train side gets ``floor(fraction * n)`` shots.
    """
    if not 0.0 < fraction < 1.0:
        raise ValueError(f"fraction must lie in (0, 1), got {fraction}")
    cut = math.floor(fraction * shots.size)
    return shots.slice(0, cut), shots.slice(cut, shots.size)


def trivial_decoder_ler(shots: ShotSet) -> float:
    """
    Error rate of the decoder that always answers the all-zero label.
    """
    if shots.size == 0:
        raise EmptyShotSetError("no shots")
    return float(np.mean(shots.labels.any(axis=1)))


def _bit_string(row: np.ndarray) -> str:
    return "".join("1" if b else "0" for b in row)


def write_shots(shots: ShotSet) -> str:
    lines = [f"#dem-fingerprint {shots.fingerprint} seed {shots.seed}"]
    lines.extend(f"{_bit_string(s)} {_bit_string(o)}" for s, o in zip(shots.syndromes, shots.labels))
    return "\n".join(lines) + "\n"


def read_shots(
    text: str | TextIO | Iterable[str],
    num_detectors: int | None = None,
    num_observables: int | None = None,
    fingerprint: str | None = None,
) -> ShotSet:
    """
    Reads the "01" shot format.

    :param text: File contents, an open file, or an iterable of lines
    :param num_detectors: Expected syndrome width; inferred from the first shot when omitted
    :param num_observables: Expected label width; inferred from the first shot when omitted
    :param fingerprint: Expected model fingerprint, compared with the header before any shot is read
    """
    lines = iter(text.splitlines() if isinstance(text, str) else text)
    header = next(lines, "").strip().split()
    if len(header) != 4 or header[0] != "#dem-fingerprint" or header[2] != "seed":
        raise ShotFormatError("line 1: expected '#dem-fingerprint <hex> seed <int>'")
    try:
        seed = int(header[3])
    except ValueError:
        raise ShotFormatError(f"line 1: bad seed '{header[3]}'")
    if fingerprint is not None and header[1] != fingerprint:
        raise FingerprintMismatchError(f"shots were drawn from {header[1]}, model is {fingerprint}")

    syndromes: list[list[int]] = []
    labels: list[list[int]] = []
    for number, raw in enumerate(lines, start=2):
        line = raw.strip()
        if not line:
            continue
        parts = line.split(" ")
        if len(parts) != 2 or set(parts[0] + parts[1]) - {"0", "1"}:
            raise ShotFormatError(f"line {number}: expected '<syndrome bits> <label bits>'")
        if num_detectors is None:
            num_detectors = len(parts[0])
        if num_observables is None:
            num_observables = len(parts[1])
        if len(parts[0]) != num_detectors or len(parts[1]) != num_observables:
            raise ShotFormatError(
                f"line {number}: expected {num_detectors} syndrome and {num_observables} label bits"
            )
        syndromes.append([int(c) for c in parts[0]])
        labels.append([int(c) for c in parts[1]])

    if num_detectors is None or num_observables is None:
        raise ShotFormatError("empty shot file and no widths given")
    return ShotSet.from_bits(
        np.array(syndromes, dtype=np.uint8).reshape(-1, num_detectors),
        np.array(labels, dtype=np.uint8).reshape(-1, num_observables),
        fingerprint=header[1],
        seed=seed,
    )
