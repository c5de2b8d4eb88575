# SPDX-FileCopyrightText: 2026 decoderbench contributors
#
# SPDX-License-Identifier: MIT

"""
Coherent self-correction of the distance-3 repetition code.

Register layout: data qubits 0..2, ancillas 3..4, decoding qubits from 5 on. Ancilla ``i`` holds syndrome bit ``i``
after extraction and controls every rotation that the classical circuit gates on that bit; the chosen decoding
qubit then controls X on all three data qubits. Nothing is measured until data qubit 0 is read in the Z basis.

Injected X errors form a classical mixture, so each of the 8 patterns is simulated once as a pure state and the
trajectories only sample the pattern and the final readout.
"""

import logging
from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from decoderbench.ansatz import AnsatzConfig, Entangler, GateKind, ParameterSet, entangler_pairs
from decoderbench.config import settings
from decoderbench.dem.builders import repetition_checks
from decoderbench.errors import ConfigurationMismatchError
from decoderbench.helpers import BinomialEstimate, binomial_interval, bits_to_int, int_to_bits, make_rng, ordered_map
from decoderbench.simulator import (
    StateVector,
    apply_controlled_flip,
    apply_controlled_rotation,
    apply_cz,
    batch_readout_distribution,
    check_capacity,
    zero_state,
)

logger = logging.getLogger(__name__)

DATA_QUBITS = (0, 1, 2)
ANCILLA_QUBITS = (3, 4)
FIRST_DECODING_QUBIT = 5
# (data, ancilla) pairs of the syndrome extraction, in order
EXTRACTION = ((0, 3), (1, 3), (1, 4), (2, 4))
EQUIVALENCE_TOLERANCE = 1e-9


class SelfCorrectConfig(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    distance: Literal[3] = 3
    decode_qubits: int = Field(default=2, ge=1)
    blocks: int = Field(ge=1)
    params: ParameterSet
    p: float = Field(ge=0.0, lt=0.5)
    control_qubit: int = 1
    shots: int = Field(default=20_000, ge=1)
    seed: int = Field(default=0, ge=0)
    entangler: Entangler = Entangler.CZ_CHAIN

    @model_validator(mode="after")
    def consistent(self) -> "SelfCorrectConfig":
        if not 0 <= self.control_qubit < self.decode_qubits:
            raise ValueError(f"control qubit {self.control_qubit} is not one of {self.decode_qubits} decoding qubits")
        expected = (self.decode_qubits, self.blocks, len(ANCILLA_QUBITS))
        if self.params.shape != expected:
            raise ValueError(f"params have shape {self.params.shape}, expected {expected}")
        return self

    @property
    def num_qubits(self) -> int:
        return FIRST_DECODING_QUBIT + self.decode_qubits

    def classical_ansatz(self) -> AnsatzConfig:
        """
        The measure-then-decode circuit these coefficients come from.
        """
        return AnsatzConfig(
            qubits=self.decode_qubits,
            blocks=self.blocks,
            syndrome_length=len(ANCILLA_QUBITS),
            readout=(self.control_qubit,),
            entangler=self.entangler,
        )


class TrajectoryResult(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    flips: np.ndarray
    estimate: BinomialEstimate


class PatternProbability(BaseModel):
    pattern: tuple[int, int, int]
    syndrome: tuple[int, int]
    coherent: float
    classical: float
    abs_diff: float


class EquivalenceReport(BaseModel):
    rows: list[PatternProbability]
    max_abs_diff: float
    passed: bool

    def to_csv(self) -> str:
        lines = ["pattern,coherent_prob,classical_prob,abs_diff"]
        for row in self.rows:
            pattern = "".join(str(b) for b in row.pattern)
            lines.append(f"{pattern},{row.coherent!r},{row.classical!r},{row.abs_diff!r}")
        return "\n".join(lines) + "\n"


def patterns() -> np.ndarray:
    """
    All X-injection patterns; row ``k`` has bit ``j`` of ``k`` on data qubit ``j``.
    """
    return int_to_bits(np.arange(1 << len(DATA_QUBITS)), len(DATA_QUBITS))


def syndrome_of(pattern: np.ndarray) -> np.ndarray:
    pattern = np.asarray(pattern)
    return np.array([np.bitwise_xor.reduce(pattern[list(check)]) for check in repetition_checks(3)], dtype=np.uint8)


def coherent_state(cfg: SelfCorrectConfig, pattern: np.ndarray) -> StateVector:
    n = cfg.num_qubits
    check_capacity(n)
    state = np.zeros_like(zero_state(n))
    state[0, int(bits_to_int(pattern))] = 1.0

    for data, ancilla in EXTRACTION:
        state = apply_controlled_flip(state, data, (ancilla,), n)
    for b in range(cfg.blocks):
        for kind, coefficients in ((GateKind.RX, cfg.params.theta), (GateKind.RY, cfg.params.phi)):
            for q in range(cfg.decode_qubits):
                for i, ancilla in enumerate(ANCILLA_QUBITS):
                    angle = float(coefficients[q, b, i])
                    state = apply_controlled_rotation(state, kind, ancilla, FIRST_DECODING_QUBIT + q, angle, n)
        for a, c in entangler_pairs(cfg.classical_ansatz()):
            a, c = FIRST_DECODING_QUBIT + a, FIRST_DECODING_QUBIT + c
            if cfg.entangler == Entangler.CZ_CHAIN:
                state = apply_cz(state, a, c, n)
            else:
                state = apply_controlled_flip(state, a, (c,), n)
    state = apply_controlled_flip(state, FIRST_DECODING_QUBIT + cfg.control_qubit, DATA_QUBITS, n)
    return StateVector(num_qubits=n, amplitudes=state[0])


def coherent_flip_probability(cfg: SelfCorrectConfig, pattern: np.ndarray) -> float:
    state = coherent_state(cfg, pattern)
    data0 = (np.arange(1 << cfg.num_qubits) >> DATA_QUBITS[0]) & 1
    return float(np.sum(state.probabilities()[data0 == 1]))


def pattern_flip_probabilities(cfg: SelfCorrectConfig) -> np.ndarray:
    """
    Exact logical-flip probability of the coherent circuit for each injection pattern (indexed by pattern value).
    """
    return np.array([coherent_flip_probability(cfg, pattern) for pattern in patterns()])


def classical_flip_probabilities(ansatz: AnsatzConfig, params: ParameterSet) -> np.ndarray:
    """
    Flip probability when the syndrome is measured and the correction is drawn from ``q(1 | syndrome)``.
    """
    rows = patterns()
    syndromes = np.array([syndrome_of(row) for row in rows])
    q1 = batch_readout_distribution(ansatz, params, syndromes)[:, 1]
    flipped = rows[:, DATA_QUBITS[0]] == 1
    return np.where(flipped, 1.0 - q1, q1)


def equivalence_check(cfg: SelfCorrectConfig, ansatz: AnsatzConfig, params: ParameterSet) -> EquivalenceReport:
    """
    Compares, pattern by pattern, the coherent circuit with measuring the syndrome and sampling the classical
    decoder's correction.
    """
    expected = cfg.classical_ansatz()
    if ansatz != expected:
        raise ConfigurationMismatchError(f"classical circuit {ansatz} does not mirror {expected}")
    if params != cfg.params:
        raise ConfigurationMismatchError("classical and coherent circuits use different coefficients")

    coherent = pattern_flip_probabilities(cfg)
    classical = classical_flip_probabilities(ansatz, params)
    rows = [
        PatternProbability(
            pattern=tuple(int(b) for b in pattern),
            syndrome=tuple(int(b) for b in syndrome_of(pattern)),
            coherent=float(c),
            classical=float(k),
            abs_diff=float(abs(c - k)),
        )
        for pattern, c, k in zip(patterns(), coherent, classical)
    ]
    max_diff = max(row.abs_diff for row in rows)
    return EquivalenceReport(rows=rows, max_abs_diff=max_diff, passed=max_diff <= EQUIVALENCE_TOLERANCE)


def pattern_weights(p: float) -> np.ndarray:
    weight = patterns().sum(axis=1)
    return p**weight * (1.0 - p) ** (len(DATA_QUBITS) - weight)


def exact_logical_error_rate(cfg: SelfCorrectConfig) -> float:
    return float(np.dot(pattern_weights(cfg.p), pattern_flip_probabilities(cfg)))


def uncorrected_flip_rate(p: float) -> float:
    """
    Observable flip rate without correction: only an X on data qubit 0 flips it.
    """
    return p


def _trajectories(cfg: SelfCorrectConfig, flip: np.ndarray, chunk: int, count: int) -> np.ndarray:
    rng = make_rng(cfg.seed, chunk)
    injected = (rng.random((count, len(DATA_QUBITS))) < cfg.p).astype(np.uint8)
    return rng.random(count) < flip[bits_to_int(injected)]


def run_selfcorrect(cfg: SelfCorrectConfig, workers: int = 1) -> TrajectoryResult:
    flip = pattern_flip_probabilities(cfg)
    size = settings().sampler_chunk_size
    chunks = [(c, min(size, cfg.shots - start)) for c, start in enumerate(range(0, cfg.shots, size))]
    flips = np.concatenate(ordered_map(lambda item: _trajectories(cfg, flip, *item), chunks, workers))
    estimate = binomial_interval(int(np.count_nonzero(flips)), cfg.shots)
    logger.info(
        f"self-correction at p={cfg.p}: LER {estimate.rate:.5f} +- {estimate.stderr:.5f} "
        f"(uncorrected {uncorrected_flip_rate(cfg.p):.5f})"
    )
    return TrajectoryResult(flips=flips, estimate=estimate)
