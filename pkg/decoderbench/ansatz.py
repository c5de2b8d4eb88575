# SPDX-FileCopyrightText: 2026 decoderbench contributors
#
# SPDX-License-Identifier: MIT

"""
The syndrome-gated decoding circuit.

Each block applies RX on every decoding qubit, then RY on every decoding qubit, then a chain of entanglers on
neighbouring qubits. The angle of a rotation is the dot product of its ``m`` learned coefficients with the syndrome,
which is the product of one commuting rotation per syndrome bit.
"""

from enum import Enum
from typing import Iterable, TextIO

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from decoderbench.errors import CheckpointFormatError, ShapeMismatchError


class Entangler(str, Enum):
    CZ_CHAIN = "cz-chain"
    CNOT_CHAIN = "cnot-chain"


class AnsatzConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    qubits: int = Field(ge=1)
    blocks: int = Field(ge=1)
    syndrome_length: int = Field(ge=1)
    readout: tuple[int, ...] = (0,)
    entangler: Entangler = Entangler.CZ_CHAIN

    @model_validator(mode="after")
    def readout_fits(self) -> "AnsatzConfig":
        if not 1 <= len(self.readout) <= self.qubits:
            raise ValueError(f"readout needs between 1 and {self.qubits} qubits, got {len(self.readout)}")
        if len(set(self.readout)) != len(self.readout):
            raise ValueError("readout qubits must be distinct")
        if any(not 0 <= q < self.qubits for q in self.readout):
            raise ValueError(f"readout qubits must lie in [0, {self.qubits})")
        return self

    @classmethod
    def with_default_readout(
        cls, qubits: int, blocks: int, syndrome_length: int, labels: int, entangler: Entangler = Entangler.CZ_CHAIN
    ) -> "AnsatzConfig":
        return cls(
            qubits=qubits,
            blocks=blocks,
            syndrome_length=syndrome_length,
            readout=tuple(range(labels)),
            entangler=entangler,
        )

    @property
    def num_labels(self) -> int:
        return len(self.readout)

    @property
    def shape(self) -> tuple[int, int, int]:
        return self.qubits, self.blocks, self.syndrome_length

    @property
    def num_parameters(self) -> int:
        return 2 * self.qubits * self.blocks * self.syndrome_length


class ParameterSet(BaseModel):
    """
    Coefficients ``theta[q][b][i]`` (X axis) and ``phi[q][b][i]`` (Y axis), in radians.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    theta: np.ndarray
    phi: np.ndarray

    @field_validator("theta", "phi")
    @classmethod
    def finite_tensor(cls, v: np.ndarray) -> np.ndarray:
        v = np.array(v, dtype=np.float64)
        if v.ndim != 3:
            raise ValueError(f"expected a [Q][B][m] tensor, got shape {v.shape}")
        if not np.all(np.isfinite(v)):
            raise ValueError("coefficients must be finite")
        v.setflags(write=False)
        return v

    @model_validator(mode="after")
    def same_shape(self) -> "ParameterSet":
        if self.theta.shape != self.phi.shape:
            raise ValueError(f"theta {self.theta.shape} and phi {self.phi.shape} differ in shape")
        return self

    @classmethod
    def zeros(cls, config: AnsatzConfig) -> "ParameterSet":
        return cls(theta=np.zeros(config.shape), phi=np.zeros(config.shape))

    @classmethod
    def from_flat(cls, config: AnsatzConfig, values: np.ndarray) -> "ParameterSet":
        values = np.asarray(values, dtype=np.float64)
        if values.shape != (config.num_parameters,):
            raise ShapeMismatchError(f"expected {config.num_parameters} values, got {values.shape}")
        half = config.num_parameters // 2
        return cls(theta=values[:half].reshape(config.shape), phi=values[half:].reshape(config.shape))

    @property
    def shape(self) -> tuple[int, int, int]:
        return self.theta.shape

    @property
    def size(self) -> int:
        return 2 * self.theta.size

    def flat(self) -> np.ndarray:
        return np.concatenate([self.theta.ravel(), self.phi.ravel()])

    def check(self, config: AnsatzConfig) -> None:
        if self.shape != config.shape:
            raise ShapeMismatchError(f"parameters have shape {self.shape}, circuit expects {config.shape}")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ParameterSet):
            return NotImplemented
        return np.array_equal(self.theta, other.theta) and np.array_equal(self.phi, other.phi)


class GateKind(str, Enum):
    RX = "rx"
    RY = "ry"
    CZ = "cz"
    CNOT = "cnot"


class Gate(BaseModel):
    """
    ``qubits`` is ``(target,)`` for rotations and ``(a, b)`` for entanglers (``a`` is the CNOT control).
    """

    model_config = ConfigDict(frozen=True)

    kind: GateKind
    qubits: tuple[int, ...]
    angle: float = 0.0

    @model_validator(mode="after")
    def well_formed(self) -> "Gate":
        arity = 1 if self.kind in (GateKind.RX, GateKind.RY) else 2
        if len(self.qubits) != arity or len(set(self.qubits)) != arity:
            raise ValueError(f"{self.kind.value} acts on {arity} distinct qubit(s), got {self.qubits}")
        if any(q < 0 for q in self.qubits):
            raise ValueError("qubit indices must be non-negative")
        if not np.isfinite(self.angle):
            raise ValueError("angle must be finite")
        return self


class CircuitPlan(BaseModel):
    model_config = ConfigDict(frozen=True)

    num_qubits: int = Field(ge=1)
    gates: tuple[Gate, ...] = ()

    @model_validator(mode="after")
    def qubits_in_range(self) -> "CircuitPlan":
        for k, gate in enumerate(self.gates):
            if max(gate.qubits) >= self.num_qubits:
                raise ValueError(f"gate {k} touches qubit {max(gate.qubits)} of a {self.num_qubits}-qubit circuit")
        return self

    def count(self, *kinds: GateKind) -> int:
        return sum(1 for gate in self.gates if gate.kind in kinds)


def entangler_pairs(config: AnsatzConfig) -> list[tuple[int, int]]:
    return [(q, q + 1) for q in range(config.qubits - 1)]


def entangler_kind(entangler: Entangler) -> GateKind:
    return GateKind.CZ if entangler == Entangler.CZ_CHAIN else GateKind.CNOT


def _syndrome_vector(syndrome: Iterable[int] | np.ndarray, length: int) -> np.ndarray:
    gamma = np.asarray(syndrome, dtype=np.float64)
    if gamma.shape[-1:] != (length,):
        raise ShapeMismatchError(f"syndrome has length {gamma.shape[-1:]}, expected {length}")
    return gamma


def effective_angles(params: ParameterSet, syndrome: Iterable[int] | np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """
    Per-qubit per-block X and Y angles for one syndrome (or a batch, leading axis).

    :return: ``(alpha, beta_y)``, shape ``[Q][B]`` (``[S][Q][B]`` for a batch)
    """
    gamma = _syndrome_vector(syndrome, params.shape[2])
    alpha = np.einsum("qbi,...i->...qb", params.theta, gamma)
    beta_y = np.einsum("qbi,...i->...qb", params.phi, gamma)
    return alpha, beta_y


def build_plan(config: AnsatzConfig, params: ParameterSet, syndrome: Iterable[int] | np.ndarray) -> CircuitPlan:
    params.check(config)
    alpha, beta_y = effective_angles(params, syndrome)
    if alpha.ndim != 2:
        raise ShapeMismatchError("build_plan takes a single syndrome")
    ent = entangler_kind(config.entangler)
    gates: list[Gate] = []
    for b in range(config.blocks):
        for kind, angles in ((GateKind.RX, alpha), (GateKind.RY, beta_y)):
            for q in range(config.qubits):
                angle = float(angles[q, b])
                if angle != 0.0:
                    gates.append(Gate(kind=kind, qubits=(q,), angle=angle))
        gates.extend(Gate(kind=ent, qubits=pair) for pair in entangler_pairs(config))
    return CircuitPlan(num_qubits=config.qubits, gates=tuple(gates))


def write_checkpoint(config: AnsatzConfig, params: ParameterSet) -> str:
    params.check(config)
    readout = ",".join(str(q) for q in config.readout)
    lines = [
        f"Q {config.qubits} B {config.blocks} m {config.syndrome_length} "
        f"entangler {config.entangler.value} readout {readout}"
    ]
    lines.extend(format(float(x), ".17g") for x in params.flat())
    return "\n".join(lines) + "\n"


def read_checkpoint(text: str | TextIO | Iterable[str]) -> tuple[AnsatzConfig, ParameterSet]:
    lines = [line.strip() for line in (text.splitlines() if isinstance(text, str) else text)]
    lines = [line for line in lines if line]
    if not lines:
        raise CheckpointFormatError("empty checkpoint")
    header = lines[0].split()
    keys = header[0::2]
    if keys != ["Q", "B", "m", "entangler", "readout"] or len(header) != 10:
        raise CheckpointFormatError("line 1: expected 'Q <int> B <int> m <int> entangler <name> readout <csv>'")
    fields = dict(zip(keys, header[1::2]))
    try:
        config = AnsatzConfig(
            qubits=int(fields["Q"]),
            blocks=int(fields["B"]),
            syndrome_length=int(fields["m"]),
            entangler=Entangler(fields["entangler"]),
            readout=tuple(int(q) for q in fields["readout"].split(",")),
        )
    except ValueError as e:
        raise CheckpointFormatError(f"line 1: {e}")

    if len(lines) - 1 != config.num_parameters:
        raise CheckpointFormatError(f"expected {config.num_parameters} values, found {len(lines) - 1}")
    try:
        values = np.array([float(v) for v in lines[1:]], dtype=np.float64)
    except ValueError as e:
        raise CheckpointFormatError(str(e))
    if not np.all(np.isfinite(values)):
        raise CheckpointFormatError("non-finite coefficient")
    return config, ParameterSet.from_flat(config, values)
