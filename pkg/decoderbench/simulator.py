# SPDX-FileCopyrightText: 2026 decoderbench contributors
#
# SPDX-License-Identifier: MIT

"""
Dense statevector simulation and adjoint gradients of the decoding circuit.

States are held as ``[S, 2**Q]`` complex128 arrays so a batch of shots, each with its own angles, runs through one
gate sequence. Qubit 0 is the least significant bit of the basis index.
"""

import logging
from functools import lru_cache
from typing import Literal, NamedTuple

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from decoderbench.ansatz import (
    AnsatzConfig,
    CircuitPlan,
    GateKind,
    ParameterSet,
    effective_angles,
    entangler_kind,
    entangler_pairs,
)
from decoderbench.config import settings
from decoderbench.errors import CapacityExceededError, ShapeMismatchError
from decoderbench.helpers import bits_to_int

logger = logging.getLogger(__name__)

NORM_TOLERANCE = 1e-10


class StateVector(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    num_qubits: int
    amplitudes: np.ndarray

    @model_validator(mode="after")
    def normalised(self) -> "StateVector":
        if self.amplitudes.shape != (1 << self.num_qubits,):
            raise ValueError(f"expected {1 << self.num_qubits} amplitudes, got {self.amplitudes.shape}")
        norm = float(np.sum(np.abs(self.amplitudes) ** 2))
        if abs(norm - 1.0) > NORM_TOLERANCE:
            raise ValueError(f"state has norm {norm}")
        return self

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2


class OutcomeDistribution(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    readout: tuple[int, ...]
    probs: np.ndarray

    def most_likely(self) -> int:
        # np.argmax keeps the first maximum, so ties go to the lowest label value
        return int(np.argmax(self.probs))


class _Op(NamedTuple):
    kind: GateKind
    qubits: tuple[int, ...]
    angles: np.ndarray | None  # [S]
    slot: tuple[int, int] | None = None  # (qubit, block) of the effective angle


def check_capacity(num_qubits: int) -> None:
    cap = settings().simulator_max_qubits
    if num_qubits > cap:
        raise CapacityExceededError(f"{num_qubits} qubits exceed the simulator cap of {cap}")


@lru_cache(maxsize=256)
def _basis(num_qubits: int) -> np.ndarray:
    return np.arange(1 << num_qubits, dtype=np.int64)


@lru_cache(maxsize=256)
def _both_set(num_qubits: int, a: int, b: int) -> np.ndarray:
    idx = _basis(num_qubits)
    return np.flatnonzero(((idx >> a) & 1) & ((idx >> b) & 1))


@lru_cache(maxsize=256)
def _flip_permutation(num_qubits: int, control: int, targets: tuple[int, ...]) -> np.ndarray:
    idx = _basis(num_qubits)
    flip = sum(1 << t for t in targets)
    return idx ^ (((idx >> control) & 1) * flip)


@lru_cache(maxsize=256)
def readout_values(num_qubits: int, readout: tuple[int, ...]) -> np.ndarray:
    """
    Label value of every basis state: bit ``j`` is qubit ``readout[j]``.
    """
    idx = _basis(num_qubits)
    out = np.zeros_like(idx)
    for j, q in enumerate(readout):
        out |= ((idx >> q) & 1) << j
    return out


def _halves(state: np.ndarray, qubit: int) -> tuple[np.ndarray, np.ndarray]:
    view = state.reshape(state.shape[0], -1, 2, 1 << qubit)
    return view[:, :, 0, :], view[:, :, 1, :]


def _join(state: np.ndarray, new0: np.ndarray, new1: np.ndarray) -> np.ndarray:
    return np.stack([new0, new1], axis=2).reshape(state.shape)


def apply_rotation(state: np.ndarray, kind: GateKind, qubit: int, angles: np.ndarray) -> np.ndarray:
    s0, s1 = _halves(state, qubit)
    half = np.asarray(angles, dtype=np.float64)[:, None, None] / 2.0
    c, s = np.cos(half), np.sin(half)
    if kind == GateKind.RX:
        return _join(state, c * s0 - 1j * s * s1, -1j * s * s0 + c * s1)
    return _join(state, c * s0 - s * s1, s * s0 + c * s1)


def apply_generator(state: np.ndarray, kind: GateKind, qubit: int) -> np.ndarray:
    """
    X (for RX) or Y (for RY) on ``qubit``.
    """
    s0, s1 = _halves(state, qubit)
    if kind == GateKind.RX:
        return _join(state, s1, s0)
    return _join(state, -1j * s1, 1j * s0)


def apply_cz(state: np.ndarray, a: int, b: int, num_qubits: int) -> np.ndarray:
    out = state.copy()
    out[:, _both_set(num_qubits, a, b)] *= -1.0
    return out


def apply_controlled_flip(state: np.ndarray, control: int, targets: tuple[int, ...], num_qubits: int) -> np.ndarray:
    """
    X on every target when ``control`` is set (a CNOT for one target).
    """
    return state[:, _flip_permutation(num_qubits, control, targets)]


def apply_controlled_rotation(
    state: np.ndarray, kind: GateKind, control: int, target: int, angle: float, num_qubits: int
) -> np.ndarray:
    rotated = apply_rotation(state, kind, target, np.full(state.shape[0], angle))
    on = ((_basis(num_qubits) >> control) & 1).astype(bool)
    return np.where(on, rotated, state)


def _apply(state: np.ndarray, op: _Op, num_qubits: int, inverse: bool = False) -> np.ndarray:
    if op.kind in (GateKind.RX, GateKind.RY):
        return apply_rotation(state, op.kind, op.qubits[0], -op.angles if inverse else op.angles)
    if op.kind == GateKind.CZ:
        return apply_cz(state, op.qubits[0], op.qubits[1], num_qubits)
    return apply_controlled_flip(state, op.qubits[0], (op.qubits[1],), num_qubits)


def zero_state(num_qubits: int, batch: int = 1) -> np.ndarray:
    state = np.zeros((batch, 1 << num_qubits), dtype=np.complex128)
    state[:, 0] = 1.0
    return state


def run(plan: CircuitPlan, num_qubits: int | None = None) -> StateVector:
    """
    Evolves ``|0...0>`` through the plan.

    :param plan: Gate sequence
    :param num_qubits: Register size, defaults to the plan's
    """
    num_qubits = plan.num_qubits if num_qubits is None else num_qubits
    check_capacity(num_qubits)
    state = zero_state(num_qubits)
    for k, gate in enumerate(plan.gates):
        if max(gate.qubits) >= num_qubits:
            raise ShapeMismatchError(f"gate {k} touches qubit {max(gate.qubits)} of a {num_qubits}-qubit register")
        angles = np.array([gate.angle]) if gate.kind in (GateKind.RX, GateKind.RY) else None
        state = _apply(state, _Op(gate.kind, gate.qubits, angles), num_qubits)
    return StateVector(num_qubits=num_qubits, amplitudes=state[0])


def readout_distribution(state: StateVector, readout: tuple[int, ...] | list[int]) -> OutcomeDistribution:
    readout = tuple(readout)
    if not readout or len(set(readout)) != len(readout) or any(not 0 <= q < state.num_qubits for q in readout):
        raise ShapeMismatchError(f"invalid readout {readout} for {state.num_qubits} qubits")
    probs = np.bincount(
        readout_values(state.num_qubits, readout), weights=state.probabilities(), minlength=1 << len(readout)
    )
    return OutcomeDistribution(readout=readout, probs=probs)


def _circuit_ops(config: AnsatzConfig, alpha: np.ndarray, beta_y: np.ndarray) -> list[_Op]:
    # zero angles stay in the sequence: they act as the identity but still carry a gradient
    ent = entangler_kind(config.entangler)
    ops: list[_Op] = []
    for b in range(config.blocks):
        for kind, angles in ((GateKind.RX, alpha), (GateKind.RY, beta_y)):
            for q in range(config.qubits):
                ops.append(_Op(kind, (q,), angles[:, q, b], (q, b)))
        ops.extend(_Op(ent, pair, None) for pair in entangler_pairs(config))
    return ops


def _prepare(
    config: AnsatzConfig, params: ParameterSet, syndromes: np.ndarray
) -> tuple[np.ndarray, list[_Op], np.ndarray]:
    check_capacity(config.qubits)
    params.check(config)
    gamma = np.asarray(syndromes, dtype=np.float64)
    if gamma.ndim != 2 or gamma.shape[1] != config.syndrome_length:
        raise ShapeMismatchError(f"expected syndromes of shape [S, {config.syndrome_length}], got {gamma.shape}")
    alpha, beta_y = effective_angles(params, gamma)
    ops = _circuit_ops(config, alpha, beta_y)
    state = zero_state(config.qubits, gamma.shape[0])
    for op in ops:
        state = _apply(state, op, config.qubits)
    return gamma, ops, state


def batch_readout_distribution(config: AnsatzConfig, params: ParameterSet, syndromes: np.ndarray) -> np.ndarray:
    """
    ``q(beta | gamma)`` for every syndrome row: shape ``[S, 2**L]``.
    """
    _, _, state = _prepare(config, params, syndromes)
    values = readout_values(config.qubits, config.readout)
    probs = np.abs(state) ** 2
    out = np.zeros((state.shape[0], 1 << config.num_labels))
    for value in range(1 << config.num_labels):
        out[:, value] = probs[:, values == value].sum(axis=1)
    return out


def batch_loss_and_gradient(
    config: AnsatzConfig,
    params: ParameterSet,
    syndromes: np.ndarray,
    labels: np.ndarray,
    reduction: Literal["mean", "sum"] = "mean",
) -> tuple[np.ndarray, ParameterSet]:
    """
    Cross-entropy ``-ln max(q(label | gamma), floor)`` per shot and its exact gradient.

    One forward pass, then one reverse pass that un-applies each gate from both the state and the projected
    co-state while reading off ``d q / d angle = Im <lambda| G psi>``.

    :param syndromes: ``[S, m]`` bits
    :param labels: ``[S]`` label values
    :return: per-shot losses and the reduced gradient
    """
    gamma, ops, psi = _prepare(config, params, syndromes)
    labels = np.asarray(labels, dtype=np.int64)
    if labels.shape != (gamma.shape[0],):
        raise ShapeMismatchError(f"expected {gamma.shape[0]} label values, got {labels.shape}")
    floor = settings().probability_floor

    mask = readout_values(config.qubits, config.readout)[None, :] == labels[:, None]
    lam = np.where(mask, psi, 0.0)
    q = np.sum(np.abs(lam) ** 2, axis=1)
    losses = -np.log(np.maximum(q, floor))
    dloss_dq = np.where(q >= floor, -1.0 / np.maximum(q, floor), 0.0)

    d_alpha = np.zeros((gamma.shape[0], config.qubits, config.blocks))
    d_beta = np.zeros_like(d_alpha)
    for op in reversed(ops):
        if op.slot is not None:
            dq = np.imag(np.sum(np.conj(lam) * apply_generator(psi, op.kind, op.qubits[0]), axis=1))
            target = d_alpha if op.kind == GateKind.RX else d_beta
            target[:, op.slot[0], op.slot[1]] = dq * dloss_dq
        psi = _apply(psi, op, config.qubits, inverse=True)
        lam = _apply(lam, op, config.qubits, inverse=True)

    grad_theta = np.einsum("sqb,si->qbi", d_alpha, gamma)
    grad_phi = np.einsum("sqb,si->qbi", d_beta, gamma)
    if reduction == "mean":
        grad_theta /= gamma.shape[0]
        grad_phi /= gamma.shape[0]
    return losses, ParameterSet(theta=grad_theta, phi=grad_phi)


def loss_and_gradient(
    config: AnsatzConfig, params: ParameterSet, syndrome: np.ndarray, label: np.ndarray | int
) -> tuple[float, ParameterSet]:
    """
    Single-shot form of :func:`batch_loss_and_gradient`; ``label`` is a bit vector or its integer value.
    """
    syndrome = np.asarray(syndrome)
    if syndrome.shape != (config.syndrome_length,):
        raise ShapeMismatchError(f"syndrome has shape {syndrome.shape}, expected ({config.syndrome_length},)")
    if np.ndim(label) == 0:
        value = int(label)
    elif np.shape(label) == (config.num_labels,):
        value = int(bits_to_int(np.asarray(label)))
    else:
        raise ShapeMismatchError(f"label has shape {np.shape(label)}, expected ({config.num_labels},)")
    losses, grad = batch_loss_and_gradient(config, params, syndrome[None, :], np.array([value]))
    return float(losses[0]), grad
