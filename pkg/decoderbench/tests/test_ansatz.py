# SPDX-FileCopyrightText: 2026 decoderbench contributors
#
# SPDX-License-Identifier: MIT

import numpy as np
import pytest
from pydantic import ValidationError

from decoderbench.ansatz import (
    AnsatzConfig,
    Entangler,
    GateKind,
    ParameterSet,
    build_plan,
    effective_angles,
    read_checkpoint,
    write_checkpoint,
)
from decoderbench.errors import CheckpointFormatError, ShapeMismatchError
from decoderbench.helpers import make_rng
from decoderbench.tests import random_params


def test_effective_angles():
    params = ParameterSet(theta=np.array([[[0.3, 0.5]]]), phi=np.array([[[0.1, -0.4]]]))
    alpha, beta_y = effective_angles(params, (1, 1))
    assert alpha[0, 0] == pytest.approx(0.8)
    assert beta_y[0, 0] == pytest.approx(-0.3)
    alpha, beta_y = effective_angles(params, (0, 0))
    assert not np.any(alpha) and not np.any(beta_y)
    with pytest.raises(ShapeMismatchError):
        effective_angles(params, (1, 0, 1))


def test_angles_are_linear():
    rng = make_rng(1)
    config = AnsatzConfig(qubits=3, blocks=2, syndrome_length=5)
    a, b = random_params(rng, config), random_params(rng, config)
    summed = ParameterSet(theta=a.theta + b.theta, phi=a.phi + b.phi)
    syndrome = rng.integers(0, 2, size=5)
    alpha, beta_y = effective_angles(summed, syndrome)
    alpha_a, beta_a = effective_angles(a, syndrome)
    alpha_b, beta_b = effective_angles(b, syndrome)
    assert np.allclose(alpha, alpha_a + alpha_b)
    assert np.allclose(beta_y, beta_a + beta_b)

    batch = rng.integers(0, 2, size=(4, 5))
    alpha, _ = effective_angles(a, batch)
    assert alpha.shape == (4, 3, 2)
    assert np.allclose(alpha[2], effective_angles(a, batch[2])[0])


def test_parameter_count():
    config = AnsatzConfig(qubits=3, blocks=2, syndrome_length=3)
    assert config.num_parameters == 36
    assert ParameterSet.zeros(config).size == 36
    values = np.arange(36, dtype=np.float64)
    params = ParameterSet.from_flat(config, values)
    assert params.theta[0, 0, 0] == 0 and params.phi[0, 0, 0] == 18
    assert np.array_equal(params.flat(), values)
    with pytest.raises(ShapeMismatchError):
        ParameterSet.from_flat(config, np.zeros(35))


def test_plan_shapes():
    config = AnsatzConfig(qubits=3, blocks=2, syndrome_length=3)
    params = random_params(make_rng(2), config)

    plan = build_plan(config, params, (0, 0, 0))
    assert plan.count(GateKind.CZ) == len(plan.gates) == 2 * (3 - 1)

    plan = build_plan(config, params, (1, 1, 1))
    assert len(plan.gates) == 16
    assert plan.count(GateKind.RX) == plan.count(GateKind.RY) == 6
    assert [g.kind for g in plan.gates[:8]] == [GateKind.RX] * 3 + [GateKind.RY] * 3 + [GateKind.CZ] * 2

    pair = AnsatzConfig(qubits=2, blocks=1, syndrome_length=1, entangler=Entangler.CNOT_CHAIN)
    plan = build_plan(pair, ParameterSet.zeros(pair), (1,))
    assert [(g.kind, g.qubits) for g in plan.gates] == [(GateKind.CNOT, (0, 1))]


def test_plan_checks_params():
    config = AnsatzConfig(qubits=2, blocks=1, syndrome_length=2)
    other = AnsatzConfig(qubits=2, blocks=2, syndrome_length=2)
    with pytest.raises(ShapeMismatchError):
        build_plan(config, ParameterSet.zeros(other), (1, 0))


def test_config_validation():
    with pytest.raises(ValidationError):
        AnsatzConfig(qubits=0, blocks=1, syndrome_length=1)
    with pytest.raises(ValidationError):
        AnsatzConfig(qubits=2, blocks=1, syndrome_length=1, readout=(0, 1, 1))
    with pytest.raises(ValidationError):
        AnsatzConfig(qubits=2, blocks=1, syndrome_length=1, readout=(2,))
    with pytest.raises(ValidationError):
        ParameterSet(theta=np.zeros((1, 1, 1)), phi=np.zeros((1, 1, 2)))
    with pytest.raises(ValidationError):
        ParameterSet(theta=np.full((1, 1, 1), np.nan), phi=np.zeros((1, 1, 1)))
    assert AnsatzConfig.with_default_readout(3, 1, 8, labels=2).readout == (0, 1)


def test_parameters_are_read_only():
    params = ParameterSet.zeros(AnsatzConfig(qubits=1, blocks=1, syndrome_length=1))
    with pytest.raises(ValueError):
        params.theta[0, 0, 0] = 1.0


def test_checkpoint_round_trip():
    config = AnsatzConfig(qubits=3, blocks=2, syndrome_length=4, readout=(2, 0), entangler=Entangler.CNOT_CHAIN)
    params = random_params(make_rng(3), config)
    text = write_checkpoint(config, params)
    assert text.splitlines()[0] == "Q 3 B 2 m 4 entangler cnot-chain readout 2,0"
    assert read_checkpoint(text) == (config, params)


def test_checkpoint_errors():
    config = AnsatzConfig(qubits=1, blocks=1, syndrome_length=1)
    text = write_checkpoint(config, ParameterSet.zeros(config))
    with pytest.raises(CheckpointFormatError):
        read_checkpoint("")
    with pytest.raises(CheckpointFormatError):
        read_checkpoint(text.replace("Q 1", "qubits 1"))
    with pytest.raises(CheckpointFormatError):
        read_checkpoint(text.replace("cz-chain", "ring"))
    with pytest.raises(CheckpointFormatError):
        read_checkpoint(text + "0.5\n")
    with pytest.raises(CheckpointFormatError):
        read_checkpoint(text.replace("\n0\n", "\nnan\n", 1))
    with pytest.raises(CheckpointFormatError):
        read_checkpoint(text.replace("\n0\n", "\nabc\n", 1))


@pytest.mark.parametrize("syndrome_length", [1, 4, 7])
def test_angles_add_over_disjoint_syndromes(syndrome_length):
    rng = make_rng(2, syndrome_length)
    config = AnsatzConfig(qubits=2, blocks=3, syndrome_length=syndrome_length)
    for _ in range(20):
        params = random_params(rng, config)
        union = rng.integers(0, 2, size=syndrome_length)
        left = union * rng.integers(0, 2, size=syndrome_length)
        right = union - left
        alpha, beta_y = effective_angles(params, union)
        alpha_l, beta_l = effective_angles(params, left)
        alpha_r, beta_r = effective_angles(params, right)
        assert np.allclose(alpha, alpha_l + alpha_r)
        assert np.allclose(beta_y, beta_l + beta_r)
