# SPDX-FileCopyrightText: 2026 decoderbench contributors
#
# SPDX-License-Identifier: MIT

import numpy as np
import pytest
from pydantic import ValidationError

from decoderbench.ansatz import AnsatzConfig, Entangler, ParameterSet
from decoderbench.errors import CapacityExceededError, ConfigurationMismatchError
from decoderbench.helpers import make_rng
from decoderbench.selfcorrect import (
    SelfCorrectConfig,
    coherent_state,
    equivalence_check,
    exact_logical_error_rate,
    pattern_flip_probabilities,
    patterns,
    run_selfcorrect,
    syndrome_of,
    uncorrected_flip_rate,
)
from decoderbench.sampler import sample_shots, split_train_test
from decoderbench.tests import code_capacity_model, exact_d3_params, install_settings, random_params  # noqa: F401
from decoderbench.trainer import TrainConfig, train


def _config(params: ParameterSet, p: float = 0.05, **overrides) -> SelfCorrectConfig:
    return SelfCorrectConfig(blocks=params.shape[1], decode_qubits=params.shape[0], params=params, p=p, **overrides)


def _random_config(seed: int, entangler: Entangler) -> SelfCorrectConfig:
    config = AnsatzConfig(qubits=2, blocks=3, syndrome_length=2, entangler=entangler)
    return _config(random_params(make_rng(seed), config), entangler=entangler)


def test_patterns_and_syndromes():
    rows = patterns()
    assert rows.shape == (8, 3)
    assert rows[1].tolist() == [1, 0, 0]
    assert syndrome_of(np.array([1, 0, 0])).tolist() == [1, 0]
    assert syndrome_of(np.array([0, 1, 0])).tolist() == [1, 1]
    assert syndrome_of(np.array([1, 1, 1])).tolist() == [0, 0]


def test_noiseless_run_never_flips():
    cfg = _random_config(1, Entangler.CZ_CHAIN).model_copy(update={"p": 0.0, "shots": 500})
    result = run_selfcorrect(cfg)
    assert result.estimate.errors == 0
    assert pattern_flip_probabilities(cfg)[0] == 0.0


@pytest.mark.parametrize("entangler", list(Entangler))
def test_coherent_matches_measured_decoding(entangler):
    for seed in range(5):
        cfg = _random_config(seed, entangler)
        report = equivalence_check(cfg, cfg.classical_ansatz(), cfg.params)
        assert report.passed
        assert report.max_abs_diff <= 1e-9
        assert len(report.rows) == 8
        assert report.rows[0].coherent == report.rows[0].classical == 0.0


def test_hand_built_decoder_equivalence():
    cfg = _config(exact_d3_params())
    report = equivalence_check(cfg, cfg.classical_ansatz(), cfg.params)
    assert report.passed
    flips = {row.pattern: row.coherent for row in report.rows}
    assert flips[(1, 0, 0)] == pytest.approx(0.0, abs=1e-12)
    assert flips[(0, 1, 0)] == pytest.approx(0.0, abs=1e-12)
    assert flips[(1, 1, 0)] == pytest.approx(1.0)
    csv = report.to_csv().splitlines()
    assert csv[0] == "pattern,coherent_prob,classical_prob,abs_diff"
    assert csv[2].startswith("100,")


def test_mismatch():
    cfg = _random_config(2, Entangler.CZ_CHAIN)
    with pytest.raises(ConfigurationMismatchError):
        equivalence_check(cfg, cfg.classical_ansatz(), ParameterSet.zeros(cfg.classical_ansatz()))
    other = AnsatzConfig(qubits=2, blocks=3, syndrome_length=2, readout=(0,))
    with pytest.raises(ConfigurationMismatchError):
        equivalence_check(cfg, other, cfg.params)


def test_trivial_params():
    zeros = ParameterSet.zeros(AnsatzConfig(qubits=2, blocks=2, syndrome_length=2))
    cfg = _config(zeros, p=0.1)
    assert exact_logical_error_rate(cfg) == pytest.approx(0.1)
    assert uncorrected_flip_rate(0.1) == 0.1


def test_hand_params_rate():
    p = 0.05
    cfg = _config(exact_d3_params(), p=p)
    assert exact_logical_error_rate(cfg) == pytest.approx(3 * p**2 * (1 - p) + p**3, abs=1e-12)


def test_self_correction_beats_no_correction():
    cfg = _config(exact_d3_params(), p=0.05, shots=20_000, seed=3)
    result = run_selfcorrect(cfg, workers=2)
    assert result.flips.shape == (20_000,)
    assert result.estimate.rate + 2 * result.estimate.stderr < uncorrected_flip_rate(0.05)
    assert result.flips.tolist() == run_selfcorrect(cfg, workers=1).flips.tolist()


def test_trained_decoder_beats_no_correction(code_capacity_model):  # noqa: F811
    shots = sample_shots(code_capacity_model, 4000, seed=21)
    data, test = split_train_test(shots, 0.75)
    ansatz = AnsatzConfig(qubits=2, blocks=3, syndrome_length=2, readout=(1,))
    # a single evaluation at the end, so the returned coefficients are the final ones
    cfg = TrainConfig(
        epochs=60,
        batch_size=100,
        learning_rate=0.05,
        adam_beta1=0.9,
        adam_beta2=0.999,
        adam_eps=1e-8,
        init_scale=0.1,
        eval_every=60,
        seed=22,
    )
    params, _ = train(code_capacity_model, ansatz, data, test, cfg)
    result = run_selfcorrect(_config(params, p=0.05, shots=20_000, seed=23))
    assert result.estimate.rate + 2 * result.estimate.stderr < uncorrected_flip_rate(0.05)


def test_states_are_normalised():
    cfg = _random_config(4, Entangler.CNOT_CHAIN)
    for pattern in patterns():
        state = coherent_state(cfg, pattern)
        assert np.sum(state.probabilities()) == pytest.approx(1.0, abs=1e-10)


def test_capacity(install_settings):  # noqa: F811
    install_settings(simulator_max_qubits=6)
    with pytest.raises(CapacityExceededError):
        coherent_state(_random_config(5, Entangler.CZ_CHAIN), patterns()[0])


def test_config_validation():
    params = exact_d3_params()
    with pytest.raises(ValidationError):
        _config(params, control_qubit=2)
    with pytest.raises(ValidationError):
        _config(params, p=0.5)
    with pytest.raises(ValidationError):
        SelfCorrectConfig(blocks=3, params=params, p=0.1)
