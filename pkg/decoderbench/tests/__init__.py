# SPDX-FileCopyrightText: 2026 decoderbench contributors
#
# SPDX-License-Identifier: MIT

from itertools import product
from pathlib import Path
from typing import Generator

import numpy as np
import pytest

from decoderbench.ansatz import AnsatzConfig, ParameterSet
from decoderbench.config import Settings, configure
from decoderbench.dem import CodeFamily, CodeSpec, DetectorErrorModel, ErrorMechanism, NoiseKind
from decoderbench.dem.builders import build_dem
from decoderbench.dem.parser import parse_dem

# circuit-level rotated surface code, d=3, 4 rounds, depolarizing p=0.001
surface_fixture = Path(__file__).parent / "data" / "surface_d3_r4.dem"

example_dem = """
# two checks, one observable
error(0.1) D0 L0
error(0.1) D0 D1
error(0.1) D1
error(0.05) D0 D1 ^ D1 L0
detector(0, 0) D0
detector D1
logical_observable L0
"""

repetition_spec = CodeSpec(family=CodeFamily.REPETITION, distance=3, rounds=1, p=0.1)
code_capacity_spec = CodeSpec(family=CodeFamily.REPETITION, distance=3, noise=NoiseKind.CODE_CAPACITY, p=0.05)


def exact_d3_params() -> ParameterSet:
    """
    A two-qubit, two-block circuit whose qubit 1 reads 1 exactly when the syndrome is (1, 0): the optimal
    correction for the distance-3 repetition code with independent X flips.
    """
    theta = np.zeros((2, 2, 2))
    phi = np.zeros((2, 2, 2))
    theta[0, 0] = [np.pi, 0.0]
    phi[1, 0] = [np.pi, -np.pi / 2]
    phi[1, 1] = [0.0, np.pi / 2]
    return ParameterSet(theta=theta, phi=phi)


exact_d3_ansatz = AnsatzConfig(qubits=2, blocks=2, syndrome_length=2, readout=(1,))


def random_params(rng: np.random.Generator, config: AnsatzConfig, scale: float = np.pi) -> ParameterSet:
    return ParameterSet.from_flat(config, rng.uniform(-scale, scale, size=config.num_parameters))


def random_graph_like_model(rng: np.random.Generator, max_mechanisms: int = 10) -> DetectorErrorModel:
    num_detectors = int(rng.integers(2, 6))
    mechanisms = []
    for _ in range(int(rng.integers(3, max_mechanisms + 1))):
        width = int(rng.integers(1, 3))
        detectors = tuple(sorted(int(d) for d in rng.choice(num_detectors, size=width, replace=False)))
        observables = (0,) if rng.random() < 0.4 else ()
        mechanisms.append(
            ErrorMechanism(probability=float(rng.uniform(0.01, 0.3)), detectors=detectors, observables=observables)
        )
    return DetectorErrorModel(num_detectors=num_detectors, num_observables=1, mechanisms=tuple(mechanisms))


def exact_joint_distribution(model: DetectorErrorModel) -> dict[tuple[int, ...], float]:
    """
    Probability of every (syndrome bits + label bits) outcome, by enumerating all mechanism subsets.
    """
    arrays = model.as_arrays()
    out: dict[tuple[int, ...], float] = {}
    for fired in product((0, 1), repeat=len(model.mechanisms)):
        fired = np.array(fired, dtype=np.int64)
        mass = float(np.prod(np.where(fired == 1, arrays.probabilities, 1.0 - arrays.probabilities)))
        outcome = tuple(int(b) for b in np.concatenate([fired @ arrays.detectors % 2, fired @ arrays.observables % 2]))
        out[outcome] = out.get(outcome, 0.0) + mass
    return out


@pytest.fixture()
def repetition_model() -> DetectorErrorModel:
    return build_dem(repetition_spec)


@pytest.fixture()
def code_capacity_model() -> DetectorErrorModel:
    return build_dem(code_capacity_spec)


@pytest.fixture()
def surface_model() -> DetectorErrorModel:
    return parse_dem(surface_fixture.read_text())


@pytest.fixture()
def install_settings() -> Generator:
    def install(**values) -> Settings:
        new = Settings(**values)
        configure(new)
        return new

    yield install
    configure(None)
