# SPDX-FileCopyrightText: 2026 decoderbench contributors
#
# SPDX-License-Identifier: MIT

from enum import Enum
from typing import NamedTuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class DemArrays(NamedTuple):
    probabilities: np.ndarray
    detectors: np.ndarray
    observables: np.ndarray


def xor_sets(*groups: tuple[int, ...]) -> tuple[int, ...]:
    acc: set[int] = set()
    for group in groups:
        acc.symmetric_difference_update(group)
    return tuple(sorted(acc))


def _check_index_set(v: tuple[int, ...]) -> tuple[int, ...]:
    if any(i < 0 for i in v):
        raise ValueError("indices must be non-negative")
    if list(v) != sorted(set(v)):
        raise ValueError("indices must be sorted and duplicate-free")
    return v


class Component(BaseModel):
    """
    One ``^``-separated piece of a decomposed error mechanism
    """

    model_config = ConfigDict(frozen=True)

    detectors: tuple[int, ...] = ()
    observables: tuple[int, ...] = ()

    @field_validator("detectors", "observables")
    @classmethod
    def sorted_unique(cls, v: tuple[int, ...]) -> tuple[int, ...]:
        return _check_index_set(v)


class ErrorMechanism(BaseModel):
    """
    An independent error source: fires with ``probability`` and flips the listed detectors and observables.
    """

    model_config = ConfigDict(frozen=True)

    probability: float
    detectors: tuple[int, ...] = ()
    observables: tuple[int, ...] = ()
    decomposition: tuple[Component, ...] | None = None

    @field_validator("detectors", "observables")
    @classmethod
    def sorted_unique(cls, v: tuple[int, ...]) -> tuple[int, ...]:
        return _check_index_set(v)

    @field_validator("probability")
    @classmethod
    def probability_in_range(cls, v: float) -> float:
        if not 0.0 < v <= 0.5:
            raise ValueError(f"probability {v} not in (0, 0.5]")
        return v

    @model_validator(mode="after")
    def decomposition_matches(self) -> "ErrorMechanism":
        if self.decomposition is None:
            return self
        if xor_sets(*(c.detectors for c in self.decomposition)) != self.detectors:
            raise ValueError("decomposition detectors do not XOR to the mechanism's detectors")
        if xor_sets(*(c.observables for c in self.decomposition)) != self.observables:
            raise ValueError("decomposition observables do not XOR to the mechanism's observables")
        return self

    @classmethod
    def from_components(cls, probability: float, components: list[Component]) -> "ErrorMechanism":
        detectors = xor_sets(*(c.detectors for c in components))
        observables = xor_sets(*(c.observables for c in components))
        return cls(
            probability=probability,
            detectors=detectors,
            observables=observables,
            decomposition=tuple(components) if len(components) > 1 else None,
        )


class DetectorErrorModel(BaseModel):
    model_config = ConfigDict(frozen=True)

    num_detectors: int = Field(ge=1)
    num_observables: int = Field(ge=1)
    mechanisms: tuple[ErrorMechanism, ...] = ()

    @model_validator(mode="after")
    def indices_in_range(self) -> "DetectorErrorModel":
        for k, mech in enumerate(self.mechanisms):
            if mech.detectors and mech.detectors[-1] >= self.num_detectors:
                raise ValueError(f"mechanism {k} flips detector D{mech.detectors[-1]} >= {self.num_detectors}")
            if mech.observables and mech.observables[-1] >= self.num_observables:
                raise ValueError(f"mechanism {k} flips observable L{mech.observables[-1]} >= {self.num_observables}")
        return self

    def as_arrays(self) -> DemArrays:
        """
        Dense view: probabilities [E], detector incidence [E, m], observable incidence [E, L].
        """
        n = len(self.mechanisms)
        detectors = np.zeros((n, self.num_detectors), dtype=np.uint8)
        observables = np.zeros((n, self.num_observables), dtype=np.uint8)
        for k, mech in enumerate(self.mechanisms):
            detectors[k, list(mech.detectors)] = 1
            observables[k, list(mech.observables)] = 1
        probabilities = np.array([m.probability for m in self.mechanisms], dtype=np.float64)
        return DemArrays(probabilities=probabilities, detectors=detectors, observables=observables)

    def is_graph_like(self) -> bool:
        for mech in self.mechanisms:
            if len(mech.detectors) <= 2:
                continue
            if mech.decomposition is None or any(len(c.detectors) > 2 for c in mech.decomposition):
                return False
        return True


class CodeFamily(str, Enum):
    REPETITION = "repetition"
    ROTATED_SURFACE = "rotated-surface"


class NoiseKind(str, Enum):
    CODE_CAPACITY = "code-capacity"
    PHENOMENOLOGICAL = "circuit-level-phenomenological"


class CodeSpec(BaseModel):
    """
    Input of the builders. Only types are checked here; each builder validates the combination it accepts.
    """

    model_config = ConfigDict(frozen=True)

    family: CodeFamily
    distance: int
    rounds: int = 1
    noise: NoiseKind = NoiseKind.PHENOMENOLOGICAL
    p: float
