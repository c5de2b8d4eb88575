# SPDX-FileCopyrightText: 2026 decoderbench contributors
#
# SPDX-License-Identifier: MIT

import logging
from typing import Callable

import numpy as np
from pydantic import BaseModel, ConfigDict

from decoderbench.config import settings
from decoderbench.dem import DetectorErrorModel
from decoderbench.errors import ModelTooLargeError, ShapeMismatchError
from decoderbench.helpers import bits_to_int, int_to_bits

logger = logging.getLogger(__name__)

# subsets enumerated per numpy pass
_CHUNK = 1 << 16


class MldResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    label: tuple[int, ...]
    value: int
    posterior: float
    seen: bool


class MldDecoder:
    """
    Exhaustive maximum-likelihood decoder.

    Enumerates all ``2**E`` mechanism subsets once and keeps, per syndrome, the probability mass of every label
    (``table``, keyed by the packed syndrome bytes).
    """

    def __init__(self, model: DetectorErrorModel, max_mechanisms: int | None = None):
        cap = max_mechanisms or settings().mld_max_mechanisms
        count = len(model.mechanisms)
        if count > cap:
            raise ModelTooLargeError(f"{count} mechanisms exceed the exhaustive bound of {cap}")
        self.num_detectors = model.num_detectors
        self.num_observables = model.num_observables
        self.table: dict[bytes, np.ndarray] = {}

        arrays = model.as_arrays()
        detectors = arrays.detectors.astype(np.int64)
        observables = arrays.observables.astype(np.int64)
        for start in range(0, 1 << count, _CHUNK):
            subsets = np.arange(start, min(start + _CHUNK, 1 << count), dtype=np.int64)
            fired = int_to_bits(subsets, count)
            mass = np.prod(np.where(fired == 1, arrays.probabilities, 1.0 - arrays.probabilities), axis=1)
            syndromes = ((fired @ detectors) % 2).astype(np.uint8)
            labels = bits_to_int((fired @ observables) % 2)
            keys, inverse = np.unique(np.packbits(syndromes, axis=1), axis=0, return_inverse=True)
            per_key = np.zeros((keys.shape[0], 1 << self.num_observables))
            np.add.at(per_key, (inverse.reshape(-1), labels), mass)
            for key, row in zip(keys, per_key):
                k = key.tobytes()
                self.table[k] = self.table[k] + row if k in self.table else row
        logger.debug(f"MLD table holds {len(self.table)} syndromes from {count} mechanisms")

    def _key(self, syndrome: np.ndarray) -> bytes:
        syndrome = np.asarray(syndrome, dtype=np.uint8)
        if syndrome.shape != (self.num_detectors,):
            raise ShapeMismatchError(f"syndrome has shape {syndrome.shape}, expected ({self.num_detectors},)")
        return np.packbits(syndrome).tobytes()

    def syndrome_of(self, key: bytes) -> np.ndarray:
        return np.unpackbits(np.frombuffer(key, dtype=np.uint8), count=self.num_detectors)

    def decode(self, syndrome: np.ndarray) -> MldResult:
        mass = self.table.get(self._key(syndrome))
        if mass is None:
            logger.warning("syndrome has no probability mass under the model, answering label 0")
            return MldResult(label=(0,) * self.num_observables, value=0, posterior=0.0, seen=False)
        value = int(np.argmax(mass))
        return MldResult(
            label=tuple(int(b) for b in int_to_bits(value, self.num_observables)),
            value=value,
            posterior=float(mass[value] / mass.sum()),
            seen=True,
        )

    def decode_value(self, syndrome: np.ndarray) -> int:
        return self.decode(syndrome).value

    def expected_error_rate(self, decode_value: Callable[[np.ndarray], int] | None = None) -> float:
        """
        Exact logical error probability of a decoder over the model's syndrome distribution.

        :param decode_value: Maps syndrome bits to a label value; defaults to this decoder
        """
        decode_value = decode_value or self.decode_value
        total = 0.0
        for key in sorted(self.table):
            mass = self.table[key]
            total += float(mass.sum() - mass[decode_value(self.syndrome_of(key))])
        return total


def mld_decode(model: DetectorErrorModel, syndrome: np.ndarray) -> np.ndarray:
    return np.array(MldDecoder(model).decode(syndrome).label, dtype=np.uint8)
