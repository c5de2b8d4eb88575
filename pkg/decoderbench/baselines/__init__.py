# SPDX-FileCopyrightText: 2026 decoderbench contributors
#
# SPDX-License-Identifier: MIT

import logging
from typing import Protocol

import numpy as np
from pydantic import BaseModel, ConfigDict

from decoderbench.baselines.mld import MldDecoder, MldResult, mld_decode
from decoderbench.baselines.mwpm import (
    Matching,
    MwpmDecoder,
    brute_force_matching,
    min_weight_perfect_matching,
    mwpm_decode,
)
from decoderbench.dem.graph import MatchingGraph, extract_matching_graph
from decoderbench.errors import EmptyShotSetError, MatchingError, TooManyDefectsError
from decoderbench.helpers import BinomialEstimate, binomial_interval, ordered_map
from decoderbench.sampler import ShotSet

logger = logging.getLogger(__name__)

__all__ = [
    "DecodeReport",
    "Matching",
    "MatchingGraph",
    "MldDecoder",
    "MldResult",
    "MwpmDecoder",
    "brute_force_matching",
    "decode_shots",
    "extract_matching_graph",
    "min_weight_perfect_matching",
    "mld_decode",
    "mwpm_decode",
]


class Decoder(Protocol):
    def decode_value(self, syndrome: np.ndarray) -> int: ...


class DecodeReport(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    # predicted label values; 0 where decoding failed
    predictions: np.ndarray
    failures: int
    estimate: BinomialEstimate


def decode_shots(decoder: Decoder, shots: ShotSet, workers: int = 1) -> DecodeReport:
    """
    Decodes every shot (each distinct syndrome once). Shots the decoder cannot handle count as logical errors.
    """
    if shots.size == 0:
        raise EmptyShotSetError("no shots to decode")
    unique, inverse = np.unique(shots.syndromes, axis=0, return_inverse=True)

    def decode_one(syndrome: np.ndarray) -> int | None:
        try:
            return decoder.decode_value(syndrome)
        except (TooManyDefectsError, MatchingError) as e:
            logger.warning(f"decoder failure, counted as a logical error: {e}")
            return None

    results = ordered_map(decode_one, list(unique), workers)
    failed = np.array([r is None for r in results])[inverse.reshape(-1)]
    predictions = np.array([0 if r is None else r for r in results], dtype=np.int64)[inverse.reshape(-1)]
    wrong = (predictions != shots.label_values()) | failed
    return DecodeReport(
        predictions=predictions,
        failures=int(np.count_nonzero(failed)),
        estimate=binomial_interval(int(np.count_nonzero(wrong)), shots.size),
    )
