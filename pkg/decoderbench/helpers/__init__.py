# SPDX-FileCopyrightText: 2026 decoderbench contributors
#
# SPDX-License-Identifier: MIT

import math
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, TypeVar

import numpy as np
from pydantic import BaseModel

T = TypeVar("T")
R = TypeVar("R")


class BinomialEstimate(BaseModel):
    errors: int
    shots: int
    rate: float
    stderr: float
    low: float
    high: float


def binomial_interval(errors: int, shots: int) -> BinomialEstimate:
    """
    Rate, binomial standard error and the 95% normal interval (clipped to [0, 1]).
    """
    if shots <= 0:
        raise ValueError("shots must be positive")
    rate = errors / shots
    stderr = math.sqrt(rate * (1.0 - rate) / shots)
    return BinomialEstimate(
        errors=errors,
        shots=shots,
        rate=rate,
        stderr=stderr,
        low=max(0.0, rate - 1.96 * stderr),
        high=min(1.0, rate + 1.96 * stderr),
    )


def make_rng(seed: int, *stream: int) -> np.random.Generator:
    """
    Philox (counter-based) generator keyed by ``seed`` and an optional stream path.

    The same (seed, stream) gives the same numbers on every platform numpy supports.
    """
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, *stream])))


def bits_to_int(bits: np.ndarray) -> np.ndarray:
    """
    Bit vectors (last axis, bit j has weight 2**j) to integers.
    """
    bits = np.asarray(bits, dtype=np.int64)
    weights = np.left_shift(np.int64(1), np.arange(bits.shape[-1], dtype=np.int64))
    return bits @ weights


def int_to_bits(values: np.ndarray | int, width: int) -> np.ndarray:
    values = np.asarray(values, dtype=np.int64)
    return ((values[..., None] >> np.arange(width, dtype=np.int64)) & 1).astype(np.uint8)


def ordered_map(fn: Callable[[T], R], items: Iterable[T], workers: int = 1) -> list[R]:
    """
    Maps ``fn`` over ``items`` and returns results in input order, whatever the worker count.
    """
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
