# SPDX-FileCopyrightText: 2026 decoderbench contributors
#
# SPDX-License-Identifier: MIT

"""
Uncorrelated minimum-weight perfect matching on the detector graph.

Distances come from Dijkstra on the graph including its boundary node; the matching itself is exact, by dynamic
programming over subsets of the fired nodes (always pairing the lowest unmatched node first).
"""

import logging
import math
from typing import Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict

from decoderbench.config import settings
from decoderbench.dem.graph import MatchingGraph
from decoderbench.errors import MatchingError, ShapeMismatchError, TooManyDefectsError
from decoderbench.helpers import int_to_bits

logger = logging.getLogger(__name__)

Distances = Sequence[Sequence[float]] | np.ndarray


class Matching(BaseModel):
    model_config = ConfigDict(frozen=True)

    weight: float
    pairs: tuple[tuple[int, int], ...]


def min_weight_perfect_matching(distances: Distances) -> Matching:
    """
    :param distances: Symmetric ``n x n`` matrix, ``n`` even
    :return: Pairs of positions into ``distances``
    """
    n = len(distances)
    if n % 2:
        raise MatchingError(f"cannot perfectly match {n} nodes")
    memo: dict[int, tuple[float, tuple[tuple[int, int], ...]]] = {0: (0.0, ())}

    def solve(mask: int) -> tuple[float, tuple[tuple[int, int], ...]]:
        if mask in memo:
            return memo[mask]
        i = (mask & -mask).bit_length() - 1
        rest = mask & ~(1 << i)
        best: tuple[float, tuple[tuple[int, int], ...]] = (math.inf, ())
        j_bits = rest
        while j_bits:
            j = (j_bits & -j_bits).bit_length() - 1
            j_bits &= j_bits - 1
            weight, pairs = solve(rest & ~(1 << j))
            weight += float(distances[i][j])
            if weight < best[0]:
                best = (weight, ((i, j),) + pairs)
        memo[mask] = best
        return best

    weight, pairs = solve((1 << n) - 1)
    return Matching(weight=weight, pairs=tuple(sorted(pairs)))


def brute_force_matching(distances: Distances) -> Matching:
    """
    Enumerates every perfect matching. Reference for small instances only.
    """
    n = len(distances)
    if n % 2:
        raise MatchingError(f"cannot perfectly match {n} nodes")
    best = Matching(weight=math.inf, pairs=())

    def enumerate_from(remaining: list[int], pairs: list[tuple[int, int]], weight: float) -> None:
        nonlocal best
        if not remaining:
            if weight < best.weight:
                best = Matching(weight=weight, pairs=tuple(sorted(pairs)))
            return
        first, others = remaining[0], remaining[1:]
        for k, partner in enumerate(others):
            enumerate_from(
                others[:k] + others[k + 1 :], pairs + [(first, partner)], weight + float(distances[first][partner])
            )

    enumerate_from(list(range(n)), [], 0.0)
    return best


class MwpmDecoder:
    def __init__(self, graph: MatchingGraph, max_defects: int | None = None):
        self.graph = graph
        self.max_defects = max_defects or settings().mwpm_max_defects

    def nodes(self, syndrome: np.ndarray) -> list[int]:
        syndrome = np.asarray(syndrome)
        if syndrome.shape != (self.graph.num_detectors,):
            raise ShapeMismatchError(f"syndrome has shape {syndrome.shape}, expected ({self.graph.num_detectors},)")
        fired = [int(d) for d in np.flatnonzero(syndrome)]
        if len(fired) > self.max_defects:
            raise TooManyDefectsError(f"{len(fired)} fired detectors exceed the matching bound of {self.max_defects}")
        if len(fired) % 2:
            fired.append(self.graph.boundary)
        return fired

    def decode_value(self, syndrome: np.ndarray) -> int:
        nodes = self.nodes(syndrome)
        if not nodes:
            return 0
        distances = [[self.graph.distance(a, b) for b in nodes] for a in nodes]
        matching = min_weight_perfect_matching(distances)
        if math.isinf(matching.weight):
            raise MatchingError(f"fired detectors {nodes} cannot all be paired")
        value = 0
        for i, j in matching.pairs:
            value ^= self.graph.path_mask(nodes[i], nodes[j])
        return value

    def decode(self, syndrome: np.ndarray) -> np.ndarray:
        return int_to_bits(self.decode_value(syndrome), self.graph.num_observables)


def mwpm_decode(graph: MatchingGraph, syndrome: np.ndarray) -> np.ndarray:
    return MwpmDecoder(graph).decode(syndrome)
