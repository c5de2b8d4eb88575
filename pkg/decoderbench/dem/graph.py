# SPDX-FileCopyrightText: 2026 decoderbench contributors
#
# SPDX-License-Identifier: MIT

import heapq
import math
import threading

from pydantic import BaseModel, ConfigDict

from decoderbench.dem import DetectorErrorModel
from decoderbench.errors import NotGraphLikeError


class Edge(BaseModel):
    model_config = ConfigDict(frozen=True)

    probability: float
    # observable mask of the highest-probability contributor
    observables: int
    dominant_probability: float

    @property
    def weight(self) -> float:
        return math.log((1.0 - self.probability) / self.probability)


class ShortestPaths(BaseModel):
    model_config = ConfigDict(frozen=True)

    distances: tuple[float, ...]
    masks: tuple[int, ...]
    paths: tuple[tuple[int, ...] | None, ...]


class MatchingGraph:
    """
    Weighted detector graph with one extra boundary node (index ``num_detectors``).

    Edges are immutable after construction; shortest paths are filled in lazily, one source at a time.
    """

    def __init__(self, num_detectors: int, num_observables: int, edges: dict[tuple[int, int], Edge]):
        self.num_detectors = num_detectors
        self.num_observables = num_observables
        self.boundary = num_detectors
        self.edges = dict(sorted(edges.items()))
        self._adjacency: list[list[tuple[int, float, int]]] = [[] for _ in range(num_detectors + 1)]
        for (a, b), edge in self.edges.items():
            self._adjacency[a].append((b, edge.weight, edge.observables))
            self._adjacency[b].append((a, edge.weight, edge.observables))
        for neighbours in self._adjacency:
            neighbours.sort()
        self._paths: dict[int, ShortestPaths] = {}
        self._lock = threading.Lock()

    @property
    def num_nodes(self) -> int:
        return self.num_detectors + 1

    def shortest_paths(self, source: int) -> ShortestPaths:
        cached = self._paths.get(source)
        if cached is not None:
            return cached
        result = self._dijkstra(source)
        with self._lock:
            self._paths.setdefault(source, result)
        return result

    def distance(self, a: int, b: int) -> float:
        return self.shortest_paths(a).distances[b]

    def path_mask(self, a: int, b: int) -> int:
        return self.shortest_paths(a).masks[b]

    def _dijkstra(self, source: int) -> ShortestPaths:
        # heap entries compare by (distance, node sequence): ties go to the lexicographically smallest path
        n = self.num_nodes
        distances = [math.inf] * n
        masks = [0] * n
        paths: list[tuple[int, ...] | None] = [None] * n
        heap: list[tuple[float, tuple[int, ...], int]] = [(0.0, (source,), 0)]
        while heap:
            dist, path, mask = heapq.heappop(heap)
            node = path[-1]
            if paths[node] is not None:
                continue
            distances[node], masks[node], paths[node] = dist, mask, path
            for neighbour, weight, observables in self._adjacency[node]:
                if paths[neighbour] is None:
                    heapq.heappush(heap, (dist + weight, path + (neighbour,), mask ^ observables))
        return ShortestPaths(distances=tuple(distances), masks=tuple(masks), paths=tuple(paths))


def _mask(observables: tuple[int, ...]) -> int:
    out = 0
    for o in observables:
        out |= 1 << o
    return out


def extract_matching_graph(model: DetectorErrorModel) -> MatchingGraph:
    """
    Builds the matching graph of a graph-like model.

    Parallel contributions merge as p = p1 (1 - p2) + p2 (1 - p1); an edge keeps the observable mask of its
    most probable contributor (ties go to the smaller mask, so the result does not depend on mechanism order).
    """
    boundary = model.num_detectors
    contributions: list[tuple[tuple[int, ...], tuple[int, ...], float]] = []
    for k, mech in enumerate(model.mechanisms):
        if len(mech.detectors) <= 2:
            contributions.append((mech.detectors, mech.observables, mech.probability))
        elif mech.decomposition is not None and all(len(c.detectors) <= 2 for c in mech.decomposition):
            for component in mech.decomposition:
                contributions.append((component.detectors, component.observables, mech.probability))
        else:
            raise NotGraphLikeError(
                f"mechanism {k} flips {len(mech.detectors)} detectors and has no usable decomposition"
            )

    merged: dict[tuple[int, int], tuple[float, float, int]] = {}
    for detectors, observables, p in contributions:
        if not detectors:
            continue
        key = (detectors[0], detectors[1]) if len(detectors) == 2 else (detectors[0], boundary)
        mask = _mask(observables)
        if key not in merged:
            merged[key] = (p, p, mask)
            continue
        q, dominant, dominant_mask = merged[key]
        combined = q * (1.0 - p) + p * (1.0 - q)
        if p > dominant or (p == dominant and mask < dominant_mask):
            dominant, dominant_mask = p, mask
        merged[key] = (combined, dominant, dominant_mask)

    edges = {
        key: Edge(probability=q, observables=mask, dominant_probability=dominant)
        for key, (q, dominant, mask) in merged.items()
    }
    return MatchingGraph(model.num_detectors, model.num_observables, edges)
