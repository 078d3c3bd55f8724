"""Unweighted undirected graphs and hop-count shortest paths."""

from __future__ import annotations

import math
import threading
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import InputError

# Sentinel hop count for unreachable pairs inside the numpy rows.
UNREACHABLE = np.int32(2**30)


class Graph:
    """Immutable simple undirected graph on nodes ``0..node_count-1``.

    Adjacency lists are sorted by node id so every traversal is deterministic.
    """

    __slots__ = ("node_count", "edges", "adj", "_max_degree")

    def __init__(self, node_count: int, edges: frozenset[tuple[int, int]], adj: tuple[tuple[int, ...], ...]):
        self.node_count = node_count
        self.edges = edges
        self.adj = adj
        self._max_degree = max((len(a) for a in adj), default=0)

    @property
    def max_degree(self) -> int:
        return self._max_degree

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return (u, v) in self.edges if u < v else (v, u) in self.edges

    def nodes(self) -> range:
        return range(self.node_count)

    def __repr__(self) -> str:
        return f"Graph(nodes={self.node_count}, edges={len(self.edges)})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.node_count == other.node_count and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self.node_count, self.edges))


def build_graph(node_count: int, edge_pairs: Iterable[tuple[int, int]]) -> Graph:
    """Build a :class:`Graph`, deduplicating edges given in either orientation."""
    if node_count < 0:
        raise InputError(f"node_count must be >= 0, got {node_count}")
    edges: set[tuple[int, int]] = set()
    for u, v in edge_pairs:
        u, v = int(u), int(v)
        if not (0 <= u < node_count and 0 <= v < node_count):
            raise InputError(f"edge ({u}, {v}) has an id outside [0, {node_count})")
        if u == v:
            raise InputError(f"self-loop on node {u}")
        edges.add((u, v) if u < v else (v, u))
    neighbours: list[list[int]] = [[] for _ in range(node_count)]
    for u, v in edges:
        neighbours[u].append(v)
        neighbours[v].append(u)
    adj = tuple(tuple(sorted(n)) for n in neighbours)
    return Graph(node_count, frozenset(edges), adj)


def bfs(g: Graph, source: int) -> tuple[list[int], list[int]]:
    """Hop distances and BFS parents from ``source`` (-1 = unreachable / root).

    Neighbours are expanded in ascending id order, so a node's parent is the
    first node to discover it.
    """
    n = g.node_count
    adj = g.adj
    dist = [-1] * n
    pred = [-1] * n
    dist[source] = 0
    queue = deque([source])
    pop = queue.popleft
    push = queue.append
    while queue:
        u = pop()
        du = dist[u] + 1
        for v in adj[u]:
            if dist[v] < 0:
                dist[v] = du
                pred[v] = u
                push(v)
    return dist, pred


def connected_components(g: Graph) -> list[list[int]]:
    """Components as sorted node lists, ordered by their smallest node."""
    seen = [False] * g.node_count
    comps = []
    for s in range(g.node_count):
        if seen[s]:
            continue
        seen[s] = True
        comp = [s]
        stack = [s]
        while stack:
            u = stack.pop()
            for v in g.adj[u]:
                if not seen[v]:
                    seen[v] = True
                    comp.append(v)
                    stack.append(v)
        comps.append(sorted(comp))
    return comps


class DistanceOracle:
    """All-pairs hop distances with one canonical shortest path per pair.

    Rows are produced by a BFS per source and cached. ``path(u, v)`` is read
    off the BFS tree rooted at ``u``. Rows can be filled eagerly (see
    :func:`all_pairs_shortest_paths`) or on first use, which keeps memory
    bounded on graphs where a dense matrix would not fit.
    """

    def __init__(self, g: Graph):
        self.graph = g
        self._rows: dict[int, tuple[np.ndarray, np.ndarray]] = {}
        self._lock = threading.Lock()

    def __len__(self) -> int:
        return len(self._rows)

    def row(self, source: int) -> tuple[np.ndarray, np.ndarray]:
        """``(dist, pred)`` int32 arrays for ``source``; unreachable is UNREACHABLE."""
        cached = self._rows.get(source)
        if cached is not None:
            return cached
        dist, pred = bfs(self.graph, source)
        d = np.asarray(dist, dtype=np.int32)
        d[d < 0] = UNREACHABLE
        entry = (d, np.asarray(pred, dtype=np.int32))
        with self._lock:
            self._rows.setdefault(source, entry)
        return self._rows[source]

    def precompute(self, sources: Iterable[int]) -> None:
        for s in sources:
            self.row(s)

    def dist(self, u: int, v: int) -> float:
        d = int(self.row(u)[0][v])
        return math.inf if d >= UNREACHABLE else d

    def path(self, u: int, v: int) -> list[int] | None:
        """Canonical shortest path ``[u, ..., v]`` or None when disconnected."""
        d, pred = self.row(u)
        if d[v] >= UNREACHABLE:
            return None
        out = [v]
        x = v
        while x != u:
            x = int(pred[x])
            out.append(x)
        out.reverse()
        return out

    def matrix(self) -> np.ndarray:
        """Dense distance matrix (computes any missing rows)."""
        n = self.graph.node_count
        m = np.empty((n, n), dtype=np.int32)
        for s in range(n):
            m[s] = self.row(s)[0]
        return m


def all_pairs_shortest_paths(g: Graph) -> DistanceOracle:
    """Eagerly run one BFS per node and return the filled oracle."""
    oracle = DistanceOracle(g)
    oracle.precompute(range(g.node_count))
    return oracle


@dataclass(frozen=True)
class SetPath:
    distance: int
    path: list[int]
    attach: int
    tied: tuple[int, ...]


def shortest_path_to_set(g: Graph, sources: Iterable[int], target: int) -> SetPath | None:
    """Shortest path from ``target`` to the nearest node of ``sources``.

    The path runs ``[target, ..., attach]`` and every internal node lies
    outside ``sources``. ``tied`` lists every source node at the minimum
    distance; ``attach`` is the lowest of them.
    """
    s = set(sources)
    if not s:
        raise InputError("sources must be nonempty")
    if target in s:
        raise InputError("target must not be in sources")
    adj = g.adj
    dist = {target: 0}
    pred = {target: -1}
    frontier = [target]
    level = 0
    while frontier:
        level += 1
        nxt = []
        hit = []
        for u in frontier:
            for v in adj[u]:
                if v not in dist:
                    dist[v] = level
                    pred[v] = u
                    if v in s:
                        hit.append(v)
                    else:
                        nxt.append(v)
        if hit:
            tied = tuple(sorted(hit))
            attach = tied[0]
            path = [attach]
            x = attach
            while x != target:
                x = pred[x]
                path.append(x)
            path.reverse()
            return SetPath(level, path, attach, tied)
        frontier = nxt
    return None


def path_edges(path: Sequence[int]) -> list[tuple[int, int]]:
    return [(a, b) if a < b else (b, a) for a, b in zip(path, path[1:])]
