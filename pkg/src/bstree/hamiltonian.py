"""Branch-free solutions: Hamiltonian cycles under Ore's condition.

If a connected subgraph ``H`` holds every terminal, is small enough
(``|V(H)| <= k(k-1)``) and satisfies Ore's degree condition, it has a
Hamiltonian cycle; cutting that cycle and trimming the non-terminal ends
gives a path spanning the terminals with no branch node at all.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import RefusalError
from .graph import Graph
from .problem import Instance, SolveReport, make_report
from .tree import MulticastTree


@dataclass(frozen=True)
class SubgraphCandidate:
    nodes: tuple[int, ...]
    adj: dict[int, frozenset[int]]
    terminals: frozenset[int]

    @property
    def size(self) -> int:
        return len(self.nodes)

    @property
    def contains_terminals(self) -> bool:
        return self.terminals <= set(self.nodes)

    @property
    def size_bound_ok(self) -> bool:
        k = len(self.terminals)
        return self.size <= (k - 1) * k

    @property
    def satisfies_ore(self) -> bool:
        return self.size >= 3 and ore_condition(self)

    def edges(self) -> list[tuple[int, int]]:
        return sorted((u, v) for u in self.nodes for v in self.adj[u] if u < v)


def induced_subgraph(g: Graph, nodes: Iterable[int], terminals: Iterable[int] = ()) -> SubgraphCandidate:
    ns = sorted(set(nodes))
    keep = set(ns)
    adj = {v: frozenset(u for u in g.adj[v] if u in keep) for v in ns}
    return SubgraphCandidate(tuple(ns), adj, frozenset(terminals))


def ore_condition(h: SubgraphCandidate) -> bool:
    """True iff every non-adjacent pair has degree sum at least ``|V(H)|``."""
    n = h.size
    if n < 3:
        raise RefusalError(f"Ore's condition needs at least 3 nodes, got {n}")
    nodes = h.nodes
    deg = {v: len(h.adj[v]) for v in nodes}
    for i, u in enumerate(nodes):
        nu = h.adj[u]
        du = deg[u]
        for v in nodes[i + 1 :]:
            if v not in nu and du + deg[v] < n:
                return False
    return True


def is_hamiltonian_cycle(h: SubgraphCandidate, cycle: Sequence[int]) -> bool:
    if sorted(cycle) != list(h.nodes):
        return False
    n = len(cycle)
    return all(cycle[(i + 1) % n] in h.adj[cycle[i]] for i in range(n))


def hamiltonian_cycle_ore(h: SubgraphCandidate) -> list[int]:
    """Hamiltonian cycle by repeated segment reversal.

    Start from the sorted node order read as a cycle. While two consecutive
    nodes ``a, b`` are not adjacent, find a later position ``j`` with ``a``
    adjacent to ``c[j]`` and ``b`` adjacent to ``c[j+1]`` and reverse
    ``c[1..j]``. Ore's condition guarantees such ``j`` and every reversal
    removes at least one gap.
    """
    if not ore_condition(h):
        raise RefusalError("subgraph does not satisfy Ore's condition")
    c = list(h.nodes)
    n = len(c)
    adj = h.adj
    while True:
        gap = next((i for i in range(n) if c[(i + 1) % n] not in adj[c[i]]), None)
        if gap is None:
            return c
        c = c[gap:] + c[:gap]
        a, b = c[0], c[1]
        j = next(j for j in range(2, n - 1) if c[j] in adj[a] and c[j + 1] in adj[b])
        c[1 : j + 1] = c[j:0:-1]


def terminal_spanning_path(cycle: Sequence[int], terminals: Iterable[int]) -> list[int]:
    """Cheapest path cut from ``cycle`` whose two ends are terminals.

    Every cut position is tried; the resulting sequence is trimmed to its
    first and last terminal. The shortest wins, then the lowest start id
    (paths are read from their smaller end), then the smaller sequence.
    """
    ks = set(terminals)
    missing = ks - set(cycle)
    if missing:
        raise RefusalError(f"terminals {sorted(missing)} are not on the cycle")
    if len(ks) <= 1:
        return sorted(ks)
    n = len(cycle)
    best = None
    for i in range(n):
        seq = list(cycle[i:]) + list(cycle[:i])
        first = next(x for x in range(n) if seq[x] in ks)
        last = next(x for x in range(n - 1, -1, -1) if seq[x] in ks)
        path = seq[first : last + 1]
        if path[0] > path[-1]:
            path.reverse()
        key = (len(path), path[0], path)
        if best is None or key < best:
            best = key
    return best[2]


def core_numbers(g: Graph) -> list[int]:
    """Core number of every node by minimum-degree peeling."""
    n = g.node_count
    deg = [len(a) for a in g.adj]
    core = [0] * n
    buckets: dict[int, set[int]] = {}
    for v, d in enumerate(deg):
        buckets.setdefault(d, set()).add(v)
    removed = [False] * n
    level = 0
    for _ in range(n):
        d = min(k for k, b in buckets.items() if b)
        level = max(level, d)
        v = min(buckets[d])
        buckets[d].discard(v)
        removed[v] = True
        core[v] = level
        for u in g.adj[v]:
            if not removed[u]:
                buckets[deg[u]].discard(u)
                deg[u] -= 1
                buckets.setdefault(deg[u], set()).add(u)
    return core


def _component_of(h: SubgraphCandidate, start: int) -> set[int]:
    seen = {start}
    stack = [start]
    while stack:
        u = stack.pop()
        for v in h.adj[u]:
            if v not in seen:
                seen.add(v)
                stack.append(v)
    return seen


def _shrink(g: Graph, h: SubgraphCandidate, bound: int) -> SubgraphCandidate | None:
    """Drop non-terminals while the subgraph stays connected and Ore, down to ``bound`` nodes."""
    while h.size > bound:
        order = sorted((len(h.adj[v]), v) for v in h.nodes if v not in h.terminals)
        for _, v in order:
            trial = induced_subgraph(g, (x for x in h.nodes if x != v), h.terminals)
            if trial.size >= 3 and len(_component_of(trial, trial.nodes[0])) == trial.size and ore_condition(trial):
                h = trial
                break
        else:
            return None
    return h


def find_ore_subgraph(g: Graph, terminals: Iterable[int]) -> SubgraphCandidate | None:
    """Smallest k-core piece holding the terminals that passes Ore and the size bound.

    Cores are scanned from the densest down. A core component that passes
    Ore but is too large is shrunk by removing non-terminals that keep it
    connected and Ore.
    """
    ks = frozenset(terminals)
    k = len(ks)
    bound = (k - 1) * k
    core = core_numbers(g)
    anchor = min(ks)
    for level in sorted({core[t] for t in ks} | set(core), reverse=True):
        if any(core[t] < level for t in ks):
            continue
        h = induced_subgraph(g, (v for v in g.nodes() if core[v] >= level), ks)
        comp = _component_of(h, anchor)
        if not ks <= comp:
            continue
        h = induced_subgraph(g, comp, ks)
        if h.size < 3 or not ore_condition(h):
            continue
        if h.size > bound:
            h = _shrink(g, h, bound)
            if h is None:
                continue
        return h
    return None


def path_solution(inst: Instance) -> SolveReport | None:
    """Branch-free tree from a Hamiltonian cycle of an Ore subgraph, or None."""
    t0 = time.perf_counter()
    g = inst.graph
    ks = inst.terminals
    path: list[int] | None = None
    if inst.k == 1:
        path = list(ks)
    elif inst.k == 2:
        a, b = inst.sorted_terminals()
        if g.has_edge(a, b):
            path = [a, b]
    else:
        h = find_ore_subgraph(g, ks)
        if h is not None:
            path = terminal_spanning_path(hamiltonian_cycle_ore(h), ks)
    if path is None:
        return None
    edges = list(zip(path, path[1:]))
    tree = MulticastTree.from_edges(edges, ks, nodes=path)
    return make_report("path", tree, inst, time.perf_counter() - t0, root=path[0])
