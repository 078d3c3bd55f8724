"""Multicast trees: cost accounting, validation and the two repair passes.

Solvers work on a mutable adjacency map (``dict[node, set[node]]``) and only
freeze it into a :class:`MulticastTree` at the end of a run. The helpers
prefixed ``adj_`` operate in place on such maps.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable

from .errors import ContractViolation, ParseError
from .graph import Graph

Adjacency = dict[int, set[int]]
Edge = tuple[int, int]


def norm_edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class TreeCost:
    edge_count: int
    branch_count: int
    objective: float

    @classmethod
    def from_counts(cls, edge_count: int, branch_count: int, w: float) -> "TreeCost":
        if edge_count < 0 or branch_count < 0 or w < 0:
            raise ValueError("counts and branch weight must be nonnegative")
        return cls(edge_count, branch_count, edge_count + branch_count * w)


@dataclass(frozen=True)
class MulticastTree:
    """A subtree of a graph. ``nodes`` matters only for edgeless trees."""

    edges: frozenset[Edge]
    nodes: frozenset[int]
    terminals: frozenset[int] = field(default_factory=frozenset)

    @classmethod
    def from_edges(cls, edges: Iterable[Edge], terminals: Iterable[int] = (), nodes: Iterable[int] = ()) -> "MulticastTree":
        es = frozenset(norm_edge(u, v) for u, v in edges)
        ns = set(nodes)
        for u, v in es:
            ns.add(u)
            ns.add(v)
        return cls(es, frozenset(ns), frozenset(terminals))

    @classmethod
    def from_adjacency(cls, adj: Adjacency, terminals: Iterable[int]) -> "MulticastTree":
        edges = {norm_edge(u, v) for u, nbrs in adj.items() for v in nbrs}
        return cls(frozenset(edges), frozenset(adj), frozenset(terminals))

    def adjacency(self) -> Adjacency:
        adj: Adjacency = {v: set() for v in self.nodes}
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return adj

    @cached_property
    def degree(self) -> dict[int, int]:
        deg = Counter({v: 0 for v in self.nodes})
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return dict(deg)

    @cached_property
    def branch_nodes(self) -> frozenset[int]:
        return frozenset(v for v, d in self.degree.items() if d >= 3)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @property
    def branch_count(self) -> int:
        return len(self.branch_nodes)

    def sorted_edges(self) -> list[Edge]:
        return sorted(self.edges)


@dataclass(frozen=True)
class Violation:
    kind: str  # "cycle" | "disconnected" | "missing-terminal" | "foreign-edge" | "empty"
    detail: str = ""


def validate_tree(t: MulticastTree, g: Graph | None, terminals: Iterable[int]) -> list[Violation]:
    """Every way ``t`` fails to be a tree of ``g`` spanning ``terminals``.

    An empty list means the tree is valid.
    """
    out: list[Violation] = []
    ks = set(terminals)
    if g is not None:
        for u, v in sorted(t.edges):
            if not (u < g.node_count and v < g.node_count and g.has_edge(u, v)):
                out.append(Violation("foreign-edge", f"({u}, {v})"))
    for k in sorted(ks - t.nodes):
        out.append(Violation("missing-terminal", str(k)))
    if not t.nodes:
        if not ks:
            out.append(Violation("empty"))
        return out
    comps = _components(t.adjacency())
    if len(comps) > 1:
        out.append(Violation("disconnected", f"{len(comps)} components"))
    if len(t.edges) != len(t.nodes) - len(comps):
        out.append(Violation("cycle", f"{len(t.edges) - len(t.nodes) + len(comps)} independent cycles"))
    return out


def objective(t: MulticastTree, w: float) -> TreeCost:
    problems = validate_tree(t, None, t.terminals)
    if problems:
        raise ContractViolation(f"not a valid tree: {problems}")
    return TreeCost.from_counts(t.edge_count, t.branch_count, w)


# ---------------------------------------------------------------- adjacency


def adj_from_edges(edges: Iterable[Edge], extra_nodes: Iterable[int] = ()) -> Adjacency:
    adj: Adjacency = {v: set() for v in extra_nodes}
    for u, v in edges:
        if u == v:
            continue
        adj.setdefault(u, set()).add(v)
        adj.setdefault(v, set()).add(u)
    return adj


def adj_copy(adj: Adjacency) -> Adjacency:
    return {v: set(n) for v, n in adj.items()}


def adj_edges(adj: Adjacency) -> set[Edge]:
    return {(u, v) for u, nbrs in adj.items() for v in nbrs if u < v}


def adj_edge_count(adj: Adjacency) -> int:
    return sum(map(len, adj.values())) // 2


def adj_branch_count(adj: Adjacency) -> int:
    return sum(len(n) >= 3 for n in adj.values())


def adj_add_path(adj: Adjacency, path: list[int]) -> None:
    for a, b in zip(path, path[1:]):
        adj.setdefault(a, set()).add(b)
        adj.setdefault(b, set()).add(a)
    if len(path) == 1:
        adj.setdefault(path[0], set())


def adj_remove_node(adj: Adjacency, v: int) -> None:
    for u in adj.pop(v, ()):
        adj[u].discard(v)


def _components(adj: Adjacency) -> list[set[int]]:
    seen: set[int] = set()
    comps = []
    for s in sorted(adj):
        if s in seen:
            continue
        comp = {s}
        stack = [s]
        while stack:
            u = stack.pop()
            for v in adj[u]:
                if v not in comp:
                    comp.add(v)
                    stack.append(v)
        seen |= comp
        comps.append(comp)
    return comps


adj_components = _components


def adj_prune(adj: Adjacency, terminals: set[int] | frozenset[int]) -> None:
    """Strip non-terminal nodes of degree <= 1 until none remain."""
    stack = [v for v, n in adj.items() if len(n) <= 1 and v not in terminals]
    while stack:
        v = stack.pop()
        nbrs = adj.get(v)
        if nbrs is None or len(nbrs) > 1:
            continue
        del adj[v]
        for u in nbrs:
            un = adj[u]
            un.discard(v)
            if len(un) <= 1 and u not in terminals:
                stack.append(u)


def _two_core(adj: Adjacency) -> set[int]:
    """Nodes left after repeatedly peeling degree <= 1 nodes."""
    deg = {v: len(n) for v, n in adj.items()}
    stack = [v for v, d in deg.items() if d <= 1]
    removed = set(stack)
    while stack:
        v = stack.pop()
        for u in adj[v]:
            if u not in removed:
                deg[u] -= 1
                if deg[u] <= 1:
                    removed.add(u)
                    stack.append(u)
    return adj.keys() - removed


def _find_cycle(adj: Adjacency) -> list[int] | None:
    """Node sequence of some cycle, or None if ``adj`` is a forest."""
    core = _two_core(adj)
    if not core:
        return None
    parent: dict[int, int] = {}
    depth: dict[int, int] = {}
    for root in sorted(core):
        if root in parent:
            continue
        parent[root] = -1
        depth[root] = 0
        stack = [(root, iter(sorted(adj[root] & core)))]
        while stack:
            u, it = stack[-1]
            for v in it:
                if v == parent[u]:
                    continue
                if v in parent:
                    # Non-tree edge u-v closes a cycle through the DFS tree.
                    left, right = [u], [v]
                    a, b = u, v
                    while depth[a] > depth[b]:
                        a = parent[a]
                        left.append(a)
                    while depth[b] > depth[a]:
                        b = parent[b]
                        right.append(b)
                    while a != b:
                        a = parent[a]
                        b = parent[b]
                        left.append(a)
                        right.append(b)
                    right.pop()
                    return left + right[::-1]
                parent[v] = u
                depth[v] = depth[u] + 1
                stack.append((v, iter(sorted(adj[v] & core))))
                break
            else:
                stack.pop()
    return None


def _longest_segment(cycle: list[int], adj: Adjacency, terminals) -> list[int]:
    m = len(cycle)
    anchors = [i for i, v in enumerate(cycle) if len(adj[v]) >= 3 or v in terminals]
    if not anchors:
        raise ContractViolation(f"cycle {cycle} touches no terminal or branch node")
    if len(anchors) == 1:
        a = anchors[0]
        return [cycle[(a + j) % m] for j in range(m + 1)]
    best_key = None
    best = None
    for idx, a in enumerate(anchors):
        b = anchors[(idx + 1) % len(anchors)]
        span = (b - a) % m
        seg = [cycle[(a + j) % m] for j in range(span + 1)]
        oriented = seg if seg[0] <= seg[-1] else seg[::-1]
        key = (-span, tuple(oriented))
        if best_key is None or key < best_key:
            best_key, best = key, seg
    return best


def adj_break_cycles(adj: Adjacency, terminals: set[int] | frozenset[int]) -> None:
    """Remove the longest anchor-to-anchor segment of each cycle, then prune.

    Anchors are terminals and nodes of degree >= 3. Segment length is in
    edges; ties go to the lexicographically smallest node sequence read from
    its lower endpoint.
    """
    adj_prune(adj, terminals)
    while True:
        cycle = _find_cycle(adj)
        if cycle is None:
            return
        seg = _longest_segment(cycle, adj, terminals)
        for a, b in zip(seg, seg[1:]):
            adj[a].discard(b)
            adj[b].discard(a)
        adj_prune(adj, terminals)


# ---------------------------------------------------------------- edge-set API


def prune_nonterminal_leaves(edges: Iterable[Edge], terminals: Iterable[int]) -> set[Edge]:
    adj = adj_from_edges(edges)
    adj_prune(adj, frozenset(terminals))
    return adj_edges(adj)


def break_cycles(edges: Iterable[Edge], terminals: Iterable[int]) -> set[Edge]:
    """Make a connected edge collection spanning ``terminals`` acyclic."""
    ks = frozenset(terminals)
    adj = adj_from_edges(edges)
    if adj and len(_components(adj)) > 1:
        raise ContractViolation("break_cycles needs a connected input")
    missing = ks - set(adj)
    if missing and (adj or len(ks) > 1):
        raise ContractViolation(f"input does not span terminals {sorted(missing)}")
    adj_break_cycles(adj, ks)
    return adj_edges(adj)


# ---------------------------------------------------------------- serialization


def tree_to_edge_list(t: MulticastTree) -> str:
    """One ``u v`` line per edge, sorted; an edgeless tree writes its node."""
    if not t.edges:
        return "".join(f"{v}\n" for v in sorted(t.nodes))
    return "".join(f"{u} {v}\n" for u, v in t.sorted_edges())


def tree_from_edge_list(text: str, terminals: Iterable[int] = ()) -> MulticastTree:
    edges = []
    nodes = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            ids = [int(p) for p in parts]
        except ValueError:
            raise ParseError(f"non-integer token in {raw!r}", lineno) from None
        if len(ids) == 1:
            nodes.append(ids[0])
        elif len(ids) == 2:
            edges.append((ids[0], ids[1]))
        else:
            raise ParseError(f"expected 'u v', got {raw!r}", lineno)
    return MulticastTree.from_edges(edges, terminals, nodes)
