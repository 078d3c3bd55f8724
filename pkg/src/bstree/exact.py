"""Exact optimum for small instances by subtree enumeration."""

from __future__ import annotations

import time

from .errors import InfeasibleInstanceError, RefusalError
from .graph import bfs
from .problem import Instance, SolveReport, make_report
from .tree import MulticastTree

DEFAULT_MAX_EDGES = 22


def brute_force_opt(inst: Instance, max_edges: int = DEFAULT_MAX_EDGES) -> SolveReport:
    """Minimum ``c(T) + b(T) * w`` over every subtree spanning the terminals.

    Subtrees containing the smallest terminal are enumerated by the classic
    include/exclude recursion on frontier edges, so each one is visited once.
    A branch is cut when its cost so far plus one edge per missing terminal
    already exceeds the best objective. Ties go to fewer edges, then to the
    lexicographically smallest sorted edge list.
    """
    g = inst.graph
    if g.edge_count > max_edges:
        raise RefusalError(f"graph has {g.edge_count} edges, brute force limit is {max_edges}")
    terms = inst.sorted_terminals()
    root = terms[0]
    dist, _ = bfs(g, root)
    unreachable = [t for t in terms if dist[t] < 0]
    if unreachable:
        raise InfeasibleInstanceError(f"terminals {unreachable} unreachable")

    t0 = time.perf_counter()
    w = inst.w
    ks = inst.terminals
    adj = g.adj
    nodes = {root}
    deg = {root: 0}
    edges: list[tuple[int, int]] = []
    best: list = [None]  # (objective, edge count, sorted edges)
    state = {"b": 0, "missing": len(ks) - 1}

    def record():
        c = len(edges)
        key = (c + w * state["b"], c, sorted(edges))
        if best[0] is None or key < best[0]:
            best[0] = key

    def rec(frontier: list[tuple[int, int]]):
        b = state["b"]
        missing = state["missing"]
        if best[0] is not None and len(edges) + w * b + missing > best[0][0]:
            return
        if missing == 0:
            record()
            return
        while frontier and frontier[-1][1] in nodes:
            frontier = frontier[:-1]
        if not frontier:
            return
        a, x = frontier[-1]
        rest = frontier[:-1]

        # Include a-x.
        nodes.add(x)
        deg[a] += 1
        deg[x] = 1
        became_branch = deg[a] == 3
        if became_branch:
            state["b"] += 1
        if x in ks:
            state["missing"] -= 1
        edges.append((a, x) if a < x else (x, a))
        grown = [e for e in rest if e[1] != x]
        grown.extend((x, y) for y in adj[x] if y not in nodes)
        rec(grown)
        edges.pop()
        if x in ks:
            state["missing"] += 1
        if became_branch:
            state["b"] -= 1
        deg[a] -= 1
        del deg[x]
        nodes.discard(x)

        # Exclude a-x.
        rec(rest)

    rec([(root, y) for y in adj[root]])
    obj, _, best_edges = best[0]
    tree = MulticastTree.from_edges(best_edges, ks, nodes=[root])
    return make_report("exact", tree, inst, time.perf_counter() - t0, root=root)
