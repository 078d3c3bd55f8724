"""Branch Aware Edge Reduction Algorithm (BAERA).

Edge optimization builds a tree by nearest-terminal insertion, preferring
attachments that create no new branch node. Branch optimization then tries
to delete branch nodes (rerouting the pieces through other branch nodes)
and to slide the survivors onto graph neighbours, keeping a change only when
``c(T) + b(T) * w`` strictly drops.
"""

from __future__ import annotations

import logging
import time

import numpy as np

from .errors import ContractViolation
from .graph import DistanceOracle, Graph, all_pairs_shortest_paths
from .problem import Instance, SolveReport, make_report
from .tree import (
    Adjacency,
    MulticastTree,
    adj_add_path,
    adj_branch_count,
    adj_break_cycles,
    adj_components,
    adj_copy,
    adj_edge_count,
    adj_prune,
)

log = logging.getLogger(__name__)

# Oracles for graphs up to this size are filled eagerly; larger ones fill rows on demand.
EAGER_APSP_LIMIT = 2000


def graph_oracle(g: Graph) -> DistanceOracle:
    if g.node_count <= EAGER_APSP_LIMIT:
        return all_pairs_shortest_paths(g)
    return DistanceOracle(g)


def oracle_for(inst: Instance) -> DistanceOracle:
    return graph_oracle(inst.graph)


def adj_objective(adj: Adjacency, w: float) -> float:
    return adj_edge_count(adj) + w * adj_branch_count(adj)


# ---------------------------------------------------------------- phase 1


def insertion_tree(inst: Instance, oracle: DistanceOracle, branch_aware: bool = True) -> tuple[Adjacency, list[int]]:
    """Nearest-terminal insertion from the instance root.

    Returns the tree and the attachment distance of every inserted terminal
    (terminals swallowed by an earlier path are recorded as 0). With
    ``branch_aware`` the tie between equally close terminals goes to an
    attachment that creates no new branch node; otherwise ties fall to the
    lowest terminal id, then the lowest attach node id.
    """
    inst.check_feasible(oracle)
    root = inst.resolved_root()
    terms = inst.sorted_terminals()
    rows = np.stack([oracle.row(t)[0] for t in terms])
    pos = {t: i for i, t in enumerate(terms)}

    adj: Adjacency = {root: set()}
    tnodes = [root]
    remaining = np.array([i for i, t in enumerate(terms) if t != root], dtype=np.int64)
    mind = rows[:, root].astype(np.int64)
    dists: list[int] = [0] * (len(terms) - len(remaining))

    while len(remaining):
        d = int(mind[remaining].min())
        tied = remaining[mind[remaining] == d]
        tarr = np.asarray(tnodes)
        choice = None
        for i in tied:
            attach = np.sort(tarr[rows[i, tarr] == d])
            for u in attach:
                u = int(u)
                if choice is None:
                    choice = (int(i), u)
                if not branch_aware or len(adj[u]) != 2:
                    choice = (int(i), u)
                    break
            else:
                continue
            break
        i, u = choice
        path = oracle.path(terms[i], u)
        adj_add_path(adj, path)
        new_nodes = path[:-1]
        tnodes.extend(new_nodes)
        dists.append(d)
        swallowed = {pos[v] for v in new_nodes if v in pos}
        dists.extend(0 for _ in range(len(swallowed) - 1))
        remaining = np.array([j for j in remaining if j not in swallowed], dtype=np.int64)
        if len(remaining):
            mind[remaining] = np.minimum(mind[remaining], rows[np.ix_(remaining, new_nodes)].min(axis=1))
    return adj, dists


def edge_optimization_phase(inst: Instance, oracle: DistanceOracle) -> MulticastTree:
    adj, _ = insertion_tree(inst, oracle, branch_aware=True)
    return MulticastTree.from_adjacency(adj, inst.terminals)


# ---------------------------------------------------------------- phase 2 helpers


def neighbour_anchors(adj: Adjacency, v: int, terminals) -> list[tuple[int, list[int]]]:
    """Follow each edge of ``v`` through degree-2 relays to the next anchor.

    Anchors are terminals and branch nodes. Returns ``(anchor, segment)``
    pairs with ``segment = [v, ..., anchor]``, ordered by anchor id.
    """
    out = []
    for first in adj[v]:
        seg = [v, first]
        prev, cur = v, first
        while cur not in terminals and len(adj[cur]) == 2:
            a, b = adj[cur]
            prev, cur = cur, (b if a == prev else a)
            seg.append(cur)
        out.append((cur, seg))
    out.sort(key=lambda p: p[0])
    return out


def _cut_out(adj: Adjacency, v: int, terminals) -> list[int]:
    """Detach ``v`` with its relay segments. Returns the freed anchors.

    ``v`` itself stays as an isolated node when it is a terminal.
    """
    anchors = []
    for anchor, seg in neighbour_anchors(adj, v, terminals):
        for a, b in zip(seg, seg[1:]):
            adj[a].discard(b)
            adj[b].discard(a)
        for x in seg[1:-1]:
            del adj[x]
        anchors.append(anchor)
    if v not in terminals:
        del adj[v]
    return anchors


def _branch_order(adj: Adjacency) -> list[int]:
    return [v for _, v in sorted((len(n), v) for v, n in adj.items() if len(n) >= 3)]


def _nearest_in_other_component(adj: Adjacency, comps: list[set[int]], v: int, oracle: DistanceOracle) -> int:
    dist = oracle.row(v)[0]
    best = None
    for comp in comps:
        if v in comp:
            continue
        targets = [x for x in comp if len(adj[x]) >= 3] or list(comp)
        arr = np.asarray(targets)
        d = dist[arr]
        m = d.min()
        u = int(arr[d == m].min())
        key = (int(m), u)
        if best is None or key < best:
            best = key
    return best[1]


# ---------------------------------------------------------------- deletion


def deletion_candidate(adj: Adjacency, vd: int, inst: Instance, oracle: DistanceOracle) -> Adjacency:
    """Tree obtained by removing branch node ``vd`` and reconnecting the pieces."""
    ks = inst.terminals
    cand = adj_copy(adj)
    anchors = _cut_out(cand, vd, ks)
    adj_prune(cand, ks)
    order = sorted(set(anchors) | ({vd} if vd in ks else set()))
    comps = adj_components(cand)
    for v in order:
        if len(comps) == 1:
            break
        if v not in cand:
            continue
        u = _nearest_in_other_component(cand, comps, v, oracle)
        adj_add_path(cand, oracle.path(v, u))
        adj_break_cycles(cand, ks)
        comps = adj_components(cand)
    while len(comps) > 1:
        # Only reachable if repairs pruned a routing anchor; join leftover pieces by their smallest terminal.
        v = min(t for t in comps[1] if t in ks)
        u = _nearest_in_other_component(cand, comps, v, oracle)
        adj_add_path(cand, oracle.path(v, u))
        adj_break_cycles(cand, ks)
        comps = adj_components(cand)
    return cand


def _deletion_pass(adj: Adjacency, inst: Instance, oracle: DistanceOracle) -> Adjacency:
    current = adj_objective(adj, inst.w)
    tried: set[int] = set()
    while True:
        order = [v for v in _branch_order(adj) if v not in tried]
        if not order:
            return adj
        vd = order[0]
        tried.add(vd)
        cand = deletion_candidate(adj, vd, inst, oracle)
        obj = adj_objective(cand, inst.w)
        if obj < current:
            log.debug("deletion of %d accepted: %s -> %s", vd, current, obj)
            adj, current = cand, obj


def deletion_step(t: MulticastTree, inst: Instance, oracle: DistanceOracle) -> MulticastTree:
    adj = _deletion_pass(t.adjacency(), inst, oracle)
    return MulticastTree.from_adjacency(adj, inst.terminals)


# ---------------------------------------------------------------- alternation


def alternation_candidate(adj: Adjacency, va: int, vn: int, inst: Instance, oracle: DistanceOracle) -> Adjacency:
    """Tree with branch node ``va`` moved to ``vn``: every anchor re-routes to ``vn``."""
    ks = inst.terminals
    cand = adj_copy(adj)
    anchors = _cut_out(cand, va, ks)
    if va in ks:
        anchors.append(va)
    for v in anchors:
        adj_add_path(cand, oracle.path(v, vn))
    adj_break_cycles(cand, ks)
    return cand


def _alternation_pass(adj: Adjacency, inst: Instance, oracle: DistanceOracle) -> Adjacency:
    g = inst.graph
    current = adj_objective(adj, inst.w)
    for start in _branch_order(adj):
        va = start
        for _ in range(g.node_count):
            if va not in adj or len(adj[va]) < 3:
                break
            best = None
            for vn in g.adj[va]:
                cand = alternation_candidate(adj, va, vn, inst, oracle)
                obj = adj_objective(cand, inst.w)
                if obj < current and (best is None or obj < best[0]):
                    best = (obj, vn, cand)
            if best is None:
                break
            log.debug("moved branch %d -> %d: %s -> %s", va, best[1], current, best[0])
            current, va, adj = best[0], best[1], best[2]
    return adj


def alternation_step(t: MulticastTree, inst: Instance, oracle: DistanceOracle) -> MulticastTree:
    adj = _alternation_pass(t.adjacency(), inst, oracle)
    return MulticastTree.from_adjacency(adj, inst.terminals)


# ---------------------------------------------------------------- driver


def baera(inst: Instance, oracle: DistanceOracle | None = None) -> SolveReport:
    """Run both phases and report the final tree with its objective trace."""
    if oracle is None:
        oracle = oracle_for(inst)
    t0 = time.perf_counter()
    oracle.precompute(inst.sorted_terminals())
    t1 = time.perf_counter()

    adj, _ = insertion_tree(inst, oracle, branch_aware=True)
    b1 = adj_branch_count(adj)
    phase1 = adj_objective(adj, inst.w)
    adj = _deletion_pass(adj, inst, oracle)
    after_deletion = adj_objective(adj, inst.w)
    adj = _alternation_pass(adj, inst, oracle)
    after_alternation = adj_objective(adj, inst.w)
    elapsed = time.perf_counter() - t1

    if not phase1 >= after_deletion >= after_alternation:
        raise ContractViolation(f"objective trace increased: {phase1}, {after_deletion}, {after_alternation}")
    if b1 > max(inst.k - 2, 0):
        raise ContractViolation(f"phase 1 produced {b1} branch nodes for k={inst.k}")

    tree = MulticastTree.from_adjacency(adj, inst.terminals)
    trace = {"phase1": phase1, "deletion": after_deletion, "alternation": after_alternation}
    report = make_report("baera", tree, inst, elapsed, trace, inst.resolved_root())
    report.preprocess_time = t1 - t0
    return report
