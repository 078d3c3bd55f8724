"""Comparison solvers: shortest-path tree and Takahashi-Matsuyama insertion."""

from __future__ import annotations

import time

from .baera import insertion_tree, oracle_for
from .graph import DistanceOracle
from .problem import Instance, SolveReport, make_report
from .tree import MulticastTree, adj_add_path


def shortest_path_tree(inst: Instance, oracle: DistanceOracle | None = None) -> SolveReport:
    """Union of the canonical root-to-terminal shortest paths.

    All paths come from the BFS tree of the root, so their union is a tree.
    """
    if oracle is None:
        oracle = oracle_for(inst)
    t0 = time.perf_counter()
    oracle.precompute(inst.sorted_terminals())
    t1 = time.perf_counter()
    inst.check_feasible(oracle)
    root = inst.resolved_root()
    adj = {root: set()}
    for t in inst.sorted_terminals():
        if t != root:
            adj_add_path(adj, oracle.path(root, t))
    tree = MulticastTree.from_adjacency(adj, inst.terminals)
    report = make_report("spt", tree, inst, time.perf_counter() - t1, root=root)
    report.preprocess_time = t1 - t0
    return report


def takahashi_steiner_tree(inst: Instance, oracle: DistanceOracle | None = None) -> SolveReport:
    """Nearest-terminal insertion with plain lowest-id tie-breaking."""
    if oracle is None:
        oracle = oracle_for(inst)
    t0 = time.perf_counter()
    oracle.precompute(inst.sorted_terminals())
    t1 = time.perf_counter()
    adj, _ = insertion_tree(inst, oracle, branch_aware=False)
    tree = MulticastTree.from_adjacency(adj, inst.terminals)
    report = make_report("st", tree, inst, time.perf_counter() - t1, root=inst.resolved_root())
    report.preprocess_time = t1 - t0
    return report
