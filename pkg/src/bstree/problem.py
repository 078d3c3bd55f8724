"""Problem instances and solver reports."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable

from .errors import InfeasibleInstanceError, InputError
from .graph import DistanceOracle, Graph, UNREACHABLE
from .tree import MulticastTree, TreeCost


@dataclass(frozen=True)
class Instance:
    """A graph, terminal set ``K``, branch weight ``w`` and seed.

    When ``root`` is None the solvers pick one uniformly from ``K`` using
    ``seed``; see :meth:`resolved_root`.
    """

    graph: Graph
    terminals: frozenset[int]
    w: float
    seed: int = 0
    root: int | None = None

    def __post_init__(self):
        ks = frozenset(int(t) for t in self.terminals)
        object.__setattr__(self, "terminals", ks)
        if not ks:
            raise InputError("terminal set must be nonempty")
        bad = [t for t in ks if not 0 <= t < self.graph.node_count]
        if bad:
            raise InputError(f"terminals {sorted(bad)} not in graph")
        if self.w < 0:
            raise InputError(f"branch weight must be nonnegative, got {self.w}")
        if self.root is not None and self.root not in ks:
            raise InputError(f"root {self.root} is not a terminal")

    @classmethod
    def create(cls, graph: Graph, terminals: Iterable[int], w: float, seed: int = 0, root: int | None = None) -> "Instance":
        return cls(graph, frozenset(terminals), w, seed, root)

    @property
    def k(self) -> int:
        return len(self.terminals)

    def sorted_terminals(self) -> list[int]:
        return sorted(self.terminals)

    def resolved_root(self) -> int:
        if self.root is not None:
            return self.root
        return random.Random(self.seed).choice(self.sorted_terminals())

    def check_feasible(self, oracle: DistanceOracle) -> None:
        """Raise if some terminal is unreachable from the root."""
        r = self.resolved_root()
        dist = oracle.row(r)[0]
        unreachable = [t for t in self.sorted_terminals() if dist[t] >= UNREACHABLE]
        if unreachable:
            raise InfeasibleInstanceError(f"terminals {unreachable} unreachable from root {r}")


@dataclass
class SolveReport:
    algorithm: str
    tree: MulticastTree
    cost: TreeCost
    seed: int
    wall_time: float = 0.0
    trace: dict[str, float] = field(default_factory=dict)
    root: int | None = None
    preprocess_time: float = 0.0

    @property
    def objective(self) -> float:
        return self.cost.objective


def make_report(algorithm: str, tree: MulticastTree, inst: Instance, wall_time: float = 0.0, trace=None, root=None) -> SolveReport:
    cost = TreeCost.from_counts(tree.edge_count, tree.branch_count, inst.w)
    return SolveReport(algorithm, tree, cost, inst.seed, wall_time, dict(trace or {}), root)
