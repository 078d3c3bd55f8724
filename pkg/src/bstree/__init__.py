"""Branch-aware Steiner trees: multicast trees that trade edges for branch nodes."""

from .baera import baera
from .baselines import shortest_path_tree, takahashi_steiner_tree
from .errors import (
    BstError,
    ContractViolation,
    InfeasibleInstanceError,
    InputError,
    ParseError,
    RefusalError,
)
from .exact import brute_force_opt
from .graph import DistanceOracle, Graph, all_pairs_shortest_paths, build_graph, shortest_path_to_set
from .hamiltonian import hamiltonian_cycle_ore, ore_condition, path_solution, terminal_spanning_path
from .lp import export_lp
from .problem import Instance, SolveReport
from .topology import gap_instance, gen_power_law, parse_edge_list, parse_gml, sample_terminals
from .tree import MulticastTree, TreeCost, break_cycles, objective, validate_tree

__all__ = [
    "BstError",
    "ContractViolation",
    "DistanceOracle",
    "Graph",
    "InfeasibleInstanceError",
    "InputError",
    "Instance",
    "MulticastTree",
    "ParseError",
    "RefusalError",
    "SolveReport",
    "TreeCost",
    "all_pairs_shortest_paths",
    "baera",
    "break_cycles",
    "brute_force_opt",
    "build_graph",
    "export_lp",
    "gap_instance",
    "gen_power_law",
    "hamiltonian_cycle_ore",
    "objective",
    "ore_condition",
    "parse_edge_list",
    "parse_gml",
    "path_solution",
    "sample_terminals",
    "shortest_path_to_set",
    "shortest_path_tree",
    "takahashi_steiner_tree",
    "terminal_spanning_path",
    "validate_tree",
]
