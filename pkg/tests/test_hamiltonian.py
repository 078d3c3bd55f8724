import random

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bstree.errors import RefusalError
from bstree.graph import build_graph
from bstree.hamiltonian import (
    core_numbers,
    find_ore_subgraph,
    hamiltonian_cycle_ore,
    induced_subgraph,
    is_hamiltonian_cycle,
    ore_condition,
    path_solution,
    terminal_spanning_path,
)
from bstree.problem import Instance
from bstree.topology import gen_complete, gen_cycle, gen_gnm, gen_path, gen_power_law
from bstree.tree import validate_tree

from oracles import to_nx


def _whole(g, ks=()):
    return induced_subgraph(g, g.nodes(), ks)


def test_ore_examples():
    assert ore_condition(_whole(gen_complete(4)))
    assert ore_condition(_whole(gen_cycle(4)))  # opposite corners: 2 + 2 = 4
    assert not ore_condition(_whole(gen_path(4)))


def test_ore_refuses_tiny():
    with pytest.raises(RefusalError):
        ore_condition(_whole(gen_path(2)))


def test_induced_subgraph_closure():
    g = gen_complete(6)
    h = induced_subgraph(g, [0, 2, 4])
    assert h.edges() == [(0, 2), (0, 4), (2, 4)]


def test_cycle_examples():
    h = _whole(gen_complete(4))
    assert is_hamiltonian_cycle(h, hamiltonian_cycle_ore(h))
    h = _whole(gen_cycle(4))
    c = hamiltonian_cycle_ore(h)
    assert is_hamiltonian_cycle(h, c)
    k5 = build_graph(5, [e for e in gen_complete(5).edges if e != (1, 3)])
    h = _whole(k5)
    c = hamiltonian_cycle_ore(h)
    assert is_hamiltonian_cycle(h, c)
    pairs = {frozenset((c[i], c[(i + 1) % 5])) for i in range(5)}
    assert frozenset((1, 3)) not in pairs


def test_cycle_refuses_without_ore():
    with pytest.raises(RefusalError):
        hamiltonian_cycle_ore(_whole(gen_path(5)))


@st.composite
def ore_graphs(draw):
    n = draw(st.integers(3, 15))
    p = draw(st.floats(0.5, 1.0))
    rnd = draw(st.randoms(use_true_random=False))
    edges = [(i, j) for i in range(n) for j in range(i + 1, n) if rnd.random() < p]
    return build_graph(n, edges)


@settings(max_examples=150, deadline=None)
@given(ore_graphs())
def test_cycle_always_valid_under_ore(g):
    h = _whole(g)
    if not ore_condition(h):
        return
    assert is_hamiltonian_cycle(h, hamiltonian_cycle_ore(h))


def test_spanning_path_examples():
    p = terminal_spanning_path([0, 1, 2, 3], {0, 2})
    assert {p[0], p[-1]} == {0, 2} and len(p) - 1 <= 3
    p = terminal_spanning_path([0, 1, 2, 3, 4], {0, 1, 2, 3, 4})
    assert len(p) - 1 == 4 and sorted(p) == [0, 1, 2, 3, 4]
    # Both cut directions give 3 edges; ties go to the smaller sequence.
    assert terminal_spanning_path([0, 1, 2, 3, 4, 5], {1, 4}) == [1, 0, 5, 4]


def test_spanning_path_rejects_foreign_terminal():
    with pytest.raises(RefusalError):
        terminal_spanning_path([0, 1, 2], {5})


@settings(max_examples=150, deadline=None)
@given(st.integers(3, 15), st.randoms(use_true_random=False))
def test_spanning_path_properties(n, rnd):
    cycle = list(range(n))
    rnd.shuffle(cycle)
    ks = set(rnd.sample(cycle, rnd.randint(2, n)))
    p = terminal_spanning_path(cycle, ks)
    assert p[0] in ks and p[-1] in ks
    assert ks <= set(p)
    assert len(p) - 1 <= n
    if n <= (len(ks) - 1) * len(ks):
        assert (len(p) - 1) / max(len(ks) - 1, 1) <= len(ks)
    # Consecutive path nodes are neighbours on the cycle.
    pos = {v: i for i, v in enumerate(cycle)}
    assert all((pos[a] - pos[b]) % n in (1, n - 1) for a, b in zip(p, p[1:]))


def test_core_numbers_match_networkx():
    for seed in range(5):
        g = gen_gnm(60, 200, seed)
        assert core_numbers(g) == [nx.core_number(to_nx(g))[v] for v in g.nodes()]


def test_path_solution_on_complete_graph():
    rep = path_solution(Instance.create(gen_complete(6), {0, 2, 5}, 3))
    assert rep is not None
    assert rep.cost.branch_count == 0
    assert validate_tree(rep.tree, gen_complete(6), {0, 2, 5}) == []
    # The whole graph is the qualifying core, so the path is cut from a 6-cycle.
    assert 2 <= rep.cost.edge_count <= 6


def test_path_solution_none_on_trees():
    assert path_solution(Instance.create(gen_path(6), {0, 2, 5}, 3)) is None
    assert path_solution(Instance.create(gen_power_law(30, 1, 2), {0, 7, 9}, 3)) is None


def test_path_solution_none_with_pendant_terminal():
    g = build_graph(6, list(gen_complete(5).edges) + [(4, 5)])
    assert path_solution(Instance.create(g, {0, 1, 5}, 3)) is None
    assert path_solution(Instance.create(g, {0, 1, 2}, 3)) is not None


def test_path_solution_small_k():
    g = gen_cycle(5)
    assert path_solution(Instance.create(g, {0, 1}, 3)).cost.edge_count == 1
    assert path_solution(Instance.create(g, {0, 2}, 3)) is None
    assert path_solution(Instance.create(g, {4}, 3)).objective == 0


def test_found_subgraph_meets_all_conditions():
    rng = random.Random(0)
    found = 0
    for seed in range(60):
        g = gen_gnm(14, rng.randint(40, 80), seed)
        ks = set(rng.sample(range(14), rng.randint(3, 6)))
        h = find_ore_subgraph(g, ks)
        if h is None:
            continue
        found += 1
        assert h.contains_terminals and h.size_bound_ok and h.satisfies_ore
        assert len(nx.node_connected_component(nx.Graph(h.edges()), min(ks))) == h.size
        rep = path_solution(Instance.create(g, ks, 10))
        assert rep.cost.branch_count == 0
        assert rep.cost.edge_count <= h.size
        assert validate_tree(rep.tree, g, ks) == []
    assert found > 10
