"""Independent reference implementations and shared instance corpora for the tests."""

from __future__ import annotations

import itertools
import random

import networkx as nx

from bstree.graph import Graph
from bstree.problem import Instance
from bstree.topology import gen_gnm, sample_terminals


def to_nx(g: Graph) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(range(g.node_count))
    h.add_edges_from(g.edges)
    return h


def naive_opt(g: Graph, terminals, w: float) -> tuple[float, int, int]:
    """Minimum (objective, c, b) over all edge subsets forming a tree that spans ``terminals``.

    A plain 2^|E| scan with a union-find acyclicity check; no pruning, no
    shared code with the package.
    """
    ks = set(terminals)
    if len(ks) == 1:
        return (0.0, 0, 0)
    edges = sorted(g.edges)
    best = None
    for r in range(len(ks) - 1, len(edges) + 1):
        for subset in itertools.combinations(edges, r):
            parent: dict[int, int] = {}

            def find(x):
                parent.setdefault(x, x)
                while parent[x] != x:
                    parent[x] = parent[parent[x]]
                    x = parent[x]
                return x

            ok = True
            deg: dict[int, int] = {}
            for u, v in subset:
                a, b = find(u), find(v)
                if a == b:
                    ok = False
                    break
                parent[a] = b
                deg[u] = deg.get(u, 0) + 1
                deg[v] = deg.get(v, 0) + 1
            if not ok or not ks <= deg.keys():
                continue
            roots = {find(x) for x in deg}
            if len(roots) != 1:
                continue
            b = sum(d >= 3 for d in deg.values())
            key = (r + w * b, r, b)
            if best is None or key < best:
                best = key
    return best


def small_instance(seed: int, k_choices=(3, 4, 5), w_choices=(0, 1, 5, 20), max_nodes=12, max_edges=20) -> Instance:
    """Seeded connected random instance with at most ``max_nodes`` nodes and ``max_edges`` edges."""
    rng = random.Random(seed)
    k = k_choices[seed % len(k_choices)]
    w = w_choices[(seed // len(k_choices)) % len(w_choices)]
    n = rng.randint(max(k, 5), max_nodes)
    m = rng.randint(n - 1, min(max_edges, n * (n - 1) // 2))
    g = gen_gnm(n, m, seed)
    return Instance.create(g, sample_terminals(g, k, seed), w, seed)


def small_corpus(count: int = 240, **kw) -> list[Instance]:
    return [small_instance(s, **kw) for s in range(count)]
