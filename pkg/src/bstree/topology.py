"""Topology ingestion, synthetic generators, terminal sampling and gap instances."""

from __future__ import annotations

import logging
import random
import re
from dataclasses import dataclass
from pathlib import Path

from .errors import InputError, ParseError, RefusalError
from .graph import Graph, build_graph, connected_components

log = logging.getLogger(__name__)

GAP_NODE_CAP = 2_000_000


# ---------------------------------------------------------------- GML


_TOKEN = re.compile(r'"(?:[^"\\\n]|\\.)*"|\[|\]|#[^\n]*|[^\s\[\]"]+|\S')


def _tokens(text: str):
    """Yield ``(token, line)``; strings keep their quotes, comments are skipped."""
    line = 1
    last = 0
    for m in _TOKEN.finditer(text):
        line += text.count("\n", last, m.start())
        last = m.start()
        tok = m.group(0)
        if tok.startswith("#"):
            continue
        if tok == '"':
            raise ParseError("unterminated string", line)
        yield tok, line


def _parse_gml_tree(text: str) -> list:
    """Nested ``[(key, value, line)]`` lists; block values are lists."""
    stack: list[list] = [[]]
    key = None
    key_line = 0
    line = 1
    for tok, line in _tokens(text):
        if key is None:
            if tok == "]":
                if len(stack) == 1:
                    raise ParseError("unbalanced ']'", line)
                stack.pop()
                continue
            if tok == "[" or tok.startswith('"'):
                raise ParseError(f"expected a key, got {tok!r}", line)
            key, key_line = tok, line
            continue
        if tok == "[":
            child: list = []
            stack[-1].append((key, child, key_line))
            stack.append(child)
        elif tok == "]":
            raise ParseError(f"key {key!r} has no value", line)
        else:
            stack[-1].append((key, tok[1:-1] if tok.startswith('"') else tok, key_line))
        key = None
    if key is not None:
        raise ParseError(f"key {key!r} has no value", key_line)
    if len(stack) != 1:
        raise ParseError("unbalanced brackets: missing ']'", line)
    return stack[0]


@dataclass
class GmlResult:
    graph: Graph
    labels: list[str]
    dropped_self_loops: int
    dropped_parallel: int


def read_gml(text: str) -> GmlResult:
    """Parse the ``graph [ node [ id ] edge [ source target ] ]`` subset of GML.

    Node ids are remapped to ``0..n-1`` in order of appearance. Self-loops and
    repeated edges are dropped and counted. Every other key is ignored.
    """
    top = _parse_gml_tree(text)
    graphs = [(v, line) for k, v, line in top if k == "graph"]
    if not graphs:
        raise ParseError("no 'graph [ ... ]' block")
    body, gline = graphs[0]
    if not isinstance(body, list):
        raise ParseError("'graph' must be a block", gline)

    index: dict[str, int] = {}
    labels: list[str] = []
    raw_edges: list[tuple[str, str, int]] = []
    for key, val, line in body:
        if key == "node":
            if not isinstance(val, list):
                raise ParseError("'node' must be a block", line)
            fields = {k: v for k, v, _ in val if not isinstance(v, list)}
            if "id" not in fields:
                raise ParseError("node without id", line)
            nid = fields["id"]
            if nid in index:
                raise ParseError(f"duplicate node id {nid}", line)
            index[nid] = len(labels)
            labels.append(str(fields.get("label", nid)))
        elif key == "edge":
            if not isinstance(val, list):
                raise ParseError("'edge' must be a block", line)
            fields = {k: v for k, v, _ in val if not isinstance(v, list)}
            if "source" not in fields or "target" not in fields:
                raise ParseError("edge needs source and target", line)
            raw_edges.append((fields["source"], fields["target"], line))

    seen: set[tuple[int, int]] = set()
    loops = parallel = 0
    pairs = []
    for s, t, line in raw_edges:
        if s not in index or t not in index:
            missing = s if s not in index else t
            raise ParseError(f"edge endpoint {missing} is not a node", line)
        u, v = index[s], index[t]
        if u == v:
            loops += 1
            continue
        e = (u, v) if u < v else (v, u)
        if e in seen:
            parallel += 1
            continue
        seen.add(e)
        pairs.append(e)
    if loops or parallel:
        log.warning("GML cleanup dropped %d self-loops and %d parallel edges", loops, parallel)
    return GmlResult(build_graph(len(labels), pairs), labels, loops, parallel)


def parse_gml(text: str) -> Graph:
    return read_gml(text).graph


def parse_edge_list(text: str) -> Graph:
    """Whitespace-separated ``u v`` lines; ``#`` starts a comment.

    The node count is one past the largest id seen.
    """
    pairs = []
    top = -1
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(f"expected two ids, got {raw!r}", lineno)
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError(f"non-integer token in {raw!r}", lineno) from None
        if u < 0 or v < 0:
            raise ParseError("negative node id", lineno)
        if u == v:
            raise ParseError(f"self-loop on node {u}", lineno)
        pairs.append((u, v))
        top = max(top, u, v)
    return build_graph(top + 1, pairs)


def load_topology(path: str | Path) -> Graph:
    p = Path(path)
    text = p.read_text()
    if p.suffix.lower() == ".gml":
        return parse_gml(text)
    return parse_edge_list(text)


# ---------------------------------------------------------------- generators


def gen_power_law(n: int, attach_m: int, seed: int) -> Graph:
    """Preferential attachment grown from a clique on ``attach_m`` nodes.

    Each new node links to ``attach_m`` distinct existing nodes picked with
    probability proportional to degree, so the result is connected with
    ``m(m-1)/2 + m(n-m)`` edges.
    """
    if attach_m < 1 or n <= attach_m:
        raise InputError(f"need n > attach_m >= 1, got n={n}, attach_m={attach_m}")
    rng = random.Random(seed)
    m = attach_m
    edges = [(i, j) for i in range(m) for j in range(i + 1, m)]
    # Each node appears once per incident edge.
    ends = [v for e in edges for v in e]
    for new in range(m, n):
        if ends:
            targets: set[int] = set()
            while len(targets) < m:
                targets.add(ends[rng.randrange(len(ends))])
        else:
            targets = set(range(new))
        for t in sorted(targets):
            edges.append((t, new))
            ends.append(t)
            ends.append(new)
    return build_graph(n, edges)


def gen_grid(rows: int, cols: int) -> Graph:
    edges = []
    for r in range(rows):
        for c in range(cols):
            v = r * cols + c
            if c + 1 < cols:
                edges.append((v, v + 1))
            if r + 1 < rows:
                edges.append((v, v + cols))
    return build_graph(rows * cols, edges)


def gen_complete(n: int) -> Graph:
    return build_graph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def gen_cycle(n: int) -> Graph:
    return build_graph(n, [(i, (i + 1) % n) for i in range(n)] if n >= 3 else [])


def gen_path(n: int) -> Graph:
    return build_graph(n, [(i, i + 1) for i in range(n - 1)])


def gen_gnm(n: int, m: int, seed: int, connected: bool = True) -> Graph:
    """Uniform random graph with ``m`` edges; a random spanning tree first when ``connected``."""
    rng = random.Random(seed)
    edges: set[tuple[int, int]] = set()
    if connected and n > 1:
        order = list(range(n))
        rng.shuffle(order)
        for i in range(1, n):
            u, v = order[i], order[rng.randrange(i)]
            edges.add((min(u, v), max(u, v)))
    limit = n * (n - 1) // 2
    m = min(m, limit)
    while len(edges) < m:
        u, v = rng.randrange(n), rng.randrange(n)
        if u != v:
            edges.add((min(u, v), max(u, v)))
    return build_graph(n, sorted(edges))


def _spec_params(body: str) -> dict[str, int]:
    params = {}
    for part in filter(None, body.split(",")):
        if "=" not in part:
            raise InputError(f"bad generator parameter {part!r}")
        k, v = part.split("=", 1)
        try:
            params[k.strip()] = int(v)
        except ValueError:
            raise InputError(f"generator parameter {k} must be an integer") from None
    return params


def generate(spec: str, seed: int = 0) -> Graph:
    """Build a graph from a spec string such as ``pa:n=10000,m=2``.

    Kinds: ``pa`` (n, m, seed), ``gnm`` (n, m, seed), ``grid`` (rows, cols),
    ``complete`` (n), ``cycle`` (n), ``path`` (n). A ``seed`` parameter in
    the spec overrides the ``seed`` argument.
    """
    kind, _, body = spec.partition(":")
    p = _spec_params(body)
    s = p.get("seed", seed)
    try:
        if kind == "pa":
            return gen_power_law(p["n"], p.get("m", 2), s)
        if kind == "gnm":
            return gen_gnm(p["n"], p["m"], s)
        if kind == "grid":
            return gen_grid(p["rows"], p["cols"])
        if kind == "complete":
            return gen_complete(p["n"])
        if kind == "cycle":
            return gen_cycle(p["n"])
        if kind == "path":
            return gen_path(p["n"])
    except KeyError as exc:
        raise InputError(f"generator {kind!r} needs parameter {exc.args[0]}") from None
    raise InputError(f"unknown generator {kind!r}")


# ---------------------------------------------------------------- sampling


def sample_terminals(g: Graph, k: int, seed: int) -> frozenset[int]:
    """``k`` distinct nodes drawn uniformly from the largest component."""
    if k < 1:
        raise InputError(f"k must be >= 1, got {k}")
    comps = connected_components(g)
    if not comps:
        raise InputError("graph has no nodes")
    largest = max(comps, key=lambda c: (len(c), -c[0]))
    if k > len(largest):
        raise InputError(f"k={k} exceeds the largest component ({len(largest)} nodes)")
    return frozenset(random.Random(seed).sample(largest, k))


# ---------------------------------------------------------------- gap construction


@dataclass(frozen=True)
class GapInstance:
    graph: Graph
    terminals: frozenset[int]
    w: int
    hub: int
    copies: int


def gap_instance(gh: Graph, v: int, p: int, cap: int = GAP_NODE_CAP) -> GapInstance:
    """``n**p`` copies of ``gh`` whose node ``v`` all hang off one extra hub.

    Copy ``i`` occupies ids ``i*n .. i*n+n-1``; the hub is the last node.
    Terminals are every node but the hub and the branch weight equals the
    total node count ``h = n**(p+1) + 1``.
    """
    n = gh.node_count
    if p < 1:
        raise InputError(f"p must be >= 1, got {p}")
    if not 0 <= v < n:
        raise InputError(f"node {v} not in base graph")
    copies = n**p
    h = copies * n + 1
    if h > cap:
        raise RefusalError(f"gap instance would have {h} nodes (cap {cap})")
    hub = h - 1
    edges = []
    for i in range(copies):
        off = i * n
        edges.extend((a + off, b + off) for a, b in gh.edges)
        edges.append((off + v, hub))
    g = build_graph(h, edges)
    return GapInstance(g, frozenset(range(hub)), h, hub, copies)
