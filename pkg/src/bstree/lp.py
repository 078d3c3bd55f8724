"""Integer program for the branch-aware Steiner tree, written in CPLEX LP format.

Variables:
    pi_l_u_v   1 if directed edge u->v carries the root-to-l flow (l a destination)
    eps_u_v    1 if undirected edge {u, v} is in the tree (u < v)
    beta_v     1 if v is a branch node

Rows, per destination l unless noted:
    c1_l       net outflow of the root is 1
    c2_l       net inflow of l is 1
    c3_l_u     flow conservation at every other node u
    c4_l_u_v   pi_l_u_v <= eps_{u,v} for both directions of every edge
    c5_u       (sum_v eps_{u,v} - 2) / |N_u| <= beta_u, once per node
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import ParseError, RefusalError
from .problem import Instance
from .tree import MulticastTree

DEFAULT_VARIABLE_CAP = 250_000


@dataclass
class Row:
    name: str
    coeffs: dict[str, float]
    sense: str  # "<=", ">=", "="
    rhs: float

    def activity(self, x: dict[str, float]) -> float:
        return sum(c * x.get(v, 0.0) for v, c in self.coeffs.items())

    def satisfied(self, x: dict[str, float], tol: float = 1e-9) -> bool:
        a = self.activity(x)
        if self.sense == "<=":
            return a <= self.rhs + tol
        if self.sense == ">=":
            return a >= self.rhs - tol
        return abs(a - self.rhs) <= tol


@dataclass
class LpModel:
    objective: dict[str, float]
    rows: list[Row]
    binaries: list[str]
    sense: str = "min"
    comment: str = ""

    def evaluate(self, x: dict[str, float]) -> float:
        return sum(c * x.get(v, 0.0) for v, c in self.objective.items())

    def violations(self, x: dict[str, float], tol: float = 1e-9) -> list[str]:
        out = [r.name for r in self.rows if not r.satisfied(x, tol)]
        out.extend(f"{v} not binary" for v in self.binaries if x.get(v, 0.0) not in (0, 1, 0.0, 1.0))
        return out

    def to_lp(self) -> str:
        lines = []
        if self.comment:
            lines.extend(f"\\ {c}" for c in self.comment.splitlines())
        lines.append("Minimize" if self.sense == "min" else "Maximize")
        lines.extend(_wrap(" obj:", _terms(self.objective)))
        lines.append("Subject To")
        for r in self.rows:
            lines.extend(_wrap(f" {r.name}:", _terms(r.coeffs) + [r.sense, _num(r.rhs)]))
        lines.append("Binary")
        for i in range(0, len(self.binaries), 8):
            lines.append(" " + " ".join(self.binaries[i : i + 8]))
        lines.append("End")
        return "\n".join(lines) + "\n"


def _num(x: float) -> str:
    if float(x).is_integer():
        return str(int(x))
    return repr(float(x))


def _terms(coeffs: dict[str, float]) -> list[str]:
    out = []
    for i, (v, c) in enumerate(coeffs.items()):
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        body = v if mag == 1 else f"{_num(mag)} {v}"
        if i == 0:
            out.append(body if sign == "+" else f"- {body}")
        else:
            out.append(f"{sign} {body}")
    if not out:
        out.append("0 dummy_zero")
    return out


def _wrap(head: str, parts: list[str], width: int = 100) -> list[str]:
    lines = []
    cur = head
    for p in parts:
        if len(cur) + 1 + len(p) > width and cur.strip():
            lines.append(cur)
            cur = "   "
        cur += " " + p
    lines.append(cur)
    return lines


def pi_var(l: int, u: int, v: int) -> str:
    return f"pi_{l}_{u}_{v}"


def eps_var(u: int, v: int) -> str:
    return f"eps_{min(u, v)}_{max(u, v)}"


def beta_var(v: int) -> str:
    return f"beta_{v}"


def build_model(inst: Instance, root: int | None = None, variable_cap: int = DEFAULT_VARIABLE_CAP) -> LpModel:
    """Assemble the integer program for ``inst`` rooted at ``root`` (default: resolved root)."""
    g = inst.graph
    if inst.k < 2:
        raise RefusalError("the model needs at least two terminals (no destinations otherwise)")
    r = inst.resolved_root() if root is None else root
    if r not in inst.terminals:
        raise RefusalError(f"root {r} is not a terminal")
    dests = [t for t in inst.sorted_terminals() if t != r]
    n_vars = len(dests) * 2 * g.edge_count + g.edge_count + g.node_count
    if n_vars > variable_cap:
        raise RefusalError(f"model would have {n_vars} variables (cap {variable_cap})")

    edges = sorted(g.edges)
    objective: dict[str, float] = {eps_var(u, v): 1 for u, v in edges}
    if inst.w:
        objective.update({beta_var(v): inst.w for v in g.nodes()})

    rows: list[Row] = []
    for l in dests:
        rows.append(Row(f"c1_{l}", _net(l, r, g.adj[r], out=True), "=", 1))
    for l in dests:
        rows.append(Row(f"c2_{l}", _net(l, l, g.adj[l], out=False), "=", 1))
    for l in dests:
        for u in g.nodes():
            if u in (l, r):
                continue
            rows.append(Row(f"c3_{l}_{u}", _net(l, u, g.adj[u], out=False), "=", 0))
    for l in dests:
        for a, b in edges:
            for u, v in ((a, b), (b, a)):
                rows.append(Row(f"c4_{l}_{u}_{v}", {pi_var(l, u, v): 1, eps_var(u, v): -1}, "<=", 0))
    for u in g.nodes():
        nu = len(g.adj[u])
        if nu == 0:
            # Isolated node: the scaled row is undefined; keep the row count with a vacuous bound.
            rows.append(Row(f"c5_{u}", {beta_var(u): 1}, ">=", 0))
            continue
        coeffs = {eps_var(u, v): 1 / nu for v in g.adj[u]}
        coeffs[beta_var(u)] = -1
        rows.append(Row(f"c5_{u}", coeffs, "<=", 2 / nu))

    binaries = [pi_var(l, u, v) for l in dests for a, b in edges for u, v in ((a, b), (b, a))]
    binaries += [eps_var(u, v) for u, v in edges]
    binaries += [beta_var(v) for v in g.nodes()]
    comment = f"branch-aware Steiner tree: {g.node_count} nodes, {g.edge_count} edges, root {r}, w {_num(inst.w)}"
    return LpModel(objective, rows, binaries, comment=comment)


def _net(l: int, u: int, nbrs, out: bool) -> dict[str, float]:
    """Outflow minus inflow at ``u`` (or inflow minus outflow when ``out`` is False)."""
    coeffs: dict[str, float] = {}
    if out:
        coeffs.update((pi_var(l, u, v), 1) for v in nbrs)
        coeffs.update((pi_var(l, v, u), -1) for v in nbrs)
    else:
        coeffs.update((pi_var(l, v, u), 1) for v in nbrs)
        coeffs.update((pi_var(l, u, v), -1) for v in nbrs)
    return coeffs


def export_lp(inst: Instance, root: int | None = None, variable_cap: int = DEFAULT_VARIABLE_CAP) -> str:
    return build_model(inst, root, variable_cap).to_lp()


def expected_row_counts(inst: Instance) -> dict[str, int]:
    g = inst.graph
    L = inst.k - 1
    return {"c1": L, "c2": L, "c3": L * (g.node_count - 2), "c4": L * 2 * g.edge_count, "c5": g.node_count}


def tree_assignment(tree: MulticastTree, inst: Instance, root: int) -> dict[str, float]:
    """Variable values encoding ``tree``: root-to-destination paths, tree edges, branch nodes."""
    adj = tree.adjacency()
    parent = {root: None}
    stack = [root]
    while stack:
        u = stack.pop()
        for v in adj[u]:
            if v not in parent:
                parent[v] = u
                stack.append(v)
    x: dict[str, float] = {}
    for l in inst.sorted_terminals():
        if l == root:
            continue
        v = l
        while parent[v] is not None:
            u = parent[v]
            x[pi_var(l, u, v)] = 1
            v = u
    for u, v in tree.edges:
        x[eps_var(u, v)] = 1
    for v in tree.branch_nodes:
        x[beta_var(v)] = 1
    return x


# ---------------------------------------------------------------- reading back

_ROW_HEAD = re.compile(r"^\s*([A-Za-z_][\w.]*)\s*:(.*)$")
_LIN_TOKEN = re.compile(r"<=|>=|=|\d+(?:\.\d*)?(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?|[+-]|[A-Za-z_][\w.]*|\S")
_SECTIONS = {"minimize": "obj", "maximize": "obj", "subject to": "rows", "st": "rows", "s.t.": "rows",
             "binary": "bin", "binaries": "bin", "end": "end"}


def _parse_linear(tokens: list[str], line: int) -> dict[str, float]:
    coeffs: dict[str, float] = {}
    sign = 1.0
    coef = None
    for tok in tokens:
        if tok in "+-":
            sign = -1.0 if tok == "-" else 1.0
            continue
        if tok[0].isdigit() or tok[0] == ".":
            coef = float(tok)
            continue
        if not (tok[0].isalpha() or tok[0] == "_"):
            raise ParseError(f"unexpected token {tok!r}", line)
        coeffs[tok] = coeffs.get(tok, 0.0) + sign * (1.0 if coef is None else coef)
        sign, coef = 1.0, None
    return coeffs


def read_lp(text: str) -> LpModel:
    """Parse the LP subset emitted by :meth:`LpModel.to_lp`."""
    section = None
    statements: list[tuple[str, str, int]] = []
    binaries: list[str] = []
    sense = "min"
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("\\", 1)[0].rstrip()
        if not line.strip():
            continue
        key = line.strip().lower()
        if key in _SECTIONS:
            section = _SECTIONS[key]
            if key == "maximize":
                sense = "max"
            continue
        if section == "bin":
            binaries.extend(line.split())
        elif section in ("obj", "rows"):
            if line.startswith("   "):
                if not statements:
                    raise ParseError("continuation before any row", lineno)
                sec, prev, ln = statements[-1]
                statements[-1] = (sec, prev + " " + line.strip(), ln)
            elif _ROW_HEAD.match(line):
                statements.append((section, line, lineno))
            else:
                raise ParseError(f"expected 'name: expression', got {raw!r}", lineno)
        elif section is None:
            raise ParseError(f"content outside a section: {raw!r}", lineno)
    objective: dict[str, float] = {}
    rows: list[Row] = []
    for sec, stmt, lineno in statements:
        m = _ROW_HEAD.match(stmt)
        name, body = m.group(1), m.group(2)
        toks = _LIN_TOKEN.findall(body)
        if sec == "obj":
            objective = {k: v for k, v in _parse_linear(toks, lineno).items() if k != "dummy_zero"}
            continue
        ops = [i for i, t in enumerate(toks) if t in ("<=", ">=", "=")]
        if len(ops) != 1:
            raise ParseError(f"row {name} needs exactly one comparison", lineno)
        i = ops[0]
        try:
            rhs = float(toks[i + 1])
        except (IndexError, ValueError):
            raise ParseError(f"row {name} has a bad right-hand side", lineno) from None
        rows.append(Row(name, _parse_linear(toks[:i], lineno), toks[i], rhs))
    return LpModel(objective, rows, binaries, sense)
