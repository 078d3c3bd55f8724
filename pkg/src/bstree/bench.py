"""Batch experiments: seeded sampling, solver sweeps, CSV rows and summaries."""

from __future__ import annotations

import csv
import hashlib
import io
import os
import statistics
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Callable, Iterable, Sequence

from .baera import baera, graph_oracle, oracle_for
from .baselines import shortest_path_tree, takahashi_steiner_tree
from .errors import InputError
from .exact import brute_force_opt
from .graph import DistanceOracle, Graph
from .hamiltonian import path_solution
from .problem import Instance, SolveReport
from .topology import generate, load_topology, sample_terminals

ALGORITHMS: dict[str, Callable] = {
    "baera": baera,
    "spt": shortest_path_tree,
    "st": takahashi_steiner_tree,
    "exact": lambda inst, oracle=None: brute_force_opt(inst),
    "path": lambda inst, oracle=None: path_solution(inst),
}


@dataclass
class ExperimentConfig:
    topology: str  # file path or generator spec such as "pa:n=1000,m=2"
    k_values: list[int]
    w_values: list[float]
    samples: int = 1
    seed: int = 0
    algos: list[str] = field(default_factory=lambda: ["baera", "spt", "st"])
    out: str | None = None

    def __post_init__(self):
        if self.samples < 1:
            raise InputError(f"sample count must be >= 1, got {self.samples}")
        if not self.k_values or min(self.k_values) < 1:
            raise InputError(f"k values must be >= 1, got {self.k_values}")
        if not self.w_values or min(self.w_values) < 0:
            raise InputError(f"w values must be >= 0, got {self.w_values}")
        unknown = [a for a in self.algos if a not in ALGORITHMS]
        if unknown:
            raise InputError(f"unknown algorithms {unknown}; choose from {sorted(ALGORITHMS)}")


@dataclass
class ResultRow:
    topology: str
    nodes: int
    edges: int
    algorithm: str
    k: int
    w: float
    seed: int
    c: int
    b: int
    objective: float
    runtime_ms: float
    preprocess_ms: float = 0.0
    sample: int = 0


COLUMNS = [f.name for f in fields(ResultRow)]
TIMING_COLUMNS = ("runtime_ms", "preprocess_ms")


def sample_seed(master: int, index: int) -> int:
    """Stable 32-bit seed for sample ``index`` of a run seeded with ``master``."""
    digest = hashlib.sha256(f"{master}:{index}".encode()).digest()
    return int.from_bytes(digest[:4], "big")


def is_generator_spec(source: str) -> bool:
    return ":" in source and not Path(source).exists()


def load_graph(source: str, seed: int = 0) -> tuple[Graph, str]:
    """Graph plus a short identifier for the CSV ``topology`` column."""
    if is_generator_spec(source):
        return generate(source, seed), source
    return load_topology(source), Path(source).stem


def row_from_report(report: SolveReport, g: Graph, topology: str, k: int, w: float, sample: int = 0) -> ResultRow:
    cost = report.cost
    return ResultRow(
        topology=topology,
        nodes=g.node_count,
        edges=g.edge_count,
        algorithm=report.algorithm,
        k=k,
        w=w,
        seed=report.seed,
        c=cost.edge_count,
        b=cost.branch_count,
        objective=cost.objective,
        runtime_ms=report.wall_time * 1000.0,
        preprocess_ms=report.preprocess_time * 1000.0,
        sample=sample,
    )


def solve_all(inst: Instance, algos: Sequence[str], oracle: DistanceOracle | None = None) -> list[SolveReport]:
    """Run each algorithm on the same instance; a solver that finds nothing is skipped."""
    if oracle is None:
        oracle = oracle_for(inst)
    out = []
    for name in algos:
        rep = ALGORITHMS[name](inst, oracle=oracle)
        if rep is not None:
            out.append(rep)
    return out


def _run_sample(g: Graph, topo: str, cfg: ExperimentConfig, oracle: DistanceOracle, index: int) -> list[ResultRow]:
    seed = sample_seed(cfg.seed, index)
    rows = []
    for k in cfg.k_values:
        terminals = sample_terminals(g, k, seed)
        for w in cfg.w_values:
            inst = Instance.create(g, terminals, w, seed)
            for rep in solve_all(inst, cfg.algos, oracle):
                rows.append(row_from_report(rep, g, topo, k, w, index))
    return rows


def thread_count() -> int:
    try:
        n = int(os.environ.get("BST_THREADS", "1"))
    except ValueError:
        raise InputError("BST_THREADS must be an integer") from None
    return max(1, n)


def run_experiment(cfg: ExperimentConfig, graph: Graph | None = None, topology: str | None = None) -> list[ResultRow]:
    """All rows of ``cfg`` in (sample, k, w, algorithm) order.

    Samples may run on up to ``BST_THREADS`` worker threads; rows are always
    returned in sample order.
    """
    if graph is None:
        graph, topology = load_graph(cfg.topology, cfg.seed)
    topo = topology or cfg.topology
    oracle = graph_oracle(graph)
    workers = min(thread_count(), cfg.samples)
    if workers == 1:
        chunks = [_run_sample(graph, topo, cfg, oracle, i) for i in range(cfg.samples)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(lambda i: _run_sample(graph, topo, cfg, oracle, i), range(cfg.samples)))
    return [r for chunk in chunks for r in chunk]


# ---------------------------------------------------------------- output


def _fmt(x) -> str:
    if isinstance(x, float):
        if x.is_integer():
            return str(int(x))
        return f"{x:.6g}"
    return str(x)


def write_csv(rows: Iterable[ResultRow], fh, timing: bool = True) -> None:
    cols = COLUMNS if timing else [c for c in COLUMNS if c not in TIMING_COLUMNS]
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(cols)
    for r in rows:
        writer.writerow([_fmt(getattr(r, c)) for c in cols])


def rows_to_csv(rows: Iterable[ResultRow], timing: bool = True) -> str:
    buf = io.StringIO()
    write_csv(rows, buf, timing)
    return buf.getvalue()


def read_csv(text: str) -> list[dict[str, str]]:
    return list(csv.DictReader(io.StringIO(text)))


@dataclass
class SummaryCell:
    algorithm: str
    k: int
    w: float
    n: int
    mean_objective: float
    mean_b: float
    mean_c: float
    mean_runtime_ms: float


def summarize(rows: Iterable[ResultRow]) -> list[SummaryCell]:
    """Means per (algorithm, k, w) cell, in first-appearance order."""
    groups: dict[tuple[str, int, float], list[ResultRow]] = {}
    for r in rows:
        groups.setdefault((r.algorithm, r.k, r.w), []).append(r)
    out = []
    for (algo, k, w), rs in groups.items():
        out.append(
            SummaryCell(
                algo, k, w, len(rs),
                statistics.fmean(r.objective for r in rs),
                statistics.fmean(r.b for r in rs),
                statistics.fmean(r.c for r in rs),
                statistics.fmean(r.runtime_ms for r in rs),
            )
        )
    return out


def format_summary(cells: Sequence[SummaryCell], timing: bool = True) -> str:
    head = ["algorithm", "k", "w", "n", "mean_obj", "mean_b", "mean_c"] + (["mean_ms"] if timing else [])
    lines = [head]
    for c in cells:
        line = [c.algorithm, str(c.k), _fmt(float(c.w)), str(c.n),
                f"{c.mean_objective:.3f}", f"{c.mean_b:.3f}", f"{c.mean_c:.3f}"]
        if timing:
            line.append(f"{c.mean_runtime_ms:.2f}")
        lines.append(line)
    widths = [max(len(row[i]) for row in lines) for i in range(len(head))]
    return "\n".join("  ".join(s.rjust(wd) for s, wd in zip(row, widths)) for row in lines) + "\n"
