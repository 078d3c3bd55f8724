"""Command-line entry point: ``bstree solve | bench | gen | export-lp``."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import bench
from .errors import BstError, InfeasibleInstanceError
from .graph import Graph
from .lp import DEFAULT_VARIABLE_CAP, export_lp
from .problem import Instance
from .topology import sample_terminals
from .tree import tree_to_edge_list

EXIT_INPUT = 2
EXIT_INFEASIBLE = 3


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _float_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _algo_list(text: str) -> list[str]:
    names = [x.strip() for x in text.split(",") if x.strip()]
    bad = [n for n in names if n not in bench.ALGORITHMS]
    if bad:
        raise argparse.ArgumentTypeError(f"unknown algorithms {bad}; choose from {','.join(bench.ALGORITHMS)}")
    return names


def _add_source(p: argparse.ArgumentParser) -> None:
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--topology", help="GML (.gml) or edge-list file")
    src.add_argument("--gen", metavar="SPEC", help="generator spec, e.g. pa:n=10000,m=2")


def _graph(args) -> tuple[Graph, str]:
    return bench.load_graph(args.topology or args.gen, args.seed)


def _instance(args, g: Graph) -> Instance:
    if args.terminals:
        terminals = args.terminals
    elif args.k:
        terminals = sample_terminals(g, args.k, args.seed)
    else:
        raise BstError("give --terminals or --k")
    return Instance.create(g, terminals, args.w, args.seed, args.root)


def _open_out(path: str | None):
    if path is None or path == "-":
        return sys.stdout, False
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    return open(path, "w", newline=""), True


def cmd_solve(args) -> int:
    g, topo = _graph(args)
    inst = _instance(args, g)
    reports = bench.solve_all(inst, args.algos)
    rows = [bench.row_from_report(r, g, topo, inst.k, inst.w) for r in reports]
    fh, close = _open_out(args.out)
    try:
        bench.write_csv(rows, fh, timing=not args.no_timing)
    finally:
        if close:
            fh.close()
    if args.tree_dir:
        d = Path(args.tree_dir)
        d.mkdir(parents=True, exist_ok=True)
        for r in reports:
            (d / f"{r.algorithm}.edges").write_text(tree_to_edge_list(r.tree))
    missing = [a for a in args.algos if a not in {r.algorithm for r in reports}]
    for a in missing:
        print(f"{a}: no solution found", file=sys.stderr)
    return 0


def cmd_bench(args) -> int:
    cfg = bench.ExperimentConfig(
        topology=args.topology or args.gen,
        k_values=args.k,
        w_values=args.w,
        samples=args.samples,
        seed=args.seed,
        algos=args.algos,
        out=args.out,
    )
    rows = bench.run_experiment(cfg)
    timing = not args.no_timing
    fh, close = _open_out(args.out)
    try:
        bench.write_csv(rows, fh, timing=timing)
    finally:
        if close:
            fh.close()
    table = bench.format_summary(bench.summarize(rows), timing=timing)
    if args.summary:
        Path(args.summary).write_text(table)
    else:
        print(table, end="", file=sys.stdout if close else sys.stderr)
    return 0


def cmd_gen(args) -> int:
    g, _ = bench.load_graph(args.gen, args.seed)
    text = f"# {args.gen} seed={args.seed} nodes={g.node_count} edges={g.edge_count}\n"
    text += "".join(f"{u} {v}\n" for u, v in sorted(g.edges))
    fh, close = _open_out(args.out)
    try:
        fh.write(text)
    finally:
        if close:
            fh.close()
    return 0


def cmd_export_lp(args) -> int:
    g, _ = _graph(args)
    inst = _instance(args, g)
    text = export_lp(inst, args.root, args.cap)
    fh, close = _open_out(args.out)
    try:
        fh.write(text)
    finally:
        if close:
            fh.close()
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bstree", description="Branch-aware Steiner trees for multicast.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve one instance with several algorithms")
    _add_source(p)
    p.add_argument("--k", type=int, help="number of terminals to sample")
    p.add_argument("--terminals", type=_int_list, help="explicit terminal ids, comma-separated")
    p.add_argument("--w", type=float, default=5.0, help="branch weight (default 5)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--root", type=int, help="root terminal (default: seeded choice)")
    p.add_argument("--algos", type=_algo_list, default=["baera", "spt", "st"])
    p.add_argument("--out", help="CSV output path (default stdout)")
    p.add_argument("--format", choices=["csv"], default="csv")
    p.add_argument("--tree-dir", help="write each tree as an edge list into this directory")
    p.add_argument("--no-timing", action="store_true", help="omit timing columns for byte-stable output")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("bench", help="sweep k and w over seeded samples")
    _add_source(p)
    p.add_argument("--k", type=_int_list, required=True, help="k values, comma-separated")
    p.add_argument("--w", type=_float_list, default=[5.0], help="w values, comma-separated")
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--seed", type=int, default=0, help="master seed")
    p.add_argument("--algos", type=_algo_list, default=["baera", "spt", "st"])
    p.add_argument("--out", help="CSV output path (default stdout)")
    p.add_argument("--format", choices=["csv"], default="csv")
    p.add_argument("--summary", help="write the summary table here instead of printing it")
    p.add_argument("--no-timing", action="store_true", help="omit timing columns for byte-stable output")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("gen", help="write a generated graph as an edge list")
    p.add_argument("--gen", metavar="SPEC", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("export-lp", help="write the integer program in CPLEX LP format")
    _add_source(p)
    p.add_argument("--k", type=int)
    p.add_argument("--terminals", type=_int_list)
    p.add_argument("--w", type=float, default=5.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--root", type=int)
    p.add_argument("--cap", type=int, default=DEFAULT_VARIABLE_CAP, help="refuse models with more variables")
    p.add_argument("--out")
    p.set_defaults(func=cmd_export_lp)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except InfeasibleInstanceError as exc:
        print(f"error: infeasible instance: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except BstError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
