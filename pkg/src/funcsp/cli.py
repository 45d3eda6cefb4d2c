"""Command-line interface: solve one instance, run the benchmark suite, or
generate a graph.

Exit codes: 0 success, 1 no solution (unsat or timeout in solve mode),
2 usage or config error, 3 backend disagreement in the bench suite.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import bench
from .problems import GenConfig, gen_graph, read_dimacs, write_dimacs


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="funcsp")
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="solve one instance with one backend")
    p_solve.add_argument("--problem", choices=["queens", "coloring"], required=True)
    p_solve.add_argument("--n", type=int, required=True,
                         help="number of queens, or number of vertices")
    p_solve.add_argument("--colors", type=int, default=4)
    p_solve.add_argument("--graph", help="DIMACS col file (coloring only)")
    p_solve.add_argument("--backend", choices=list(bench.BACKENDS), required=True)
    p_solve.add_argument("--heuristic", choices=["ffc", "lex"], default="ffc")
    p_solve.add_argument("--all", action="store_true", help="enumerate all solutions")
    p_solve.add_argument("--seed", type=int, default=0)
    p_solve.add_argument("--edge-prob", type=float, default=0.2)
    p_solve.add_argument("--timeout", type=float, default=60.0)

    p_bench = sub.add_parser("bench", help="run the benchmark suite")
    p_bench.add_argument("--config", help="JSON config file (default: built-in sweep)")
    p_bench.add_argument("--out-csv", required=True)
    p_bench.add_argument("--out-series", required=True)

    p_gen = sub.add_parser("gen", help="generate a 4-colorable random graph")
    p_gen.add_argument("--vertices", type=int, required=True)
    p_gen.add_argument("--prob", type=float, required=True)
    p_gen.add_argument("--seed", type=int, required=True)
    p_gen.add_argument("--classes", type=int, default=4)
    p_gen.add_argument("--out", required=True)
    return parser


def _display_solution(interp, problem: str) -> str:
    # elements are 0-based internally, 1-based for display
    lines = []
    for fname, table in sorted(interp.tables.items()):
        shown = " ".join(str(v + 1) for v in table)
        lines.append(f"{fname}: {shown}")
    return "\n".join(lines)


def _cmd_solve(args) -> int:
    if args.n < 1:
        print("error: --n must be positive", file=sys.stderr)
        return 2
    if args.problem == "queens":
        inst = bench.queens_instance(args.n)
    else:
        if args.graph:
            with open(args.graph) as f:
                g = read_dimacs(f.read())
            inst = bench.coloring_instance_from_graph(g, args.colors, seed=args.seed)
        else:
            inst = bench.coloring_instance(args.n, args.edge_prob, args.colors, args.seed)
    mode = "all" if args.all else "first"
    rec, interps = bench.run_instance(inst, args.backend, heuristic=args.heuristic,
                                      mode=mode, timeout_s=args.timeout)
    print(f"status: {rec.status}")
    print(f"solutions: {rec.solutions_found}  backtracks: {rec.backtracks}  "
          f"choices: {rec.choices}  time_ms: {rec.time_ms}")
    for interp in interps:
        print(_display_solution(interp, args.problem))
    return 0 if rec.status in ("sat", "truncated") else 1


def _cmd_bench(args) -> int:
    if args.config:
        try:
            with open(args.config) as f:
                config = json.load(f)
        except (OSError, json.JSONDecodeError) as exc:
            print(f"error: cannot read config: {exc}", file=sys.stderr)
            return 2
    else:
        config = bench.default_config()
    try:
        result = bench.run_suite(config)
    except bench.ConfigError as exc:
        print(f"error: bad config: {exc}", file=sys.stderr)
        return 2
    bench.emit_csv(result.records, args.out_csv)
    bench.emit_series(result.records, args.out_series)
    print(f"{len(result.records)} runs -> {args.out_csv}, series in {args.out_series}")
    for flag in result.flags:
        print(f"flag: {flag}")
    if result.disagreements:
        for d in result.disagreements:
            print(f"DISAGREEMENT: {d}", file=sys.stderr)
        return 3
    return 0


def _cmd_gen(args) -> int:
    try:
        cfg = GenConfig(args.vertices, args.prob, args.seed, args.classes)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    g = gen_graph(cfg)
    with open(args.out, "w") as f:
        f.write(write_dimacs(g))
    print(f"wrote {g.n_vertices} vertices, {g.n_edges} edges to {args.out}")
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.command == "solve":
        return _cmd_solve(args)
    if args.command == "bench":
        return _cmd_bench(args)
    return _cmd_gen(args)


if __name__ == "__main__":
    sys.exit(main())
