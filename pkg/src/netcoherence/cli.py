"""Command-line driver.

Subcommands: generate, coherence, greedy-add, build-tree, oracle, simulate,
benchmark. Exit status is 0 on success, 1 on a usage error and 2 when the
command itself fails (bad input file, disconnected graph, ...).
"""
from __future__ import annotations

import argparse
import csv
import sys
import time
from pathlib import Path
from typing import Sequence

from .coherence import coherence
from .generators import KINDS, generate
from .graph import Graph, GraphError, add_edge, candidate_edges, is_connected
from .greedy import SelectionReport, lazy_greedy, naive_greedy
from .io import FormatError, read_edge_list, write_edge_list, write_json
from .oracle import best_subset_bruteforce, best_tree_bruteforce, simulate_coherence
from .tree import attach_nodes, build_tree

BENCHMARK_COLUMNS = ["n", "algorithm", "evals", "seconds", "trace_before", "trace_after"]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def report_payload(report: SelectionReport, config: dict, timings: bool = True) -> dict:
    """JSON-ready report with index-aligned per-iteration arrays."""
    half = 0.5
    return {
        "algorithm": report.algorithm,
        "seed": report.seed,
        "config": config,
        "selected": [[u, v, w] for u, v, w in report.selected],
        "gains": list(report.gains),
        "trace_before": report.trace_before,
        "trace_after": report.trace_after,
        "coherence_before": half * report.trace_before,
        "coherence_after": half * report.trace_after,
        "eval_counts": list(report.eval_counts),
        "wall_times_s": list(report.wall_times) if timings else [0.0] * len(report.wall_times),
    }


def _final_graph(g: Graph, report: SelectionReport) -> Graph:
    for e in report.selected:
        g = add_edge(g, e)
    return g


def run_generate(kind: str, n: int, output: str, seed: int | None = None, c: float = 1.1,
                 m: int = 1, max_retries: int = 1000) -> dict:
    g, meta = generate(kind, n, seed=seed, c=c, m=m, max_retries=max_retries)
    write_edge_list(g, output)
    return meta


def run_coherence(input: str) -> dict:
    g = read_edge_list(input)
    cv = coherence(g)
    return {
        "n": g.n,
        "edges": g.num_edges,
        "connected": is_connected(g),
        "trace_pinv": cv.trace_pinv,
        "coherence": cv.value,
    }


def run_greedy(input: str, k: int, alg: str = "lazy", weight: float = 1.0, seed: int | None = None,
               output: str | None = None, graph_output: str | None = None,
               timings: bool = True) -> dict:
    """Greedy edge addition on a graph file; ``alg`` is naive, lazy or both."""
    g = read_edge_list(input)
    if not is_connected(g):
        raise ValueError(f"input graph {input} is disconnected")
    cands = candidate_edges(g, weight)
    config = {"command": "greedy-add", "input": str(input), "k": k, "alg": alg, "weight": weight}
    algs = {"naive": naive_greedy, "lazy": lazy_greedy}
    names = ["naive", "lazy"] if alg == "both" else [alg]
    reports = [algs[name](g, cands, k, seed=seed) for name in names]
    payloads = [report_payload(r, config, timings) for r in reports]
    if alg == "both":
        result = {
            "reports": payloads,
            "identical_selection": reports[0].selected == reports[1].selected,
        }
    else:
        result = payloads[0]
    write_json(result, output)
    if graph_output:
        write_edge_list(_final_graph(g, reports[-1]), graph_output)
    return result


def run_tree(n: int | None = None, weight: float = 1.0, weights: str | None = None,
             attach: str | None = None, new_nodes: int = 0, output: str | None = None,
             report: str | None = None, timings: bool = True) -> dict:
    """Build a tree from scratch, or attach new nodes to an existing graph."""
    weight_spec = weight
    if weights is not None:
        wg = read_edge_list(weights)
        table = {(u, v): w for u, v, w in wg.edges}
        weight_spec = lambda u, v: table.get((u, v), 0.0)  # noqa: E731
        if n is None:
            n = wg.n
    config = {"command": "build-tree", "n": n, "weight": weight, "weights": weights,
              "attach": attach, "new_nodes": new_nodes}
    if attach is not None:
        g, rep = attach_nodes(read_edge_list(attach), new_nodes, weight_spec)
    else:
        if n is None:
            raise UsageError("build-tree needs --n, --weights or --attach")
        g, rep = build_tree(n, weight_spec)
    if output:
        write_edge_list(g, output)
    payload = report_payload(rep, config, timings)
    write_json(payload, report)
    return payload


def run_oracle(input: str | None = None, k: int = 1, weight: float = 1.0, tree: bool = False,
               n: int | None = None, output: str | None = None) -> dict:
    if tree:
        if n is None:
            raise UsageError("oracle --tree needs --n")
        res = best_tree_bruteforce(n, weight)
        config = {"command": "oracle", "tree": True, "n": n, "weight": weight}
    else:
        if input is None:
            raise UsageError("oracle needs --input (or --tree --n)")
        g = read_edge_list(input)
        res = best_subset_bruteforce(g, candidate_edges(g, weight), k)
        config = {"command": "oracle", "input": str(input), "k": k, "weight": weight}
    payload = {
        "config": config,
        "best_value": res.best_value,
        "best_witness": [list(e) for e in res.best_witness],
        "instances_examined": res.instances_examined,
    }
    write_json(payload, output)
    return payload


def run_simulate(input: str, seed: int, dt: float | None = None, horizon: float | None = None,
                 trials: int = 200, output: str | None = None) -> dict:
    g = read_edge_list(input)
    est = simulate_coherence(g, dt=dt, horizon=horizon, trials=trials, seed=seed)
    payload = {
        "config": {"command": "simulate", "input": str(input)},
        "seed": est.seed,
        "coherence_hat": est.coherence_hat,
        "std_error": est.std_error,
        "trials": est.trials,
        "horizon": est.horizon,
        "dt": est.dt,
        "coherence_exact": coherence(g).value,
    }
    write_json(payload, output)
    return payload


def run_benchmark(sizes: Sequence[int], seed: int, c: float = 1.1, k_factor: float = 1.0,
                  output: str | None = None) -> list[dict]:
    """Naive vs lazy greedy on connected er graphs with ``k = k_factor * n``."""
    sizes = list(sizes)
    if sizes != sorted(sizes):
        raise UsageError("benchmark sizes must be ascending")
    rows = []
    for n in sizes:
        g, _ = generate("er", n, seed=seed, c=c)
        cands = candidate_edges(g, 1.0)
        k = int(round(k_factor * n))
        for name, fn in (("naive", naive_greedy), ("lazy", lazy_greedy)):
            t0 = time.perf_counter()
            rep = fn(g, cands, k, seed=seed)
            seconds = time.perf_counter() - t0
            rows.append({
                "n": n,
                "algorithm": name,
                "evals": rep.total_evaluations,
                "seconds": seconds,
                "trace_before": rep.trace_before,
                "trace_after": rep.trace_after,
            })
    fh = open(output, "w", newline="", encoding="utf-8") if output else sys.stdout
    try:
        writer = csv.DictWriter(fh, fieldnames=BENCHMARK_COLUMNS, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
    finally:
        if output:
            fh.close()
    return rows


def _sizes(text: str) -> list[int]:
    text = text.strip()
    if not text:
        return []
    try:
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="netcoherence", description="Coherence-optimal network design.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("generate", help="write a generated graph as an edge list")
    s.add_argument("--kind", choices=KINDS, required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--seed", type=int)
    s.add_argument("--c", type=float, default=1.1, help="er probability scale: p = c ln(n)/n")
    s.add_argument("--m", type=int, default=1, help="ba edges per arriving node")
    s.add_argument("--max-retries", type=int, default=1000)
    s.add_argument("--output", required=True)

    s = sub.add_parser("coherence", help="print trace(L+) and coherence of a graph")
    s.add_argument("--input", required=True)

    s = sub.add_parser("greedy-add", help="greedily add k edges")
    s.add_argument("--input", required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--alg", choices=["naive", "lazy", "both"], default="lazy")
    s.add_argument("--weight", type=float, default=1.0, help="weight of every candidate edge")
    s.add_argument("--seed", type=int)
    s.add_argument("--output", help="report path (stdout if omitted)")
    s.add_argument("--graph-output", help="write the augmented edge list here")
    s.add_argument("--no-timings", action="store_true", help="write zero wall times")

    s = sub.add_parser("build-tree", help="grow a low-coherence tree")
    s.add_argument("--n", type=int)
    s.add_argument("--weight", type=float, default=1.0)
    s.add_argument("--weights", help="edge list of pair weights; unlisted pairs get 0")
    s.add_argument("--attach", help="existing connected graph to attach new nodes to")
    s.add_argument("--new-nodes", type=int, default=0)
    s.add_argument("--output", help="edge list of the resulting graph")
    s.add_argument("--report", help="report path (stdout if omitted)")
    s.add_argument("--no-timings", action="store_true")

    s = sub.add_parser("oracle", help="exhaustive search for the best subset or tree")
    s.add_argument("--input")
    s.add_argument("--k", type=int, default=1)
    s.add_argument("--weight", type=float, default=1.0)
    s.add_argument("--tree", action="store_true")
    s.add_argument("--n", type=int)
    s.add_argument("--output")

    s = sub.add_parser("simulate", help="Monte Carlo coherence estimate")
    s.add_argument("--input", required=True)
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--dt", type=float)
    s.add_argument("--horizon", type=float)
    s.add_argument("--trials", type=int, default=200)
    s.add_argument("--output")

    s = sub.add_parser("benchmark", help="naive vs lazy greedy timings as CSV")
    s.add_argument("--sizes", type=_sizes, required=True, help="e.g. 40,80,120")
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--c", type=float, default=1.1)
    s.add_argument("--k-factor", type=float, default=1.0)
    s.add_argument("--output")
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "generate":
            if args.kind in ("er", "ba") and args.seed is None:
                raise UsageError(f"--seed is required for --kind {args.kind}")
            meta = run_generate(args.kind, args.n, args.output, args.seed, args.c, args.m,
                                args.max_retries)
            write_json(meta, None)
        elif args.command == "coherence":
            write_json(run_coherence(args.input), None)
        elif args.command == "greedy-add":
            run_greedy(args.input, args.k, args.alg, args.weight, args.seed, args.output,
                       args.graph_output, timings=not args.no_timings)
        elif args.command == "build-tree":
            run_tree(args.n, args.weight, args.weights, args.attach, args.new_nodes,
                     args.output, args.report, timings=not args.no_timings)
        elif args.command == "oracle":
            run_oracle(args.input, args.k, args.weight, args.tree, args.n, args.output)
        elif args.command == "simulate":
            run_simulate(args.input, args.seed, args.dt, args.horizon, args.trials, args.output)
        elif args.command == "benchmark":
            run_benchmark(args.sizes, args.seed, args.c, args.k_factor, args.output)
    except UsageError as exc:
        print(f"netcoherence: error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, RuntimeError, OSError, GraphError, FormatError) as exc:
        print(f"netcoherence: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
