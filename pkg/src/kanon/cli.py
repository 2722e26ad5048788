"""Command-line interface: ``kanon anonymize | generate | verify``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from kanon.generator import barabasi_albert
from kanon.graph import FORMATS, BlockSequence, Graph, GraphFormatError, load_graph, read_edges, write_graph
from kanon.oracle import OracleLimitError, brute_force_kdsa, brute_force_min_insertion, brute_force_realizable
from kanon.realizer import verify_insertion
from kanon.solver import DEFAULT_K_LIST, SolverConfig, reports_to_csv, reports_to_json, sweep

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_USAGE = 2


def _int_list(text: str) -> tuple[int, ...]:
    try:
        values = tuple(int(x) for x in text.replace(",", " ").split())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if not values:
        raise argparse.ArgumentTypeError("empty list")
    return values


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return value


def _graph_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=FORMATS, default="metis", help="graph file format (default: metis)")
    p.add_argument("--index-base", type=int, choices=(0, 1), default=0, help="first vertex id in edge lists")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kanon", description="Make graphs k-degree-anonymous by inserting few edges."
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True, metavar="{anonymize,generate,verify}")

    p = sub.add_parser("anonymize", help="compute edge-count bounds for one or more k")
    p.add_argument("graph", help="input graph file")
    ks = p.add_mutually_exclusive_group()
    ks.add_argument("--k", type=int, help="single anonymity level")
    ks.add_argument("--k-list", type=_int_list, help=f"comma-separated levels (default: {','.join(map(str, DEFAULT_K_LIST))})")
    p.add_argument("--time-limit", type=float, default=3600.0, help="seconds per k (default: 3600)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mappings", type=_positive, default=100, help="degree-vertex mappings per jump configuration")
    p.add_argument("--trials", type=_positive, default=25, help="local-exchange runs per mapping")
    p.add_argument("--max-jump-blocks", type=int, default=10)
    p.add_argument("--waste-budget", type=int, default=None, help="maximum extra increments (default: 4 * max degree)")
    p.add_argument("--enumeration-limit", type=_positive, default=2000, help="targets examined per cost level")
    p.add_argument("--no-reduction", action="store_true", help="disable the block-pattern reduction")
    p.add_argument("--no-advanced-eg", action="store_true", help="use only the plain Erdős–Gallai test")
    p.add_argument("--out", choices=("json", "csv"), default="json", help="report format on stdout")
    p.add_argument("--no-timings", action="store_true", help="omit timing fields from JSON output")
    p.add_argument("--emit-edges", metavar="PATH", help="write the best insertion set (suffix .k<K> for several k)")
    p.add_argument("--graph-id", help="name used in reports (default: file name)")
    _graph_options(p)

    p = sub.add_parser("generate", help="write a Barabási–Albert graph")
    p.add_argument("output", help="output file")
    p.add_argument("--steps", type=_positive, required=True)
    p.add_argument("--m0", type=_positive, default=3)
    p.add_argument("--seed", type=int, default=0)
    _graph_options(p)

    p = sub.add_parser("verify", help="check an insertion set against a graph")
    p.add_argument("graph")
    p.add_argument("edges", help="edge list of inserted edges")
    p.add_argument("--k", type=int, required=True)
    _graph_options(p)

    p = sub.add_parser("oracle")  # no help text keeps it out of the listing
    osub = p.add_subparsers(dest="oracle", required=True)
    q = osub.add_parser("min-insertion")
    q.add_argument("graph")
    q.add_argument("--k", type=int, required=True)
    _graph_options(q)
    q = osub.add_parser("kdsa")
    q.add_argument("--blocks", type=_int_list, required=True, help="block sizes b_0,b_1,...")
    q.add_argument("--k", type=int, required=True)
    q = osub.add_parser("realizable")
    q.add_argument("--degrees", type=_int_list, required=True)
    return parser


def _load(args) -> Graph:
    return load_graph(args.graph, args.format, args.index_base)


def _write_edges(path: Path, edges, index_base: int) -> None:
    path.write_text("".join(f"{u + index_base} {v + index_base}\n" for u, v in edges))


def cmd_anonymize(args) -> int:
    g = _load(args)
    k_list = (args.k,) if args.k is not None else (args.k_list or DEFAULT_K_LIST)
    cfg = SolverConfig(
        k_list=k_list,
        time_limit_s=args.time_limit,
        seed=args.seed,
        mappings=args.mappings,
        trials=args.trials,
        max_jump_blocks=args.max_jump_blocks,
        reduction=not args.no_reduction,
        advanced_eg=not args.no_advanced_eg,
        waste_budget=args.waste_budget,
        enumeration_limit=args.enumeration_limit,
    )
    reports = sweep(g, cfg, args.graph_id or Path(args.graph).name)
    if args.out == "csv":
        sys.stdout.write(reports_to_csv(reports))
    else:
        sys.stdout.write(reports_to_json(reports, timings=not args.no_timings) + "\n")
    if args.emit_edges:
        base = Path(args.emit_edges)
        for r in reports:
            if r.insertion is None:
                continue
            path = base if len(reports) == 1 else base.with_name(f"{base.name}.k{r.k}")
            _write_edges(path, r.insertion, args.index_base)
    return EXIT_OK


def cmd_generate(args) -> int:
    g = barabasi_albert(args.steps, args.m0, args.seed)
    write_graph(g, args.output, args.format, args.index_base)
    return EXIT_OK


def cmd_verify(args) -> int:
    g = _load(args)
    edges = read_edges(args.edges, args.index_base)
    report = verify_insertion(g, edges, args.k, args.index_base)
    print(json.dumps(report.to_json(), indent=2))
    return EXIT_OK if report.ok else EXIT_INVALID


def cmd_oracle(args) -> int:
    if args.oracle == "min-insertion":
        edges = brute_force_min_insertion(_load(args), args.k)
        result = None if edges is None else {"edges": len(edges), "insertion": [list(e) for e in edges]}
    elif args.oracle == "kdsa":
        result = brute_force_kdsa(BlockSequence(args.blocks), args.k)
    else:
        result = brute_force_realizable(list(args.degrees))
    print(json.dumps(result))
    return EXIT_OK


COMMANDS = {"anonymize": cmd_anonymize, "generate": cmd_generate, "verify": cmd_verify, "oracle": cmd_oracle}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return COMMANDS[args.command](args)
    except (GraphFormatError, OracleLimitError, ValueError, OSError) as exc:
        print(f"kanon: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
