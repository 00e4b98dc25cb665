"""Command line: ``kswitch run`` sweeps k over seeded walks, ``kswitch oracle``
enumerates a tiny instance exactly."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import oracle
from .constraints import BUILTIN, from_starter
from .errors import KSwitchError
from .graph import read_edge_list
from .harness import (
    DEFAULT_TOLERANCE,
    ExperimentConfig,
    config_from_mapping,
    emit_summary,
    read_config_file,
    run_experiment,
)

# flag dest -> ExperimentConfig field, for flags that also exist in config files
_RUN_FIELDS = {
    "input": "input_path", "colors": "colors_path", "directed": "directed", "constraint": "constraint",
    "k_min": "k_min", "k_max": "k_max", "trials": "n_trials", "replicates": "replicates",
    "seed": "seed", "obs": "observables", "interval": "observation_interval", "out": "output_dir",
    "tolerance": "tolerance", "tail_fraction": "tail_fraction", "workers": "workers",
}


def _add_graph_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--input", help="edge list, one 'u v' pair per line")
    p.add_argument("--colors", help="node colours, one 'u R|G|B' pair per line")
    d = p.add_mutually_exclusive_group()
    d.add_argument("--directed", dest="directed", action="store_const", const=True, default=None)
    d.add_argument("--undirected", dest="directed", action="store_const", const=False)
    p.add_argument("--constraint", choices=sorted(BUILTIN))
    p.add_argument("--k-min", type=int)
    p.add_argument("--k-max", type=int)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kswitch", description="Constrained k-edge switching walks.")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="sweep k with replicated walks")
    _add_graph_args(run)
    run.add_argument("--config", help="key=value file; explicit flags override it")
    run.add_argument("--trials", type=int)
    run.add_argument("--replicates", type=int)
    run.add_argument("--seed", type=int)
    run.add_argument("--obs", help="comma-separated observables")
    run.add_argument("--interval", type=int, help="trials between observations")
    run.add_argument("--out", help="output directory for traces and summaries")
    run.add_argument("--tolerance", type=float, help=f"plateau tolerance (default {DEFAULT_TOLERANCE})")
    run.add_argument("--tail-fraction", type=float, help="trailing share of a trace averaged per walk")
    run.add_argument("--workers", type=int, help="parallel walk processes")
    run.add_argument("--format", choices=("text", "csv", "json"), default="text",
                     help="summary printed to stdout")
    run.add_argument("--oracle", action="store_true", help="enumerate exactly instead of walking")
    run.add_argument("--interchangeable", action="append", default=[], metavar="NODES",
                     help="with --oracle: comma-separated nodes to identify up to relabelling")

    orc = sub.add_parser("oracle", help="exhaustive enumeration for tiny instances")
    _add_graph_args(orc)
    orc.add_argument("--interchangeable", action="append", default=[], metavar="NODES",
                     help="comma-separated nodes whose relabellings are identified; repeatable")
    orc.add_argument("--dot", help="write the Markov graph for k-max to this DOT file")
    orc.add_argument("--verify", action="store_true", help="also certify uniform stationarity per k")
    return parser


def _run_config(args) -> ExperimentConfig:
    cfg = ExperimentConfig()
    if args.config:
        cfg = config_from_mapping(read_config_file(args.config), cfg)
    for dest, name in _RUN_FIELDS.items():
        value = getattr(args, dest, None)
        if value is not None:
            if name == "observables":
                value = tuple(o.strip() for o in value.split(",") if o.strip())
            setattr(cfg, name, value)
    return cfg


def _parse_blocks(specs) -> list[list[int]]:
    return [[int(x) for x in spec.split(",") if x.strip()] for spec in specs]


def oracle_report(input_path, directed=True, colors_path=None, constraint="none",
                  k_min=2, k_max=None, interchangeable=(), dot=None, verify=False) -> str:
    g = read_edge_list(input_path, directed=directed, colors_path=colors_path)
    c = from_starter(constraint, g)
    s = oracle.enumerate_graph_set(g, c)
    k_max = g.n_edges if k_max is None else min(k_max, g.n_edges)
    classes = oracle.relabel_classes(s, interchangeable) if interchangeable else None
    parts = []
    lines = []
    m = None
    for k in range(k_min, k_max + 1):
        m = oracle.build_markov_graph(s, k, c)
        if verify:
            rep = oracle.verify_uniform_stationarity(m)
            lines.append(f"k={k}: degree {rep.trial_total}, symmetric, "
                         f"stationarity error {rep.max_stationarity_error:.1e}")
        n = oracle.component_count(m) if classes is None else oracle.quotient_component_count(m, classes)
        parts.append(f"k={k}→{n}")
    n_graphs = len(s) if classes is None else len(set(classes))
    head = f"{n_graphs} graphs; components: " + ", ".join(parts)
    if classes is not None:
        lines.append(f"({len(s)} labelled graphs before identifying relabellings)")
    if dot and m is not None:
        Path(dot).write_text(oracle.to_dot(m))
    return "\n".join([head, *lines]) + "\n"


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "oracle" or getattr(args, "oracle", False):
            cfg = _run_config(args) if args.command == "run" else None
            if cfg is None:
                cfg = ExperimentConfig(
                    input_path=args.input,
                    directed=True if args.directed is None else args.directed,
                    colors_path=args.colors,
                    constraint=args.constraint or "none",
                    k_min=args.k_min or 2,
                    k_max=args.k_max or 10**9,
                )
            if cfg.input_path is None:
                raise SystemExit("kswitch: --input is required")
            sys.stdout.write(oracle_report(
                cfg.input_path, cfg.directed, cfg.colors_path, cfg.constraint, cfg.k_min,
                cfg.k_max, _parse_blocks(args.interchangeable),
                getattr(args, "dot", None), getattr(args, "verify", False),
            ))
            return 0
        cfg = _run_config(args)
        if cfg.input_path is None:
            raise SystemExit("kswitch: --input is required (flag or config file)")
        table = run_experiment(cfg)
        sys.stdout.write(emit_summary(table, args.format))
        return 0
    except (KSwitchError, OSError) as exc:
        print(f"kswitch: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
