"""Experiment driver: sweep k, replicate seeded walks, summarise per k.

Each (k, replicate) walk starts from the same starter graph. Its value for
an observable is the mean over the last ``tail_fraction`` of its trace; the
summary row for k holds the mean and standard deviation of those values
over replicates, plus success counts.

Replicate seeds: ``SeedSequence([seed, k, replicate])``. The sequence hashes
its entropy words, so neighbouring (k, replicate) pairs get unrelated
streams while every run with the same base seed is reproducible.
"""

from __future__ import annotations

import dataclasses
import json
import math
from collections.abc import Mapping, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import _kernels as K
from .constraints import BUILTIN, Constraint, from_starter
from .engine import WalkConfig, run_walk
from .errors import ConfigInvalid, StarterViolatesConstraint
from .graph import Graph, read_edge_list
from .observables import parse_observables

DEFAULT_TOLERANCE = 0.02


@dataclass
class ExperimentConfig:
    input_path: str | None = None
    directed: bool = True
    constraint: str = "none"
    colors_path: str | None = None
    k_min: int = 2
    k_max: int = 2
    n_trials: int = 10_000
    replicates: int = 1
    seed: int = 0
    observables: tuple[str, ...] = ()
    observation_interval: int | None = None
    output_dir: str | None = None
    tolerance: float = DEFAULT_TOLERANCE
    tail_fraction: float = 0.5
    workers: int = 1

    def __post_init__(self):
        if isinstance(self.observables, str):
            self.observables = tuple(o.strip() for o in self.observables.split(",") if o.strip())
        else:
            self.observables = tuple(self.observables)

    def validate(self) -> None:
        problems = []
        if self.k_min < 2:
            problems.append("k_min must be at least 2")
        if self.k_max < self.k_min:
            problems.append("k_max must be >= k_min")
        if self.replicates < 1:
            problems.append("replicates must be at least 1")
        if self.n_trials < 0:
            problems.append("n_trials must be non-negative")
        if self.observation_interval is not None and self.observation_interval < 1:
            problems.append("observation_interval must be at least 1")
        if self.constraint not in BUILTIN:
            problems.append(f"unknown constraint {self.constraint!r}")
        if not 0 < self.tail_fraction <= 1:
            problems.append("tail_fraction must be in (0, 1]")
        if self.tolerance <= 0:
            problems.append("tolerance must be positive")
        if self.workers < 1:
            problems.append("workers must be at least 1")
        try:
            parse_observables(self.observables)
        except ValueError as exc:
            problems.append(str(exc))
        if problems:
            raise ConfigInvalid("; ".join(problems))

    @property
    def k_values(self) -> list[int]:
        return list(range(self.k_min, self.k_max + 1))


@dataclass
class KRow:
    k: int
    mean: dict[str, float]
    std: dict[str, float]
    successes: list[int]
    trials: int

    @property
    def mean_successes(self) -> float:
        return float(np.mean(self.successes)) if self.successes else 0.0


@dataclass
class SummaryTable:
    columns: list[str]
    rows: list[KRow]
    tolerance: float = DEFAULT_TOLERANCE
    plateau_k0: int | None = None
    memory_bytes: int = 0
    meta: dict = field(default_factory=dict)

    def row(self, k: int) -> KRow:
        for r in self.rows:
            if r.k == k:
                return r
        raise KeyError(k)

    def to_dict(self) -> dict:
        return {
            **self.meta,
            "k": [r.k for r in self.rows],
            "observables": list(self.columns),
            "rows": [
                {
                    "k": r.k,
                    "trials": r.trials,
                    "mean": {c: r.mean[c] for c in self.columns},
                    "std": {c: r.std[c] for c in self.columns},
                    "mean_successes": r.mean_successes,
                    "successes": list(r.successes),
                }
                for r in self.rows
            ],
            "tolerance": self.tolerance,
            "plateau_k0": self.plateau_k0,
            "memory_bytes": self.memory_bytes,
        }


def relative_difference(x: float, y: float) -> float:
    scale = max(abs(x), abs(y))
    return 0.0 if scale < 1e-12 else abs(x - y) / scale


def plateau_k0(rows: Sequence[KRow], columns: Sequence[str], tol: float) -> int | None:
    """Smallest k0 such that every successive pair of rows from k0 on agrees
    within ``tol`` (relative) on all observables. A single row is its own k0."""
    if not rows:
        return None
    k0 = rows[-1].k
    for prev, cur in zip(reversed(rows[:-1]), reversed(rows)):
        if all(relative_difference(prev.mean[c], cur.mean[c]) < tol for c in columns):
            k0 = prev.k
        else:
            break
    return k0


def load_starter(cfg: ExperimentConfig) -> Graph:
    if cfg.input_path is None:
        raise ConfigInvalid("input_path is required")
    return read_edge_list(cfg.input_path, directed=cfg.directed, colors_path=cfg.colors_path)


def walk_seed(seed: int, k: int, replicate: int) -> np.random.SeedSequence:
    return np.random.SeedSequence([int(seed), int(k), int(replicate)])


def walk_memory(g: Graph, k: int) -> int:
    """Bytes held by one walk: graph arrays plus compiled-trial scratch."""
    return g.nbytes() + sum(a.nbytes for a in K.make_scratch(g.n_nodes, k))


def _one_walk(job):
    g0, constraint, k, r, cfg = job
    obs = parse_observables(cfg.observables)
    wc = WalkConfig(k, cfg.n_trials, walk_seed(cfg.seed, k, r), cfg.observation_interval)
    report = run_walk(g0, constraint, wc, obs)
    if cfg.output_dir is not None:
        report.trace.to_csv(Path(cfg.output_dir) / f"trace_k{k}_r{r}.csv")
    return k, r, report.trace.tail_mean(cfg.tail_fraction), report.successes, report.trials


def run_experiment(cfg: ExperimentConfig, starter: Graph | None = None,
                   constraint: Constraint | None = None) -> SummaryTable:
    """Run replicates x |k range| walks; write traces and summaries if
    ``cfg.output_dir`` is set."""
    cfg.validate()
    g0 = load_starter(cfg) if starter is None else starter
    c = from_starter(cfg.constraint, g0) if constraint is None else constraint
    if not c.check_full(g0):
        raise StarterViolatesConstraint(f"starter violates {c!r}")
    if cfg.k_max > g0.n_edges:
        raise ConfigInvalid(f"k_max={cfg.k_max} exceeds the number of edges M={g0.n_edges}")
    if cfg.output_dir is not None:
        Path(cfg.output_dir).mkdir(parents=True, exist_ok=True)

    jobs = [(g0, c, k, r, cfg) for k in cfg.k_values for r in range(cfg.replicates)]
    if cfg.workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            results = list(pool.map(_one_walk, jobs))
    else:
        results = [_one_walk(j) for j in jobs]

    columns = list(results[0][2]) if results else []
    rows = []
    for k in cfg.k_values:
        mine = sorted((r for r in results if r[0] == k), key=lambda r: r[1])
        vals = np.array([[m[2][col] for col in columns] for m in mine], dtype=float).reshape(len(mine), len(columns))
        std = vals.std(axis=0, ddof=1) if len(mine) > 1 else np.zeros(len(columns))
        rows.append(KRow(
            k=k,
            mean=dict(zip(columns, vals.mean(axis=0).tolist())),
            std=dict(zip(columns, std.tolist())),
            successes=[m[3] for m in mine],
            trials=mine[0][4] if mine else 0,
        ))
    table = SummaryTable(
        columns=columns,
        rows=rows,
        tolerance=cfg.tolerance,
        plateau_k0=plateau_k0(rows, columns, cfg.tolerance),
        memory_bytes=walk_memory(g0, cfg.k_max),
        meta={
            "constraint": cfg.constraint,
            "n_nodes": g0.n_nodes,
            "n_edges": g0.n_edges,
            "directed": g0.directed,
            "n_trials": cfg.n_trials,
            "replicates": cfg.replicates,
            "seed": cfg.seed,
        },
    )
    if cfg.output_dir is not None:
        out = Path(cfg.output_dir)
        (out / "summary.json").write_text(emit_summary(table, "json"))
        (out / "summary.txt").write_text(emit_summary(table, "text"))
    return table


# -- serialisation -----------------------------------------------------------


def _fmt(x: float) -> str:
    if math.isfinite(x) and x == int(x) and abs(x) < 1e15:
        return str(int(x))
    return f"{x:.4g}" if abs(x) >= 1e4 else f"{x:.3f}"


def emit_summary(table: SummaryTable, fmt: str = "text") -> str:
    """Serialise a summary as csv, json or a text table (observables as rows,
    one column per k, then a successes row)."""
    if fmt == "json":
        return json.dumps(table.to_dict(), indent=2) + "\n"
    ks = [r.k for r in table.rows]
    if fmt == "csv":
        lines = ["observable,statistic," + ",".join(f"k={k}" for k in ks)]
        for col in table.columns:
            lines.append(f"{col},mean," + ",".join(repr(r.mean[col]) for r in table.rows))
            lines.append(f"{col},std," + ",".join(repr(r.std[col]) for r in table.rows))
        lines.append("successes,mean," + ",".join(repr(r.mean_successes) for r in table.rows))
        return "\n".join(lines) + "\n"
    if fmt != "text":
        raise ValueError(f"unknown format {fmt!r}; use csv, json or text")
    header = ["", *(f"k={k}" for k in ks)]
    body = []
    for col in table.columns:
        cells = []
        for r in table.rows:
            s = _fmt(r.mean[col])
            if r.std[col] > 0:
                s += f" ± {_fmt(r.std[col])}"
            cells.append(s)
        body.append([col, *cells])
    body.append(["Successes", *(_fmt(r.mean_successes) for r in table.rows)])
    widths = [max(len(row[i]) for row in [header, *body]) for i in range(len(header))]
    lines = ["  ".join(cell.rjust(w) if i else cell.ljust(w) for i, (cell, w) in enumerate(zip(row, widths)))
             for row in [header, *body]]
    k0 = table.plateau_k0
    lines.append("")
    lines.append(f"plateau across k: k0 = {k0} (successive-k tolerance {table.tolerance:g})"
                 if k0 is not None else "plateau across k: none")
    lines.append(f"memory used: {table.memory_bytes} bytes")
    return "\n".join(lines) + "\n"


def config_from_mapping(values: Mapping[str, str], base: ExperimentConfig | None = None) -> ExperimentConfig:
    """Apply string key=value settings (dashes or underscores) onto a config."""
    cfg = dataclasses.replace(base) if base is not None else ExperimentConfig()
    types = {f.name: f.type for f in dataclasses.fields(ExperimentConfig)}
    aliases = {"input": "input_path", "colors": "colors_path", "trials": "n_trials", "obs": "observables",
               "interval": "observation_interval", "out": "output_dir"}
    for raw_key, raw in values.items():
        key = raw_key.strip().replace("-", "_")
        key = aliases.get(key, key)
        if key not in types:
            raise ConfigInvalid(f"unknown config key {raw_key!r}")
        text = str(raw).strip()
        try:
            if key == "directed":
                value = text.lower() in ("1", "true", "yes", "directed")
            elif key == "observables":
                value = tuple(o.strip() for o in text.split(",") if o.strip())
            elif key in ("tolerance", "tail_fraction"):
                value = float(text)
            elif key in ("input_path", "colors_path", "output_dir", "constraint"):
                value = text
            elif key == "observation_interval":
                value = None if text.lower() in ("", "none") else int(float(text))
            else:
                value = int(float(text))
        except ValueError:
            raise ConfigInvalid(f"bad value for {raw_key}: {raw!r}") from None
        setattr(cfg, key, value)
    return cfg


def read_config_file(path) -> dict[str, str]:
    """key=value lines; '#' starts a comment."""
    values = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigInvalid(f"{path}:{lineno}: expected key=value")
        key, value = line.split("=", 1)
        values[key.strip()] = value.strip()
    return values
