"""Target observables measured along a walk, and their traces."""

from __future__ import annotations

import csv
import enum
from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np

from . import _kernels as K
from .errors import InsufficientSamples, MissingColorData, NotTrianglePartition
from .graph import COLOR_NAMES, Graph

TRIANGLE_TYPES = (
    "R-R-R", "G-G-G", "B-B-B",
    "R-G-G", "R-B-B", "G-G-B", "G-B-B", "R-R-B", "R-R-G",
    "R-B-G", "R-G-B",
)


def count_directed_triangles(g: Graph) -> int:
    """Number of oriented 3-cycles (each node triple counted once)."""
    if not g.directed:
        raise ValueError("directed triangles need a directed graph")
    return int(K.directed_triangle_count(g.out_ptr, g.out_adj, g.in_ptr, g.in_adj, g.n_nodes))


def count_motifs4(g: Graph) -> dict[str, int]:
    """Subgraph (not induced) counts of triangles and the connected 4-node motifs."""
    if g.directed:
        raise ValueError("motif counts are defined on undirected graphs")
    tri, paths, cycles, stars, cliques = K.undirected_motifs(g.out_ptr, g.out_adj, g.n_nodes)
    return {
        "triangles": int(tri),
        "four_paths": int(paths),
        "four_cycles": int(cycles),
        "four_stars": int(stars),
        "four_cliques": int(cliques),
    }


def _triangle_type(colors: Sequence[int]) -> str:
    names = [COLOR_NAMES[c] for c in colors]
    if len(set(colors)) == 3:
        r = names.index("R")
        return "-".join(names[r:] + names[:r])
    return "-".join(sorted(names, key=COLOR_NAMES.index))


def colored_triangle_histogram(g: Graph, colors=None) -> dict[str, int]:
    """Classify each oriented triangle of a triangle partition by its colours.

    Trichromatic triangles are read along the orientation starting at R
    (R-G-B vs R-B-G); the other nine types ignore orientation.
    """
    colors = g.colors if colors is None else colors
    if colors is None:
        raise MissingColorData("triangle colours need node colours")
    succ = dict(g.edges())
    if len(succ) != g.n_nodes or g.n_edges != g.n_nodes:
        raise NotTrianglePartition("every node needs exactly one out-arc")
    hist = dict.fromkeys(TRIANGLE_TYPES, 0)
    seen = set()
    for v in range(g.n_nodes):
        if v in seen:
            continue
        cyc = [v, succ[v], succ[succ[v]]]
        if succ[cyc[2]] != v or len(set(cyc)) != 3:
            raise NotTrianglePartition(f"node {v} is not on an oriented triangle")
        seen.update(cyc)
        hist[_triangle_type([int(colors[u]) for u in cyc])] += 1
    return hist


def colored_triangle_theory(n_nodes: int) -> dict[str, float]:
    """Expected triangle-type proportions over all triangle partitions with
    N/3 nodes of each colour (uniform partition, uniform orientations)."""
    n = n_nodes // 3
    triples = n_nodes * (n_nodes - 1) * (n_nodes - 2)
    mono = n * (n - 1) * (n - 2) / triples
    bi = 3 * n * n * (n - 1) / triples
    tri = 3 * n ** 3 / triples
    return {t: mono if len(set(t.split("-"))) == 1 else bi if len(set(t.split("-"))) == 2 else tri
            for t in TRIANGLE_TYPES}


class Kind(enum.Enum):
    DIRECTED_TRIANGLES = "directed-triangles"
    UNDIRECTED_TRIANGLES = "triangles"
    FOUR_CYCLES = "four-cycles"
    FOUR_CLIQUES = "four-cliques"
    FOUR_PATHS = "four-paths"
    FOUR_STARS = "four-stars"
    MOTIFS4 = "motifs4"
    COLORED_TRIANGLE_HISTOGRAM = "colored-triangles"
    COMPONENT_SIZES = "components"
    DEGREE_PAIR_HISTOGRAM = "degree-pairs"


@dataclass(frozen=True)
class Observable:
    """A named graph statistic; ``measure`` returns one or more numeric columns."""

    kind: Kind

    @property
    def name(self) -> str:
        return self.kind.value

    def measure(self, g: Graph) -> dict[str, float]:
        kind = self.kind
        if kind is Kind.DIRECTED_TRIANGLES:
            return {"directed_triangles": count_directed_triangles(g)}
        if kind is Kind.COLORED_TRIANGLE_HISTOGRAM:
            hist = colored_triangle_histogram(g)
            total = max(1, sum(hist.values()))
            return {t: hist[t] / total for t in TRIANGLE_TYPES}
        if kind is Kind.COMPONENT_SIZES:
            from .constraints import component_size_multiset
            sizes = component_size_multiset(g)
            return {"n_components": len(sizes), "largest_component": max(sizes, default=0)}
        if kind is Kind.DEGREE_PAIR_HISTOGRAM:
            from .constraints import degree_pair_histogram
            hist = degree_pair_histogram(g)
            m = max(1, g.n_edges)
            return {"degree_pair_moment": sum(p * q * c for (p, q), c in hist.items()) / m}
        motifs = count_motifs4(g)
        if kind is Kind.MOTIFS4:
            return {key: motifs[key] for key in ("four_paths", "four_cycles", "four_stars", "four_cliques")}
        key = {
            Kind.UNDIRECTED_TRIANGLES: "triangles",
            Kind.FOUR_CYCLES: "four_cycles",
            Kind.FOUR_CLIQUES: "four_cliques",
            Kind.FOUR_PATHS: "four_paths",
            Kind.FOUR_STARS: "four_stars",
        }[kind]
        return {key: motifs[key]}


def parse_observables(names: str | Sequence[str]) -> list[Observable]:
    if isinstance(names, str):
        names = [n for n in names.split(",") if n.strip()]
    try:
        return [Observable(Kind(n.strip())) for n in names]
    except ValueError as exc:
        valid = ", ".join(k.value for k in Kind)
        raise ValueError(f"{exc}; valid observables: {valid}") from None


def measure_all(observables: Sequence[Observable], g: Graph) -> dict[str, float]:
    row: dict[str, float] = {}
    for obs in observables:
        row.update(obs.measure(g))
    return row


@dataclass
class ObservableTrace:
    """Observable values sampled at increasing trial indices."""

    columns: list[str] = field(default_factory=list)
    trials: list[int] = field(default_factory=list)
    values: list[list[float]] = field(default_factory=list)

    def append(self, trial: int, row: dict[str, float]) -> None:
        if self.trials and trial <= self.trials[-1]:
            raise ValueError("trial indices must be strictly increasing")
        if not self.columns:
            self.columns = list(row)
        self.trials.append(int(trial))
        self.values.append([float(row[c]) for c in self.columns])

    def __len__(self) -> int:
        return len(self.trials)

    def array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=float).reshape(len(self.trials), len(self.columns))

    def column(self, name: str) -> np.ndarray:
        return self.array()[:, self.columns.index(name)]

    def tail_mean(self, fraction: float = 0.5) -> dict[str, float]:
        """Mean of each column over the last ``fraction`` of the samples."""
        arr = self.array()
        if not len(arr):
            return {}
        start = min(len(arr) - 1, int(len(arr) * (1 - fraction)))
        return dict(zip(self.columns, arr[start:].mean(axis=0).tolist()))

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["trial", *self.columns])
            for t, row in zip(self.trials, self.values):
                w.writerow([t, *(repr(v) for v in row)])

    @classmethod
    def from_csv(cls, path) -> "ObservableTrace":
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))
        trace = cls(columns=rows[0][1:])
        for r in rows[1:]:
            trace.trials.append(int(r[0]))
            trace.values.append([float(x) for x in r[1:]])
        return trace


def plateau_detect(trace: ObservableTrace, window: int, rel_tol: float) -> bool:
    """True iff, for every column, the mean over the last ``window`` samples
    is within ``rel_tol`` (relative) of the mean over the window before it."""
    if window < 1 or len(trace) < 2 * window:
        raise InsufficientSamples(f"need {2 * window} samples, trace has {len(trace)}")
    arr = trace.array()
    last = arr[-window:].mean(axis=0)
    prev = arr[-2 * window:-window].mean(axis=0)
    for m1, m2 in zip(prev, last):
        scale = max(abs(m1), abs(m2))
        if scale < 1e-9:
            continue
        if abs(m2 - m1) / scale >= rel_tol:
            return False
    return True
