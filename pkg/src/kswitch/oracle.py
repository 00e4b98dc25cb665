"""Exhaustive checks on tiny instances.

Enumerates every labelled graph with a starter's degree sequences that
satisfies a constraint, then builds the Markov graph of the k-switch walk
by running every possible trial through the same compiled test the walk
uses. Connectivity, constant degree, symmetry and stationarity of the
uniform distribution can then be checked exactly.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from collections.abc import Iterable, Sequence
from dataclasses import dataclass

import numpy as np
from scipy import sparse, stats
from scipy.sparse.csgraph import connected_components

from . import _kernels as K
from .constraints import Constraint, NoConstraint
from .errors import AsymmetryDetected, InstanceTooLarge, InsufficientSamples, RegularityViolation
from .graph import Graph

GraphKey = tuple[tuple[int, int], ...]


@dataclass
class GraphSet:
    """All members of a constrained graph set, identified by sorted edge lists."""

    n_nodes: int
    directed: bool
    members: list[GraphKey]
    colors: tuple[int, ...] | None = None

    def __post_init__(self):
        self.index = {key: i for i, key in enumerate(self.members)}
        if len(self.index) != len(self.members):
            raise ValueError("duplicate member")

    def __len__(self) -> int:
        return len(self.members)

    def graph(self, i: int) -> Graph:
        return Graph.from_edge_list(self.members[i], directed=self.directed, n_nodes=self.n_nodes,
                                    colors=self.colors)


def _candidate_estimate(out_deg, in_deg, n, directed) -> float:
    if directed:
        return math.prod(math.comb(n - 1, d) for d in out_deg)
    return math.sqrt(math.prod(math.comb(n - 1, d) for d in out_deg))


def _directed_edge_sets(out_deg, in_deg, n):
    cap = list(in_deg)
    sources = [u for u in range(n) if out_deg[u]]
    chosen: list[tuple[int, int]] = []

    def rec(pos):
        if pos == len(sources):
            if not any(cap):
                yield tuple(sorted(chosen))
            return
        u = sources[pos]
        avail = [v for v in range(n) if v != u and cap[v] > 0]
        for targets in itertools.combinations(avail, out_deg[u]):
            for v in targets:
                cap[v] -= 1
                chosen.append((u, v))
            yield from rec(pos + 1)
            for v in targets:
                cap[v] += 1
                chosen.pop()

    yield from rec(0)


def _undirected_edge_sets(deg, n):
    rem = list(deg)
    chosen: list[tuple[int, int]] = []

    def rec(u):
        if u == n:
            yield tuple(sorted(chosen))
            return
        if rem[u] == 0:
            yield from rec(u + 1)
            return
        avail = [v for v in range(u + 1, n) if rem[v] > 0]
        for nbrs in itertools.combinations(avail, rem[u]):
            r0 = rem[u]
            rem[u] = 0
            for v in nbrs:
                rem[v] -= 1
                chosen.append((u, v))
            yield from rec(u + 1)
            rem[u] = r0
            for v in nbrs:
                rem[v] += 1
                chosen.pop()

    yield from rec(0)


def enumerate_graph_set(template: Graph, c: Constraint | None = None,
                        max_candidates: float = 1e7) -> GraphSet:
    """Every simple labelled graph with the template's degree sequences
    (and node colours) that satisfies ``c``, by backtracking."""
    c = NoConstraint() if c is None else c
    n = template.n_nodes
    out_deg, in_deg = template.degree_sequences()
    if _candidate_estimate(out_deg, in_deg, n, template.directed) > max_candidates:
        raise InstanceTooLarge(f"N={n}, M={template.n_edges} is too large to enumerate")
    if template.directed:
        candidates = _directed_edge_sets(out_deg, in_deg, n)
    else:
        candidates = _undirected_edge_sets(out_deg, n)
    colors = None if template.colors is None else tuple(template.colors.tolist())
    members = []
    for edges in candidates:
        g = Graph.from_edge_list(edges, directed=template.directed, n_nodes=n, colors=colors)
        if c.check_full(g):
            members.append(edges)
    members.sort()
    return GraphSet(n, template.directed, members, colors)


# -- Markov graph ----------------------------------------------------------


@dataclass
class MarkovGraph:
    """Trial-outcome counts between members; diagonal holds the holds."""

    graph_set: GraphSet
    k: int
    counts: sparse.csr_matrix
    trial_total: int

    @property
    def n(self) -> int:
        return self.counts.shape[0]

    def transitions(self, i: int) -> dict[int, int]:
        row = self.counts.getrow(i)
        return dict(zip(row.indices.tolist(), row.data.tolist()))

    def neighbors(self, i: int) -> set[int]:
        return {j for j in self.transitions(i) if j != i}


def trials_per_graph(m_edges: int, k: int, directed: bool) -> int:
    total = math.comb(m_edges, k) * math.factorial(k)
    return total if directed else total << k


def build_markov_graph(s: GraphSet, k: int, c: Constraint | None = None) -> MarkovGraph:
    """Enumerate all C(M,k) * k! trials (times 2^k orientations when
    undirected) from every member and record where each one lands."""
    c = NoConstraint() if c is None else c
    if c.kernel is None:
        raise ValueError("the Markov graph needs a constraint with a compiled check")
    n = len(s)
    if n == 0:
        return MarkovGraph(s, k, sparse.csr_matrix((0, 0), dtype=np.int64), 0)
    m_edges = len(s.members[0])
    if not 2 <= k <= m_edges:
        raise ValueError(f"k must be in [2, {m_edges}]")
    total = trials_per_graph(m_edges, k, s.directed)
    code_index = {tuple(sorted(u * s.n_nodes + v for u, v in key)): i for i, key in enumerate(s.members)}
    rows_i, cols_j, vals = [], [], []
    rows = np.empty((total, m_edges), np.int64)
    for i in range(n):
        g = s.graph(i)
        scratch = K.make_scratch(g.n_nodes, k)
        nrows, outcome = K.enumerate_moves(
            g.src, g.dst, g.out_ptr, g.out_adj, g.in_ptr, g.in_adj, g.directed, g.n_nodes,
            k, c.kernel, c.kernel_param(g), *scratch, rows,
        )
        if int(outcome.sum()) != total:
            raise RegularityViolation(f"member {i}: {int(outcome.sum())} trials, expected {total}")
        dest = Counter(code_index.get(tuple(r)) for r in rows[:nrows].tolist())
        if None in dest:
            raise AssertionError(f"member {i}: an accepted switch left the graph set")
        for j, cnt in dest.items():
            rows_i.append(i)
            cols_j.append(j)
            vals.append(cnt)
        rows_i.append(i)
        cols_j.append(i)
        vals.append(total - nrows)
    counts = sparse.csr_matrix((vals, (rows_i, cols_j)), shape=(n, n), dtype=np.int64)
    return MarkovGraph(s, k, counts, total)


def components(m: MarkovGraph) -> list[list[int]]:
    """Weakly connected components of the Markov graph (self-loops ignored)."""
    if m.n == 0:
        return []
    _, labels = connected_components(m.counts, directed=True, connection="weak")
    groups: dict[int, list[int]] = {}
    for i, lab in enumerate(labels.tolist()):
        groups.setdefault(lab, []).append(i)
    return sorted(groups.values())


def component_count(m: MarkovGraph) -> int:
    return len(components(m))


@dataclass(frozen=True)
class UniformityReport:
    trial_total: int
    n_graphs: int
    n_components: int
    symmetric: bool
    max_stationarity_error: float


def verify_uniform_stationarity(m: MarkovGraph, tol: float = 1e-9) -> UniformityReport:
    """Check constant row sums, symmetric counts, and that the uniform vector
    on each component is stationary. Raises on the first two failures."""
    counts = m.counts
    row_sums = np.asarray(counts.sum(axis=1)).ravel()
    col_sums = np.asarray(counts.sum(axis=0)).ravel()
    if np.any(row_sums != m.trial_total) or np.any(col_sums != m.trial_total):
        raise RegularityViolation("Markov graph degrees are not all equal to the trial count")
    if (counts != counts.T).nnz:
        raise AsymmetryDetected("transition counts are not symmetric")
    p = counts.astype(float) / m.trial_total
    worst = 0.0
    for comp in components(m):
        sub = p[comp][:, comp]
        u = np.full(len(comp), 1.0 / len(comp))
        worst = max(worst, float(np.abs(sub.T @ u - u).max()))
    if worst > tol:
        raise RegularityViolation(f"uniform vector not stationary (error {worst:.3g})")
    return UniformityReport(m.trial_total, m.n, component_count(m), True, worst)


def chi_square_uniformity(s: GraphSet, samples: Iterable[GraphKey],
                          support: Sequence[int] | None = None) -> float:
    """p-value of a chi-square test of the sampled members against the
    uniform distribution on ``support`` (default: the whole set)."""
    support = list(range(len(s))) if support is None else sorted(support)
    pos = {i: t for t, i in enumerate(support)}
    freq = np.zeros(len(support), np.int64)
    n = 0
    for key in samples:
        i = s.index.get(tuple(key))
        if i is None or i not in pos:
            raise ValueError("sample outside the tested support")
        freq[pos[i]] += 1
        n += 1
    if n < 20 * len(support):
        raise InsufficientSamples(f"{n} samples for {len(support)} graphs; need {20 * len(support)}")
    if len(support) == 1:
        return 1.0
    return float(stats.chisquare(freq).pvalue)


# -- symmetry quotient -----------------------------------------------------


def relabel_classes(s: GraphSet, interchangeable: Sequence[Sequence[int]]) -> list[int]:
    """Class id of each member when the nodes inside each given block may be
    permuted freely (graphs identified up to those relabellings)."""
    blocks = [list(b) for b in interchangeable]
    maps = []
    for perms in itertools.product(*(itertools.permutations(b) for b in blocks)):
        relabel = list(range(s.n_nodes))
        for block, image in zip(blocks, perms):
            for u, v in zip(block, image):
                relabel[u] = v
        maps.append(relabel)

    def canon(key):
        best = None
        for r in maps:
            e = [(r[u], r[v]) for u, v in key]
            if not s.directed:
                e = [(min(u, v), max(u, v)) for u, v in e]
            e = tuple(sorted(e))
            if best is None or e < best:
                best = e
        return best

    ids: dict[GraphKey, int] = {}
    return [ids.setdefault(canon(key), len(ids)) for key in s.members]


def quotient_component_count(m: MarkovGraph, classes: Sequence[int]) -> int:
    """Components of the Markov graph after merging members of a class."""
    n_cls = max(classes) + 1 if len(classes) else 0
    c = sparse.coo_matrix(m.counts)
    cls = np.asarray(classes)
    q = sparse.csr_matrix((np.ones_like(c.data), (cls[c.row], cls[c.col])), shape=(n_cls, n_cls))
    return int(connected_components(q, directed=True, connection="weak")[0])


# -- export ----------------------------------------------------------------


def to_dot(m: MarkovGraph) -> str:
    """Markov graph in DOT; self-loop counts are node attributes."""
    lines = [f"digraph markov_k{m.k} {{"]
    diag = m.counts.diagonal()
    for i in range(m.n):
        lines.append(f'  {i} [label="{i}", self_loops={int(diag[i])}];')
    c = sparse.coo_matrix(m.counts)
    for i, j, v in sorted(zip(c.row.tolist(), c.col.tolist(), c.data.tolist())):
        if i != j:
            lines.append(f"  {i} -> {j} [count={v}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
