"""Constraint predicates checked on every switch trial.

Each constraint captures its target from the starter graph (the walk must
preserve "the same" statistic) and offers two checks:

* ``check_full(g)`` -- recomputes the statistic from scratch in plain Python;
* ``check_incremental(g, delta)`` -- decides the same question for the graph
  obtained by applying ``delta`` to ``g`` while touching only the switched
  edges. Built-in constraints route this through the compiled kernels the
  walk itself uses.
"""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass

import numpy as np

from . import _kernels as K
from .errors import MissingColorData, NNotDivisibleBy3, NotBipartite
from .graph import Graph

Edge = tuple[int, int]


@dataclass(frozen=True)
class EdgeDelta:
    """Aligned arc lists: ``removed[i] = (a_i, b_i)`` becomes ``added[i] = (a_i, b'_i)``."""

    removed: tuple[Edge, ...]
    added: tuple[Edge, ...]

    def __post_init__(self):
        if len(self.removed) != len(self.added):
            raise ValueError("removed and added must have the same length")
        if Counter(u for u, _ in self.removed) != Counter(u for u, _ in self.added):
            raise ValueError("a switch keeps the multiset of sources")


def apply_delta(g: Graph, delta: EdgeDelta) -> Graph:
    """Fresh graph with ``delta`` applied (edge order not preserved)."""
    canon = (lambda e: e) if g.directed else (lambda e: (min(e), max(e)))
    edges = set(g.edges())
    edges -= {canon(e) for e in delta.removed}
    edges |= {canon(e) for e in delta.added}
    colors = None if g.colors is None else g.colors.tolist()
    return Graph.from_edge_list(sorted(edges), directed=g.directed, n_nodes=g.n_nodes, colors=colors)


class Constraint:
    """Base predicate; subclasses set ``kernel`` to use a compiled check."""

    name = "constraint"
    kernel: int | None = None
    cost = "unspecified"

    def check_full(self, g: Graph) -> bool:
        raise NotImplementedError

    def kernel_param(self, g: Graph) -> np.ndarray:
        return np.zeros(1, np.int64)

    def check_incremental(self, g: Graph, delta: EdgeDelta) -> bool:
        if self.kernel is None:
            return self.check_full(apply_delta(g, delta))
        return _kernel_check(self, g, delta)

    def __repr__(self) -> str:
        return f"{type(self).__name__}()"


class NoConstraint(Constraint):
    """Only the fundamental constraint (degrees, simplicity)."""

    name = "none"
    kernel = K.CK_NONE
    cost = "O(1)"

    def check_full(self, g):
        return True


class AllOf(Constraint):
    """Conjunction of constraints; evaluated in Python on every trial."""

    name = "all-of"

    def __init__(self, *parts: Constraint):
        self.parts = parts

    def check_full(self, g):
        return all(c.check_full(g) for c in self.parts)

    def check_incremental(self, g, delta):
        return all(c.check_incremental(g, delta) for c in self.parts)


def _kernel_check(c: Constraint, g: Graph, delta: EdgeDelta) -> bool:
    k = len(delta.removed)
    lookup = {e: i for i, e in enumerate(g.edges())}
    idx = np.empty(k, np.int64)
    a = np.empty(k, np.int64)
    b = np.empty(k, np.int64)
    nb = np.empty(k, np.int64)
    for i, ((u, v), (u2, v2)) in enumerate(zip(delta.removed, delta.added)):
        if u != u2:
            raise ValueError("removed and added arcs must be aligned by source")
        key = (u, v) if g.directed else (min(u, v), max(u, v))
        idx[i] = lookup[key]
        a[i], b[i], nb[i] = u, v, v2
    ch = np.array([i for i in range(k) if b[i] != nb[i]], dtype=np.int64)
    mark, mark2, queue, buf1, buf2, stamp = K.make_scratch(g.n_nodes, k)
    return bool(K.check_moves(
        g.src, g.dst, g.out_ptr, g.out_adj, g.in_ptr, g.in_adj, g.directed,
        k, idx, a, b, nb, np.resize(ch, max(k, 1)), ch.size,
        c.kernel, c.kernel_param(g), mark, mark2, queue, buf1, buf2, stamp,
    ))


# -- C0: bipartite graph with fixed projection degrees ---------------------


def _undirected_neighbors(g: Graph) -> list[set[int]]:
    nbrs = [set() for _ in range(g.n_nodes)]
    for u, v in g.edges():
        nbrs[u].add(v)
        nbrs[v].add(u)
    return nbrs


def projection_degrees(g: Graph, side) -> list[int]:
    """Sorted degrees of the simple one-mode projection onto ``side``.

    Two side nodes are linked iff they share at least one neighbour.
    """
    side = set(int(v) for v in side)
    for u, v in g.edges():
        if (u in side) == (v in side):
            raise NotBipartite(f"edge ({u}, {v}) does not cross the bipartition")
    nbrs = _undirected_neighbors(g)
    degs = []
    for x in sorted(side):
        linked = set()
        for b in nbrs[x]:
            linked |= nbrs[b]
        linked.discard(x)
        degs.append(len(linked))
    return sorted(degs)


def source_side(g: Graph) -> list[int]:
    """Nodes with out-arcs and no in-arcs (side A of a directed bipartite graph)."""
    out_deg, in_deg = g.degree_sequences()
    return [v for v in range(g.n_nodes) if out_deg[v] > 0 and in_deg[v] == 0]


class ProjectionDegrees(Constraint):
    """Directed bipartite graph A -> B whose A-projection keeps its degree multiset."""

    name = "c0"
    kernel = K.CK_PROJECTION
    cost = "O(k * delta^3) per trial"

    def __init__(self, side, target):
        self.side = tuple(sorted(int(v) for v in side))
        self.target = tuple(sorted(target))

    @classmethod
    def from_starter(cls, g: Graph, side=None) -> "ProjectionDegrees":
        if not g.directed:
            raise ValueError("the projection constraint is defined on directed A -> B graphs")
        side = source_side(g) if side is None else side
        return cls(side, projection_degrees(g, side))

    def kernel_param(self, g):
        mask = np.zeros(g.n_nodes, np.int64)
        mask[list(self.side)] = 1
        return mask

    def check_full(self, g):
        side = set(self.side)
        if any(u not in side or v in side for u, v in g.edges()):
            return False
        return tuple(projection_degrees(g, side)) == self.target

    def __repr__(self):
        return f"ProjectionDegrees(side={list(self.side)}, target={list(self.target)})"


# -- C1: disjoint oriented triangles ---------------------------------------


def triangle_partition_check(g: Graph, colors=None) -> bool:
    """Is g a disjoint union of N/3 oriented 3-cycles, with N/3 nodes per colour?"""
    colors = g.colors if colors is None else np.asarray(colors)
    if colors is None:
        raise MissingColorData("colour classes are required")
    n = g.n_nodes
    if n % 3:
        raise NNotDivisibleBy3(f"N={n} is not a multiple of 3")
    if len(colors) != n:
        raise MissingColorData(f"{len(colors)} colours for {n} nodes")
    if sorted(Counter(int(c) for c in colors).values()) != [n // 3] * 3 and n:
        return False
    succ = {}
    for u, v in g.edges():
        if u in succ:
            return False
        succ[u] = v
    if len(succ) != n or len(set(succ.values())) != n:
        return False
    return all(succ[succ[succ[v]]] == v and succ[succ[v]] != v for v in range(n))


class ColoredTriangles(Constraint):
    """Every node has in/out-degree 1 and the arcs form N/3 oriented triangles."""

    name = "colored-triangles"
    kernel = K.CK_TRIANGLE_PARTITION
    cost = "O(k) per trial"

    def __init__(self, colors):
        self.colors = tuple(int(c) for c in colors)

    @classmethod
    def from_starter(cls, g: Graph) -> "ColoredTriangles":
        if not g.directed:
            raise ValueError("the triangle-partition constraint needs a directed graph")
        if g.colors is None:
            raise MissingColorData("the triangle-partition constraint needs node colours")
        return cls(g.colors)

    def check_full(self, g):
        return triangle_partition_check(g, self.colors)


# -- C2: out-degree correlations -------------------------------------------


def degree_pair_histogram(g: Graph, degrees=None) -> dict[tuple[int, int], int]:
    """Arc counts bucketed by (out-degree(source), out-degree(target)).

    ``degrees`` are the frozen per-node degrees; they default to the current
    out-degrees, which switches never change. Undirected graphs use sorted
    degree pairs.
    """
    if degrees is None:
        degrees = g.degree_sequences()[0]
    hist: Counter = Counter()
    for u, v in g.edges():
        p, q = degrees[u], degrees[v]
        if not g.directed and q < p:
            p, q = q, p
        hist[(p, q)] += 1
    return dict(sorted(hist.items()))


class DegreeCorrelation(Constraint):
    """The histogram of (deg(source), deg(target)) over arcs stays fixed."""

    name = "degree-corr"
    kernel = K.CK_DEGREE_PAIRS
    cost = "O(k^2) per trial"

    def __init__(self, degrees, target):
        self.degrees = tuple(int(d) for d in degrees)
        self.target = dict(target)

    @classmethod
    def from_starter(cls, g: Graph) -> "DegreeCorrelation":
        degrees = g.degree_sequences()[0]
        return cls(degrees, degree_pair_histogram(g, degrees))

    def kernel_param(self, g):
        return np.array(self.degrees, dtype=np.int64)

    def check_full(self, g):
        return degree_pair_histogram(g, self.degrees) == self.target


# -- C3: triangle count ----------------------------------------------------


def count_undirected_triangles(g: Graph) -> int:
    nbrs = _undirected_neighbors(g)
    total = 0
    for u, v in g.edges():
        total += len(nbrs[u] & nbrs[v])
    return total // 3


class TriangleCount(Constraint):
    """Undirected graph whose number of triangles stays fixed."""

    name = "triangles"
    kernel = K.CK_TRIANGLES
    cost = "O(k * delta) per trial"

    def __init__(self, target: int):
        self.target = int(target)

    @classmethod
    def from_starter(cls, g: Graph) -> "TriangleCount":
        if g.directed:
            raise ValueError("the triangle-count constraint is defined on undirected graphs")
        return cls(count_undirected_triangles(g))

    def check_full(self, g):
        return count_undirected_triangles(g) == self.target

    def __repr__(self):
        return f"TriangleCount({self.target})"


# -- C4: component sizes ---------------------------------------------------


def component_size_multiset(g: Graph) -> list[int]:
    """Sorted sizes of the (weakly) connected components, by BFS."""
    nbrs = _undirected_neighbors(g)
    seen = [False] * g.n_nodes
    sizes = []
    for root in range(g.n_nodes):
        if seen[root]:
            continue
        seen[root] = True
        queue = deque([root])
        size = 0
        while queue:
            u = queue.popleft()
            size += 1
            for w in nbrs[u]:
                if not seen[w]:
                    seen[w] = True
                    queue.append(w)
        sizes.append(size)
    return sorted(sizes)


class ComponentSizes(Constraint):
    """The multiset of connected-component sizes stays fixed."""

    name = "components"
    kernel = K.CK_COMPONENTS
    cost = "O(k * M) per trial"

    def __init__(self, target):
        self.target = tuple(sorted(int(s) for s in target))

    @classmethod
    def from_starter(cls, g: Graph) -> "ComponentSizes":
        return cls(component_size_multiset(g))

    def check_full(self, g):
        return tuple(component_size_multiset(g)) == self.target


BUILTIN = {
    "none": NoConstraint,
    "c0": ProjectionDegrees,
    "colored-triangles": ColoredTriangles,
    "degree-corr": DegreeCorrelation,
    "triangles": TriangleCount,
    "components": ComponentSizes,
}


def from_starter(name: str, g: Graph) -> Constraint:
    """Build a named built-in constraint with its target taken from ``g``."""
    try:
        cls = BUILTIN[name]
    except KeyError:
        raise ValueError(f"unknown constraint {name!r}; choose from {sorted(BUILTIN)}") from None
    if cls is NoConstraint:
        return NoConstraint()
    return cls.from_starter(g)
