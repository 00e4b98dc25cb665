"""Simple graph storage with an edge array and fixed-size adjacency slots.

Random edge selection draws an index into the edge array; neighbourhood
queries scan the node's adjacency block in O(degree). Both structures are
updated together by :meth:`Graph.apply_switch`.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from pathlib import Path

import numpy as np

from . import _kernels as K
from .errors import DuplicateEdge, KTooLarge, MissingColorData, NodeOutOfRange, SelfLoop

COLOR_NAMES = ("R", "G", "B")


def _slots(n: int, owners: np.ndarray, members: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    counts = np.bincount(owners, minlength=n) if owners.size else np.zeros(n, np.int64)
    ptr = np.zeros(n + 1, np.int64)
    np.cumsum(counts, out=ptr[1:])
    order = np.argsort(owners, kind="stable")
    return ptr, members[order].astype(np.int64)


class Graph:
    """Mutable simple graph (no self-loops, no parallel edges).

    Node ids are dense integers in ``range(n_nodes)``. Undirected edges are
    stored canonically with ``source < target``.
    """

    def __init__(self, n_nodes: int, src: np.ndarray, dst: np.ndarray, directed: bool,
                 colors: np.ndarray | None = None, labels: list | None = None):
        self.n_nodes = int(n_nodes)
        self.directed = bool(directed)
        self.src = np.ascontiguousarray(src, dtype=np.int64)
        self.dst = np.ascontiguousarray(dst, dtype=np.int64)
        self.colors = None if colors is None else np.asarray(colors, dtype=np.int64)
        self.labels = labels
        self._rebuild_adjacency()
        self._pool = np.arange(self.n_edges, dtype=np.int64)

    # -- construction ------------------------------------------------------

    @classmethod
    def from_edge_list(cls, pairs: Iterable[tuple[int, int]], directed: bool = True,
                       n_nodes: int | None = None, colors: Sequence | None = None) -> "Graph":
        pairs = [(int(u), int(v)) for u, v in pairs]
        seen = set()
        src, dst = [], []
        for u, v in pairs:
            if u == v:
                raise SelfLoop(f"self-loop on node {u}")
            if u < 0 or v < 0 or (n_nodes is not None and max(u, v) >= n_nodes):
                raise NodeOutOfRange(f"edge ({u}, {v}) outside node range")
            if not directed and u > v:
                u, v = v, u
            if (u, v) in seen:
                raise DuplicateEdge(f"duplicate edge ({u}, {v})")
            seen.add((u, v))
            src.append(u)
            dst.append(v)
        if n_nodes is None:
            n_nodes = 1 + max((max(e) for e in seen), default=-1)
        col = None
        if colors is not None:
            col = np.array([_color_code(c) for c in colors], dtype=np.int64)
            if col.size != n_nodes:
                raise MissingColorData(f"{col.size} colours for {n_nodes} nodes")
        return cls(n_nodes, np.array(src, np.int64), np.array(dst, np.int64), directed, col)

    def copy(self) -> "Graph":
        g = Graph.__new__(Graph)
        g.n_nodes = self.n_nodes
        g.directed = self.directed
        g.src = self.src.copy()
        g.dst = self.dst.copy()
        g.colors = None if self.colors is None else self.colors.copy()
        g.labels = self.labels
        g.out_ptr = self.out_ptr
        g.out_adj = self.out_adj.copy()
        g.in_ptr = self.in_ptr
        g.in_adj = self.in_adj.copy()
        g._pool = np.arange(self.n_edges, dtype=np.int64)
        return g

    def _rebuild_adjacency(self) -> None:
        n = self.n_nodes
        if self.directed:
            self.out_ptr, self.out_adj = _slots(n, self.src, self.dst)
            self.in_ptr, self.in_adj = _slots(n, self.dst, self.src)
        else:
            owners = np.concatenate([self.src, self.dst])
            members = np.concatenate([self.dst, self.src])
            self.out_ptr, self.out_adj = _slots(n, owners, members)
            self.in_ptr = np.zeros(1, np.int64)
            self.in_adj = np.zeros(0, np.int64)

    # -- queries -----------------------------------------------------------

    @property
    def n_edges(self) -> int:
        return int(self.src.shape[0])

    def __len__(self) -> int:
        return self.n_edges

    def __repr__(self) -> str:
        kind = "directed" if self.directed else "undirected"
        return f"Graph({kind}, N={self.n_nodes}, M={self.n_edges})"

    def edges(self) -> list[tuple[int, int]]:
        return list(zip(self.src.tolist(), self.dst.tolist()))

    def key(self) -> tuple[tuple[int, int], ...]:
        """Canonical identity of the labelled graph: its sorted edge list."""
        return tuple(sorted(self.edges()))

    def out_neighbors(self, v: int) -> np.ndarray:
        return self.out_adj[self.out_ptr[v]:self.out_ptr[v + 1]]

    def in_neighbors(self, v: int) -> np.ndarray:
        if not self.directed:
            return self.out_neighbors(v)
        return self.in_adj[self.in_ptr[v]:self.in_ptr[v + 1]]

    neighbors = out_neighbors

    def has_edge(self, a: int, b: int) -> bool:
        return bool(K.has_arc(self.out_ptr, self.out_adj, a, b))

    def degree_sequences(self) -> tuple[list[int], list[int]]:
        out_deg = np.diff(self.out_ptr).tolist()
        if not self.directed:
            return out_deg, list(out_deg)
        return out_deg, np.diff(self.in_ptr).tolist()

    def color_names(self) -> list[str]:
        if self.colors is None:
            raise MissingColorData("graph has no node colours")
        return [COLOR_NAMES[c] for c in self.colors]

    def nbytes(self) -> int:
        arrays = (self.src, self.dst, self.out_ptr, self.out_adj, self.in_ptr, self.in_adj, self._pool)
        return int(sum(a.nbytes for a in arrays))

    # -- mutation ----------------------------------------------------------

    def random_edge_indices(self, k: int, rng: np.random.Generator) -> np.ndarray:
        """Uniformly random k-subset of edge-array indices."""
        if k < 2:
            raise ValueError("k must be at least 2")
        if k > self.n_edges:
            raise KTooLarge(f"k={k} exceeds M={self.n_edges}")
        return rng.choice(self.n_edges, size=k, replace=False).astype(np.int64)

    def apply_switch(self, indices: Sequence[int], new_targets: Sequence[int],
                     sources: Sequence[int] | None = None) -> None:
        """Replace edge ``indices[i]`` by (sources[i], new_targets[i]).

        ``sources`` defaults to the current sources; undirected callers pass
        the endpoint they kept fixed. No validation is done here.
        """
        idx = np.asarray(indices, dtype=np.int64)
        new = np.asarray(new_targets, dtype=np.int64)
        if sources is None:
            a = self.src[idx].copy()
        else:
            a = np.asarray(sources, dtype=np.int64)
        old = np.where(self.src[idx] == a, self.dst[idx], self.src[idx])
        K.apply_moves(self.src, self.dst, self.out_ptr, self.out_adj, self.in_ptr, self.in_adj,
                      self.directed, idx, a, old, new, idx.size)

    def check_consistency(self) -> None:
        """Rebuild adjacency from the edge array and compare; raise on mismatch."""
        ref = Graph(self.n_nodes, self.src, self.dst, self.directed)
        for v in range(self.n_nodes):
            if sorted(self.out_neighbors(v).tolist()) != sorted(ref.out_neighbors(v).tolist()):
                raise AssertionError(f"out-adjacency of {v} disagrees with edge array")
            if self.directed and sorted(self.in_neighbors(v).tolist()) != sorted(ref.in_neighbors(v).tolist()):
                raise AssertionError(f"in-adjacency of {v} disagrees with edge array")
        if len(set(self.edges())) != self.n_edges:
            raise AssertionError("edge array holds a duplicate")
        if not self.directed and np.any(self.src >= self.dst):
            raise AssertionError("undirected edge not canonical")


def degree_sequences(g: Graph) -> tuple[list[int], list[int]]:
    return g.degree_sequences()


def _color_code(c) -> int:
    if isinstance(c, str):
        try:
            return COLOR_NAMES.index(c.strip().upper())
        except ValueError:
            raise MissingColorData(f"unknown colour {c!r}") from None
    c = int(c)
    if c not in (0, 1, 2):
        raise MissingColorData(f"unknown colour {c!r}")
    return c


# -- text formats ----------------------------------------------------------


def _data_lines(path):
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            yield line.split()


def read_edge_list(path, directed: bool = True, colors_path=None) -> Graph:
    """Read "u v" pairs, one per line, '#' comment lines.

    Integer labels are used as node ids directly; any non-integer label makes
    the reader relabel nodes densely in order of first appearance (kept in
    ``Graph.labels``).
    """
    rows = [tuple(parts[:2]) for parts in _data_lines(path)]
    try:
        pairs = [(int(u), int(v)) for u, v in rows]
        labels = None
        n = 1 + max((max(p) for p in pairs), default=-1)
    except ValueError:
        index: dict[str, int] = {}
        for u, v in rows:
            index.setdefault(u, len(index))
            index.setdefault(v, len(index))
        pairs = [(index[u], index[v]) for u, v in rows]
        labels = list(index)
        n = len(labels)
    colors = None
    if colors_path is not None:
        colors = read_colors(colors_path, n, labels)
    g = Graph.from_edge_list(pairs, directed=directed, n_nodes=n, colors=colors)
    g.labels = labels
    return g


def read_colors(path, n_nodes: int, labels: list | None = None) -> list[int]:
    """Read "u C" lines with C in {R, G, B}."""
    lookup = None if labels is None else {lab: i for i, lab in enumerate(labels)}
    colors: list[int | None] = [None] * n_nodes
    for parts in _data_lines(path):
        node, c = parts[0], parts[1]
        v = int(node) if lookup is None else lookup.get(node)
        if v is None or not 0 <= v < n_nodes:
            raise NodeOutOfRange(f"colour given for unknown node {node}")
        colors[v] = _color_code(c)
    missing = [v for v, c in enumerate(colors) if c is None]
    if missing:
        raise MissingColorData(f"{len(missing)} nodes without colour, e.g. {missing[0]}")
    return colors


def write_edge_list(g: Graph, path) -> None:
    with open(path, "w") as fh:
        fh.write(f"# {'directed' if g.directed else 'undirected'} N={g.n_nodes} M={g.n_edges}\n")
        for u, v in g.edges():
            fh.write(f"{u} {v}\n")
