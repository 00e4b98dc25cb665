"""Starter graphs: the bundled toy instances and seeded random generators."""

from __future__ import annotations

from importlib import resources

import numpy as np

from .graph import Graph, read_edge_list


def _bundled(name: str, directed: bool = True) -> Graph:
    with resources.as_file(resources.files("kswitch") / "data" / name) as path:
        return read_edge_list(path, directed=directed)


def c0_toy() -> Graph:
    """Bipartite toy A = {0..4} -> B = {5..8} with projection degrees {2,2,2,1,1}."""
    return _bundled("c0_toy.txt")


def three_cycle() -> Graph:
    return _bundled("three_cycle.txt")


def colored_triangle_starter(n_nodes: int) -> Graph:
    """N/3 disjoint triangles R -> G -> B -> R; colours are 0, 1, 2 for R, G, B."""
    if n_nodes % 3:
        raise ValueError("n_nodes must be a multiple of 3")
    n = n_nodes // 3
    edges = []
    for t in range(n):
        r, g, b = t, n + t, 2 * n + t
        edges += [(r, g), (g, b), (b, r)]
    colors = [0] * n + [1] * n + [2] * n
    return Graph.from_edge_list(edges, directed=True, n_nodes=n_nodes, colors=colors)


def random_simple_graph(n_nodes: int, n_edges: int, directed: bool, rng) -> Graph:
    """Uniformly random simple graph with exactly ``n_edges`` edges."""
    rng = np.random.default_rng(rng)
    pairs = [(u, v) for u in range(n_nodes) for v in range(n_nodes)
             if u != v and (directed or u < v)]
    if n_edges > len(pairs):
        raise ValueError("too many edges for a simple graph")
    pick = rng.choice(len(pairs), size=n_edges, replace=False)
    return Graph.from_edge_list([pairs[i] for i in sorted(pick)], directed=directed, n_nodes=n_nodes)


def random_bipartite(n_a: int, n_b: int, n_edges: int, rng) -> Graph:
    """Random directed bipartite graph A = {0..n_a-1} -> B = {n_a..n_a+n_b-1}."""
    rng = np.random.default_rng(rng)
    pairs = [(a, n_a + b) for a in range(n_a) for b in range(n_b)]
    if n_edges > len(pairs):
        raise ValueError("too many edges for the bipartition")
    pick = rng.choice(len(pairs), size=n_edges, replace=False)
    return Graph.from_edge_list([pairs[i] for i in sorted(pick)], n_nodes=n_a + n_b)


def heavy_tailed_directed(n_nodes: int, n_edges: int, rng, exponent: float = 2.2) -> Graph:
    """Simple directed graph with heavy-tailed in- and out-degrees.

    Node weights follow a Pareto law; arcs are drawn with probability
    proportional to w_out(u) * w_in(v), duplicates and self-loops discarded.
    """
    rng = np.random.default_rng(rng)
    if n_edges > n_nodes * (n_nodes - 1) // 4:
        raise ValueError("graph too dense for rejection sampling")
    w_out = rng.pareto(exponent - 1, n_nodes) + 1
    w_in = rng.pareto(exponent - 1, n_nodes) + 1
    p_out, p_in = w_out / w_out.sum(), w_in / w_in.sum()
    edges: set[tuple[int, int]] = set()
    while len(edges) < n_edges:
        need = n_edges - len(edges)
        us = rng.choice(n_nodes, size=2 * need, p=p_out)
        vs = rng.choice(n_nodes, size=2 * need, p=p_in)
        for u, v in zip(us.tolist(), vs.tolist()):
            if u != v:
                edges.add((u, v))
                if len(edges) == n_edges:
                    break
    return Graph.from_edge_list(sorted(edges), n_nodes=n_nodes)
