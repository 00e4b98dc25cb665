"""Brute-force subgraph counts by enumerating node subsets and edge subsets.

Deliberately naive and independent of the library's counters.
"""

import itertools
from functools import lru_cache

PAIRS4 = list(itertools.combinations(range(4), 2))


@lru_cache(maxsize=None)
def _shapes_in_mask(mask: int) -> tuple[int, int, int, int]:
    """(paths, cycles, stars, cliques) spanning 4 nodes inside an edge mask."""
    present = [p for i, p in enumerate(PAIRS4) if mask >> i & 1]
    counts = [0, 0, 0, 0]
    for r in (3, 4, 6):
        for sub in itertools.combinations(present, r):
            deg = [0] * 4
            for u, v in sub:
                deg[u] += 1
                deg[v] += 1
            if 0 in deg:
                continue
            shape = tuple(sorted(deg))
            if r == 3 and shape == (1, 1, 2, 2):
                counts[0] += 1
            elif r == 3 and shape == (1, 1, 1, 3):
                counts[2] += 1
            elif r == 4 and shape == (2, 2, 2, 2):
                counts[1] += 1
            elif r == 6:
                counts[3] += 1
    return tuple(counts)


def brute_motifs(n, edges):
    adj = [[False] * n for _ in range(n)]
    for u, v in edges:
        adj[u][v] = adj[v][u] = True
    tri = sum(1 for a, b, c in itertools.combinations(range(n), 3) if adj[a][b] and adj[b][c] and adj[a][c])
    total = [0, 0, 0, 0]
    for quad in itertools.combinations(range(n), 4):
        mask = 0
        for i, (x, y) in enumerate(PAIRS4):
            if adj[quad[x]][quad[y]]:
                mask |= 1 << i
        if bin(mask).count("1") >= 3:
            for j, c in enumerate(_shapes_in_mask(mask)):
                total[j] += c
    return {
        "triangles": tri,
        "four_paths": total[0],
        "four_cycles": total[1],
        "four_stars": total[2],
        "four_cliques": total[3],
    }


def brute_directed_triangles(n, arcs):
    s = set(arcs)
    count = 0
    for a, b, c in itertools.combinations(range(n), 3):
        count += ((a, b) in s and (b, c) in s and (c, a) in s)
        count += ((a, c) in s and (c, b) in s and (b, a) in s)
    return count
