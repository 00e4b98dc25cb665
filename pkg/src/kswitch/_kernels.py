"""Compiled inner loops: switch trials, incremental constraint checks, walks.

Graph state is passed as flat int64 arrays:

    src, dst      edge array (undirected edges stored with src < dst)
    optr, oadj    out-neighbour slots (all neighbours when undirected)
    iptr, iadj    in-neighbour slots (empty when undirected)

Every node owns a fixed block of slots whose size equals its degree.
Switches permute targets and never change degrees, so blocks never need
to grow; a slot is set to -1 while an arc is in flight.

Scratch is a tuple ``(mark, mark2, queue, buf1, buf2, stamp)`` of
N-sized arrays plus a one-element stamp counter; one per walk.
"""

import numpy as np
from numba import njit

# Trial outcome codes.
ACCEPT_CHANGE = 0
ACCEPT_HOLD = 1  # accepted but the edge set is unchanged (e.g. identity)
REJ_SELF_LOOP = 2
REJ_MULTI_EDGE = 3
REJ_CONSTRAINT = 4
N_CODES = 5

# Constraint kernels.
CK_NONE = 0
CK_PROJECTION = 1  # C0: degree multiset of the side-A projection
CK_TRIANGLE_PARTITION = 2  # C1: oriented-triangle count
CK_DEGREE_PAIRS = 3  # C2: (deg(src), deg(dst)) histogram
CK_TRIANGLES = 4  # C3: undirected triangle count
CK_COMPONENTS = 5  # C4: component size multiset


def make_scratch(n_nodes, k):
    n = max(n_nodes, 1)
    size = max(n, 4 * k + 4)
    return (
        np.zeros(n, np.int64),
        np.zeros(n, np.int64),
        np.zeros(n, np.int64),
        np.zeros(size, np.int64),
        np.zeros(size, np.int64),
        np.zeros(1, np.int64),
    )


# -- adjacency primitives ---------------------------------------------------


@njit(cache=True)
def _slot_replace(ptr, adj, node, old, new):
    for s in range(ptr[node], ptr[node + 1]):
        if adj[s] == old:
            adj[s] = new
            return True
    return False


@njit(cache=True, inline="always")
def has_arc(optr, oadj, u, v):
    for s in range(optr[u], optr[u + 1]):
        if oadj[s] == v:
            return True
    return False


@njit(cache=True)
def _remove_arc(directed, optr, oadj, iptr, iadj, u, v):
    _slot_replace(optr, oadj, u, v, -1)
    if directed:
        _slot_replace(iptr, iadj, v, u, -1)
    else:
        _slot_replace(optr, oadj, v, u, -1)


@njit(cache=True)
def _add_arc(directed, optr, oadj, iptr, iadj, u, v):
    _slot_replace(optr, oadj, u, -1, v)
    if directed:
        _slot_replace(iptr, iadj, v, -1, u)
    else:
        _slot_replace(optr, oadj, v, -1, u)


@njit(cache=True)
def apply_moves(src, dst, optr, oadj, iptr, iadj, directed, idx, a, old, new, k):
    """Replace arc (a[i], old[i]) stored at edge slot idx[i] by (a[i], new[i])."""
    for i in range(k):
        if old[i] != new[i]:
            _remove_arc(directed, optr, oadj, iptr, iadj, a[i], old[i])
    for i in range(k):
        if old[i] != new[i]:
            _add_arc(directed, optr, oadj, iptr, iadj, a[i], new[i])
            e = idx[i]
            if directed:
                dst[e] = new[i]
            elif a[i] < new[i]:
                src[e] = a[i]
                dst[e] = new[i]
            else:
                src[e] = new[i]
                dst[e] = a[i]


# -- proposal sampling -----------------------------------------------------


@njit(cache=True, inline="always")
def _uniform_below(rng, n):
    r = int(rng.random() * n)
    if r >= n:
        r = n - 1
    return r


@njit(cache=True, inline="always")
def draw_proposal(rng, m, k, directed, idx, perm, orient, pool):
    """Uniform k-subset of edge slots, uniform permutation, random orientations."""
    if 2 * k <= m:
        i = 0
        while i < k:
            e = _uniform_below(rng, m)
            dup = False
            for j in range(i):
                if idx[j] == e:
                    dup = True
                    break
            if not dup:
                idx[i] = e
                i += 1
    else:
        # partial Fisher-Yates; pool stays a permutation of 0..m-1
        for i in range(k):
            j = i + _uniform_below(rng, m - i)
            tmp = pool[i]
            pool[i] = pool[j]
            pool[j] = tmp
            idx[i] = pool[i]
    for i in range(k):
        perm[i] = i
    for i in range(k - 1, 0, -1):
        j = _uniform_below(rng, i + 1)
        tmp = perm[i]
        perm[i] = perm[j]
        perm[j] = tmp
    if not directed:
        for i in range(k):
            orient[i] = 1 if rng.random() < 0.5 else 0


# -- incremental constraint checks -----------------------------------------


@njit(cache=True)
def _next_stamp(stamp):
    stamp[0] += 1
    return stamp[0]


@njit(cache=True)
def _in_moved(directed, u, v, a, x, ch, upto):
    """Is arc (u, v) one of the moved arcs (a[c], x[c]) for c in ch[:upto]?"""
    for t in range(upto):
        c = ch[t]
        if a[c] == u and x[c] == v:
            return True
        if not directed and a[c] == v and x[c] == u:
            return True
    return False


@njit(cache=True)
def _triangles_through(directed, optr, oadj, iptr, iadj, a, x, ch, nch, mark, stamp):
    """Triangles containing at least one moved arc, each counted once.

    A triangle is charged to the first moved arc (in ``ch`` order) it
    contains, so triangles sharing several moved arcs are not double counted.
    Directed graphs count oriented 3-cycles u->v->w->u.
    """
    total = 0
    for t in range(nch):
        c = ch[t]
        u = a[c]
        v = x[c]
        s = _next_stamp(stamp)
        if directed:
            # w with w -> u, then v -> w
            for q in range(iptr[u], iptr[u + 1]):
                w = iadj[q]
                if w >= 0:
                    mark[w] = s
            for q in range(optr[v], optr[v + 1]):
                w = oadj[q]
                if w >= 0 and mark[w] == s:
                    if not _in_moved(True, v, w, a, x, ch, t) and not _in_moved(
                        True, w, u, a, x, ch, t
                    ):
                        total += 1
        else:
            for q in range(optr[u], optr[u + 1]):
                w = oadj[q]
                if w >= 0:
                    mark[w] = s
            for q in range(optr[v], optr[v + 1]):
                w = oadj[q]
                if w >= 0 and w != u and mark[w] == s:
                    if not _in_moved(False, u, w, a, x, ch, t) and not _in_moved(
                        False, v, w, a, x, ch, t
                    ):
                        total += 1
    return total


@njit(cache=True, inline="always")
def _unit_out_degree(optr, a, ch, nch):
    for t in range(nch):
        u = a[ch[t]]
        if optr[u + 1] - optr[u] != 1:
            return False
    return True


@njit(cache=True)
def _component_sizes_from(directed, optr, oadj, iptr, iadj, seeds, nseeds, mark, queue, out, stamp):
    """Sorted sizes of the distinct (weak) components containing the seeds."""
    s = _next_stamp(stamp)
    ncomp = 0
    for t in range(nseeds):
        root = seeds[t]
        if mark[root] == s:
            continue
        mark[root] = s
        head = 0
        tail = 1
        queue[0] = root
        while head < tail:
            u = queue[head]
            head += 1
            for q in range(optr[u], optr[u + 1]):
                w = oadj[q]
                if w >= 0 and mark[w] != s:
                    mark[w] = s
                    queue[tail] = w
                    tail += 1
            if directed:
                for q in range(iptr[u], iptr[u + 1]):
                    w = iadj[q]
                    if w >= 0 and mark[w] != s:
                        mark[w] = s
                        queue[tail] = w
                        tail += 1
        out[ncomp] = tail
        ncomp += 1
    out[:ncomp].sort()
    return ncomp


@njit(cache=True)
def _projection_degree(optr, oadj, iptr, iadj, node, mark, stamp):
    s = _next_stamp(stamp)
    mark[node] = s
    deg = 0
    for q in range(optr[node], optr[node + 1]):
        b = oadj[q]
        for r in range(iptr[b], iptr[b + 1]):
            w = iadj[r]
            if w >= 0 and mark[w] != s:
                mark[w] = s
                deg += 1
    return deg


@njit(cache=True, inline="always")
def _degree_pairs_match(directed, fdeg, a, old, new, ch, nch, used):
    for t in range(nch):
        used[t] = 0
    for t in range(nch):
        c = ch[t]
        p = fdeg[a[c]]
        q = fdeg[new[c]]
        if not directed and q < p:
            p, q = q, p
        found = False
        for r in range(nch):
            if used[r]:
                continue
            c2 = ch[r]
            p2 = fdeg[a[c2]]
            q2 = fdeg[old[c2]]
            if not directed and q2 < p2:
                p2, q2 = q2, p2
            if p == p2 and q == q2:
                used[r] = 1
                found = True
                break
        if not found:
            return False
    return True


# -- one trial -------------------------------------------------------------


@njit(cache=True)
def trials(
    src, dst, optr, oadj, iptr, iadj, directed,
    k, n_trials, rng, idx, perm, orient, a, b, nb, ch,
    ckind, cparam, mark, mark2, queue, buf1, buf2, stamp,
    pool, commit, counts,
):
    """Run switch trials; counts[code] accumulates outcomes, last code returned.

    With ``rng`` None the single proposal already in (idx, perm, orient) is
    tested; otherwise each trial draws a fresh one. Fills a (sources),
    b (old targets), nb (new targets). The graph changes only on
    ACCEPT_CHANGE with ``commit`` set.

    Written flat, without helper calls on the common path: this is the
    walk's inner loop and numba call overhead on array arguments dominates.
    """
    m = src.shape[0]
    code = ACCEPT_HOLD
    for _ in range(n_trials):
        if rng is not None:
            draw_proposal(rng, m, k, directed, idx, perm, orient, pool)
        for i in range(k):
            e = idx[i]
            if directed or orient[i] == 0:
                a[i] = src[e]
                b[i] = dst[e]
            else:
                a[i] = dst[e]
                b[i] = src[e]
        for i in range(k):
            nb[i] = b[perm[i]]

        code = -1
        for i in range(k):
            if a[i] == nb[i]:
                code = REJ_SELF_LOOP
                break
        nch = 0
        if code < 0:
            for i in range(k):
                if nb[i] != b[i]:
                    # W_i = out(a_i) minus b_i, on the pre-switch graph
                    u = a[i]
                    v = nb[i]
                    for q in range(optr[u], optr[u + 1]):
                        if oadj[q] == v:
                            code = REJ_MULTI_EDGE
                            break
                    if code >= 0:
                        break
                    ch[nch] = i
                    nch += 1
        if code < 0:
            # two new arcs landing on the same pair
            for t in range(nch):
                i = ch[t]
                for r in range(t + 1, nch):
                    j = ch[r]
                    if a[i] == a[j] and nb[i] == nb[j]:
                        code = REJ_MULTI_EDGE
                    elif not directed and a[i] == nb[j] and nb[i] == a[j]:
                        code = REJ_MULTI_EDGE
                if code >= 0:
                    break
        if code < 0 and nch == 0:
            code = ACCEPT_HOLD

        if code < 0:
            ok = True
            if ckind == CK_NONE:
                pass
            elif ckind == CK_DEGREE_PAIRS:
                # multiset of (deg a, deg old target) must equal that of (deg a, deg new target)
                for t in range(nch):
                    buf1[t] = 0
                for t in range(nch):
                    c = ch[t]
                    p = cparam[a[c]]
                    q = cparam[nb[c]]
                    if not directed and q < p:
                        p, q = q, p
                    found = False
                    for r in range(nch):
                        if buf1[r]:
                            continue
                        c2 = ch[r]
                        p2 = cparam[a[c2]]
                        q2 = cparam[b[c2]]
                        if not directed and q2 < p2:
                            p2, q2 = q2, p2
                        if p == p2 and q == q2:
                            buf1[r] = 1
                            found = True
                            break
                    if not found:
                        ok = False
                        break
            elif ckind == CK_TRIANGLE_PARTITION and directed and _unit_out_degree(optr, a, ch, nch):
                # in/out-degrees 1: the arcs form a permutation, which stays a
                # triangle partition iff every moved source is back after 3 steps
                for t in range(nch):
                    u = a[ch[t]]
                    x = u
                    for _ in range(3):
                        y = oadj[optr[x]]
                        for r in range(nch):
                            c = ch[r]
                            if a[c] == x:
                                y = nb[c]
                                break
                        x = y
                    if x != u:
                        ok = False
                        break
            else:
                ok = check_moves(
                    src, dst, optr, oadj, iptr, iadj, directed,
                    k, idx, a, b, nb, ch, nch,
                    ckind, cparam, mark, mark2, queue, buf1, buf2, stamp,
                )
            if ok:
                code = ACCEPT_CHANGE
                if commit:
                    apply_moves(src, dst, optr, oadj, iptr, iadj, directed, idx, a, b, nb, k)
            else:
                code = REJ_CONSTRAINT
        counts[code] += 1
    return code


@njit(cache=True)
def evaluate(
    src, dst, optr, oadj, iptr, iadj, directed,
    k, idx, perm, orient, a, b, nb, ch,
    ckind, cparam, mark, mark2, queue, buf1, buf2, stamp,
    commit,
):
    """Outcome code of the single proposal (idx, perm, orient)."""
    counts = np.zeros(N_CODES, np.int64)
    return trials(
        src, dst, optr, oadj, iptr, iadj, directed,
        k, 1, None, idx, perm, orient, a, b, nb, ch,
        ckind, cparam, mark, mark2, queue, buf1, buf2, stamp,
        idx, commit, counts,
    )


@njit(cache=True)
def check_moves(
    src, dst, optr, oadj, iptr, iadj, directed,
    k, idx, a, b, nb, ch, nch,
    ckind, cparam, mark, mark2, queue, buf1, buf2, stamp,
):
    """Incremental constraint verdict for moving arcs (a, b) to (a, nb).

    ``ch[:nch]`` lists the slots that actually change. The graph may be
    switched temporarily but is always restored before returning.
    """
    if ckind == CK_NONE:
        return True
    if ckind == CK_DEGREE_PAIRS:
        return _degree_pairs_match(directed, cparam, a, b, nb, ch, nch, buf1)
    ok = True
    if ckind == CK_TRIANGLE_PARTITION or ckind == CK_TRIANGLES:
        gone = _triangles_through(directed, optr, oadj, iptr, iadj, a, b, ch, nch, mark, stamp)
        apply_moves(src, dst, optr, oadj, iptr, iadj, directed, idx, a, b, nb, k)
        made = _triangles_through(directed, optr, oadj, iptr, iadj, a, nb, ch, nch, mark, stamp)
        ok = gone == made
    elif ckind == CK_COMPONENTS:
        nseeds = 0
        for t in range(nch):
            c = ch[t]
            buf2[nseeds] = a[c]
            buf2[nseeds + 1] = b[c]
            buf2[nseeds + 2] = nb[c]
            nseeds += 3
        n0 = _component_sizes_from(directed, optr, oadj, iptr, iadj, buf2, nseeds, mark, queue, buf1, stamp)
        before = buf1[:n0].copy()
        apply_moves(src, dst, optr, oadj, iptr, iadj, directed, idx, a, b, nb, k)
        n1 = _component_sizes_from(directed, optr, oadj, iptr, iadj, buf2, nseeds, mark, queue, buf1, stamp)
        if n0 != n1:
            ok = False
        else:
            for t in range(n0):
                if before[t] != buf1[t]:
                    ok = False
                    break
    elif ckind == CK_PROJECTION:
        # side-A nodes whose projection degree may change: in-neighbours of
        # every touched B node (new sources are already among them)
        s = _next_stamp(stamp)
        naff = 0
        for t in range(nch):
            c = ch[t]
            for tgt in (b[c], nb[c]):
                for r in range(iptr[tgt], iptr[tgt + 1]):
                    w = iadj[r]
                    if w >= 0 and mark2[w] != s:
                        mark2[w] = s
                        queue[naff] = w
                        naff += 1
        for t in range(naff):
            buf1[t] = _projection_degree(optr, oadj, iptr, iadj, queue[t], mark, stamp)
        apply_moves(src, dst, optr, oadj, iptr, iadj, directed, idx, a, b, nb, k)
        for t in range(naff):
            buf2[t] = _projection_degree(optr, oadj, iptr, iadj, queue[t], mark, stamp)
        buf1[:naff].sort()
        buf2[:naff].sort()
        for t in range(naff):
            if buf1[t] != buf2[t]:
                ok = False
                break
    apply_moves(src, dst, optr, oadj, iptr, iadj, directed, idx, a, nb, b, k)
    return ok


# -- drivers ---------------------------------------------------------------


@njit(cache=True)
def walk(
    src, dst, optr, oadj, iptr, iadj, directed,
    k, n_trials, rng, ckind, cparam,
    mark, mark2, queue, buf1, buf2, stamp,
    pool, counts,
):
    """Run n_trials switch-and-hold trials; counts[code] accumulates outcomes."""
    idx = np.empty(k, np.int64)
    perm = np.empty(k, np.int64)
    orient = np.zeros(k, np.int64)
    a = np.empty(k, np.int64)
    b = np.empty(k, np.int64)
    nb = np.empty(k, np.int64)
    ch = np.empty(k, np.int64)
    trials(
        src, dst, optr, oadj, iptr, iadj, directed,
        k, n_trials, rng, idx, perm, orient, a, b, nb, ch,
        ckind, cparam, mark, mark2, queue, buf1, buf2, stamp,
        pool, True, counts,
    )


@njit(cache=True)
def draw_many(rng, m, k, directed, n, pool):
    """n proposals as rows of (idx, perm, orient); used to test the sampler."""
    out = np.empty((n, 3, k), np.int64)
    idx = np.empty(k, np.int64)
    perm = np.empty(k, np.int64)
    orient = np.zeros(k, np.int64)
    for t in range(n):
        draw_proposal(rng, m, k, directed, idx, perm, orient, pool)
        out[t, 0] = idx
        out[t, 1] = perm
        out[t, 2] = orient
    return out


@njit(cache=True)
def _next_permutation(p):
    n = p.shape[0]
    i = n - 2
    while i >= 0 and p[i] >= p[i + 1]:
        i -= 1
    if i < 0:
        return False
    j = n - 1
    while p[j] <= p[i]:
        j -= 1
    p[i], p[j] = p[j], p[i]
    p[i + 1:] = p[i + 1:][::-1]
    return True


@njit(cache=True)
def _next_combination(c, m):
    k = c.shape[0]
    i = k - 1
    while i >= 0 and c[i] == m - k + i:
        i -= 1
    if i < 0:
        return False
    c[i] += 1
    for j in range(i + 1, k):
        c[j] = c[j - 1] + 1
    return True


@njit(cache=True)
def enumerate_moves(
    src, dst, optr, oadj, iptr, iadj, directed, n_nodes,
    k, ckind, cparam, mark, mark2, queue, buf1, buf2, stamp,
    rows,
):
    """Apply every (subset, permutation[, orientation]) trial to the graph.

    Each ACCEPT_CHANGE outcome writes the resulting edge set, encoded as
    sorted u*N+v codes, into the next row of ``rows`` (the move is then
    undone). Returns (n_rows, counts-per-outcome-code).
    """
    m = src.shape[0]
    counts = np.zeros(N_CODES, np.int64)
    idx = np.arange(k).astype(np.int64)
    perm = np.empty(k, np.int64)
    orient = np.zeros(k, np.int64)
    a = np.empty(k, np.int64)
    b = np.empty(k, np.int64)
    nb = np.empty(k, np.int64)
    ch = np.empty(k, np.int64)
    n_orient = 1 if directed else 1 << k
    nrows = 0
    while True:
        for i in range(k):
            perm[i] = i
        while True:
            for bits in range(n_orient):
                for i in range(k):
                    orient[i] = (bits >> i) & 1
                code = evaluate(
                    src, dst, optr, oadj, iptr, iadj, directed,
                    k, idx, perm, orient, a, b, nb, ch,
                    ckind, cparam, mark, mark2, queue, buf1, buf2, stamp,
                    True,
                )
                counts[code] += 1
                if code == ACCEPT_CHANGE:
                    for e in range(m):
                        rows[nrows, e] = src[e] * n_nodes + dst[e]
                    rows[nrows].sort()
                    nrows += 1
                    apply_moves(src, dst, optr, oadj, iptr, iadj, directed, idx, a, nb, b, k)
            if not _next_permutation(perm):
                break
        if not _next_combination(idx, m):
            break
    return nrows, counts


@njit(cache=True)
def directed_triangle_count(optr, oadj, iptr, iadj, n):
    """Oriented 3-cycles u->v->w->u, each counted once."""
    mark = np.full(n, -1, np.int64)
    total = 0
    for u in range(n):
        for q in range(iptr[u], iptr[u + 1]):
            mark[iadj[q]] = u
        for q in range(optr[u], optr[u + 1]):
            v = oadj[q]
            for r in range(optr[v], optr[v + 1]):
                w = oadj[r]
                if mark[w] == u:
                    total += 1
    return total // 3


@njit(cache=True)
def undirected_motifs(optr, oadj, n):
    """(triangles, 4-paths, 4-cycles, 4-stars, 4-cliques) subgraph counts."""
    deg = np.empty(n, np.int64)
    for u in range(n):
        deg[u] = optr[u + 1] - optr[u]
    mark = np.full(n, -1, np.int64)
    tri2 = 0  # each triangle seen 6 times over ordered edges
    p3 = 0  # sum over edges of (d_u - 1)(d_v - 1), each edge twice
    for u in range(n):
        for q in range(optr[u], optr[u + 1]):
            mark[oadj[q]] = u
        for q in range(optr[u], optr[u + 1]):
            v = oadj[q]
            p3 += (deg[u] - 1) * (deg[v] - 1)
            for r in range(optr[v], optr[v + 1]):
                if mark[oadj[r]] == u:
                    tri2 += 1
    triangles = tri2 // 6
    paths = p3 // 2 - 3 * triangles
    stars = 0
    for u in range(n):
        d = deg[u]
        stars += d * (d - 1) * (d - 2) // 6
    # 4-cycles: pairs (u, w) with c common neighbours contribute C(c, 2)
    codeg = np.zeros(n, np.int64)
    touched = np.empty(n, np.int64)
    c4x2 = 0
    for u in range(n):
        nt = 0
        for q in range(optr[u], optr[u + 1]):
            v = oadj[q]
            for r in range(optr[v], optr[v + 1]):
                w = oadj[r]
                if w > u:
                    if codeg[w] == 0:
                        touched[nt] = w
                        nt += 1
                    codeg[w] += 1
        for t in range(nt):
            w = touched[t]
            c = codeg[w]
            c4x2 += c * (c - 1) // 2
            codeg[w] = 0
    cycles = c4x2 // 2
    # 4-cliques: ordered u < v < w < x
    cliques = 0
    mark2 = np.full(n, -1, np.int64)
    for u in range(n):
        for q in range(optr[u], optr[u + 1]):
            mark[oadj[q]] = u
        for q in range(optr[u], optr[u + 1]):
            v = oadj[q]
            if v <= u:
                continue
            for r in range(optr[v], optr[v + 1]):
                w = oadj[r]
                if w > v and mark[w] == u:
                    mark2[w] = v
            for r in range(optr[v], optr[v + 1]):
                w = oadj[r]
                if w > v and mark[w] == u:
                    for s in range(optr[w], optr[w + 1]):
                        x = oadj[s]
                        if x > w and mark[x] == u and mark2[x] == v:
                            cliques += 1
            for r in range(optr[v], optr[v + 1]):
                w = oadj[r]
                if w > v:
                    mark2[w] = -1
    return triangles, paths, cycles, stars, cliques
