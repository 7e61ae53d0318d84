"""Compiled search kernels shared by :mod:`isolab.mcis` and :mod:`isolab.sis`.

Both searches are written iteratively with per-depth state in preallocated
arrays; numba does not handle deep recursion well and the explicit stack keeps
the node counter exact.

Status codes: 0 = search space exhausted, 1 = budget hit, 2 = target reached.
"""
import time

import numpy as np
from numba import njit, objmode

DONE, BUDGET, TARGET = 0, 1, 2
CHECK_EVERY = 1024

_ONE = np.uint64(1)
_M1 = np.uint64(0x5555555555555555)
_M2 = np.uint64(0x3333333333333333)
_M4 = np.uint64(0x0F0F0F0F0F0F0F0F)
_H01 = np.uint64(0x0101010101010101)


@njit(cache=True, inline="always")
def popcount64(x):
    x = x - ((x >> np.uint64(1)) & _M1)
    x = (x & _M2) + ((x >> np.uint64(2)) & _M2)
    x = (x + (x >> np.uint64(4))) & _M4
    return np.int64((x * _H01) >> np.uint64(56))


@njit(cache=True, inline="always")
def adjacent(rows, u, v):
    return (rows[u, v >> 6] >> np.uint64(v & 63)) & _ONE


@njit(cache=True)
def _now():
    with objmode(t="float64"):
        t = time.perf_counter()
    return t


@njit(cache=True)
def _out_of_budget(nodes, max_nodes, max_time, t0):
    if max_nodes > 0 and nodes >= max_nodes:
        return True
    if max_time > 0.0 and _now() - t0 >= max_time:
        return True
    return False


@njit(cache=True, inline="always")
def _lowest_bit(words, nw):
    for k in range(nw):
        x = words[k]
        if x != 0:
            return k * 64 + popcount64((x & (~x + _ONE)) - _ONE)
    return -1


@njit(cache=True)
def mcsplit(a1, a2, n1, n2, best_init, target, max_nodes, max_time, out_l, out_r, stats):
    """Maximum common induced subgraph by label-class branch and bound.

    Label classes are pairs of bitsets ``(L, R)``. Vertices are expected to be
    numbered in preference order: the branching vertex of a class is the lowest
    bit of ``L`` and candidates are tried in increasing id within ``R``.
    The incumbent starts at ``best_init`` (use k-1 for the decision version)
    and the search stops as soon as it reaches ``target``.
    Writes ``[best, nodes, status]`` into ``stats``.
    """
    t0 = _now()
    w1 = a1.shape[1]
    w2 = a2.shape[1]
    depth_cap = n1 + 2
    k_cap = min(n1, n2) + 2
    lw = np.zeros((depth_cap, k_cap, w1), np.uint64)
    rw = np.zeros((depth_cap, k_cap, w2), np.uint64)
    ll = np.zeros((depth_cap, k_cap), np.int64)
    rl = np.zeros((depth_cap, k_cap), np.int64)
    ndom = np.zeros(depth_cap, np.int64)
    cand = np.zeros((depth_cap, w2), np.uint64)
    fbd = np.zeros(depth_cap, np.int64)
    fv = np.zeros(depth_cap, np.int64)
    fw = np.zeros(depth_cap, np.int64)
    fstage = np.zeros(depth_cap, np.int64)
    map_l = np.zeros(k_cap, np.int64)
    map_r = np.zeros(k_cap, np.int64)

    if n1 > 0 and n2 > 0:
        ndom[0] = 1
        for v in range(n1):
            lw[0, 0, v >> 6] |= _ONE << np.uint64(v & 63)
        for v in range(n2):
            rw[0, 0, v >> 6] |= _ONE << np.uint64(v & 63)
        ll[0, 0] = n1
        rl[0, 0] = n2

    best = best_init
    cur = 0
    nodes = 0
    status = DONE
    d = 0
    mode = 0  # 0: enter node at depth d; 1: child of frame d returned; 2: frame d set up
    while True:
        if mode == 0:
            nodes += 1
            if (nodes & (CHECK_EVERY - 1)) == 0:
                if _out_of_budget(nodes, max_nodes, max_time, t0):
                    status = BUDGET
                    break
            if cur > best:
                best = cur
                for i in range(cur):
                    out_l[i] = map_l[i]
                    out_r[i] = map_r[i]
                if best >= target:
                    status = TARGET
                    break
            bound = cur
            for k in range(ndom[d]):
                bound += min(ll[d, k], rl[d, k])
            if bound <= best:
                if d == 0:
                    break
                d -= 1
                mode = 1
                continue
            # smallest max(|L|, |R|); ties go to the earliest class
            bd = 0
            bd_size = max(ll[d, 0], rl[d, 0])
            for k in range(1, ndom[d]):
                size = max(ll[d, k], rl[d, k])
                if size < bd_size:
                    bd = k
                    bd_size = size
            v = _lowest_bit(lw[d, bd], w1)
            lw[d, bd, v >> 6] ^= _ONE << np.uint64(v & 63)
            ll[d, bd] -= 1
            for k in range(w2):
                cand[d, k] = rw[d, bd, k]
            fbd[d] = bd
            fv[d] = v
            fstage[d] = 0
            mode = 2

        bd = fbd[d]
        if mode == 1:
            if fstage[d] == 0:
                cur -= 1
                w = fw[d]
                rw[d, bd, w >> 6] |= _ONE << np.uint64(w & 63)
                rl[d, bd] += 1
            else:
                v = fv[d]
                lw[d, bd, v >> 6] |= _ONE << np.uint64(v & 63)
                ll[d, bd] += 1
                if d == 0:
                    break
                d -= 1
                continue

        if fstage[d] == 0:
            w = _lowest_bit(cand[d], w2)
            if w >= 0:
                bit = _ONE << np.uint64(w & 63)
                cand[d, w >> 6] ^= bit
                rw[d, bd, w >> 6] ^= bit
                rl[d, bd] -= 1
                fw[d] = w
                v = fv[d]
                map_l[cur] = v
                map_r[cur] = w
                cur += 1
                m = 0
                for k in range(ndom[d]):
                    if ll[d, k] == 0 or rl[d, k] == 0:
                        continue
                    n_l0 = 0
                    n_l1 = 0
                    for j in range(w1):
                        x = lw[d, k, j]
                        adj = x & a1[v, j]
                        lw[d + 1, m, j] = x ^ adj
                        lw[d + 1, m + 1, j] = adj
                        n_l1 += popcount64(adj)
                    n_l0 = ll[d, k] - n_l1
                    n_r1 = 0
                    for j in range(w2):
                        x = rw[d, k, j]
                        adj = x & a2[w, j]
                        rw[d + 1, m, j] = x ^ adj
                        rw[d + 1, m + 1, j] = adj
                        n_r1 += popcount64(adj)
                    n_r0 = rl[d, k] - n_r1
                    if n_l0 > 0 and n_r0 > 0:
                        ll[d + 1, m] = n_l0
                        rl[d + 1, m] = n_r0
                        m += 1
                    elif n_l1 > 0 and n_r1 > 0:
                        for j in range(w1):
                            lw[d + 1, m, j] = lw[d + 1, m + 1, j]
                        for j in range(w2):
                            rw[d + 1, m, j] = rw[d + 1, m + 1, j]
                    if n_l1 > 0 and n_r1 > 0:
                        ll[d + 1, m] = n_l1
                        rl[d + 1, m] = n_r1
                        m += 1
                ndom[d + 1] = m
                d += 1
                mode = 0
                continue
            # every pairing for v tried; now leave v unmapped
            fstage[d] = 1
            m = 0
            for k in range(ndom[d]):
                if ll[d, k] == 0:
                    continue
                for j in range(w1):
                    lw[d + 1, m, j] = lw[d, k, j]
                for j in range(w2):
                    rw[d + 1, m, j] = rw[d, k, j]
                ll[d + 1, m] = ll[d, k]
                rl[d + 1, m] = rl[d, k]
                m += 1
            ndom[d + 1] = m
            d += 1
            mode = 0
            continue

    stats[0] = best
    stats[1] = nodes
    stats[2] = status


_CARRY = np.int64(1) << np.int64(60)


@njit(cache=True)
def _restrict(dom, size, assigned_at, n, wt, lvl, pa, ta, tn, x, b):
    """Filter every free domain at level ``lvl`` by the assignment x -> b.

    Returns False on a wipeout."""
    for y in range(n):
        if assigned_at[y] >= 0:
            continue
        s = 0
        if adjacent(pa, x, y):
            for k in range(wt):
                z = dom[lvl, y, k] & ta[b, k]
                dom[lvl, y, k] = z
                s += popcount64(z)
        else:
            for k in range(wt):
                z = dom[lvl, y, k] & tn[b, k]
                dom[lvl, y, k] = z
                s += popcount64(z)
        if s == 0:
            return False
        size[lvl, y] = s
    return True


@njit(cache=True)
def induced_embed(pa, ta, tn, n, wt, init_dom, order_rank, count_mode, max_nodes,
                  max_time, out_w, stats):
    """Backtracking search for induced embeddings of pattern ``pa`` in target ``ta``.

    ``tn`` holds the complemented target rows (self bit cleared), so adjacency
    and non-adjacency constraints are both a single AND. After each branching
    assignment the free domains are filtered (forward checking); vertices left
    with a single candidate are fixed and filtered in turn, and the node fails
    when the free vertices have fewer candidate images in total than their
    number. The branching vertex is the free one with the fewest candidates,
    ties broken by ``order_rank``.

    A node is one branching assignment tried. Writes
    ``[found, nodes, status, count_hi, count_lo]``; the embedding count is
    ``count_hi * 2**60 + count_lo``.
    """
    t0 = _now()
    dom = np.zeros((n + 1, n, wt), np.uint64)
    size = np.zeros((n + 1, n), np.int64)
    cand = np.zeros((n + 1, wt), np.uint64)
    assigned_at = np.full(n, -1, np.int64)
    val = np.zeros(n, np.int64)
    var_at = np.zeros(n + 1, np.int64)
    free_at = np.zeros(n + 2, np.int64)
    union = np.zeros(wt, np.uint64)
    nodes = 0
    status = DONE
    found = 0
    count_hi = 0
    count_lo = 0

    for u in range(n):
        s = 0
        for k in range(wt):
            dom[0, u, k] = init_dom[u, k]
            s += popcount64(init_dom[u, k])
        size[0, u] = s
        if s == 0:
            stats[:] = 0
            return

    free_at[0] = n
    d = 0
    enter = True
    while True:
        if enter:
            free = free_at[d]
            if free <= 1:
                nodes += 1
                u = -1
                for x in range(n):
                    if assigned_at[x] < 0:
                        u = x
                if count_mode:
                    count_lo += 1 if free == 0 else size[d, u]
                    if count_lo >= _CARRY:
                        count_lo -= _CARRY
                        count_hi += 1
                else:
                    for x in range(n):
                        if assigned_at[x] >= 0:
                            out_w[x] = val[x]
                    if u >= 0:
                        out_w[u] = _lowest_bit(dom[d, u], wt)
                    found = 1
                    status = TARGET
                    break
                if d == 0:
                    break
                d -= 1
                enter = False
                continue
            u = -1
            for x in range(n):
                if assigned_at[x] >= 0:
                    continue
                if u < 0 or size[d, x] < size[d, u] or (
                        size[d, x] == size[d, u] and order_rank[x] < order_rank[u]):
                    u = x
            var_at[d] = u
            assigned_at[u] = d
            for k in range(wt):
                cand[d, k] = dom[d, u, k]
            enter = False

        u = var_at[d]
        # undo vertices fixed by propagation under the previous candidate
        for x in range(n):
            if assigned_at[x] == d and x != u:
                assigned_at[x] = -1
        v = _lowest_bit(cand[d], wt)
        if v < 0:
            assigned_at[u] = -1
            if d == 0:
                break
            d -= 1
            continue
        cand[d, v >> 6] ^= _ONE << np.uint64(v & 63)
        nodes += 1
        if (nodes & (CHECK_EVERY - 1)) == 0:
            if _out_of_budget(nodes, max_nodes, max_time, t0):
                status = BUDGET
                break
        val[u] = v
        lvl = d + 1
        for x in range(n):
            if assigned_at[x] < 0:
                for k in range(wt):
                    dom[lvl, x, k] = dom[d, x, k]
        free = free_at[d] - 1
        ok = _restrict(dom, size, assigned_at, n, wt, lvl, pa, ta, tn, u, v)
        while ok:
            x = -1
            for y in range(n):
                if assigned_at[y] < 0 and size[lvl, y] == 1:
                    x = y
                    break
            if x < 0:
                break
            b = _lowest_bit(dom[lvl, x], wt)
            assigned_at[x] = d
            val[x] = b
            free -= 1
            ok = _restrict(dom, size, assigned_at, n, wt, lvl, pa, ta, tn, x, b)
        if ok and free > 1:
            for k in range(wt):
                union[k] = 0
            for x in range(n):
                if assigned_at[x] < 0:
                    for k in range(wt):
                        union[k] |= dom[lvl, x, k]
            s = 0
            for k in range(wt):
                s += popcount64(union[k])
            ok = s >= free
        if ok:
            free_at[lvl] = free
            d = lvl
            enter = True

    stats[0] = found
    stats[1] = nodes
    stats[2] = status
    stats[3] = count_hi
    stats[4] = count_lo
