# cython: boundscheck=False, wraparound=False, language_level=3
"""Compiled search core: exhaustive total-coloring backtracking.

Twin of nsdcolor._search_py — identical traversal and node accounting; the
pure module is the readable reference, this one is the fast path.
"""

from libc.stdlib cimport calloc, free

BACKEND_NAME = "c"

DEF FOUND = 0
DEF NONE = 1
DEF BUDGET = 2


cdef struct Ctx:
    int n, m, k, klen, depth_count
    bint nsd
    long long nodes, budget
    int *vcol
    int *ecol
    int *rem
    long long *val
    int *vban        # n * klen
    int *eban        # m * klen
    int *nbr_flat
    int *inc_flat
    int *off         # n+1 offsets into nbr_flat/inc_flat
    int *eu
    int *ev
    int *order


cdef bint saturated_clash(Ctx *c, int x) noexcept:
    cdef int i, u
    cdef long long vx = c.val[x]
    for i in range(c.off[x], c.off[x + 1]):
        u = c.nbr_flat[i]
        if c.rem[u] == 0 and c.val[u] == vx:
            return True
    return False


cdef int rec(Ctx *c, int depth) noexcept:
    cdef int el, v, u, w, j, col, i, f, r
    cdef bint ok
    if depth == c.depth_count:
        return FOUND
    el = c.order[depth]
    if el < c.n:
        v = el
        for col in range(1, c.k + 1):
            c.nodes += 1
            if c.budget > 0 and c.nodes > c.budget:
                return BUDGET
            if c.vban[v * c.klen + col]:
                continue
            c.vcol[v] = col
            c.rem[v] -= 1
            c.val[v] += col
            ok = not (c.nsd and c.rem[v] == 0 and saturated_clash(c, v))
            if ok:
                for i in range(c.off[v], c.off[v + 1]):
                    c.vban[c.nbr_flat[i] * c.klen + col] += 1
                    c.eban[c.inc_flat[i] * c.klen + col] += 1
                r = rec(c, depth + 1)
                for i in range(c.off[v], c.off[v + 1]):
                    c.vban[c.nbr_flat[i] * c.klen + col] -= 1
                    c.eban[c.inc_flat[i] * c.klen + col] -= 1
                if r == FOUND:
                    return FOUND
                if r == BUDGET:
                    c.vcol[v] = 0
                    c.rem[v] += 1
                    c.val[v] -= col
                    return BUDGET
            c.vcol[v] = 0
            c.rem[v] += 1
            c.val[v] -= col
        return NONE
    j = el - c.n
    u = c.eu[j]
    w = c.ev[j]
    for col in range(1, c.k + 1):
        c.nodes += 1
        if c.budget > 0 and c.nodes > c.budget:
            return BUDGET
        if c.eban[j * c.klen + col]:
            continue
        c.ecol[j] = col
        c.rem[u] -= 1
        c.rem[w] -= 1
        c.val[u] += col
        c.val[w] += col
        ok = True
        if c.nsd:
            if c.rem[u] == 0 and saturated_clash(c, u):
                ok = False
            if ok and c.rem[w] == 0 and saturated_clash(c, w):
                ok = False
        if ok:
            c.vban[u * c.klen + col] += 1
            c.vban[w * c.klen + col] += 1
            for i in range(c.off[u], c.off[u + 1]):
                f = c.inc_flat[i]
                if f != j:
                    c.eban[f * c.klen + col] += 1
            for i in range(c.off[w], c.off[w + 1]):
                f = c.inc_flat[i]
                if f != j:
                    c.eban[f * c.klen + col] += 1
            r = rec(c, depth + 1)
            c.vban[u * c.klen + col] -= 1
            c.vban[w * c.klen + col] -= 1
            for i in range(c.off[u], c.off[u + 1]):
                f = c.inc_flat[i]
                if f != j:
                    c.eban[f * c.klen + col] -= 1
            for i in range(c.off[w], c.off[w + 1]):
                f = c.inc_flat[i]
                if f != j:
                    c.eban[f * c.klen + col] -= 1
            if r == FOUND:
                return FOUND
            if r == BUDGET:
                c.ecol[j] = 0
                c.rem[u] += 1
                c.rem[w] += 1
                c.val[u] -= col
                c.val[w] -= col
                return BUDGET
        c.ecol[j] = 0
        c.rem[u] += 1
        c.rem[w] += 1
        c.val[u] -= col
        c.val[w] -= col
    return NONE


def search(n, m, nbr, inc, eu, ev, order, k, nsd, total_mode, budget):
    """Same contract as nsdcolor._search_py.search."""
    cdef Ctx c
    cdef int i, v, pos
    cdef int total_adj = 0
    for v in range(n):
        total_adj += len(nbr[v])
    c.n = n
    c.m = m
    c.k = k
    c.klen = k + 1
    c.nsd = 1 if nsd else 0
    c.nodes = 0
    c.budget = budget if budget else 0
    c.depth_count = len(order)
    c.vcol = <int *> calloc(max(n, 1), sizeof(int))
    c.ecol = <int *> calloc(max(m, 1), sizeof(int))
    c.rem = <int *> calloc(max(n, 1), sizeof(int))
    c.val = <long long *> calloc(max(n, 1), sizeof(long long))
    c.vban = <int *> calloc(max(n * c.klen, 1), sizeof(int))
    c.eban = <int *> calloc(max(m * c.klen, 1), sizeof(int))
    c.nbr_flat = <int *> calloc(max(total_adj, 1), sizeof(int))
    c.inc_flat = <int *> calloc(max(total_adj, 1), sizeof(int))
    c.off = <int *> calloc(n + 1, sizeof(int))
    c.eu = <int *> calloc(max(m, 1), sizeof(int))
    c.ev = <int *> calloc(max(m, 1), sizeof(int))
    c.order = <int *> calloc(max(c.depth_count, 1), sizeof(int))
    try:
        pos = 0
        for v in range(n):
            c.off[v] = pos
            for i in range(len(nbr[v])):
                c.nbr_flat[pos] = nbr[v][i]
                c.inc_flat[pos] = inc[v][i]
                pos += 1
        c.off[n] = pos
        for i in range(m):
            c.eu[i] = eu[i]
            c.ev[i] = ev[i]
        for i in range(c.depth_count):
            c.order[i] = order[i]
        for v in range(n):
            c.rem[v] = len(nbr[v]) + (1 if total_mode else 0)
        status = rec(&c, 0)
        vcol = [c.vcol[i] for i in range(n)]
        ecol = [c.ecol[i] for i in range(m)]
        nodes = c.nodes
    finally:
        free(c.vcol); free(c.ecol); free(c.rem); free(c.val)
        free(c.vban); free(c.eban); free(c.nbr_flat); free(c.inc_flat)
        free(c.off); free(c.eu); free(c.ev); free(c.order)
    return status, vcol, ecol, nodes
