"""Pure-Python search core: exhaustive total-coloring backtracking.

Drop-in twin of the compiled module nsdcolor._search.  Both implement the
exact same traversal (element order given by the caller, colors ascending,
properness via ban counters, value-collision pruning between saturated
neighbors), so results and node counts are identical whichever is loaded.
"""

from __future__ import annotations

BACKEND_NAME = "python"

FOUND, NONE, BUDGET = 0, 1, 2


def search(n, m, nbr, inc, eu, ev, order, k, nsd, total_mode, budget):
    """Find one valid coloring of the ordered elements with colors 1..k.

    nbr[v]/inc[v]: neighbor vertices and the matching incident edge ids.
    Element ids: 0..n-1 vertices, n..n+m-1 edges.  total_mode=False restricts
    the instance to edges only (values become incident-edge sums).
    Returns (status, vertex_colors, edge_colors, nodes_tried).
    """
    vcol = [0] * n
    ecol = [0] * m
    # rem[v]: uncolored elements still contributing to v's value
    rem = [len(nbr[v]) + (1 if total_mode else 0) for v in range(n)]
    val = [0] * n
    # ban[element][c]: number of already-colored adjacent/incident elements
    # wearing color c; element may take c only while the count is zero
    vban = [[0] * (k + 1) for _ in range(n)]
    eban = [[0] * (k + 1) for _ in range(m)]
    nodes = 0
    depth_count = len(order)

    def saturated_clash(x):
        vx = val[x]
        for u in nbr[x]:
            if rem[u] == 0 and val[u] == vx:
                return True
        return False

    def rec(depth):
        nonlocal nodes
        if depth == depth_count:
            return FOUND
        el = order[depth]
        if el < n:
            v = el
            bans = vban[v]
            for c in range(1, k + 1):
                nodes += 1
                if budget and nodes > budget:
                    return BUDGET
                if bans[c]:
                    continue
                vcol[v] = c
                rem[v] -= 1
                val[v] += c
                ok = not (nsd and rem[v] == 0 and saturated_clash(v))
                if ok:
                    for u in nbr[v]:
                        vban[u][c] += 1
                    for e in inc[v]:
                        eban[e][c] += 1
                    r = rec(depth + 1)
                    for u in nbr[v]:
                        vban[u][c] -= 1
                    for e in inc[v]:
                        eban[e][c] -= 1
                    if r == FOUND:
                        return FOUND
                    if r == BUDGET:
                        vcol[v] = 0
                        rem[v] += 1
                        val[v] -= c
                        return BUDGET
                vcol[v] = 0
                rem[v] += 1
                val[v] -= c
            return NONE
        j = el - n
        u, w = eu[j], ev[j]
        bans = eban[j]
        for c in range(1, k + 1):
            nodes += 1
            if budget and nodes > budget:
                return BUDGET
            if bans[c]:
                continue
            ecol[j] = c
            rem[u] -= 1
            rem[w] -= 1
            val[u] += c
            val[w] += c
            ok = True
            if nsd:
                if rem[u] == 0 and saturated_clash(u):
                    ok = False
                if ok and rem[w] == 0 and saturated_clash(w):
                    ok = False
            if ok:
                vban[u][c] += 1
                vban[w][c] += 1
                for f in inc[u]:
                    if f != j:
                        eban[f][c] += 1
                for f in inc[w]:
                    if f != j:
                        eban[f][c] += 1
                r = rec(depth + 1)
                vban[u][c] -= 1
                vban[w][c] -= 1
                for f in inc[u]:
                    if f != j:
                        eban[f][c] -= 1
                for f in inc[w]:
                    if f != j:
                        eban[f][c] -= 1
                if r == FOUND:
                    return FOUND
                if r == BUDGET:
                    ecol[j] = 0
                    rem[u] += 1
                    rem[w] += 1
                    val[u] -= c
                    val[w] -= c
                    return BUDGET
            ecol[j] = 0
            rem[u] += 1
            rem[w] += 1
            val[u] -= c
            val[w] -= c
        return NONE

    status = rec(0)
    return status, vcol, ecol, nodes
