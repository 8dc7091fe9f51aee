"""Simple undirected graphs: construction, graph6 I/O, families, matchings.

Vertices are dense 0-indexed integers; edges are (u, v) tuples with u < v.
Graphs are immutable once built.  All randomized helpers take an explicit
integer seed and drive a single random.Random (Mersenne Twister) instance, so
identical seeds give identical outputs on any platform.
"""

from __future__ import annotations

import itertools
import random


class Graph6ParseError(ValueError):
    """Malformed graph6 text; carries the byte offset of the offense."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (byte offset {offset})")
        self.offset = offset


def _norm_edge(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


class Graph:
    """Immutable simple graph on vertices 0..n-1."""

    __slots__ = ("n", "_adj", "_edges", "m")

    def __init__(self, n: int, edges):
        if n < 0:
            raise ValueError("vertex count must be nonnegative")
        seen = set()
        adj: list[list[int]] = [[] for _ in range(n)]
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u},{v}) out of range for n={n}")
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            e = _norm_edge(u, v)
            if e in seen:
                raise ValueError(f"duplicate edge {e}")
            seen.add(e)
            adj[e[0]].append(e[1])
            adj[e[1]].append(e[0])
        self.n = n
        self._edges = tuple(sorted(seen))
        self.m = len(self._edges)
        self._adj = tuple(tuple(sorted(a)) for a in adj)

    @property
    def edges(self) -> tuple[tuple[int, int], ...]:
        return self._edges

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def max_degree(self) -> int:
        return max((len(a) for a in self._adj), default=0)

    def has_edge(self, u: int, v: int) -> bool:
        a, b = _norm_edge(u, v)
        return b in self._adj[a]

    def without_edges(self, drop) -> "Graph":
        dropped = {_norm_edge(u, v) for u, v in drop}
        return Graph(self.n, [e for e in self._edges if e not in dropped])

    def __eq__(self, other) -> bool:
        return isinstance(other, Graph) and self.n == other.n and self._edges == other._edges

    def __hash__(self) -> int:
        return hash((self.n, self._edges))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


# ---------------------------------------------------------------------------
# graph6 (headers up to n = 258047 parsed; emission targets the common n < 63
# case and the 3-byte header alike)
# ---------------------------------------------------------------------------


def parse_graph6(text: str) -> Graph:
    """Decode one graph6 string (leading ">>graph6<<" marker tolerated)."""
    if text.startswith(">>graph6<<"):
        text = text[10:]
    text = text.rstrip("\n")
    if not text:
        raise Graph6ParseError("empty input", 0)
    data = [ord(ch) for ch in text]
    for off, byte in enumerate(data):
        if not 63 <= byte <= 126:
            raise Graph6ParseError(f"byte {byte!r} outside graph6 range 63..126", off)
    pos = 0
    if data[0] == 126:
        if len(data) >= 2 and data[1] == 126:
            raise Graph6ParseError("8-byte vertex-count header not supported", 0)
        if len(data) < 4:
            raise Graph6ParseError("truncated vertex-count header", len(data) - 1)
        n = ((data[1] - 63) << 12) | ((data[2] - 63) << 6) | (data[3] - 63)
        if n < 63:
            raise Graph6ParseError("non-minimal vertex-count header", 0)
        pos = 4
    else:
        n = data[0] - 63
        pos = 1
    nbits = n * (n - 1) // 2
    nbytes = (nbits + 5) // 6
    if len(data) - pos < nbytes:
        raise Graph6ParseError(f"body too short: need {nbytes} bytes, have {len(data) - pos}", len(data) - 1)
    if len(data) - pos > nbytes:
        raise Graph6ParseError("trailing bytes after edge data", pos + nbytes)
    bits = []
    for i in range(nbytes):
        val = data[pos + i] - 63
        for s in range(5, -1, -1):
            bits.append((val >> s) & 1)
    for extra in range(nbits, len(bits)):
        if bits[extra]:
            raise Graph6ParseError("nonzero padding bits", pos + extra // 6)
    edges = []
    idx = 0
    for j in range(1, n):
        for i in range(j):
            if bits[idx]:
                edges.append((i, j))
            idx += 1
    return Graph(n, edges)


def emit_graph6(g: Graph) -> str:
    """Encode a graph as canonical graph6 text (round-trips with parse)."""
    n = g.n
    if n <= 62:
        head = chr(n + 63)
    elif n <= 258047:
        head = chr(126) + "".join(chr(((n >> s) & 0x3F) + 63) for s in (12, 6, 0))
    else:
        raise ValueError("graph6 emission supports n <= 258047")
    out = []
    acc = 0
    filled = 0
    for j in range(1, n):
        row = g.neighbors(j)
        for i in range(j):
            acc = (acc << 1) | (1 if i in row else 0)
            filled += 1
            if filled == 6:
                out.append(chr(acc + 63))
                acc = 0
                filled = 0
    if filled:
        out.append(chr((acc << (6 - filled)) + 63))
    return head + "".join(out)


def read_graph6_file(path) -> list[Graph]:
    """One graph per line; blank lines and '#' comment lines are skipped."""
    graphs = []
    with open(path, "r", encoding="ascii") as fh:
        for line in fh:
            line = line.strip()
            if line and not line.startswith("#"):
                graphs.append(parse_graph6(line))
    return graphs


# ---------------------------------------------------------------------------
# families
# ---------------------------------------------------------------------------

FAMILY_KINDS = ("complete", "cycle", "path", "complete_bipartite", "random_gnp", "random_regular")


def generate_family(kind: str, params: dict, seed: int = 0) -> Graph:
    """One graph from a named family; random kinds are seed-deterministic."""
    if kind == "complete":
        n = params["n"]
        return Graph(n, itertools.combinations(range(n), 2))
    if kind == "cycle":
        n = params["n"]
        if n < 3:
            raise ValueError("cycle needs n >= 3")
        return Graph(n, [(i, (i + 1) % n) for i in range(n)])
    if kind == "path":
        n = params["n"]
        return Graph(n, [(i, i + 1) for i in range(n - 1)])
    if kind == "complete_bipartite":
        a, b = params["a"], params["b"]
        return Graph(a + b, [(i, a + j) for i in range(a) for j in range(b)])
    if kind == "random_gnp":
        n, p = params["n"], params["p"]
        if not 0.0 <= p <= 1.0:
            raise ValueError("p must lie in [0,1]")
        rng = random.Random(seed)
        # pairs scanned in ascending order so the draw sequence is pinned
        return Graph(n, [e for e in itertools.combinations(range(n), 2) if rng.random() < p])
    if kind == "random_regular":
        return _random_regular(params["n"], params["d"], seed)
    raise ValueError(f"unknown family kind {kind!r}")


def _random_regular(n: int, d: int, seed: int, tries: int = 2000) -> Graph:
    """Configuration-model sampling with rejection of loops/multi-edges."""
    if d < 0 or d >= n or (n * d) % 2:
        raise ValueError("need 0 <= d < n with n*d even")
    rng = random.Random(seed)
    stubs = [v for v in range(n) for _ in range(d)]
    for _ in range(tries):
        rng.shuffle(stubs)
        edges = set()
        ok = True
        for i in range(0, len(stubs), 2):
            e = _norm_edge(stubs[i], stubs[i + 1])
            if e[0] == e[1] or e in edges:
                ok = False
                break
            edges.add(e)
        if ok:
            return Graph(n, edges)
    raise ValueError(f"no simple {d}-regular pairing found in {tries} tries")


def enumerate_graphs(n: int):
    """Yield one representative per isomorphism class of graphs on n vertices.

    Orbit sweep over edge-set bitmasks; fine up to n = 6 (2^15 masks x 720
    permutations touches each mask once overall).
    """
    pairs = list(itertools.combinations(range(n), 2))
    npairs = len(pairs)
    pidx = {e: i for i, e in enumerate(pairs)}
    maps = []
    for perm in itertools.permutations(range(n)):
        maps.append(tuple(pidx[_norm_edge(perm[u], perm[v])] for u, v in pairs))
    seen = bytearray(1 << npairs)
    for mask in range(1 << npairs):
        if seen[mask]:
            continue
        for mp in maps:
            img = 0
            rest = mask
            i = 0
            while rest:
                if rest & 1:
                    img |= 1 << mp[i]
                rest >>= 1
                i += 1
            seen[img] = 1
        yield Graph(n, [pairs[i] for i in range(npairs) if mask >> i & 1])


def enumerate_regular_graphs(n: int, d: int):
    """All isomorphism classes of d-regular graphs on n vertices (small n)."""
    pairs = list(itertools.combinations(range(n), 2))
    pidx = {e: i for i, e in enumerate(pairs)}
    maps = []
    for perm in itertools.permutations(range(n)):
        maps.append(tuple(pidx[_norm_edge(perm[u], perm[v])] for u, v in pairs))
    seen: set[int] = set()
    reps = []
    deg = [0] * n

    def rec(i: int, mask: int):
        if i == len(pairs):
            if all(x == d for x in deg):
                if mask not in seen:
                    reps.append(mask)
                    for mp in maps:
                        img = 0
                        rest = mask
                        j = 0
                        while rest:
                            if rest & 1:
                                img |= 1 << mp[j]
                            rest >>= 1
                            j += 1
                        seen.add(img)
            return
        u, v = pairs[i]
        # pairs are lexicographic, so every vertex below u is fully decided
        if any(deg[w] != d for w in range(u)):
            return
        # u can still reach degree d only from its undecided pairs (u, v..n-1)
        if deg[u] + (n - v) < d:
            return
        rec(i + 1, mask)  # skip this pair
        if deg[u] < d and deg[v] < d:
            deg[u] += 1
            deg[v] += 1
            rec(i + 1, mask | (1 << i))
            deg[u] -= 1
            deg[v] -= 1

    rec(0, 0)
    for mask in reps:
        yield Graph(n, [pairs[i] for i in range(len(pairs)) if mask >> i & 1])


# ---------------------------------------------------------------------------
# matchings
# ---------------------------------------------------------------------------


def maximal_matching(g: Graph, seed: int = 0) -> tuple[tuple[int, int], ...]:
    """Greedy maximal matching over a seed-shuffled edge order."""
    order = list(g.edges)
    random.Random(seed).shuffle(order)
    used = [False] * g.n
    matching = []
    for u, v in order:
        if not used[u] and not used[v]:
            used[u] = used[v] = True
            matching.append((u, v))
    return tuple(sorted(matching))


def greedy_vertex_coloring(g: Graph) -> list[int]:
    """First-fit proper coloring in index order; uses at most Delta+1 colors."""
    colors = [0] * g.n
    for v in range(g.n):
        taken = {colors[u] for u in g.neighbors(v) if u < v}
        c = 1
        while c in taken:
            c += 1
        colors[v] = c
    return colors
