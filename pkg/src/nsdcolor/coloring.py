"""Total colorings, their vertex values, and the checking predicates.

A total coloring assigns colors from [k] = {1..k} to vertices and edges.
Colorings may be partial while under construction; the predicates demand
completeness and fail loudly otherwise.  The value of a vertex is its own
color plus the colors of its incident edges; the distinguishing property asks
that adjacent vertices have different values.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .graphs import Graph, _norm_edge


class IncompleteColoringError(ValueError):
    """A predicate needed a color that is not assigned yet."""


class ImproperColoringError(ValueError):
    """A value query or distinguishing check was run on an improper coloring."""

    def __init__(self, violations):
        super().__init__(f"coloring is not proper: {violations[:3]}{'...' if len(violations) > 3 else ''}")
        self.violations = violations


@dataclass(frozen=True)
class Violation:
    """One properness or value clash; kind plus the offending elements."""

    kind: str  # "vertex-vertex" | "edge-edge" | "vertex-edge" | "value-collision"
    witnesses: tuple


@dataclass
class TotalColoring:
    """Colors for vertices and edges out of the palette [k]."""

    k: int
    vertex_color: dict[int, int] = field(default_factory=dict)
    edge_color: dict[tuple[int, int], int] = field(default_factory=dict)

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("palette size must be >= 1")
        for v, c in self.vertex_color.items():
            self._check_range(c, f"vertex {v}")
        self.edge_color = {_norm_edge(u, v): c for (u, v), c in self.edge_color.items()}
        for e, c in self.edge_color.items():
            self._check_range(c, f"edge {e}")

    def _check_range(self, c: int, what: str):
        if not isinstance(c, int) or not 1 <= c <= self.k:
            raise ValueError(f"color {c} on {what} outside palette [1..{self.k}]")

    def set_vertex(self, v: int, c: int):
        self._check_range(c, f"vertex {v}")
        self.vertex_color[v] = c

    def set_edge(self, u: int, v: int, c: int):
        self._check_range(c, f"edge ({u},{v})")
        self.edge_color[_norm_edge(u, v)] = c

    def is_complete(self, g: Graph) -> bool:
        return all(v in self.vertex_color for v in range(g.n)) and all(
            e in self.edge_color for e in g.edges
        )

    def missing_element(self, g: Graph):
        for v in range(g.n):
            if v not in self.vertex_color:
                return v
        for e in g.edges:
            if e not in self.edge_color:
                return e
        return None


def _require_complete(tc: TotalColoring, g: Graph):
    missing = tc.missing_element(g)
    if missing is not None:
        raise IncompleteColoringError(f"element {missing} has no color")


def vertex_value(tc: TotalColoring, g: Graph, v: int) -> int:
    """Color of v plus colors of its incident edges (all must be present)."""
    if v not in tc.vertex_color:
        raise IncompleteColoringError(f"element {v} has no color")
    total = tc.vertex_color[v]
    for u in g.neighbors(v):
        e = _norm_edge(u, v)
        if e not in tc.edge_color:
            raise IncompleteColoringError(f"element {e} has no color")
        total += tc.edge_color[e]
    return total


def edge_only_value(edge_color: dict, g: Graph, v: int) -> int:
    """Sum of incident edge colors only (edge-coloring variant)."""
    total = 0
    for u in g.neighbors(v):
        e = _norm_edge(u, v)
        if e not in edge_color:
            raise IncompleteColoringError(f"element {e} has no color")
        total += edge_color[e]
    return total


def check_proper_total(tc: TotalColoring, g: Graph) -> list[Violation]:
    """Properness violations with witnesses; empty list means proper.

    Every clash is detected: adjacent same-colored vertices, a vertex
    sharing its color with an incident edge, and each repeated color among
    the edges at a vertex (paired with the first edge carrying it).
    """
    _require_complete(tc, g)
    out = []
    vc, ec = tc.vertex_color, tc.edge_color
    for u, v in g.edges:
        if vc[u] == vc[v]:
            out.append(Violation("vertex-vertex", (u, v)))
    for v in range(g.n):
        seen: dict[int, tuple[int, int]] = {}
        for u in g.neighbors(v):
            e = _norm_edge(v, u)
            color = ec[e]
            if color == vc[v]:
                out.append(Violation("vertex-edge", (v, e)))
            if color in seen:
                out.append(Violation("edge-edge", (seen[color], e)))
            else:
                seen[color] = e
    return out


def check_nsd(tc: TotalColoring, g: Graph) -> list[Violation]:
    """Value collisions across edges; input must be a proper total coloring."""
    improper = check_proper_total(tc, g)
    if improper:
        raise ImproperColoringError(improper)
    values = [vertex_value(tc, g, v) for v in range(g.n)]
    return [
        Violation("value-collision", (u, v))
        for u, v in g.edges
        if values[u] == values[v]
    ]


# ---------------------------------------------------------------------------
# certificate JSON
# ---------------------------------------------------------------------------


def to_certificate(tc: TotalColoring, g: Graph) -> dict:
    """Serializable certificate: {k, vertex_colors, edge_colors}."""
    _require_complete(tc, g)
    return {
        "k": tc.k,
        "vertex_colors": [tc.vertex_color[v] for v in range(g.n)],
        "edge_colors": [[u, v, tc.edge_color[(u, v)]] for u, v in g.edges],
    }


def from_certificate(obj: dict) -> TotalColoring:
    for key in ("k", "vertex_colors", "edge_colors"):
        if key not in obj:
            raise ValueError(f"certificate missing key {key!r}")
    return TotalColoring(
        k=obj["k"],
        vertex_color={v: c for v, c in enumerate(obj["vertex_colors"])},
        edge_color={(u, v): c for u, v, c in obj["edge_colors"]},
    )
