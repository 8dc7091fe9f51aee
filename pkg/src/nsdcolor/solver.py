"""Exact solver for distinguishing-total chromatic numbers.

Iterative deepening from the trivial lower bound Delta+1 (Delta for the
edge-only variant): each level runs an exhaustive backtracking search, so the
first feasible k is exact.  The search core is the compiled module
nsdcolor._search when available, else its pure-Python twin; set NSDCOLOR_PURE=1
to force the fallback.  Search is deterministic — no randomness anywhere — so
results, node counts, and serialized artifacts are identical across backends.
"""

from __future__ import annotations

import os
import time
from dataclasses import dataclass

from .coloring import TotalColoring, check_nsd, check_proper_total
from .graphs import Graph, emit_graph6

if os.environ.get("NSDCOLOR_PURE"):
    from . import _search_py as _backend
else:
    try:
        from . import _search as _backend  # type: ignore[attr-defined]
    except ImportError:
        from . import _search_py as _backend

BACKEND = _backend.BACKEND_NAME

_FOUND, _NONE, _BUDGET = 0, 1, 2

# far above any value ever observed (greedy alone proves a 2*Delta+1 proper
# total coloring exists; distinguished ones have never needed more than
# Delta+3 on solved instances)
_K_CAP_SLACK = 5


class SearchBudgetExceeded(RuntimeError):
    """Node budget ran out: result is indeterminate, not a nonexistence proof."""

    def __init__(self, k: int, nodes: int):
        super().__init__(f"budget exhausted at k={k} after {nodes} nodes")
        self.k = k
        self.nodes = nodes


@dataclass
class SolveResult:
    """Outcome of an iterative-deepening run.

    status "exact": chi is the least feasible palette size, witness included.
    status "exhausted": budget ran out; chi is None and [lo, hi] brackets the
    answer (hi may be None when no feasible level was reached either).
    """

    chi: int | None
    witness: TotalColoring | None
    nodes_expanded: int
    elapsed: float
    status: str
    lo: int
    hi: int | None


def _kernel_inputs(g: Graph, edge_mode: bool = False):
    n = g.n
    edges = g.edges
    eid = {e: i for i, e in enumerate(edges)}
    nbr = [list(g.neighbors(v)) for v in range(n)]
    inc = [[eid[(min(v, u), max(v, u))] for u in nbr[v]] for v in range(n)]
    eu = [e[0] for e in edges]
    ev = [e[1] for e in edges]
    # descending degree first, vertices before edges on ties, then index;
    # an edge's degree is the sum of its endpoint degrees (vertices doubled
    # so the two scales are comparable)
    elems = []
    if not edge_mode:
        for v in range(n):
            elems.append((-2 * g.degree(v), 0, v, v))
    for i, (u, v) in enumerate(edges):
        elems.append((-(g.degree(u) + g.degree(v)), 1, i, n + i))
    elems.sort()
    order = [e[3] for e in elems]
    return n, len(edges), nbr, inc, eu, ev, order


def _run_level(g: Graph, k: int, nsd: bool, edge_mode: bool, budget: int | None, backend=None):
    be = backend or _backend
    n, m, nbr, inc, eu, ev, order = _kernel_inputs(g, edge_mode)
    status, vcol, ecol, nodes = be.search(
        n, m, nbr, inc, eu, ev, order, k, nsd, not edge_mode, budget or 0
    )
    return status, vcol, ecol, nodes


def _as_coloring(g: Graph, k: int, vcol, ecol) -> TotalColoring:
    return TotalColoring(
        k=k,
        vertex_color={v: vcol[v] for v in range(g.n)},
        edge_color={e: ecol[i] for i, e in enumerate(g.edges)},
    )


def find_nsd_total(g: Graph, k: int, budget: int | None = None, backend=None) -> TotalColoring | None:
    """One distinguishing proper total k-coloring, or None when none exists.

    Raises SearchBudgetExceeded when the node budget runs out first; that
    outcome proves nothing either way.
    """
    if g.n == 0:
        raise ValueError("graph must have at least one vertex")
    status, vcol, ecol, nodes = _run_level(g, k, nsd=True, edge_mode=False, budget=budget, backend=backend)
    if status == _BUDGET:
        raise SearchBudgetExceeded(k, nodes)
    if status == _NONE:
        return None
    return _as_coloring(g, k, vcol, ecol)


def find_proper_total(g: Graph, k: int, budget: int | None = None) -> TotalColoring | None:
    """Plain proper total k-coloring search (no value constraint)."""
    if g.n == 0:
        raise ValueError("graph must have at least one vertex")
    status, vcol, ecol, nodes = _run_level(g, k, nsd=False, edge_mode=False, budget=budget)
    if status == _BUDGET:
        raise SearchBudgetExceeded(k, nodes)
    if status == _NONE:
        return None
    return _as_coloring(g, k, vcol, ecol)


def _deepen(g: Graph, nsd: bool, edge_mode: bool, budget: int | None, verify: bool) -> SolveResult:
    if g.n == 0:
        raise ValueError("graph must have at least one vertex")
    delta = g.max_degree()
    lo = delta if edge_mode else delta + 1
    lo = max(lo, 1)
    cap = 2 * delta + _K_CAP_SLACK
    t0 = time.perf_counter()
    total_nodes = 0
    k = lo
    while k <= cap:
        remaining = None if budget is None else budget - total_nodes
        if remaining is not None and remaining <= 0:
            return SolveResult(None, None, total_nodes, time.perf_counter() - t0, "exhausted", k, _probe_hi(g, nsd, edge_mode, k + 1, cap, budget))
        status, vcol, ecol, nodes = _run_level(g, k, nsd, edge_mode, remaining)
        total_nodes += nodes
        if status == _BUDGET:
            hi = _probe_hi(g, nsd, edge_mode, k + 1, cap, budget)
            return SolveResult(None, None, total_nodes, time.perf_counter() - t0, "exhausted", k, hi)
        if status == _FOUND:
            witness = None
            if not edge_mode:
                witness = _as_coloring(g, k, vcol, ecol)
                if verify:
                    assert not check_proper_total(witness, g)
                    if nsd:
                        assert not check_nsd(witness, g)
            return SolveResult(k, witness, total_nodes, time.perf_counter() - t0, "exact", k, k)
        k += 1
    raise RuntimeError(f"no coloring found up to k={cap}; palette cap is supposed to be unreachable")


def _probe_hi(g: Graph, nsd: bool, edge_mode: bool, k_from: int, cap: int, budget: int | None):
    """After exhaustion, hunt upward for any feasible level to bracket chi."""
    for k in range(k_from, cap + 1):
        status, *_ = _run_level(g, k, nsd, edge_mode, budget)
        if status == _FOUND:
            return k
    return None


def chi_sigma_total(g: Graph, budget: int | None = None, verify: bool = True) -> SolveResult:
    """Least k admitting a distinguishing proper total k-coloring."""
    return _deepen(g, nsd=True, edge_mode=False, budget=budget, verify=verify)


def chi_total(g: Graph, budget: int | None = None, verify: bool = True) -> SolveResult:
    """Least k admitting a proper total k-coloring."""
    return _deepen(g, nsd=False, edge_mode=False, budget=budget, verify=verify)


def chi_sigma_edge(g: Graph, budget: int | None = None) -> SolveResult:
    """Edge-only variant: least k with a distinguishing proper edge coloring.

    Undefined on graphs with an isolated edge (the two endpoint sums are
    forced equal), so those are rejected.
    """
    for u, v in g.edges:
        if g.degree(u) == 1 and g.degree(v) == 1:
            raise ValueError(f"isolated edge ({u},{v}): edge-only variant undefined")
    return _deepen(g, nsd=True, edge_mode=True, budget=budget, verify=False)


# ---------------------------------------------------------------------------
# conjecture sweeps
# ---------------------------------------------------------------------------


@dataclass
class SweepRow:
    graph6: str
    n: int
    delta: int
    chi_total: str
    chi_sigma_total: str
    status: str  # ok | violation | budget_exhausted | too_large


def _fmt_chi(res: SolveResult) -> str:
    if res.status == "exact":
        return str(res.chi)
    return f"{res.lo}-{res.hi}" if res.hi is not None else f"{res.lo}-"


def sweep_graph(g: Graph, budget: int | None = None, max_n: int | None = None) -> SweepRow:
    g6 = emit_graph6(g)
    delta = g.max_degree()
    if max_n is not None and g.n > max_n:
        return SweepRow(g6, g.n, delta, "", "", "too_large")
    rt = chi_total(g, budget=budget)
    rs = chi_sigma_total(g, budget=budget)
    status = "ok"
    if rt.status != "exact" or rs.status != "exact":
        status = "budget_exhausted"
    elif not (delta + 1 <= rt.chi <= rs.chi <= delta + 3):
        status = "violation"
    return SweepRow(g6, g.n, delta, _fmt_chi(rt), _fmt_chi(rs), status)


def sweep_conjecture(graphs, budget: int | None = None, max_n: int | None = None) -> list[SweepRow]:
    """One row per graph, in input order."""
    return [sweep_graph(g, budget=budget, max_n=max_n) for g in graphs]
