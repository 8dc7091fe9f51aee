"""Three-stage constructive coloring pipeline.

Builds, for a graph of maximum degree D >= 3, a proper total coloring whose
vertex values (own color plus incident edge colors) separate every adjacent
pair, using the palette layout driven by the derived constants: a maximal
matching M is set aside, the rest of the edges receive colors inside
per-class palettes (stage 1), a bounded repair pass makes matched endpoints'
values distinct (stage 2), and M itself is colored out of the reserved low
range (stage 3).  A run either ends in an independently verified certificate
whose maximum color is checked against D + 50*D^(5/6)*ln^(1/6)D, or in a
structured report naming the failing stage — never an unverified coloring.

The separation guarantees are asymptotic, so small-degree failures are
expected, first-class outcomes.  Every stage is deterministic given the
master seed.
"""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction

from .graphs import Graph, _norm_edge, emit_graph6, greedy_vertex_coloring, maximal_matching
from .coloring import TotalColoring, check_nsd, check_proper_total, to_certificate
from .lemma import (
    ConstructionParams,
    LemmaColorings,
    compute_S,
    derive_params,
    resample_until_valid,
)

STAGES = (
    "prepare",
    "lemma",
    "step1",
    "step2_select",
    "step2_recolor",
    "decompose",
    "step3",
    "certify",
)

REPAIR_DEPTH = 3


class StageError(Exception):
    """A pipeline stage could not complete; carries stage name and context."""

    def __init__(self, stage: str, message: str, **data):
        super().__init__(f"{stage}: {message}")
        self.stage = stage
        self.message = message
        self.data = data


def palette_interval(beta: int, params: ConstructionParams) -> range:
    """The contiguous color block reserved for edge class beta."""
    if not 3 <= beta <= 2 * params.c_v + params.c_e:
        raise ValueError(f"class {beta} outside [3, {2 * params.c_v + params.c_e}]")
    lo = beta * params.stretch + params.cm
    return range(lo, lo + params.palette_width)


@dataclass
class ValueDecomposition:
    """Exact split of a vertex value into dominant and error terms.

    s_value = main + error holds exactly (rationals); f1/f2 are the per-class
    imbalance residues and carry the same bounds as balance properties 1-2.
    within_* report whether the asymptotic bounds happened to hold.
    """

    vertex: int
    degree: int
    s_value: Fraction
    main: Fraction
    error: Fraction
    f1: Fraction
    f2: Fraction
    sum_offsets: int
    within_f1: bool
    within_f2: bool
    within_band: bool


@dataclass
class PipelineState:
    """Everything a run accumulates; inspectable after success or failure."""

    graph: Graph
    seed: int
    params: ConstructionParams = None
    matching: tuple = ()
    residual: Graph = None
    gcol: list = field(default_factory=list)
    lemma: LemmaColorings = None
    resample_rounds: int = 0
    precondition_breaches: int = 0
    beta: dict = field(default_factory=dict)
    cprime: dict = field(default_factory=dict)
    offsets: dict = field(default_factory=dict)      # current a-offset per residual edge
    step1_offsets: dict = field(default_factory=dict)
    repaired_step1: int = 0
    h_edges: tuple = ()
    phase_a_recolored: list = field(default_factory=list)
    m_prime: tuple = ()
    phase_b_fixed: list = field(default_factory=list)
    values: list = field(default_factory=list)       # current vertex values
    decomp: list = field(default_factory=list)
    matching_colors: dict = field(default_factory=dict)
    final: TotalColoring = None
    max_color: int = 0
    bound: float = 0.0


def _residual_edge_color(state: PipelineState, e) -> int:
    return state.cprime[e] + state.offsets[e]


def _vertex_allowed_offsets(state: PipelineState, e, pool) -> list:
    """Offsets of pool minus the two endpoint-color collisions for e."""
    u, v = e
    c = state.cprime[e]
    banned = {state.gcol[u] - c, state.gcol[v] - c}
    return [a for a in pool if a not in banned]


def _incident_same_class_offsets(state: PipelineState, e) -> set:
    """Offsets currently used on same-class residual edges incident to e."""
    u, v = e
    b = state.beta[e]
    out = set()
    for x in (u, v):
        for z in state.residual.neighbors(x):
            f = _norm_edge(x, z)
            if f != e and state.beta[f] == b and f in state.offsets:
                out.add(state.offsets[f])
    return out


# ---------------------------------------------------------------------------
# stages
# ---------------------------------------------------------------------------


def prepare(graph: Graph, seed: int) -> PipelineState:
    delta = graph.max_degree()
    if delta < 3:
        raise StageError("prepare", f"maximum degree {delta} below the domain minimum 3")
    state = PipelineState(graph=graph, seed=seed)
    rng = random.Random(seed)
    match_seed = rng.randrange(2**63)
    state._lemma_seed = rng.randrange(2**63)
    state._h_seed = rng.randrange(2**63)
    state.params = derive_params(delta)
    state.matching = maximal_matching(graph, match_seed)
    state.gcol = greedy_vertex_coloring(graph)
    assert max(state.gcol, default=1) <= delta + 1
    state.residual = graph.without_edges(state.matching)
    state.bound = delta + 50.0 * delta ** (5 / 6) * math.log(delta) ** (1 / 6)
    return state


def run_lemma_stage(state: PipelineState, max_rounds: int | None = None) -> None:
    result = resample_until_valid(
        state.residual, state.params, state.gcol, state._lemma_seed,
        max_rounds=max_rounds, strict=False,
    )
    state.resample_rounds = result.rounds
    state.precondition_breaches = len(result.last_report.precondition_breaches)
    if not result.ok:
        worst = result.last_report.violations[0]
        raise StageError(
            "lemma",
            f"balance resampling gave up after {result.rounds} rounds",
            vertex=worst.vertex, prop=worst.prop,
            remaining=len(result.last_report.violations),
        )
    state.lemma = result.colorings


def assign_tentative(state: PipelineState) -> None:
    """Class index and palette base for every residual edge, range-checked."""
    p = state.params
    top = (2 * p.c_v + p.c_e) * p.stretch + p.cm
    for e in state.residual.edges:
        u, v = e
        beta = state.lemma.c1[u] + state.lemma.c1[v] + state.lemma.c2[e]
        assert 3 <= beta <= 2 * p.c_v + p.c_e
        c = beta * p.stretch + p.cm
        assert p.cm < c <= top, "tentative color escaped its range"
        assert c == palette_interval(beta, p)[0]
        state.beta[e] = beta
        state.cprime[e] = c


def step1_list_color(state: PipelineState) -> None:
    """Proper in-palette offsets for every residual edge, class by class.

    Within one class, incident edges need distinct offsets (distinct classes
    live in disjoint palettes already).  Greedy in descending class-degree
    order; when an edge is stuck, a bounded eviction repair reassigns
    adjacent edges (depth <= 3) before the stage gives up.
    """
    p = state.params
    pool_low = list(p.offsets_low())
    by_class: dict[int, list] = {}
    for e in state.residual.edges:
        by_class.setdefault(state.beta[e], []).append(e)

    for beta in sorted(by_class):
        edges = by_class[beta]
        degree: dict[int, int] = {}
        for u, v in edges:
            degree[u] = degree.get(u, 0) + 1
            degree[v] = degree.get(v, 0) + 1
        edges.sort(key=lambda e: (-(degree[e[0]] + degree[e[1]]), e))
        lists = {e: _vertex_allowed_offsets(state, e, pool_low) for e in edges}
        cur: dict = {}
        used: dict[int, dict] = {x: {} for x in degree}

        def unassign(f):
            a = cur.pop(f)
            del used[f[0]][a]
            del used[f[1]][a]

        def restore(snapshot):
            cur.clear()
            cur.update(snapshot)
            for d in used.values():
                d.clear()
            for f, a in cur.items():
                used[f[0]][a] = f
                used[f[1]][a] = f

        def place(f, depth, frozen):
            fu, fv = f
            for a in lists[f]:
                if a not in used[fu] and a not in used[fv]:
                    cur[f] = a
                    used[fu][a] = f
                    used[fv][a] = f
                    return True
            if depth == 0:
                return False
            for a in lists[f]:
                blockers = []
                for x in (fu, fv):
                    b = used[x].get(a)
                    if b is not None and b not in blockers:
                        blockers.append(b)
                if not blockers or any(b in frozen for b in blockers):
                    continue
                snapshot = dict(cur)
                for b in blockers:
                    unassign(b)
                cur[f] = a
                used[fu][a] = f
                used[fv][a] = f
                if all(place(b, depth - 1, frozen | {f}) for b in blockers):
                    state.repaired_step1 += 1
                    return True
                restore(snapshot)
            return False

        for e in edges:
            if not lists[e]:
                raise StageError("step1", "empty offset list", beta=beta, edge=e)
            if not place(e, REPAIR_DEPTH, frozenset()):
                raise StageError(
                    "step1", "no proper offset found", beta=beta, edge=e,
                    pool=len(lists[e]),
                )
        state.offsets.update(cur)

    state.step1_offsets = dict(state.offsets)
    _assert_palette_discipline(state)
    _verify_residual(state, "step1")
    state.values = _current_values(state)


def _assert_palette_discipline(state: PipelineState) -> None:
    for e in state.residual.edges:
        color = _residual_edge_color(state, e)
        assert color in palette_interval(state.beta[e], state.params), (
            f"edge {e} colored outside its class palette"
        )


def _verify_residual(state: PipelineState, stage: str) -> None:
    colors = {e: _residual_edge_color(state, e) for e in state.residual.edges}
    k = max(
        max(colors.values(), default=1),
        max(state.gcol, default=1),
    )
    tc = TotalColoring(
        k=k,
        vertex_color={v: state.gcol[v] for v in range(state.graph.n)},
        edge_color=colors,
    )
    bad = check_proper_total(tc, state.residual)
    if bad:
        raise StageError(stage, f"properness regressed: {bad[0]}", violations=len(bad))


def _current_values(state: PipelineState) -> list:
    vals = list(state.gcol)
    for e in state.residual.edges:
        c = _residual_edge_color(state, e)
        vals[e[0]] += c
        vals[e[1]] += c
    return vals


def step2_select_h(state: PipelineState, max_rounds: int = 1000) -> None:
    """One incident residual edge per high-degree vertex, degree-capped.

    Vertices of degree >= D^(2/3) in the host graph each select an edge; the
    union H is resampled until no vertex carries more than 2*D^(1/3)+1
    selected edges.
    """
    p = state.params
    rng = random.Random(state._h_seed)
    threshold = p.D ** (2 / 3)
    cap = 2.0 * p.D ** (1 / 3)
    big = [v for v in range(state.graph.n) if state.graph.degree(v) >= threshold]
    candidates = {}
    for v in big:
        inc = sorted(_norm_edge(v, u) for u in state.residual.neighbors(v))
        assert inc, "a high-degree vertex cannot be isolated off the matching"
        candidates[v] = inc
    pick = {v: rng.choice(candidates[v]) for v in big}

    def h_degrees():
        deg = [0] * state.graph.n
        for e in set(pick.values()):
            deg[e[0]] += 1
            deg[e[1]] += 1
        return deg

    rounds = 0
    while True:
        deg = h_degrees()
        heavy = {v for v in range(state.graph.n) if deg[v] - 1 > cap}
        if not heavy:
            break
        if rounds >= max_rounds:
            raise StageError(
                "step2_select",
                f"degree cap still exceeded after {rounds} resampling rounds",
                heavy=sorted(heavy)[:5],
            )
        for v in big:
            if pick[v][0] in heavy or pick[v][1] in heavy:
                pick[v] = rng.choice(candidates[v])
        rounds += 1
    state.h_edges = tuple(sorted(set(pick.values())))


def step2_recolor(state: PipelineState) -> None:
    """Make matched endpoints' values distinct without breaking properness.

    Phase one walks the selected edges in ascending order; the last selected
    edge incident to each matching edge is recolored (high offsets only) when
    that matched pair is still tied.  Phase two sweeps the matching edges
    that remain tied — their endpoints are low-degree, so some incident
    residual edge admits an offset (full pool) separating the pair while
    keeping every other matched pair near it distinct.
    """
    p = state.params
    mate = {}
    for x, y in state.matching:
        mate[x] = y
        mate[y] = x

    # phase one: responsibility of the last selected edge per matching edge
    last_for: dict = {}
    for e in state.h_edges:
        for end in e:
            if end in mate:
                last_for[_norm_edge(end, mate[end])] = e
    responsibility: dict = {}
    for m, e in last_for.items():
        responsibility.setdefault(e, []).append(m)

    pool_high = list(p.offsets_high())
    vals = state.values
    for e in state.h_edges:
        pairs = sorted(responsibility.get(e, []))
        if not pairs:
            continue
        if all(vals[x] != vals[y] for x, y in pairs):
            continue
        cur = state.offsets[e]
        allowed = set(_vertex_allowed_offsets(state, e, pool_high))
        allowed -= _incident_same_class_offsets(state, e)
        for x, y in pairs:
            shared = x if x in e else y
            other = mate[shared]
            assert shared in e and other not in e
            allowed.discard(cur + vals[other] - vals[shared])
        if not allowed:
            raise StageError(
                "step2_recolor", "high offset pool exhausted",
                phase=1, edge=e, pairs=pairs,
            )
        new = min(allowed)
        delta = new - cur
        state.offsets[e] = new
        vals[e[0]] += delta
        vals[e[1]] += delta
        state.phase_a_recolored.append(e)
        assert all(vals[x] != vals[y] for x, y in pairs)

    # phase two: matched pairs still tied
    state.m_prime = tuple(m for m in state.matching if vals[m[0]] == vals[m[1]])
    pool_all = list(p.offsets_all())
    for u, uprime in state.m_prime:
        fixes = []
        for endpoint in (u, uprime):
            for z in sorted(state.residual.neighbors(endpoint)):
                fixes.append((endpoint, _norm_edge(endpoint, z)))
        assert fixes, (
            "a tied matched pair with both endpoints isolated off the matching "
            "cannot exist: their values would be their distinct vertex colors"
        )
        done = False
        for endpoint, f in fixes:
            w = f[0] if f[1] == endpoint else f[1]
            assert w not in (u, uprime)
            cur = state.offsets[f]
            allowed = [
                a for a in _vertex_allowed_offsets(state, f, pool_all)
                if a not in _incident_same_class_offsets(state, f)
            ]
            partner = mate[endpoint]
            for a in allowed:
                delta = a - cur
                if vals[endpoint] + delta == vals[partner]:
                    continue
                if w in mate and vals[w] + delta == vals[mate[w]]:
                    continue
                state.offsets[f] = a
                vals[f[0]] += delta
                vals[f[1]] += delta
                state.phase_b_fixed.append((u, uprime, f, a))
                done = True
                break
            if done:
                break
        if not done:
            raise StageError(
                "step2_recolor", "no residual edge and offset separate the pair",
                phase=2, pair=(u, uprime),
            )

    for x, y in state.matching:
        assert vals[x] != vals[y], "a matched pair survived both phases tied"
    assert vals == _current_values(state), "incremental values drifted"
    _assert_palette_discipline(state)
    _verify_residual(state, "step2_recolor")


def decompose_values(state: PipelineState, assert_floor: int | None = None) -> None:
    """Exact dominant/error split for every vertex of residual degree >= d0.

    The identity s = main + error is checked exactly (rationals).  The
    asymptotic bounds on f1, f2 and the value band are recorded always and
    enforced only at or above the opt-in degree floor.
    """
    p = state.params
    b_v = Fraction(p.c_v * (p.c_v + 1), 2)
    b_e = Fraction(p.c_e * (p.c_e + 1), 2)
    enforce = assert_floor is not None and p.D >= assert_floor
    for v in range(state.graph.n):
        d = state.residual.degree(v)
        if d < p.d0:
            continue
        s_val = Fraction(state.values[v])
        main = compute_S(d, state.lemma.c1[v], state.gcol[v], p)
        error = s_val - main
        sum_off = 0
        sum_c1 = 0
        sum_c2 = 0
        for z in state.residual.neighbors(v):
            e = _norm_edge(v, z)
            sum_off += state.offsets[e]
            sum_c1 += state.lemma.c1[z]
            sum_c2 += state.lemma.c2[e]
        f1 = (Fraction(sum_c1) - Fraction(d, p.c_v) * b_v) / b_v
        f2 = (Fraction(sum_c2) - Fraction(d, p.c_e) * b_e) / b_e
        rebuilt = Fraction(sum_off) + p.stretch * (f1 * b_v + f2 * b_e)
        assert rebuilt == error, "error-term decomposition must be exact"
        band_lo = Fraction(3, 4) * Fraction(d * p.D, 2)
        band_hi = Fraction(5, 4) * Fraction(d * p.D, 2)
        dec = ValueDecomposition(
            vertex=v, degree=d, s_value=s_val, main=main, error=error,
            f1=f1, f2=f2, sum_offsets=sum_off,
            within_f1=abs(f1) <= p.dev_vertex,
            within_f2=abs(f2) <= p.dev_edge,
            within_band=band_lo < s_val < band_hi,
        )
        state.decomp.append(dec)
        if enforce and not (dec.within_f1 and dec.within_f2 and dec.within_band):
            raise StageError(
                "decompose",
                f"asymptotic bounds failed at vertex {v} with the floor enforced",
                vertex=v, f1=float(f1), f2=float(f2), s=float(s_val),
            )


def step3_extend(state: PipelineState) -> None:
    """Color the matching out of the reserved low range, checked exactly.

    Matching edges in ascending order; each takes the least color in
    [1, cm] clashing with neither endpoint color nor any settled neighbor
    value.  A vertex's value is settled once its matching edge (if any) is
    colored, so every adjacent pair is compared exactly once, when the later
    of the two settles; pairs inside one matching edge stay distinct because
    both ends gain the same amount.
    """
    p = state.params
    vals = state.values
    in_matching = set()
    for m in state.matching:
        in_matching.update(m)
    settled = [v not in in_matching for v in range(state.graph.n)]

    for m in state.matching:
        x, y = m
        assert vals[x] != vals[y], "stage-2 postcondition missing at stage 3"
        banned_x = {vals[u] - vals[x] for u in state.graph.neighbors(x) if settled[u]}
        banned_y = {vals[u] - vals[y] for u in state.graph.neighbors(y) if settled[u]}
        choice = None
        for gamma in range(1, p.cm + 1):
            if gamma == state.gcol[x] or gamma == state.gcol[y]:
                continue
            if gamma in banned_x or gamma in banned_y:
                continue
            choice = gamma
            break
        if choice is None:
            raise StageError(
                "step3", "reserved range exhausted", edge=m,
                conflicts=len(banned_x | banned_y),
            )
        state.matching_colors[m] = choice
        vals[x] += choice
        vals[y] += choice
        settled[x] = settled[y] = True

    edge_color = {e: _residual_edge_color(state, e) for e in state.residual.edges}
    for m, gamma in state.matching_colors.items():
        assert gamma <= p.cm, "matching colors must stay in the reserved range"
        edge_color[m] = gamma
    for e in state.residual.edges:
        assert edge_color[e] > p.cm, "residual colors must clear the reserved range"
    state.max_color = max(
        max(state.gcol, default=1),
        max(edge_color.values(), default=1),
    )
    tc = TotalColoring(
        k=state.max_color,
        vertex_color={v: state.gcol[v] for v in range(state.graph.n)},
        edge_color=edge_color,
    )
    bad = check_proper_total(tc, state.graph)
    if bad:
        raise StageError("step3", f"final coloring improper: {bad[0]}", violations=len(bad))
    ties = check_nsd(tc, state.graph)
    if ties:
        raise StageError("step3", f"final values tied: {ties[0]}", violations=len(ties))
    state.final = tc


def certify(state: PipelineState) -> dict:
    """Success only when the verified coloring fits the degree-driven bound."""
    if state.max_color > state.bound:
        raise StageError(
            "certify",
            f"max color {state.max_color} exceeds bound {state.bound:.1f}",
            max_color=state.max_color, bound=state.bound,
        )
    cert = to_certificate(state.final, state.graph)
    cert["graph6"] = emit_graph6(state.graph)
    cert["seed"] = state.seed
    cert["bound"] = state.bound
    return cert


# ---------------------------------------------------------------------------
# driver
# ---------------------------------------------------------------------------


@dataclass
class StageOutcome:
    stage: str
    ok: bool
    detail: str


@dataclass
class PipelineResult:
    ok: bool
    stage_outcomes: list
    failed_stage: str | None
    failure: str | None
    certificate: dict | None
    state: PipelineState | None
    stats: dict


def run_pipeline(
    graph: Graph,
    seed: int,
    max_rounds: int | None = None,
    assert_floor: int | None = None,
    include_timings: bool = False,
) -> PipelineResult:
    """Chain all stages; success means a verified, bound-checked certificate."""
    outcomes: list[StageOutcome] = []
    timings: dict[str, float] = {}
    state: PipelineState | None = None
    certificate = None
    failed = None
    failure = None

    def run(stage, fn, detail_fn):
        t0 = time.perf_counter()
        fn()
        timings[stage] = time.perf_counter() - t0
        outcomes.append(StageOutcome(stage, True, detail_fn()))

    try:
        t0 = time.perf_counter()
        state = prepare(graph, seed)
        timings["prepare"] = time.perf_counter() - t0
        outcomes.append(StageOutcome(
            "prepare", True,
            f"D={state.params.D} matching={len(state.matching)} colors<={max(state.gcol)}",
        ))
        run("lemma", lambda: run_lemma_stage(state, max_rounds),
            lambda: f"rounds={state.resample_rounds} breaches={state.precondition_breaches}")
        run("step1", lambda: (assign_tentative(state), step1_list_color(state)),
            lambda: f"classes={len(set(state.beta.values()))} repairs={state.repaired_step1}")
        run("step2_select", lambda: step2_select_h(state),
            lambda: f"H={len(state.h_edges)}")
        run("step2_recolor", lambda: step2_recolor(state),
            lambda: f"recolored={len(state.phase_a_recolored)} "
                    f"tied={len(state.m_prime)} fixed={len(state.phase_b_fixed)}")
        run("decompose", lambda: decompose_values(state, assert_floor),
            lambda: f"checked={len(state.decomp)}")
        run("step3", lambda: step3_extend(state),
            lambda: f"matching_colored={len(state.matching_colors)}")
        t0 = time.perf_counter()
        certificate = certify(state)
        timings["certify"] = time.perf_counter() - t0
        outcomes.append(StageOutcome(
            "certify", True, f"max={state.max_color} bound={state.bound:.1f}",
        ))
    except StageError as err:
        failed = err.stage
        failure = err.message
        outcomes.append(StageOutcome(err.stage, False, err.message))

    stats = _build_stats(graph, seed, state, outcomes, failed)
    if include_timings:
        stats["timings"] = {k: round(v, 6) for k, v in timings.items()}
    return PipelineResult(
        ok=failed is None,
        stage_outcomes=outcomes,
        failed_stage=failed,
        failure=failure,
        certificate=certificate,
        state=state,
        stats=stats,
    )


def _build_stats(graph, seed, state, outcomes, failed) -> dict:
    stats = {
        "input": {"n": graph.n, "m": graph.m, "delta": graph.max_degree()},
        "seed": seed,
        "outcome": "success" if failed is None else f"failed:{failed}",
        "stages": [
            {"stage": o.stage, "ok": o.ok, "detail": o.detail} for o in outcomes
        ],
    }
    if state is None:
        return stats
    p = state.params
    stats["params"] = {
        "D": p.D, "c_v": p.c_v, "c_e": p.c_e, "c_big": p.c_big,
        "cm": p.cm, "palette_width": p.palette_width, "d0": p.d0,
    }
    stats["resample_rounds"] = state.resample_rounds
    stats["precondition_breaches"] = state.precondition_breaches
    stats["matching_size"] = len(state.matching)
    if state.beta:
        stats["palettes_used"] = sorted(set(state.beta.values()))
    stats["step1_repairs"] = state.repaired_step1
    stats["h_size"] = len(state.h_edges)
    stats["phase_a_recolored"] = len(state.phase_a_recolored)
    stats["m_prime_size"] = len(state.m_prime)
    stats["phase_b_fixed"] = len(state.phase_b_fixed)
    if state.decomp:
        stats["decomposition"] = {
            "checked": len(state.decomp),
            "within_f1": sum(d.within_f1 for d in state.decomp),
            "within_f2": sum(d.within_f2 for d in state.decomp),
            "within_band": sum(d.within_band for d in state.decomp),
        }
    if state.max_color:
        stats["max_color"] = state.max_color
    stats["bound"] = state.bound
    return stats
