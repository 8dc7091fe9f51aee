"""Staged construction pipeline: frozen outcomes, invariants, determinism."""

import math
from fractions import Fraction

import pytest

from nsdcolor.coloring import check_nsd, check_proper_total
from nsdcolor.graphs import Graph, generate_family
from nsdcolor.lemma import derive_params
from nsdcolor.pipeline import (
    STAGES,
    PipelineState,
    StageError,
    palette_interval,
    prepare,
    run_pipeline,
)


def _star(leaves):
    return Graph(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


# ---------------------------------------------------------------------------
# palette geometry
# ---------------------------------------------------------------------------


def test_palette_intervals_disjoint_and_sized():
    for D in (3, 10, 100, 1000):
        p = derive_params(D)
        lo_class, hi_class = 3, 2 * p.c_v + p.c_e
        blocks = [palette_interval(b, p) for b in range(lo_class, hi_class + 1)]
        for blk in blocks:
            assert len(blk) == p.palette_width
            assert blk.start > p.cm  # everything above the reserved range
        for a, b in zip(blocks, blocks[1:]):
            assert set(a).isdisjoint(b)


def test_palette_interval_domain():
    p = derive_params(10)
    with pytest.raises(ValueError):
        palette_interval(2, p)
    with pytest.raises(ValueError):
        palette_interval(2 * p.c_v + p.c_e + 1, p)


# ---------------------------------------------------------------------------
# stage entry errors
# ---------------------------------------------------------------------------


def test_prepare_rejects_low_degree():
    for g in (Graph(1, []), Graph(2, [(0, 1)]), generate_family("cycle", {"n": 5}, seed=0)):
        with pytest.raises(StageError) as exc:
            prepare(g, seed=0)
        assert exc.value.stage == "prepare"
    res = run_pipeline(Graph(2, [(0, 1)]), seed=0)
    assert not res.ok and res.failed_stage == "prepare"
    assert res.stats["outcome"] == "failed:prepare"


# ---------------------------------------------------------------------------
# frozen end-to-end outcomes
# ---------------------------------------------------------------------------


def test_frozen_star_success():
    # the one desk-scale shape whose bound clears: a big star keeps the
    # degree scale high (bound ~ 1.66e5) while the coloring stays tiny
    res = run_pipeline(_star(10**4), seed=1)
    assert res.ok and res.failed_stage is None
    assert res.state.max_color == 163976
    assert math.isclose(res.state.bound, 165961.0, abs_tol=0.5)
    assert res.certificate is not None
    # the certificate re-verifies from scratch
    final, g = res.state.final, res.state.graph
    assert not check_proper_total(final, g)
    assert not check_nsd(final, g)
    assert res.stats["outcome"] == "success"
    assert [s.stage for s in res.stage_outcomes] == list(STAGES)


def test_frozen_star_alternate_seed_fails_certify_only():
    res = run_pipeline(_star(10**4), seed=0)
    assert not res.ok and res.failed_stage == "certify"
    assert res.state.max_color == 167229
    # everything before the bound check succeeded: the coloring itself is real
    final, g = res.state.final, res.state.graph
    assert not check_proper_total(final, g)
    assert not check_nsd(final, g)


def test_frozen_phase_a_recolor_exercised():
    g = generate_family("random_gnp", {"n": 24, "p": 0.55}, seed=326)
    res = run_pipeline(g, seed=14)
    assert res.failed_stage == "certify"  # bound honest at desk scale
    assert len(res.state.phase_a_recolored) == 1
    assert len(res.state.phase_b_fixed) == 0
    assert not check_proper_total(res.state.final, g)
    assert not check_nsd(res.state.final, g)


def test_frozen_phase_b_tiebreak_exercised():
    g = generate_family("random_gnp", {"n": 14, "p": 0.40}, seed=204)
    res = run_pipeline(g, seed=22)
    assert res.failed_stage == "certify"
    assert len(res.state.phase_a_recolored) == 0
    assert len(res.state.phase_b_fixed) == 1
    assert not check_proper_total(res.state.final, g)
    assert not check_nsd(res.state.final, g)


def test_frozen_high_pool_exhaustion():
    # at very small degree scale the high offset pool can be empty, an
    # honest structural failure of the recoloring step
    g = generate_family("random_gnp", {"n": 12, "p": 0.40}, seed=162)
    res = run_pipeline(g, seed=6)
    assert not res.ok
    assert res.failed_stage == "step2_recolor"
    assert res.failure == "high offset pool exhausted"
    assert res.certificate is None


def test_frozen_k4_certify_failure():
    g = generate_family("complete", {"n": 4}, seed=0)
    res = run_pipeline(g, seed=0)
    assert not res.ok and res.failed_stage == "certify"
    assert res.state.max_color == 151
    assert math.isclose(res.state.bound, 129.9, abs_tol=0.05)
    # the coloring is still proper and distinguishing, just not small enough
    assert not check_proper_total(res.state.final, g)
    assert not check_nsd(res.state.final, g)


# ---------------------------------------------------------------------------
# structural invariants on completed runs
# ---------------------------------------------------------------------------


def _run_reaching_step3(seed_graph, seed_run, n=18, p=0.5):
    g = generate_family("random_gnp", {"n": n, "p": p}, seed=seed_graph)
    res = run_pipeline(g, seed=seed_run)
    reached = {s.stage for s in res.stage_outcomes if s.ok}
    if "step3" not in reached:
        return None
    return res


def test_color_ranges_partition():
    # matching edges use colors in [1, cm]; residual edges sit above cm in
    # their class palettes; so the two never collide
    found = 0
    for gs in range(6):
        res = _run_reaching_step3(gs, 3 * gs + 1)
        if res is None:
            continue
        found += 1
        st = res.state
        cm = st.params.cm
        for e in st.matching:
            assert 1 <= st.final.edge_color[e] <= cm
        for e in st.residual.edges:
            c = st.final.edge_color[e]
            assert c > cm
            assert c in palette_interval(st.beta[e], st.params)
    assert found >= 3


def test_decomposition_identity_exact():
    # for every checked vertex the observed value splits exactly into the
    # reference part plus the structured error term
    found = 0
    for gs in range(8):
        res = _run_reaching_step3(gs, gs + 11, n=20, p=0.6)
        if res is None:
            continue
        st = res.state
        for dec in st.decomp:
            found += 1
            assert dec.s_value == dec.main + dec.error  # exact Fractions
            assert isinstance(dec.main, Fraction)
            # the value band is an asymptotic property; at desk scale the
            # flag is recorded honestly but not enforced (see assert_floor)
            assert dec.within_band in (True, False)
    assert found > 0


def test_stats_deterministic_across_reruns():
    g = generate_family("random_gnp", {"n": 16, "p": 0.5}, seed=3)
    a = run_pipeline(g, seed=9)
    b = run_pipeline(g, seed=9)
    assert a.stats == b.stats
    assert a.ok == b.ok
    if a.state.final is not None and b.state.final is not None:
        assert a.state.final.edge_color == b.state.final.edge_color
        assert a.state.final.vertex_color == b.state.final.vertex_color
    c = run_pipeline(g, seed=10)
    assert c.stats != a.stats or c.state.final != a.state.final


def test_timings_only_when_requested():
    g = generate_family("random_gnp", {"n": 12, "p": 0.5}, seed=1)
    bare = run_pipeline(g, seed=2)
    timed = run_pipeline(g, seed=2, include_timings=True)
    assert "timings" not in bare.stats
    assert "timings" in timed.stats
    assert set(timed.stats["timings"]) <= set(STAGES)
    # timings must not perturb the run itself
    assert {k: v for k, v in timed.stats.items() if k != "timings"} == bare.stats


def test_stage_outcomes_follow_declared_order():
    g = generate_family("random_gnp", {"n": 16, "p": 0.5}, seed=3)
    res = run_pipeline(g, seed=9)
    stages = [s.stage for s in res.stage_outcomes]
    assert stages == list(STAGES)[: len(stages)]
    if res.failed_stage:
        assert stages[-1] == res.failed_stage
        assert not res.stage_outcomes[-1].ok
        assert all(s.ok for s in res.stage_outcomes[:-1])


def test_max_rounds_forwarded_to_lemma_stage():
    g = generate_family("random_gnp", {"n": 16, "p": 0.5}, seed=3)
    res = run_pipeline(g, seed=9, max_rounds=5)
    assert res.state.resample_rounds <= 5
