"""Command-line front end.

Subcommands: solve (exact sweep to CSV), construct (run the three-stage
pipeline), verify (re-check a certificate), lemma-stats (empirical balance
violation rates), families (list or emit generator families).

Every artifact embeds its manifest; identical manifests produce
byte-identical artifacts.  Exit codes: 0 success; 1 input or domain error;
2 usage error; 3 conjecture violation found; 4 budget exhausted or input too
large; 5 certificate verification failed; 10-17 construct failure at stage
prepare/lemma/step1/step2_select/step2_recolor/decompose/step3/certify.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from multiprocessing import Pool

from .graphs import (
    FAMILY_KINDS,
    Graph6ParseError,
    emit_graph6,
    generate_family,
    greedy_vertex_coloring,
    parse_graph6,
    read_graph6_file,
)
from .coloring import check_nsd, check_proper_total, from_certificate
from .lemma import chernoff_bound, check_lemma, derive_params, lll_condition, sample_colorings
from .manifest import RunManifest
from .pipeline import STAGES, run_pipeline
from .solver import sweep_graph

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_VIOLATION = 3
EXIT_BUDGET = 4
EXIT_VERIFY = 5
EXIT_STAGE_BASE = 10

_FAMILY_PARAMS = {
    "complete": ("n",),
    "cycle": ("n",),
    "path": ("n",),
    "complete_bipartite": ("a", "b"),
    "random_gnp": ("n", "p"),
    "random_regular": ("n", "d"),
}


def _resolve_seed(value) -> int:
    if value is not None:
        return value
    env = os.environ.get("NSD_SEED")
    return int(env) if env else 0


def _write_text(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="ascii", newline="\n") as fh:
            fh.write(text)


def _family_params(args) -> dict:
    wanted = _FAMILY_PARAMS[args.family]
    params = {}
    for key in wanted:
        value = getattr(args, key, None)
        if value is None:
            raise ValueError(f"family {args.family!r} needs --{key}")
        params[key] = value
    return params


def _family_desc(kind: str, params: dict) -> str:
    inner = ",".join(f"{k}={params[k]}" for k in sorted(params))
    return f"{kind}({inner})"


def _gather_inputs(args, seed: int):
    """(description, [graphs]) from --input or --family flags."""
    if getattr(args, "input", None):
        graphs = read_graph6_file(args.input)
        return f"file:{os.path.basename(args.input)}", graphs
    if getattr(args, "family", None):
        params = _family_params(args)
        count = getattr(args, "count", 1) or 1
        graphs = [generate_family(args.family, params, seed + i) for i in range(count)]
        desc = _family_desc(args.family, params)
        if count > 1:
            desc += f"x{count}"
        return desc, graphs
    raise ValueError("provide --input FILE or --family KIND with its parameters")


def _add_common(sub, with_out=True):
    sub.add_argument("--seed", type=int, default=None,
                     help="master seed (default: NSD_SEED env var, else 0)")
    sub.add_argument("--timestamp", default="unset",
                     help="timestamp string recorded in the manifest verbatim")
    if with_out:
        sub.add_argument("--out", default="-", help="output path ('-' = stdout)")


def _add_family_flags(sub):
    sub.add_argument("--family", choices=FAMILY_KINDS, help="generator family")
    sub.add_argument("--n", type=int, help="vertex count (family parameter)")
    sub.add_argument("--a", type=int, help="first side size (complete_bipartite)")
    sub.add_argument("--b", type=int, help="second side size (complete_bipartite)")
    sub.add_argument("--p", type=float, help="edge probability (random_gnp)")
    sub.add_argument("--d", type=int, help="degree (random_regular)")


# ---------------------------------------------------------------------------
# solve
# ---------------------------------------------------------------------------


def _sweep_task(task):
    g6, budget, max_n = task
    row = sweep_graph(parse_graph6(g6), budget=budget, max_n=max_n)
    return (row.graph6, row.n, row.delta, row.chi_total, row.chi_sigma_total, row.status)


def cmd_solve(args) -> int:
    seed = _resolve_seed(args.seed)
    desc, graphs = _gather_inputs(args, seed)
    manifest = RunManifest.build(
        "solve", desc, seed, timestamp=args.timestamp,
        budget=args.budget, max_n=args.max_n, jobs=args.jobs,
    )
    tasks = [(emit_graph6(g), args.budget, args.max_n) for g in graphs]
    if args.jobs > 1 and len(tasks) > 1:
        with Pool(args.jobs) as pool:
            rows = pool.map(_sweep_task, tasks)
    else:
        rows = [_sweep_task(t) for t in tasks]

    lines = [manifest.line(), "graph6,n,delta,chi_total,chi_sigma_total,status"]
    lines += [",".join(str(c) for c in row) for row in rows]
    _write_text(args.out, "\n".join(lines) + "\n")

    statuses = {row[5] for row in rows}
    if "violation" in statuses:
        return EXIT_VIOLATION
    if "budget_exhausted" in statuses or "too_large" in statuses:
        return EXIT_BUDGET
    return EXIT_OK


# ---------------------------------------------------------------------------
# construct
# ---------------------------------------------------------------------------


def cmd_construct(args) -> int:
    seed = _resolve_seed(args.seed)
    if args.graph6:
        graph = parse_graph6(args.graph6)
        desc = f"graph6:{args.graph6}"
    else:
        if not args.family:
            raise ValueError("provide --graph6 STRING or --family KIND")
        params = _family_params(args)
        graph = generate_family(args.family, params, seed)
        desc = _family_desc(args.family, params)
    manifest = RunManifest.build(
        "construct", desc, seed, timestamp=args.timestamp,
        max_rounds=args.max_rounds, assert_floor=args.assert_floor,
        timings=args.timings or None,
    )
    result = run_pipeline(
        graph, seed, max_rounds=args.max_rounds,
        assert_floor=args.assert_floor, include_timings=args.timings,
    )
    payload = {
        "manifest": manifest.to_json_dict(),
        "certificate": result.certificate,
        "stats": result.stats,
    }
    _write_text(args.out, json.dumps(payload, sort_keys=True, indent=2) + "\n")
    if args.out_stats:
        _write_text(args.out_stats, json.dumps(
            {"manifest": manifest.to_json_dict(), "stats": result.stats},
            sort_keys=True, indent=2) + "\n")
    if result.ok:
        return EXIT_OK
    return EXIT_STAGE_BASE + STAGES.index(result.failed_stage)


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------


def cmd_verify(args) -> int:
    with open(args.certificate, "r", encoding="ascii") as fh:
        doc = json.load(fh)
    cert = doc.get("certificate", doc)
    if cert is None or not isinstance(cert, dict) or "edge_colors" not in cert:
        raise ValueError("no certificate found in the document")
    g6 = args.graph6 or cert.get("graph6")
    if not g6:
        raise ValueError("graph unknown: pass --graph6 or use a certificate embedding it")
    graph = parse_graph6(g6)
    tc = from_certificate(cert)
    bad = check_proper_total(tc, graph)
    ties = [] if bad else check_nsd(tc, graph)
    violations = [{"kind": v.kind, "witnesses": v.witnesses} for v in bad + ties]
    colors = list(tc.vertex_color.values()) + list(tc.edge_color.values())
    delta = graph.max_degree()
    bound = delta + 50.0 * delta ** (5 / 6) * math.log(delta) ** (1 / 6) if delta >= 3 else None
    seed = _resolve_seed(args.seed)
    manifest = RunManifest.build(
        "verify", f"certificate:{os.path.basename(args.certificate)}", seed,
        timestamp=args.timestamp,
    )
    payload = {
        "manifest": manifest.to_json_dict(),
        "pass": not violations,
        "violations": violations,
        "max_color": max(colors) if colors else 0,
        "declared_k": tc.k,
        "bound": bound,
        "n": graph.n,
        "m": graph.m,
    }
    _write_text(args.out, json.dumps(payload, sort_keys=True, indent=2) + "\n")
    return EXIT_OK if not violations else EXIT_VERIFY


# ---------------------------------------------------------------------------
# lemma-stats
# ---------------------------------------------------------------------------


def cmd_lemma_stats(args) -> int:
    seed = _resolve_seed(args.seed)
    if not args.family:
        raise ValueError("lemma-stats needs --family KIND with its parameters")
    params_f = _family_params(args)
    graph = generate_family(args.family, params_f, seed)
    delta = graph.max_degree()
    scale = args.scale if args.scale is not None else max(3, delta)
    if scale < 3:
        raise ValueError(f"degree scale {scale} below domain minimum 3")
    if delta > scale:
        raise ValueError(f"graph degree {delta} exceeds requested scale {scale}")
    params = derive_params(scale)
    gcol = greedy_vertex_coloring(graph)

    trials = args.trials
    violated = {1: 0, 2: 0, 3: 0, 4: 0}
    entries = {1: 0, 2: 0, 3: 0, 4: 0}
    for i in range(trials):
        lc = sample_colorings(graph, params, seed + i)
        report = check_lemma(graph, lc, params, gcol, strict=False)
        seen = set()
        for v in report.violations:
            entries[v.prop] += 1
            seen.add(v.prop)
        for prop in seen:
            violated[prop] += 1

    refs = {
        1: chernoff_bound(delta, 1.0 / params.c_v,
                          min(params.dev_vertex, delta / params.c_v)) if delta else "",
        2: chernoff_bound(delta, 1.0 / params.c_e,
                          min(params.dev_edge, delta / params.c_e)) if delta else "",
        3: "",
        4: "",
    }
    lll_ok = lll_condition(scale ** -2.5, 3 + 4 * scale * scale)
    manifest = RunManifest.build(
        "lemma-stats", _family_desc(args.family, params_f), seed,
        timestamp=args.timestamp, scale=scale, trials=trials,
    )
    lines = [manifest.line(),
             "property,trials,trials_violated,rate,mean_entries,chernoff_ref,lll_ok"]
    for prop in (1, 2, 3, 4):
        rate = violated[prop] / trials if trials else 0.0
        mean = entries[prop] / trials if trials else 0.0
        ref = refs[prop]
        ref_s = f"{ref:.6g}" if ref != "" else ""
        lines.append(
            f"{prop},{trials},{violated[prop]},{rate:.6f},{mean:.6f},{ref_s},{str(lll_ok).lower()}"
        )
    _write_text(args.out, "\n".join(lines) + "\n")
    return EXIT_OK


# ---------------------------------------------------------------------------
# families
# ---------------------------------------------------------------------------


def cmd_families(args) -> int:
    seed = _resolve_seed(args.seed)
    if not args.family:
        lines = [f"{kind}: --" + " --".join(_FAMILY_PARAMS[kind]) for kind in FAMILY_KINDS]
        _write_text(args.out, "\n".join(lines) + "\n")
        return EXIT_OK
    params = _family_params(args)
    count = args.count or 1
    manifest = RunManifest.build(
        "families", _family_desc(args.family, params), seed,
        timestamp=args.timestamp, count=count,
    )
    lines = [manifest.line()]
    for i in range(count):
        lines.append(emit_graph6(generate_family(args.family, params, seed + i)))
    _write_text(args.out, "\n".join(lines) + "\n")
    return EXIT_OK


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nsdcolor",
        description="Neighbor-sum-distinguishing total coloring toolkit",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    s = subs.add_parser("solve", help="exact chromatic sweep over graphs, CSV out")
    s.add_argument("--input", help="graph6 file, one graph per line")
    _add_family_flags(s)
    s.add_argument("--count", type=int, default=1, help="graphs to generate from the family")
    s.add_argument("--budget", type=int, default=200_000_000,
                   help="search-node budget per palette level")
    s.add_argument("--max-n", type=int, default=16, help="skip graphs larger than this")
    s.add_argument("--jobs", type=int, default=1, help="parallel workers across graphs")
    _add_common(s)
    s.set_defaults(func=cmd_solve)

    c = subs.add_parser("construct", help="run the construction pipeline")
    c.add_argument("--graph6", help="input graph as a graph6 string")
    _add_family_flags(c)
    c.add_argument("--max-rounds", type=int, default=None,
                   help="balance resampling round cap (default 10^4 * n)")
    c.add_argument("--assert-floor", type=int, default=None,
                   help="enforce asymptotic bounds at or above this degree scale")
    c.add_argument("--timings", action="store_true",
                   help="include per-stage wall times in stats (non-reproducible)")
    c.add_argument("--out-stats", default=None, help="also write stats alone to this path")
    _add_common(c)
    c.set_defaults(func=cmd_construct)

    v = subs.add_parser("verify", help="re-check a coloring certificate")
    v.add_argument("--certificate", required=True, help="certificate JSON path")
    v.add_argument("--graph6", help="graph override (default: embedded in certificate)")
    _add_common(v)
    v.set_defaults(func=cmd_verify)

    l = subs.add_parser("lemma-stats", help="empirical balance-violation rates, CSV out")
    _add_family_flags(l)
    l.add_argument("--scale", type=int, default=None,
                   help="degree scale D (default: max(3, graph degree))")
    l.add_argument("--trials", type=int, default=100, help="coloring draws")
    _add_common(l)
    l.set_defaults(func=cmd_lemma_stats)

    f = subs.add_parser("families", help="list family kinds or emit graphs")
    _add_family_flags(f)
    f.add_argument("--count", type=int, default=1, help="graphs to emit (seeds seed..seed+count-1)")
    _add_common(f)
    f.set_defaults(func=cmd_families)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError, Graph6ParseError, json.JSONDecodeError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
