"""Compare the compiled search kernel against the pure-Python twin.

Runs identical workloads through both backends, asserts they agree node for
node, and reports throughput.  Invoke from the repository root:

    python benchmarks/bench_search.py [--budget N]
"""

from __future__ import annotations

import argparse
import time

from nsdcolor.graphs import generate_family
from nsdcolor.solver import _kernel_inputs
from nsdcolor import _search_py

try:
    from nsdcolor import _search as _search_c
except ImportError:
    _search_c = None


WORKLOADS = [
    ("K5 total nsd k=6", ("complete", {"n": 5}), 6, True, True),
    ("K5 total nsd k=7", ("complete", {"n": 5}), 7, True, True),
    ("K6 total nsd k=7", ("complete", {"n": 6}), 7, True, True),
    ("gnp(12,.5,s3) total nsd k=8", ("random_gnp", {"n": 12, "p": 0.5}), 8, True, True),
    ("C9 edge nsd k=4", ("cycle", {"n": 9}), 4, True, False),
]


def run(backend, g, k, nsd, total_mode, budget):
    n, m, nbr, inc, eu, ev, order = _kernel_inputs(g, edge_mode=not total_mode)
    t0 = time.perf_counter()
    status, vcol, ecol, nodes = backend.search(
        n, m, nbr, inc, eu, ev, order, k, nsd, total_mode, budget
    )
    return status, vcol, ecol, nodes, time.perf_counter() - t0


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--budget", type=int, default=50_000_000)
    args = parser.parse_args()

    print(f"{'workload':34s} {'backend':8s} {'nodes':>12s} {'seconds':>9s} {'nodes/s':>12s}")
    for name, (kind, params), k, nsd, total in WORKLOADS:
        g = generate_family(kind, params, seed=3)
        rows = []
        py = run(_search_py, g, k, nsd, total, args.budget)
        rows.append(("python", py))
        if _search_c is not None:
            cc = run(_search_c, g, k, nsd, total, args.budget)
            rows.append(("c", cc))
            assert cc[:4] == py[:4], f"backend disagreement on {name}"
        for label, (status, _, _, nodes, dt) in rows:
            rate = nodes / dt if dt > 0 else float("inf")
            print(f"{name:34s} {label:8s} {nodes:12d} {dt:9.3f} {rate:12.0f}")
        if _search_c is not None:
            speedup = py[4] / max(cc[4], 1e-9)
            print(f"{'':34s} speedup  {speedup:28.1f}x")
    if _search_c is None:
        print("compiled backend unavailable; python numbers only")


if __name__ == "__main__":
    main()
