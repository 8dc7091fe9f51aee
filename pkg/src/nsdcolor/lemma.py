"""Balanced-coloring engine: derived palette constants, the four balance
properties, Moser-Tardos style resampling, and the probabilistic reference
bounds (binomial tail bound, local-lemma condition).

Everything is parameterized by a degree scale D >= 3.  The derived constants
are ceilings of real expressions in D and ln D; the degree thresholds and
allowed deviations stay real-valued and are never rounded.  Checks are pure
functions of their inputs; randomness only enters through explicit seeds.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .graphs import Graph, _norm_edge


class PreconditionError(ValueError):
    """An applicability precondition failed (strict mode only)."""


@dataclass(frozen=True)
class ConstructionParams:
    """All palette constants derived from the degree scale D.

    c_v / c_e: palette sizes for the vertex and edge balance colorings.
    c_big: the dominant stretch factor; with ceil(sqrt(D)) it scales the
    tentative-color classes.  d0: real degree threshold for balance
    properties; 3*d0 gates the interval-count property; cm = ceil(47*d0)
    is the reserved low range for the final matching step.  Offsets
    0..p_split make up the low offset pool, the rest of 0..palette_width-1
    the high pool.
    """

    D: int
    c_v: int
    c_e: int
    c_big: int
    d0: float
    cm: int
    sqrt_ceil: int
    palette_width: int
    p_split: int

    @property
    def stretch(self) -> int:
        """c_big + ceil(sqrt(D)): multiplier turning class sums into colors."""
        return self.c_big + self.sqrt_ceil

    def offsets_all(self) -> range:
        return range(self.palette_width)

    def offsets_low(self) -> range:
        return range(self.p_split + 1)

    def offsets_high(self) -> range:
        return range(self.p_split + 1, self.palette_width)

    # real-valued thresholds / allowed deviations (never rounded)
    @property
    def balance_threshold(self) -> float:  # degrees >= this get properties 1-2
        return self.d0

    @property
    def dev_vertex(self) -> float:  # allowed deviation in property 1
        D = self.D
        return 3.0 * D ** (5 / 12) * math.log(D) ** (7 / 12)

    @property
    def dev_edge(self) -> float:  # allowed deviation in property 2
        D = self.D
        return 3.0 * D ** (1 / 3) * math.log(D) ** (2 / 3)

    def class_bound(self, d: int) -> float:  # property 3, split at D^(2/3)
        D = self.D
        if d < D ** (2 / 3):
            return 2.0 * D ** (1 / 3) * math.log(D) ** (1 / 3)
        return D ** (2 / 3) * math.log(D) ** (1 / 3) + 3.0 * D ** (1 / 3) * math.log(D) ** (2 / 3)

    @property
    def interval_threshold(self) -> float:  # degrees >= this get property 4
        return 3.0 * self.d0

    def interval_bound(self, d: int) -> float:  # property 4 allowance
        D = self.D
        return d / (D ** (1 / 6) * math.log(D) ** (-1 / 6)) + 3.0 * D ** (5 / 12) * math.log(D) ** (7 / 12)

    def interval_width(self, d: int) -> float:  # property 4 bucket width
        return (d / 2) * self.D ** (2 / 3) * math.log(self.D) ** (1 / 3)


def derive_params(D: int) -> ConstructionParams:
    """All constants from the degree scale; domain D >= 3."""
    if D < 3:
        raise ValueError(f"degree scale D={D} below domain minimum 3")
    lnD = math.log(D)
    c_v = math.ceil(D ** (1 / 6) * lnD ** (-1 / 6))
    c_e = math.ceil(D ** (1 / 3) * lnD ** (-1 / 3))
    c_big = math.ceil(D ** (2 / 3) * lnD ** (1 / 3))
    d0 = D ** (5 / 6) * lnD ** (1 / 6)
    cm = math.ceil(47.0 * d0)
    sqrt_ceil = math.ceil(math.sqrt(D))
    palette_width = c_big + sqrt_ceil
    p_split = c_big + math.ceil(math.sqrt(D) / 2)
    assert p_split <= palette_width - 1, "offset pools must partition the palette"
    return ConstructionParams(
        D=D, c_v=c_v, c_e=c_e, c_big=c_big, d0=d0, cm=cm,
        sqrt_ceil=sqrt_ceil, palette_width=palette_width, p_split=p_split,
    )


@dataclass
class LemmaColorings:
    """Auxiliary colorings: c1 on vertices out of [c_v], c2 on edges out of [c_e]."""

    c1: dict[int, int]
    c2: dict


def sample_colorings(h: Graph, params: ConstructionParams, seed: int) -> LemmaColorings:
    """Uniform iid draw; vertices in ascending order, then sorted edges."""
    if h.max_degree() > params.D:
        raise ValueError(f"graph degree {h.max_degree()} exceeds scale D={params.D}")
    rng = random.Random(seed)
    c1 = {v: rng.randint(1, params.c_v) for v in range(h.n)}
    c2 = {e: rng.randint(1, params.c_e) for e in h.edges}
    return LemmaColorings(c1, c2)


def compute_S_parts(d: int, c1_v: int, g_v: int, params: ConstructionParams) -> tuple[Fraction, Fraction]:
    """Reference value S and its residue part (S minus the stretch*d*c1 term).

    Exact rational arithmetic so downstream decompositions balance to zero.
    """
    if not 1 <= c1_v <= params.c_v:
        raise ValueError(f"c1 color {c1_v} outside [1..{params.c_v}]")
    b_v = Fraction(params.c_v * (params.c_v + 1), 2)
    b_e = Fraction(params.c_e * (params.c_e + 1), 2)
    stretch = params.stretch
    main = Fraction(stretch * d * c1_v)
    rest = (
        Fraction(g_v)
        + Fraction(d * params.cm)
        + stretch * (Fraction(d, params.c_v) * b_v + Fraction(d, params.c_e) * b_e)
    )
    return main + rest, rest


def compute_S(d: int, c1_v: int, g_v: int, params: ConstructionParams) -> Fraction:
    return compute_S_parts(d, c1_v, g_v, params)[0]


def interval_index(s, d: int, params: ConstructionParams) -> int:
    """Bucket index alpha >= 1 with s in ((alpha-1)*w, alpha*w], w the bucket width."""
    w = params.interval_width(d)
    s = float(s)
    if s <= 0:
        raise ValueError("bucket index defined for positive values only")
    alpha = math.ceil(s / w)
    # half-open on the left: exact multiples of w belong to the lower bucket,
    # which ceil already gives; guard the float edge just below a multiple
    if alpha >= 1 and s <= (alpha - 1) * w:
        alpha -= 1
    return max(alpha, 1)


@dataclass
class LemmaViolation:
    """One balance-property failure at a vertex.

    detail: the offending color (properties 1-2), class value (3), or bucket
    index (4).  observed/allowed: the count found vs the bound.
    """

    vertex: int
    prop: int
    detail: int
    observed: int
    allowed: float


@dataclass
class LemmaReport:
    violations: list[LemmaViolation] = field(default_factory=list)
    precondition_breaches: list[tuple[int, float, float]] = field(default_factory=list)

    def ok(self) -> bool:
        return not self.violations


def check_lemma(h: Graph, lc: LemmaColorings, params: ConstructionParams, g,
                strict: bool = True) -> LemmaReport:
    """Evaluate the four balance properties exactly; report all violations.

    g: proper vertex coloring (list or dict) used in the reference values S.
    strict=True raises when some S(v) exceeds D^2 (the applicability
    precondition); strict=False records those breaches in the report and
    evaluates everything anyway — at desk-scale D the precondition never
    holds, which is exactly why the record mode exists.
    """
    D = params.D
    if h.max_degree() > D:
        raise ValueError(f"graph degree {h.max_degree()} exceeds scale D={D}")
    missing = [v for v in range(h.n) if v not in lc.c1]
    if missing:
        raise ValueError(f"c1 missing vertex {missing[0]}")
    for e in h.edges:
        if e not in lc.c2:
            raise ValueError(f"c2 missing edge {e}")

    report = LemmaReport()
    s_cache: dict[int, Fraction] = {}
    d2 = Fraction(D) ** 2
    for v in range(h.n):
        s_v = compute_S(h.degree(v), lc.c1[v], g[v], params)
        s_cache[v] = s_v
        if s_v > d2:
            if strict:
                raise PreconditionError(
                    f"reference value S({v})={float(s_v):.6g} exceeds D^2={float(d2):.6g}"
                )
            report.precondition_breaches.append((v, float(s_v), float(d2)))

    for v in range(h.n):
        d = h.degree(v)
        nbrs = h.neighbors(v)
        if d >= params.balance_threshold:
            # property 1: c1 color classes among neighbors near d/c_v
            counts1 = [0] * (params.c_v + 1)
            for u in nbrs:
                counts1[lc.c1[u]] += 1
            target1 = d / params.c_v
            for color in range(1, params.c_v + 1):
                if abs(counts1[color] - target1) > params.dev_vertex:
                    report.violations.append(
                        LemmaViolation(v, 1, color, counts1[color], params.dev_vertex)
                    )
            # property 2: c2 color classes among incident edges near d/c_e
            counts2 = [0] * (params.c_e + 1)
            for u in nbrs:
                counts2[lc.c2[_norm_edge(u, v)]] += 1
            target2 = d / params.c_e
            for color in range(1, params.c_e + 1):
                if abs(counts2[color] - target2) > params.dev_edge:
                    report.violations.append(
                        LemmaViolation(v, 2, color, counts2[color], params.dev_edge)
                    )
        # property 3: incident edges per class value c1(u)+c1(v)+c2(uv)
        class_counts: dict[int, int] = {}
        for u in nbrs:
            cval = lc.c1[u] + lc.c1[v] + lc.c2[_norm_edge(u, v)]
            class_counts[cval] = class_counts.get(cval, 0) + 1
        bound3 = params.class_bound(d)
        for cval in sorted(class_counts):
            assert 3 <= cval <= 2 * params.c_v + params.c_e
            if class_counts[cval] > bound3:
                report.violations.append(
                    LemmaViolation(v, 3, cval, class_counts[cval], bound3)
                )
        # property 4: same-bucket neighbors of comparable degree
        if d >= params.interval_threshold:
            bound4 = params.interval_bound(d)
            for alpha, count in sorted(bucket_counts(h, v, params, s_cache).items()):
                if count > bound4:
                    report.violations.append(
                        LemmaViolation(v, 4, alpha, count, bound4)
                    )
    return report


def bucket_counts(h: Graph, v: int, params: ConstructionParams, s_values) -> dict[int, int]:
    """Neighbors of v with degree in [d/2, 2d], grouped by value bucket.

    s_values maps every vertex to its reference value; this is the raw count
    used by balance property 4, exposed separately because its degree gate
    (3*d0) is out of reach for small graphs.
    """
    d = h.degree(v)
    out: dict[int, int] = {}
    for u in h.neighbors(v):
        du = h.degree(u)
        if d / 2 <= du <= 2 * d:
            alpha = interval_index(s_values[u], d, params)
            out[alpha] = out.get(alpha, 0) + 1
    return out


@dataclass
class ResampleResult:
    colorings: LemmaColorings | None
    rounds: int
    last_report: LemmaReport
    ok: bool


def resample_until_valid(h: Graph, params: ConstructionParams, g, seed: int,
                         max_rounds: int | None = None, strict: bool = True) -> ResampleResult:
    """Draw colorings and locally resample until the balance report is clean.

    Each round picks the violated (vertex, property) with the least vertex
    index (then least property), redraws every c1 within distance one of that
    vertex and every incident c2, and rechecks.  Failure after max_rounds
    (default 10^4 * n) is a first-class outcome, not an exception.
    """
    if max_rounds is None:
        max_rounds = 10_000 * max(h.n, 1)
    rng = random.Random(seed)
    lc = sample_colorings(h, params, rng.randrange(2**63))
    rounds = 0
    report = check_lemma(h, lc, params, g, strict=strict)
    while not report.ok():
        if rounds >= max_rounds:
            return ResampleResult(None, rounds, report, False)
        worst = min(report.violations, key=lambda vi: (vi.vertex, vi.prop))
        v = worst.vertex
        lc.c1[v] = rng.randint(1, params.c_v)
        for u in sorted(h.neighbors(v)):
            lc.c1[u] = rng.randint(1, params.c_v)
            lc.c2[_norm_edge(u, v)] = rng.randint(1, params.c_e)
        rounds += 1
        report = check_lemma(h, lc, params, g, strict=strict)
    return ResampleResult(lc, rounds, report, True)


# ---------------------------------------------------------------------------
# probabilistic reference bounds
# ---------------------------------------------------------------------------


def chernoff_bound(n: int, p: float, t: float) -> float:
    """Binomial tail bound 2*exp(-t^2/(3np)), valid for 0 <= t <= np."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if not 0.0 < p <= 1.0:
        raise ValueError("p must lie in (0, 1]")
    if t < 0 or t > n * p:
        raise ValueError(f"deviation t={t} outside the valid range [0, np={n * p}]")
    return 2.0 * math.exp(-(t * t) / (3.0 * n * p))


def lll_condition(p: float, dep: int) -> bool:
    """Symmetric local-lemma test: e * p * (dep + 1) <= 1."""
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    if dep < 0:
        raise ValueError("dependency degree must be nonnegative")
    return math.e * p * (dep + 1) <= 1.0


def scan_lll_threshold(limit: int = 10**6) -> int | None:
    """Least D in [1, limit] where lll_condition(D^-5/2, 3+4D^2) turns true."""
    for D in range(1, limit + 1):
        if lll_condition(D ** -2.5, 3 + 4 * D * D):
            return D
    return None
