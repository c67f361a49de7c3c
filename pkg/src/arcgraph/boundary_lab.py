"""Finite shadows of boundary points: orbits of pseudo-Anosov words.

The orbit ``b, f b, f^2 b, ...`` of an oriented arc under a growing word
stands in for a leaf of the attracting lamination that starts at the
puncture, and the truncated unicorn paths ``P(a, f^n b)`` stand in for the
infinite unicorn path.  The experiments here record the finite symptoms of
convergence (growing distances, growing common prefixes, Gromov products
that increase along the orbit) and of divergence between two different
limits (cross-orbit products that stay bounded).
"""

from __future__ import annotations

import csv
import io
import json
import math
import random
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Sequence

from .diagram import intersection_number
from .errors import LimitsCoincide, NotGrowing, SeedTooLarge, Unrealizable
from .graph import (
    ARCS,
    UPPER_BOUND,
    Metric,
    SubgraphMetric,
    TorusCoordsMetric,
    cached_subgraph,
    estimate_slimness,
    gromov_product,
    gromov_value,
    sample_ball,
)
from .surface import MappingClassWord, OrientedArc, apply_mapping_class, transport_arc
from .torus import classify_coords, is_standard_torus, word_matrix
from .triangulation import Triangulation
from .unicorn import orbit, truncations, unicorn_path

__all__ = [
    "ConvergenceReport",
    "DivergenceReport",
    "EquivarianceReport",
    "PAIteration",
    "check_equivariance",
    "default_metric",
    "estimate_slimness",
    "gromov_gap_experiment",
    "pa_iteration",
    "run_convergence",
    "run_divergence",
]


def burn_in(N: int) -> int:
    return math.ceil(N / 4)


def _norm(x: Sequence[int]) -> int:
    return max(abs(v) for v in x)


def _normalized(x: Sequence[int]) -> tuple[float, ...]:
    m = _norm(x)
    return tuple(max(v, 0) / m for v in x)


def _gap(u: Sequence[float], v: Sequence[float]) -> float:
    return max(abs(s - t) for s, t in zip(u, v))


@dataclass(frozen=True)
class PAIteration:
    """An orbit ``f^n b`` for ``n <= N`` with its Perron-Frobenius estimates."""

    word: MappingClassWord
    b: OrientedArc
    horizon: int
    orbit: tuple[OrientedArc, ...]
    norms: tuple[int, ...]
    growth: float
    limit: tuple[float, ...]

    def ratios(self) -> list[float]:
        return [self.norms[n] / self.norms[n - 1] for n in range(1, len(self.norms))]


def pa_iteration(T: Triangulation, f: MappingClassWord, b: OrientedArc, N: int) -> PAIteration:
    """Iterate ``f`` on ``b``; raise :class:`NotGrowing` unless the norm grows."""
    if N < 1:
        raise ValueError("horizon must be at least 1")
    orb = tuple(orbit(T, b, f, N))
    norms = tuple(_norm(o.coords) for o in orb)
    growth = norms[-1] / norms[-2]
    if growth <= 1 + 1e-9:
        raise NotGrowing(f"norm ratio {growth:.6g} at n = {N}: the word is not acting as a pseudo-Anosov")
    return PAIteration(f, b, N, orb, norms, growth, _normalized(orb[-1].coords))


def _torus_projection(x: Sequence[int]) -> tuple[float, float]:
    _, (p, q) = classify_coords(x)
    m = max(abs(p), abs(q))
    return (p / m, q / m)


def torus_eigenvector(m) -> tuple[float, float]:
    """Expanding eigenvector of a hyperbolic 2x2 matrix, normalised to max-norm 1."""
    (a, b), (c, d) = m
    tr, det = a + d, a * d - b * c
    disc = tr * tr - 4 * det
    if disc <= 0:
        raise NotGrowing(f"matrix {m} is not hyperbolic")
    lam = (tr + math.copysign(math.sqrt(disc), tr)) / 2
    v = (b, lam - a) if b != 0 else (lam - d, c)
    s = max(abs(v[0]), abs(v[1]))
    v = (v[0] / s, v[1] / s)
    if v[1] < 0 or (v[1] == 0 and v[0] < 0):
        v = (-v[0], -v[1])
    return v


def default_metric(T: Triangulation, mode: str = ARCS, bound: int = 12) -> Metric:
    if is_standard_torus(T):
        return TorusCoordsMetric(mode)
    return SubgraphMetric(cached_subgraph(T, bound, mode))


def _safe_distance(metric: Metric, x, y) -> tuple[int | None, str]:
    try:
        d, cert = metric.distance(x, y)
    except (KeyError, SeedTooLarge, Unrealizable):
        return None, UPPER_BOUND
    return d, cert


def _product(metric: Metric, a, x, y) -> Fraction | None:
    vals = [_safe_distance(metric, *p) for p in ((a, x), (a, y), (x, y))]
    if any(v is None or c == UPPER_BOUND for v, c in vals):
        return None
    return gromov_value(vals[0][0], vals[1][0], vals[2][0])


def _products(metric: Metric, a, xs: Sequence, ys: Sequence) -> list[list[Fraction | None]]:
    return [[_product(metric, a, x, y) for y in ys] for x in xs]


# -- convergence -------------------------------------------------------------

@dataclass(frozen=True)
class ConvergenceRow:
    n: int
    distance: int | None
    certification: str
    path_len: int
    prefix_len: int
    proj_gap: float
    orbit_gap: float
    norm: int


@dataclass
class ConvergenceReport:
    config: dict
    growth: float
    limit: tuple[float, ...]
    reference: tuple[float, ...] | None
    rows: list[ConvergenceRow]
    products: list[list[Fraction | None]]
    tail_minima: list[Fraction | None]
    flags: dict[str, bool] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.flags.values())

    def to_json(self) -> dict:
        return {
            "config": self.config,
            "growth": self.growth,
            "limit": list(self.limit),
            "reference": list(self.reference) if self.reference else None,
            "rows": [asdict(r) for r in self.rows],
            "products": [[None if v is None else float(v) for v in row] for row in self.products],
            "tailMinima": [None if v is None else float(v) for v in self.tail_minima],
            "flags": self.flags,
            "pass": self.passed,
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "distance", "pathLen", "prefixLen", "projGap"])
        for r in self.rows:
            w.writerow([r.n, "" if r.distance is None else r.distance, r.path_len, r.prefix_len, repr(r.proj_gap)])
        return buf.getvalue()

    def to_svg(self, width: int = 640, height: int = 360) -> str:
        series = {
            "distance": [r.distance for r in self.rows],
            "path length": [r.path_len for r in self.rows],
            "prefix length": [r.prefix_len for r in self.rows],
            "-log10 gap": [None if r.proj_gap <= 0 else -math.log10(r.proj_gap) for r in self.rows],
        }
        return line_chart_svg(series, width, height, title="convergence")


def _nondecreasing(xs: Sequence) -> bool:
    xs = [x for x in xs if x is not None]
    return all(u <= v for u, v in zip(xs, xs[1:]))


def run_convergence(
    T: Triangulation,
    a: OrientedArc,
    b: OrientedArc,
    f: MappingClassWord,
    N: int,
    metric: Metric | None = None,
    r: int = 6,
    tol: float = 1e-6,
    reference: Sequence[float] | None = None,
) -> ConvergenceReport:
    """Convergence diagnostics for ``P(a, f^n b)``, ``n = 0 .. N``.

    On the standard once-punctured torus the projective gap compares the
    slope vector of ``f^n b`` with the expanding eigenvector of the matrix
    of ``f``; elsewhere it compares normalised coordinates with ``reference``
    when one is given, and with the orbit's own limit estimate otherwise.
    """
    if N < 3:
        raise ValueError("horizon must be at least 3")
    it = pa_iteration(T, f, b, N)
    metric = metric or default_metric(T)
    torus = is_standard_torus(T)
    if reference is None and torus:
        reference = torus_eigenvector(word_matrix(T, f))
    independent = reference is not None
    ref = tuple(reference) if independent else it.limit
    project = _torus_projection if torus else _normalized

    steps = truncations(T, a, b, f, N, it.orbit)
    rows = []
    for st in steps:
        x = st.b_n.coords
        d, cert = _safe_distance(metric, a.coords, x)
        rows.append(
            ConvergenceRow(
                n=st.n,
                distance=d,
                certification=cert,
                path_len=len(st.path),
                prefix_len=st.prefix,
                proj_gap=_gap(project(x), ref),
                orbit_gap=_gap(_normalized(x), it.limit),
                norm=_norm(x),
            )
        )
    pts = [o.coords for o in it.orbit]
    prods = _products(metric, a.coords, pts, pts)
    tails = []
    for n0 in range(N):
        vals = [prods[m][n] for m in range(n0, N + 1) for n in range(m + 1, N + 1)]
        tails.append(None if any(v is None for v in vals) else min(vals))

    n0 = burn_in(N)
    dists = [row.distance for row in rows]
    known = [v for v in dists if v is not None]
    lens = [row.path_len for row in rows]
    pre = [row.prefix_len for row in rows]
    gaps = [row.proj_gap for row in rows]
    flags = {
        "growing": it.growth > 1,
        "distanceNondecreasing": _nondecreasing(dists[n0:]),
        "distanceExceeds": bool(known) and max(known) > r,
        "pathLengthsIncreasing": all(u < v for u, v in zip(lens[2:], lens[3:])),
        "prefixGrowing": _nondecreasing(pre[n0:]) and pre[-1] > pre[n0],
        "tailProductsNondecreasing": None not in tails and _nondecreasing(tails),
        "projectiveGapDecreasing": all(u >= v for u, v in zip(gaps[n0:-1], gaps[n0 + 1 : -1])),
    }
    if independent:
        flags["projectiveGapSmall"] = gaps[-1] < tol
    config = {
        "a": list(a.coords),
        "aEnd": a.end,
        "b": list(b.coords),
        "bEnd": b.end,
        "f": f.name or f.to_json(),
        "N": N,
        "r": r,
        "tol": tol,
        "burnIn": n0,
    }
    return ConvergenceReport(config, it.growth, it.limit, tuple(ref) if independent else None, rows, prods, tails, flags)


# -- divergence --------------------------------------------------------------

@dataclass
class DivergenceReport:
    config: dict
    limit_gap: float
    cross: list[list[Fraction | None]]
    running_sup: list[Fraction | None]
    sup: Fraction | None
    witness: tuple[int, int] | None
    pivot: tuple | None
    same_f: Fraction | None
    same_g: Fraction | None
    flags: dict[str, bool] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.flags.values())

    def to_json(self) -> dict:
        fl = lambda v: None if v is None else float(v)  # noqa: E731
        return {
            "config": self.config,
            "limitGap": self.limit_gap,
            "cross": [[fl(v) for v in row] for row in self.cross],
            "runningSup": [fl(v) for v in self.running_sup],
            "sup": fl(self.sup),
            "witness": list(self.witness) if self.witness else None,
            "pivot": list(self.pivot) if self.pivot else None,
            "sameOrbitMax": {"f": fl(self.same_f), "g": fl(self.same_g)},
            "flags": self.flags,
            "pass": self.passed,
        }


def _same_orbit_max(prods) -> Fraction | None:
    n = len(prods)
    vals = [prods[m][k] for m in range(n) for k in range(m + 1, n)]
    if not vals or any(v is None for v in vals):
        return None
    return max(vals)


def run_divergence(
    T: Triangulation,
    a: OrientedArc,
    f: MappingClassWord,
    g: MappingClassWord,
    b: OrientedArc,
    N: int,
    metric: Metric | None = None,
    tol: float = 1e-3,
) -> DivergenceReport:
    """Cross-orbit Gromov products ``(f^m b . g^n b)_a`` for ``m, n <= N``."""
    if f.steps == g.steps:
        raise LimitsCoincide("f and g are the same word")
    itf, itg = pa_iteration(T, f, b, N), pa_iteration(T, g, b, N)
    limit_gap = _gap(itf.limit, itg.limit)
    if limit_gap <= tol:
        raise LimitsCoincide(f"projective limits differ by {limit_gap:.3g} <= {tol}")
    metric = metric or default_metric(T)
    xs = [o.coords for o in itf.orbit]
    ys = [o.coords for o in itg.orbit]
    cross = _products(metric, a.coords, xs, ys)
    running = []
    best, witness = None, None
    for k in range(N + 1):
        cells = [(m, k) for m in range(k + 1)] + [(k, n) for n in range(k)]
        for m, n in sorted(cells):
            v = cross[m][n]
            if v is None:
                continue
            if best is None or v > best or (v == best and (m, n) < witness):
                best, witness = v, (m, n)
        running.append(best)
    pivot = None
    if witness is not None:
        geo = metric.geodesic(xs[witness[0]], ys[witness[1]])
        pivot = min(geo, key=lambda v: (metric.d(a.coords, v), v))
    same_f = _same_orbit_max(_products(metric, a.coords, xs, xs))
    same_g = _same_orbit_max(_products(metric, a.coords, ys, ys))
    last = running[N - N // 3 :]
    flags = {
        "certified": all(v is not None for row in cross for v in row),
        "bounded": None not in last and len(set(last)) == 1,
        "contrast": None not in (best, same_f, same_g) and best < same_f and best < same_g,
    }
    config = {"a": list(a.coords), "aEnd": a.end, "b": list(b.coords), "bEnd": b.end,
              "f": f.name or f.to_json(), "g": g.name or g.to_json(), "N": N, "tol": tol}
    return DivergenceReport(config, limit_gap, cross, running, best, witness, pivot, same_f, same_g, flags)


# -- equivariance ------------------------------------------------------------

@dataclass
class EquivarianceReport:
    word: str
    pairs_checked: int = 0
    distances_checked: int = 0
    paths_checked: int = 0
    failures: list[dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {
            "word": self.word,
            "pairs": self.pairs_checked,
            "distances": self.distances_checked,
            "paths": self.paths_checked,
            "failures": self.failures,
            "pass": self.passed,
        }


def check_equivariance(
    T: Triangulation,
    w: MappingClassWord,
    pairs: Sequence[tuple[Sequence[int], Sequence[int]]] = (),
    paths: Sequence[tuple[OrientedArc, OrientedArc]] = (),
    metric: Metric | None = None,
) -> EquivarianceReport:
    """Check that ``w`` preserves ``i``, certified ``d`` and unicorn paths."""
    rep = EquivarianceReport(w.name or json.dumps(w.to_json()))
    winv = w.inverse()
    for x, y in pairs:
        x, y = tuple(x), tuple(y)
        wx, wy = apply_mapping_class(T, w, x), apply_mapping_class(T, w, y)
        rep.pairs_checked += 1
        i0, i1 = intersection_number(T, x, y), intersection_number(T, wx, wy)
        if i0 != i1:
            rep.failures.append({"kind": "intersection", "pair": [list(x), list(y)], "before": i0, "after": i1})
        if metric is not None:
            d0, c0 = _safe_distance(metric, x, y)
            d1, c1 = _safe_distance(metric, wx, wy)
            if UPPER_BOUND not in (c0, c1):
                rep.distances_checked += 1
                if d0 != d1:
                    rep.failures.append({"kind": "distance", "pair": [list(x), list(y)], "before": d0, "after": d1})
    for a, b in paths:
        rep.paths_checked += 1
        P = unicorn_path(T, a, b)
        Q = unicorn_path(T, transport_arc(T, w, a), transport_arc(T, w, b))
        image = [apply_mapping_class(T, w, v) for v in P.vertices]
        ok = image == Q.vertices
        if ok:
            # endpoint choices are carried along as well
            ok = all(transport_arc(T, w, u.a_end(T)) == v.a_end(T) for u, v in zip(P.arcs, Q.arcs))
        if ok:
            back = unicorn_path(T, transport_arc(T, winv, transport_arc(T, w, a)), transport_arc(T, winv, transport_arc(T, w, b)))
            ok = back.vertices == P.vertices
        if not ok:
            rep.failures.append({"kind": "path", "a": [list(a.coords), a.end], "b": [list(b.coords), b.end],
                                 "image": [list(v) for v in image], "path": [list(v) for v in Q.vertices]})
    return rep


# -- hyperbolicity -----------------------------------------------------------

@dataclass
class GromovGapReport:
    centre: tuple
    radius: int
    delta: int
    max_gap: Fraction
    triples: int
    triangles: int
    violations: list[dict]

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {
            "centre": list(self.centre),
            "radius": self.radius,
            "delta": self.delta,
            "maxGap": float(self.max_gap),
            "triples": self.triples,
            "triangles": self.triangles,
            "violations": self.violations,
            "pass": self.passed,
        }


def gromov_gap_experiment(
    metric: Metric,
    rng: random.Random,
    centre,
    radius: int = 5,
    points: int = 60,
    triangles: int = 500,
    triples: int = 500,
    spread: int = 3,
) -> GromovGapReport:
    """Measure slimness on a sampled ball, then test the Gromov product gap on it."""
    ball = sample_ball(rng, centre, radius, points, spread)
    tri = [tuple(rng.choice(ball) for _ in range(3)) for _ in range(triangles)]
    delta = estimate_slimness(metric, tri)
    worst = Fraction(0)
    bad = []
    for _ in range(triples):
        o, x, y = (rng.choice(ball) for _ in range(3))
        rep = gromov_product(metric, o, x, y)
        worst = max(worst, rep.gap)
        if rep.gap > 2 * delta:
            bad.append(rep.to_json())
    return GromovGapReport(tuple(centre), radius, delta, worst, triples, triangles, bad)


# -- plotting ----------------------------------------------------------------

_COLOURS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"]


def line_chart_svg(series: dict[str, Sequence[float | None]], width: int = 640, height: int = 360, title: str = "") -> str:
    """A static SVG line chart, one polyline per series against its index."""
    pad = 40
    vals = [v for s in series.values() for v in s if v is not None]
    n = max((len(s) for s in series.values()), default=1)
    lo, hi = (min(vals), max(vals)) if vals else (0.0, 1.0)
    if hi == lo:
        hi = lo + 1

    def px(i, v):
        x = pad + (width - 2 * pad) * (i / max(n - 1, 1))
        y = height - pad - (height - 2 * pad) * ((v - lo) / (hi - lo))
        return f"{x:.1f},{y:.1f}"

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">']
    out.append(f'<rect width="{width}" height="{height}" fill="white"/>')
    out.append(f'<text x="{pad}" y="20" font-family="sans-serif" font-size="14">{title}</text>')
    out.append(f'<line x1="{pad}" y1="{height - pad}" x2="{width - pad}" y2="{height - pad}" stroke="black"/>')
    out.append(f'<line x1="{pad}" y1="{pad}" x2="{pad}" y2="{height - pad}" stroke="black"/>')
    out.append(f'<text x="4" y="{pad + 4}" font-family="sans-serif" font-size="10">{hi:.3g}</text>')
    out.append(f'<text x="4" y="{height - pad}" font-family="sans-serif" font-size="10">{lo:.3g}</text>')
    for k, (name, s) in enumerate(series.items()):
        colour = _COLOURS[k % len(_COLOURS)]
        pts = " ".join(px(i, v) for i, v in enumerate(s) if v is not None)
        out.append(f'<polyline fill="none" stroke="{colour}" stroke-width="2" points="{pts}"/>')
        out.append(f'<text x="{width - pad - 110}" y="{pad + 14 * k}" font-family="sans-serif" font-size="11" fill="{colour}">{name}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
