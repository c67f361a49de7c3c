"""Property suites: seeded batches of cases with a JSON report each.

Every case draws from its own ``random.Random`` seeded by the run seed and
the case index, so a case can be replayed alone and the two bounds suites
see the same pairs.  Cases can be fanned out to worker processes; results
are always reported in case order.
"""

from __future__ import annotations

import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

from .boundary_lab import check_equivariance, default_metric, gromov_gap_experiment, run_convergence, run_divergence
from .diagram import flip_intersections, intersection_number
from .errors import InputError, LemmaViolated, Uncertified
from .graph import (
    AC,
    ARCS,
    BOUNDS,
    FareyMetric,
    SubgraphMetric,
    TorusCoordsMetric,
    cached_subgraph,
    check_path_vs_geodesic,
    farey_distance,
    farey_neighbour,
    random_slope,
    random_walk,
)
from .surface import OrientedArc, Surface, apply_mapping_class
from .torus import classify_coords, is_standard_torus, normalize, punctured_torus, slope_coords, slope_intersection
from .unicorn import unicorn_path, verify_dyadic_lemma, verify_subpath_lemma

SUITES = (
    "bounds6-12",
    "bounds7-14",
    "subpath-lemma",
    "dyadic-lemma",
    "farey-crosscheck",
    "equivariance",
    "convergence",
    "divergence",
    "gromov-gap",
)

# per-suite defaults for the size knobs
_DEFAULTS = {
    "bounds6-12": {"pairs": 1000, "height": 100},
    "bounds7-14": {"pairs": 1000, "height": 100},
    "subpath-lemma": {"pairs": 500, "height": 20},
    "dyadic-lemma": {"pairs": 200, "height": 16},
    "farey-crosscheck": {"pairs": 500, "height": 30},
    "equivariance": {"pairs": 200, "height": 12},
    "convergence": {"horizon": 12},
    "divergence": {"horizon": 10},
    "gromov-gap": {"pairs": 500, "height": 5},
}


@dataclass
class SuiteConfig:
    seed: int = 0
    pairs: int | None = None
    height: int | None = None
    horizon: int | None = None
    bound: int = 12
    mode: str | None = None
    word: str | None = None
    surface: Surface | None = None
    workers: int = 1
    self_test: bool = False

    def resolved(self, name: str) -> "SuiteConfig":
        d = _DEFAULTS[name]
        return replace(
            self,
            pairs=self.pairs if self.pairs is not None else d.get("pairs"),
            height=self.height if self.height is not None else d.get("height"),
            horizon=self.horizon if self.horizon is not None else d.get("horizon"),
            surface=self.surface or punctured_torus(),
        )

    def to_json(self, name: str) -> dict:
        S = self.surface or punctured_torus()
        return {
            "suite": name,
            "seed": self.seed,
            "pairs": self.pairs,
            "height": self.height,
            "horizon": self.horizon,
            "bound": self.bound,
            "mode": self.mode,
            "word": self.word,
            "surface": S.name or "custom",
            "workers": self.workers,
            "selfTest": self.self_test,
        }


@dataclass
class SuiteReport:
    name: str
    config: dict
    cases: list = field(default_factory=list)
    violations: list = field(default_factory=list)
    stats: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {
            "suite": self.name,
            "config": self.config,
            "pass": self.passed,
            "violations": self.violations,
            "stats": self.stats,
            "cases": self.cases,
        }


def case_rng(seed: int, tag: str, i: int) -> random.Random:
    return random.Random(f"{seed}:{tag}:{i}")


def _map(fn: Callable, items: Sequence, workers: int) -> list:
    if workers > 1 and len(items) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, items, chunksize=max(1, len(items) // (4 * workers))))
    return [fn(x) for x in items]


def _random_arc(rng: random.Random, height: int) -> OrientedArc:
    return OrientedArc(slope_coords(*random_slope(rng, height)), rng.randint(0, 1))


def random_pair(seed: int, i: int, height: int) -> tuple[OrientedArc, OrientedArc]:
    """Case ``i``'s pair of distinct oriented arcs of height at most ``height``."""
    rng = case_rng(seed, "pairs", i)
    a = _random_arc(rng, height)
    b = _random_arc(rng, height)
    while b.coords == a.coords:
        b = _random_arc(rng, height)
    return a, b


# -- bounds ------------------------------------------------------------------

def _path_case(args) -> list[tuple[int, ...]]:
    seed, i, height = args
    a, b = random_pair(seed, i, height)
    return unicorn_path(punctured_torus().T, a, b).vertices


def unicorn_paths(cfg: SuiteConfig) -> list[list[tuple[int, ...]]]:
    """Vertex lists of ``P(a, b)`` for the configured random pairs."""
    return _map(_path_case, [(cfg.seed, i, cfg.height) for i in range(cfg.pairs)], cfg.workers)


def _planted_path(metric, vertex_bound: int) -> list[tuple[int, ...]]:
    """``[0/1, s, 1/0]`` with ``s`` farther than ``vertex_bound`` from both ends."""
    ends = (slope_coords(0, 1), slope_coords(1, 0))
    s = (1, 2)
    while True:
        x = slope_coords(*s)
        if min(metric.d(x, e) for e in ends) > vertex_bound:
            return [ends[0], x, ends[1]]
        s = farey_neighbour(s, 2)


def _bounds_suite(name: str, cfg: SuiteConfig, mode: str, paths=None) -> SuiteReport:
    if not is_standard_torus(cfg.surface.T):
        raise InputError(f"{name} runs on the once-punctured torus")
    metric = TorusCoordsMetric(mode)
    vb, hb = BOUNDS[mode]
    if cfg.self_test:
        vb, hb = vb - 1, hb - 2
    paths = list(paths) if paths is not None else unicorn_paths(cfg)
    if cfg.self_test:
        paths.append(_planted_path(metric, vb))
    rep = SuiteReport(name, cfg.to_json(name))
    worst_v = worst_h = 0
    longest = 0
    for i, vs in enumerate(paths):
        r = check_path_vs_geodesic(vs, metric, mode, (vb, hb))
        worst_v, worst_h = max(worst_v, r.max_vertex_dist), max(worst_h, r.hausdorff)
        longest = max(longest, len(vs) - 1)
        if not r.passed:
            rep.violations.append({"case": i, "path": [list(v) for v in vs], **r.to_json()})
    rep.stats = {
        "cases": len(paths),
        "vertexBound": vb,
        "hausdorffBound": hb,
        "maxVertexDist": worst_v,
        "maxHausdorff": worst_h,
        "longestPath": longest,
        "uncertified": 0,
        "certification": "FareyExact",
    }
    return rep


def _cross_case(args) -> dict:
    seed, i, height, bound = args
    T = punctured_torus().T
    sub = cached_subgraph(T, bound, AC)
    a, b = random_pair(seed, i, height)
    vs = unicorn_path(T, a, b).vertices
    exact = check_path_vs_geodesic(vs, TorusCoordsMetric(AC), AC)
    if not all(v in sub for v in vs):
        return {"case": i, "status": "outside"}
    try:
        got = check_path_vs_geodesic(vs, SubgraphMetric(sub), AC)
    except Uncertified:
        return {"case": i, "status": "uncertified"}
    same = (got.max_vertex_dist, got.hausdorff) == (exact.max_vertex_dist, exact.hausdorff)
    return {"case": i, "status": "agree" if same else "disagree", "exact": exact.to_json(), "subgraph": got.to_json()}


def suite_bounds_6_12(cfg: SuiteConfig, paths=None) -> SuiteReport:
    return _bounds_suite("bounds6-12", cfg, ARCS, paths)


def suite_bounds_7_14(cfg: SuiteConfig, paths=None, cross_pairs: int = 200, cross_height: int = 6) -> SuiteReport:
    """Arc-and-curve bounds in the exact torus model, cross-checked on a bounded subgraph.

    The cross-check measures small pairs again inside the bounded
    arc-and-curve subgraph; cases whose distances it cannot certify are
    counted apart and must stay under 5%.
    """
    rep = _bounds_suite("bounds7-14", cfg, AC, paths)
    bound = max(cfg.bound, 12)
    items = [(cfg.seed + 1, i, cross_height, bound) for i in range(cross_pairs)]
    res = _map(_cross_case, items, cfg.workers)
    counts = {k: sum(r["status"] == k for r in res) for k in ("agree", "disagree", "uncertified", "outside")}
    measured = cross_pairs - counts["outside"]
    frac = counts["uncertified"] / measured if measured else 1.0
    rep.stats["crossCheck"] = {"bound": bound, "height": cross_height, **counts, "uncertifiedFraction": frac}
    for r in res:
        if r["status"] == "disagree":
            rep.violations.append({"kind": "subgraph-disagrees", **r})
    if frac >= 0.05:
        rep.violations.append({"kind": "too-many-uncertified", "fraction": frac})
    return rep


# -- lemmas ------------------------------------------------------------------

def _subpath_case(args) -> dict:
    seed, i, height = args
    T = punctured_torus().T
    a, b = random_pair(seed, i, height)
    P = unicorn_path(T, a, b)
    n = len(P)
    bad, adjacent = [], 0
    for x in range(n + 1):
        for y in range(x + 1, n + 1):
            try:
                w = verify_subpath_lemma(T, P, x, y)
            except LemmaViolated as exc:
                bad.append({"i": x, "j": y, "error": str(exc)})
                continue
            adjacent += w.disjunct == "adjacent"
    return {"case": i, "length": n, "checks": n * (n + 1) // 2, "adjacent": adjacent, "bad": bad}


def suite_subpath_lemma(cfg: SuiteConfig) -> SuiteReport:
    name = "subpath-lemma"
    rep = SuiteReport(name, cfg.to_json(name))
    res = _map(_subpath_case, [(cfg.seed, i, cfg.height) for i in range(cfg.pairs)], cfg.workers)
    for r in res:
        for b in r["bad"]:
            rep.violations.append({"case": r["case"], **b})
    rep.stats = {
        "cases": len(res),
        "checks": sum(r["checks"] for r in res),
        "adjacentDisjunct": sum(r["adjacent"] for r in res),
        "longestPath": max((r["length"] for r in res), default=0),
    }
    return rep


def _walk(seed: int, i: int, height: int) -> list:
    rng = case_rng(seed, "walks", i)
    while True:
        m = rng.randint(2, 16)
        w = random_walk(rng, random_slope(rng, height), m, max_height=height)
        if w[0] != w[-1]:
            return [OrientedArc(slope_coords(*s), rng.randint(0, 1)) for s in w]


def _dyadic_case(args) -> dict:
    seed, i, height = args
    walk = _walk(seed, i, height)
    m = len(walk) - 1
    try:
        wit = verify_dyadic_lemma(punctured_torus().T, walk, TorusCoordsMetric(ARCS).d)
    except LemmaViolated as exc:
        return {"case": i, "m": m, "error": str(exc)}
    return {"case": i, "m": m, "k": wit[0].k, "vertices": len(wit), "worst": max(w.distance for w in wit)}


def suite_dyadic_lemma(cfg: SuiteConfig) -> SuiteReport:
    name = "dyadic-lemma"
    rep = SuiteReport(name, cfg.to_json(name))
    res = _map(_dyadic_case, [(cfg.seed, i, cfg.height) for i in range(cfg.pairs)], cfg.workers)
    rep.violations = [r for r in res if "error" in r]
    ok = [r for r in res if "error" not in r]
    rep.stats = {
        "cases": len(res),
        "maxM": max((r["m"] for r in res), default=0),
        "vertices": sum(r["vertices"] for r in ok),
        "worstDistance": max((r["worst"] for r in ok), default=0),
        "worstSlack": min((r["k"] - r["worst"] for r in ok), default=0),
    }
    return rep


# -- oracle cross-checks -----------------------------------------------------

def grid_slopes(height: int) -> list[tuple[int, int]]:
    """All slopes ``p/q`` with ``|p|, |q| <= height``."""
    out = {normalize(p, q) for p in range(-height, height + 1) for q in range(0, height + 1) if (p, q) != (0, 0)}
    return sorted(s for s in out if max(abs(s[0]), abs(s[1])) <= height)


def _grid_row(args) -> tuple[int, list]:
    s, slopes = args
    T = punctured_torus().T
    got = flip_intersections(T, slope_coords(*s), [slope_coords(*t) for t in slopes])
    bad = [(t, g) for t, g in zip(slopes, got) if g != slope_intersection(s, t)]
    return len(slopes), bad


def suite_farey_crosscheck(cfg: SuiteConfig, route1_sample: int = 300) -> SuiteReport:
    """Intersection numbers on the full slope grid, plus subgraph distances."""
    name = "farey-crosscheck"
    rep = SuiteReport(name, cfg.to_json(name))
    T = punctured_torus().T
    slopes = grid_slopes(cfg.height)
    res = _map(_grid_row, [(s, slopes) for s in slopes], cfg.workers)
    for s, (_, bad) in zip(slopes, res):
        for t, g in bad:
            rep.violations.append({"kind": "intersection", "a": list(s), "b": list(t), "got": g, "want": slope_intersection(s, t)})
    # the chain scan is an independent route; sample it on the same grid
    rng = case_rng(cfg.seed, "route1", 0)
    for _ in range(route1_sample):
        s, t = rng.choice(slopes), rng.choice(slopes)
        g = intersection_number(T, slope_coords(*s), slope_coords(*t))
        if g != slope_intersection(s, t):
            rep.violations.append({"kind": "route1", "a": list(s), "b": list(t), "got": g, "want": slope_intersection(s, t)})
    sub = cached_subgraph(T, cfg.bound, ARCS)
    verts = sorted(sub.vertices)
    for i in range(cfg.pairs):
        r = case_rng(cfg.seed, "subgraph", i)
        x, y = r.choice(verts), r.choice(verts)
        got = sub.raw_distance(x, y)
        want = farey_distance(classify_coords(x)[1], classify_coords(y)[1])
        if got != want:
            rep.violations.append({"kind": "distance", "x": list(x), "y": list(y), "got": got, "want": want})
    rep.stats = {
        "gridSlopes": len(slopes),
        "gridPairs": sum(n for n, _ in res),
        "route1Sample": route1_sample,
        "subgraphPairs": cfg.pairs,
        "subgraphVertices": len(verts),
    }
    return rep


# -- equivariance ------------------------------------------------------------

def _random_word(rng: random.Random, letters: str) -> str:
    return "".join(rng.choice(letters) for _ in range(rng.randint(1, 6)))


def _random_class(rng: random.Random, S: Surface, height: int, letters: str) -> tuple[int, ...]:
    if is_standard_torus(S.T):
        return slope_coords(*random_slope(rng, height))
    e = rng.randrange(S.T.edges)
    x = tuple(-1 if i == e else 0 for i in range(S.T.edges))
    w = S.word(rng.choice(letters) * rng.randint(0, 2))
    return tuple(apply_mapping_class(S.T, w, x))


def suite_equivariance(cfg: SuiteConfig, path_samples: int = 50) -> SuiteReport:
    name = "equivariance"
    S = cfg.surface
    letters = "".join(k + k.lower() for k in sorted(S.twists)) or None
    if not letters:
        raise InputError("the surface has no named twists to build words from")
    rep = SuiteReport(name, cfg.to_json(name))
    metric = default_metric(S.T, cfg.mode or ARCS, cfg.bound)
    counts = {"pairs": 0, "distances": 0, "paths": 0}
    for i in range(cfg.pairs + path_samples):
        rng = case_rng(cfg.seed, "equivariance", i)
        raw = cfg.word or _random_word(rng, letters)
        w = S.word(raw)
        x = _random_class(rng, S, cfg.height, letters)
        y = _random_class(rng, S, cfg.height, letters)
        while y == x:
            y = _random_class(rng, S, cfg.height, letters)
        if i < cfg.pairs:
            r = check_equivariance(S.T, w, pairs=[(x, y)], metric=metric)
        else:
            r = check_equivariance(S.T, w, paths=[(OrientedArc(x, rng.randint(0, 1)), OrientedArc(y, rng.randint(0, 1)))])
        counts["pairs"] += r.pairs_checked
        counts["distances"] += r.distances_checked
        counts["paths"] += r.paths_checked
        for f in r.failures:
            rep.violations.append({"case": i, "word": raw, **f})
    rep.stats = counts
    return rep


# -- boundary experiments ----------------------------------------------------

def orbit_arcs(S: Surface) -> tuple[OrientedArc, OrientedArc]:
    if is_standard_torus(S.T):
        return OrientedArc(slope_coords(0, 1), 0), OrientedArc(slope_coords(1, 0), 0)
    edge = lambda e: tuple(-1 if i == e else 0 for i in range(S.T.edges))  # noqa: E731
    return OrientedArc(edge(0), 0), OrientedArc(edge(1), 0)


def suite_convergence(cfg: SuiteConfig) -> SuiteReport:
    name = "convergence"
    S = cfg.surface
    a, b = orbit_arcs(S)
    f = S.word(cfg.word or "RL")
    r = run_convergence(S.T, a, b, f, cfg.horizon, default_metric(S.T, cfg.mode or ARCS, cfg.bound))
    rep = SuiteReport(name, {**cfg.to_json(name), "experiment": r.config}, [r.to_json()])
    rep.violations = [{"flag": k} for k, v in r.flags.items() if not v]
    last = r.rows[-1]
    rep.stats = {"flags": r.flags, "finalDistance": last.distance, "finalPathLength": last.path_len,
                 "finalPrefix": last.prefix_len, "finalProjectiveGap": last.proj_gap}
    return rep


def suite_divergence(cfg: SuiteConfig) -> SuiteReport:
    name = "divergence"
    S = cfg.surface
    a, b = orbit_arcs(S)
    fw = cfg.word or "RL"
    f, g = S.word(fw), S.word(fw[::-1])
    r = run_divergence(S.T, a, f, g, b, cfg.horizon, default_metric(S.T, cfg.mode or ARCS, cfg.bound))
    rep = SuiteReport(name, {**cfg.to_json(name), "experiment": r.config}, [r.to_json()])
    rep.violations = [{"flag": k} for k, v in r.flags.items() if not v]
    fl = lambda v: None if v is None else float(v)  # noqa: E731
    rep.stats = {"flags": r.flags, "sup": fl(r.sup), "sameOrbitMax": [fl(r.same_f), fl(r.same_g)]}
    return rep


def suite_gromov_gap(cfg: SuiteConfig) -> SuiteReport:
    """Gromov product gap against twice the slimness measured on the same ball."""
    name = "gromov-gap"
    r = gromov_gap_experiment(FareyMetric(), case_rng(cfg.seed, "ball", 0), (0, 1), radius=cfg.height,
                              triples=cfg.pairs, triangles=cfg.pairs)
    rep = SuiteReport(name, cfg.to_json(name), [r.to_json()], r.violations)
    rep.stats = {"delta": r.delta, "maxGap": float(r.max_gap)}
    return rep


_RUNNERS = {
    "bounds6-12": suite_bounds_6_12,
    "bounds7-14": suite_bounds_7_14,
    "subpath-lemma": suite_subpath_lemma,
    "dyadic-lemma": suite_dyadic_lemma,
    "farey-crosscheck": suite_farey_crosscheck,
    "equivariance": suite_equivariance,
    "convergence": suite_convergence,
    "divergence": suite_divergence,
    "gromov-gap": suite_gromov_gap,
}


def run_suite(name: str, cfg: SuiteConfig | None = None, **kwargs) -> SuiteReport:
    """Run a suite by name; ``kwargs`` go to the suite function."""
    if name not in _RUNNERS:
        raise InputError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    cfg = (cfg or SuiteConfig()).resolved(name)
    if cfg.self_test and not name.startswith("bounds"):
        raise InputError("self-test fault injection is defined for the bounds suites")
    t0 = time.perf_counter()
    rep = _RUNNERS[name](cfg, **kwargs)
    rep.stats["seconds"] = round(time.perf_counter() - t0, 3)
    return rep
