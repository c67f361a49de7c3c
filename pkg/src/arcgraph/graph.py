"""Finite models of the arc graph and the arc-and-curve graph.

Two independent models are provided.  A :class:`BoundedSubgraph` enumerates
every single-component class of coordinate norm at most ``B`` on any
triangulation and joins disjoint classes; distances in it are upper bounds
that are certified when they do not move as the bound grows.  On the
once-punctured torus the arc graph is the Farey graph, and the
arc-and-curve graph is the Farey graph with one pendant curve per slope
(the slope ``p/q`` curve misses only the slope ``p/q`` arc).  Farey
distances are exact: every geodesic from ``x`` to ``y`` stays inside the
ladder of Farey triangles crossed by the hyperbolic geodesic between them.
"""

from __future__ import annotations

import csv
import io
import itertools
import random
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Callable, Hashable, Iterable, Sequence

from .diagram import paths_disjoint, to_infinity
from .errors import Disconnected, SeedTooLarge, Uncertified, Unrealizable
from .normal import is_peripheral, resolve_paths
from .torus import Slope, classify_coords, is_standard_torus, normalize, slope_coords
from .triangulation import Triangulation

ARCS = "arcs"
AC = "ac"

CERTIFIED = "Certified"
FAREY_EXACT = "FareyExact"
UPPER_BOUND = "UpperBound"


# -- Farey oracle ------------------------------------------------------------

def farey_adjacent(x: Slope, y: Slope) -> bool:
    return abs(x[0] * y[1] - x[1] * y[0]) == 1


def _apply(m, v):
    return (m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1])


def _inv(m):
    det = m[0][0] * m[1][1] - m[0][1] * m[1][0]
    return ((m[1][1] * det, -m[0][1] * det), (-m[1][0] * det, m[0][0] * det))


def _side(y: Slope, w: Slope) -> int:
    """Sign of ``y - w`` for finite slopes."""
    d = y[0] * w[1] - w[0] * y[1]
    return (d > 0) - (d < 0)


def _ladder(y: Slope) -> dict[Slope, list[Slope]]:
    """Ladder of Farey triangles from ``1/0`` down to ``y``, long fans trimmed.

    A fan of ``a >= 5`` triangles around one pivot keeps only its first two
    and last two spokes; the dropped spokes are farther apart along the fan
    than through the pivot, so no geodesic uses them.
    """
    adj: dict[Slope, set[Slope]] = {}

    def edge(s, t):
        adj.setdefault(s, set()).add(t)
        adj.setdefault(t, set()).add(s)

    inf = (1, 0)
    if y == inf:
        return {inf: []}
    n = y[0] // y[1]
    L, R = (n, 1), (n + 1, 1)
    edge(inf, L)
    edge(inf, R)
    edge(L, R)
    if y in (L, R):
        return {k: sorted(s) for k, s in adj.items()}
    while True:
        M = (L[0] + R[0], L[1] + R[1])
        left = _side(y, M) < 0
        pivot = L if left else R
        chain = [R if left else L]
        cur = M
        while True:
            chain.append(cur)
            if cur == y or (_side(y, cur) < 0) != left:
                break
            cur = (cur[0] + pivot[0], cur[1] + pivot[1])
        a = len(chain) - 1
        keep = set(range(a + 1)) if a < 5 else {0, 1, a - 1, a}
        for i in range(a + 1):
            if i in keep:
                edge(pivot, chain[i])
                if i + 1 in keep:
                    edge(chain[i], chain[i + 1])
        if cur == y:
            break
        L, R = (chain[-1], chain[-2]) if left else (chain[-2], chain[-1])
    return {k: sorted(s) for k, s in adj.items()}


def _bfs(adj: dict, src) -> dict:
    dist = {src: 0}
    dq = deque([src])
    while dq:
        x = dq.popleft()
        for y in adj.get(x, ()):
            if y not in dist:
                dist[y] = dist[x] + 1
                dq.append(y)
    return dist


@lru_cache(maxsize=200_000)
def farey_distance(x: Slope, y: Slope) -> int:
    """Exact distance between two slopes in the Farey graph."""
    x, y = normalize(*x), normalize(*y)
    if x == y:
        return 0
    m = to_infinity(x)
    yy = normalize(*_apply(m, y))
    adj = _ladder(yy)
    return _bfs(adj, (1, 0))[yy]


def _arc_key(s: Slope) -> tuple:
    return slope_coords(*s)


def farey_geodesic(x: Slope, y: Slope) -> list[Slope]:
    """Geodesic from ``x`` to ``y`` picking the least arc coordinates at each step."""
    x, y = normalize(*x), normalize(*y)
    if x == y:
        return [x]
    m = to_infinity(x)
    mi = _inv(m)
    yy = normalize(*_apply(m, y))
    adj = _ladder(yy)
    back = _bfs(adj, yy)
    cur = (1, 0)
    out = [x]
    while cur != yy:
        cands = [w for w in adj[cur] if back.get(w) == back[cur] - 1]
        cur = min(cands, key=lambda w: _arc_key(normalize(*_apply(mi, w))))
        out.append(normalize(*_apply(mi, cur)))
    return out


def farey_neighbour(x: Slope, k: int) -> Slope:
    """The ``k``-th Farey neighbour of ``x`` (all neighbours arise as ``k`` varies)."""
    p, q = x
    m = to_infinity((p, q))
    # m sends x to 1/0, so the inverse sends integers k/1 to the neighbours of x
    return normalize(*_apply(_inv(m), (k, 1)))


def farey_neighbours(x: Slope, radius: int) -> list[Slope]:
    return sorted({farey_neighbour(x, k) for k in range(-radius, radius + 1)})


def brute_farey_distance(x: Slope, y: Slope, height: int) -> int | None:
    """BFS over all slopes of height at most ``height`` (test oracle)."""
    verts = [(1, 0)] + [(p, q) for q in range(1, height + 1) for p in range(-height, height + 1) if _coprime(p, q)]
    adj = {v: [w for w in verts if farey_adjacent(v, w)] for v in verts}
    return _bfs(adj, normalize(*x)).get(normalize(*y))


def _coprime(p: int, q: int) -> bool:
    return gcd(p, q) == 1


# -- arc-and-curve model of the once-punctured torus ---------------------------

Vertex = tuple[str, Slope]  # ("arc" | "curve", slope)


def ac_distance(u: Vertex, v: Vertex) -> int:
    (ku, su), (kv, sv) = u, v
    if u == v:
        return 0
    if ku == "arc" and kv == "arc":
        return farey_distance(su, sv)
    if ku == "curve" and kv == "curve":
        return 2 + farey_distance(su, sv)
    return 1 + farey_distance(su, sv)


def ac_geodesic(u: Vertex, v: Vertex) -> list[Vertex]:
    (ku, su), (kv, sv) = u, v
    if u == v:
        return [u]
    mid = [("arc", s) for s in farey_geodesic(su, sv)]
    out = ([u] if ku == "curve" else []) + mid + ([v] if kv == "curve" else [])
    return out


# -- metrics -----------------------------------------------------------------

class Metric:
    """A graph metric with a deterministic geodesic and a certification tag."""

    def distance(self, x, y) -> tuple[int, str]:
        raise NotImplementedError

    def geodesic(self, x, y) -> list:
        raise NotImplementedError

    def d(self, x, y) -> int:
        """Distance that must be certified."""
        v, cert = self.distance(x, y)
        if cert == UPPER_BOUND:
            raise Uncertified(f"d({x}, {y}) = {v} is only an upper bound")
        return v


class FareyMetric(Metric):
    """Exact arc graph of the once-punctured torus on slopes."""

    def distance(self, x, y):
        return farey_distance(x, y), FAREY_EXACT

    def geodesic(self, x, y):
        return farey_geodesic(x, y)


class ACFareyMetric(Metric):
    """Exact arc-and-curve graph of the once-punctured torus."""

    def distance(self, x, y):
        return ac_distance(x, y), FAREY_EXACT

    def geodesic(self, x, y):
        return ac_geodesic(x, y)


class TorusCoordsMetric(Metric):
    """Exact metric on coordinate vectors of the standard once-punctured torus."""

    def __init__(self, mode: str = ARCS):
        self.mode = mode

    def _v(self, x):
        kind, s = classify_coords(x)
        if self.mode == ARCS:
            if kind != "arc":
                raise Unrealizable("curves are not vertices of the arc graph")
            return s
        return (kind, s)

    def _x(self, v):
        if self.mode == ARCS:
            return slope_coords(*v)
        kind, s = v
        return slope_coords(*s, curve=kind == "curve")

    def distance(self, x, y):
        a, b = self._v(x), self._v(y)
        return (farey_distance(a, b) if self.mode == ARCS else ac_distance(a, b)), FAREY_EXACT

    def geodesic(self, x, y):
        a, b = self._v(x), self._v(y)
        g = farey_geodesic(a, b) if self.mode == ARCS else ac_geodesic(a, b)
        return [self._x(v) for v in g]


# -- bounded subgraphs -------------------------------------------------------

@dataclass
class BoundedSubgraph:
    T: Triangulation
    bound: int
    mode: str
    vertices: list[tuple[int, ...]]
    adjacency: list[list[int]]
    index: dict[tuple[int, ...], int] = field(repr=False, default_factory=dict)

    def __post_init__(self):
        self.index = {v: i for i, v in enumerate(self.vertices)}

    def __contains__(self, x) -> bool:
        return tuple(x) in self.index

    def bfs(self, x) -> list[int]:
        n = len(self.vertices)
        dist = [-1] * n
        s = self.index[tuple(x)]
        dist[s] = 0
        dq = deque([s])
        while dq:
            u = dq.popleft()
            for w in self.adjacency[u]:
                if dist[w] < 0:
                    dist[w] = dist[u] + 1
                    dq.append(w)
        return dist

    def raw_distance(self, x, y) -> int:
        d = self.bfs(y)[self.index[tuple(x)]]
        if d < 0:
            raise Disconnected(f"{x} and {y} are not connected within bound {self.bound}")
        return d

    def geodesic(self, x, y) -> list[tuple[int, ...]]:
        back = self.bfs(y)
        cur = self.index[tuple(x)]
        if back[cur] < 0:
            raise Disconnected(f"{x} and {y} are not connected within bound {self.bound}")
        out = [self.vertices[cur]]
        while back[cur] > 0:
            cur = min((w for w in self.adjacency[cur] if back[w] == back[cur] - 1), key=lambda w: self.vertices[w])
            out.append(self.vertices[cur])
        return out

    def edges(self) -> list[tuple[int, int]]:
        return [(i, j) for i, nb in enumerate(self.adjacency) for j in nb if i < j]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["source", "target"])
        for i, j in self.edges():
            w.writerow([" ".join(map(str, self.vertices[i])), " ".join(map(str, self.vertices[j]))])
        return buf.getvalue()


def _single_class(T: Triangulation, x, mode: str):
    """The normal path if ``x`` is a vertex of the graph in this mode, else None."""
    try:
        _, comps = resolve_paths(T, x)
    except Unrealizable:
        return None
    if len(comps) != 1:
        return None
    path = comps[0].path
    if path.closed and (mode != AC or is_peripheral(T, path)):
        return None
    return path


def enumerate_classes(T: Triangulation, B: int, mode: str = ARCS) -> list[tuple[tuple[int, ...], object]]:
    out = []
    for e in range(T.edges):
        x = tuple(-1 if i == e else 0 for i in range(T.edges))
        out.append((x, _single_class(T, x, mode)))
    for x in itertools.product(range(B + 1), repeat=T.edges):
        p = _single_class(T, x, mode)
        if p is not None:
            out.append((x, p))
    return out


def build_subgraph(T: Triangulation, B: int, seeds: Iterable[Sequence[int]] = (), mode: str = ARCS) -> BoundedSubgraph:
    """All single-component classes of norm at most ``B``, joined when disjoint."""
    if mode not in (ARCS, AC):
        raise ValueError(f"unknown mode {mode!r}")
    classes = dict(_cached_classes(T, B, mode))
    for s in seeds:
        s = tuple(int(v) for v in s)
        if max(s) > B:
            raise SeedTooLarge(f"seed {s} has norm {max(s)} > {B}")
        if s not in classes:
            p = _single_class(T, s, mode)
            if p is None:
                raise Unrealizable(f"seed {s} is not a single {mode} class")
            classes[s] = p
    verts = sorted(classes)
    paths = [classes[v] for v in verts]
    adj: list[list[int]] = [[] for _ in verts]
    for i in range(len(verts)):
        for j in range(i + 1, len(verts)):
            if paths_disjoint(paths[i], paths[j]):
                adj[i].append(j)
                adj[j].append(i)
    return BoundedSubgraph(T, B, mode, verts, adj)


@lru_cache(maxsize=16)
def _cached_classes(T: Triangulation, B: int, mode: str):
    return tuple(enumerate_classes(T, B, mode))


@lru_cache(maxsize=8)
def cached_subgraph(T: Triangulation, B: int, mode: str = ARCS) -> BoundedSubgraph:
    return build_subgraph(T, B, (), mode)


def distance(sub: BoundedSubgraph, x, y) -> tuple[int, str]:
    """BFS distance in ``sub`` with its certification tag.

    ``FareyExact`` when the value agrees with the exact torus model,
    ``Certified`` when it is unchanged at bounds ``B + 1`` and ``B + 2``, and
    ``UpperBound`` otherwise.
    """
    d = sub.raw_distance(x, y)
    if is_standard_torus(sub.T):
        exact, _ = TorusCoordsMetric(sub.mode).distance(x, y)
        return d, FAREY_EXACT if exact == d else UPPER_BOUND
    for extra in (1, 2):
        bigger = cached_subgraph(sub.T, sub.bound + extra, sub.mode)
        try:
            if bigger.raw_distance(x, y) != d:
                return d, UPPER_BOUND
        except Disconnected:
            return d, UPPER_BOUND
    return d, CERTIFIED


def geodesic(sub: BoundedSubgraph, x, y) -> list[tuple[int, ...]]:
    return sub.geodesic(x, y)


class SubgraphMetric(Metric):
    def __init__(self, sub: BoundedSubgraph):
        self.sub = sub

    def distance(self, x, y):
        return distance(self.sub, x, y)

    def geodesic(self, x, y):
        return self.sub.geodesic(x, y)


# -- Gromov products, slimness, path checks ------------------------------------

@dataclass(frozen=True)
class GromovProductReport:
    o: Hashable
    x: Hashable
    y: Hashable
    d_ox: int
    d_oy: int
    d_xy: int
    value: Fraction
    dist_to_geodesic: int
    gap: Fraction

    def to_json(self) -> dict:
        return {
            "o": repr(self.o),
            "x": repr(self.x),
            "y": repr(self.y),
            "d_ox": self.d_ox,
            "d_oy": self.d_oy,
            "d_xy": self.d_xy,
            "product": float(self.value),
            "distToGeodesic": self.dist_to_geodesic,
            "gap": float(self.gap),
        }


def gromov_value(d_ox: int, d_oy: int, d_xy: int) -> Fraction:
    return Fraction(d_ox + d_oy - d_xy, 2)


def gromov_product(metric: Metric, o, x, y) -> GromovProductReport:
    d_ox, d_oy, d_xy = metric.d(o, x), metric.d(o, y), metric.d(x, y)
    value = gromov_value(d_ox, d_oy, d_xy)
    g = metric.geodesic(x, y)
    to_g = min(metric.d(o, v) for v in g)
    return GromovProductReport(o, x, y, d_ox, d_oy, d_xy, value, to_g, abs(to_g - value))


def triangle_slimness(metric: Metric, x, y, z) -> int:
    """Largest distance from a vertex of one side to the union of the other two."""
    sides = [metric.geodesic(x, y), metric.geodesic(y, z), metric.geodesic(z, x)]
    worst = 0
    for i, side in enumerate(sides):
        others = set(sides[(i + 1) % 3]) | set(sides[(i + 2) % 3])
        for v in side:
            if v in others:
                continue
            worst = max(worst, min(metric.d(v, w) for w in others))
    return worst


def estimate_slimness(metric: Metric, triangles: Iterable[tuple]) -> int:
    """The measured slimness constant: max over sampled geodesic triangles."""
    best = 0
    for x, y, z in triangles:
        best = max(best, triangle_slimness(metric, x, y, z))
    return best


@dataclass(frozen=True)
class PathGeodesicReport:
    max_vertex_dist: int
    hausdorff: int
    vertex_bound: int
    hausdorff_bound: int

    @property
    def passed(self) -> bool:
        return self.max_vertex_dist <= self.vertex_bound and self.hausdorff <= self.hausdorff_bound

    def to_json(self) -> dict:
        return {
            "maxVertexDist": self.max_vertex_dist,
            "hausdorff": self.hausdorff,
            "pass": self.passed,
        }


BOUNDS = {ARCS: (6, 12), AC: (7, 14)}


def check_path_vs_geodesic(path: Sequence, metric: Metric, mode: str = ARCS, bounds: tuple[int, int] | None = None) -> PathGeodesicReport:
    """Distance from a path to a geodesic between its endpoints, both ways."""
    g = metric.geodesic(path[0], path[-1])
    vb, hb = bounds or BOUNDS[mode]
    to_g = max(min(metric.d(v, w) for w in g) for v in path)
    to_p = max(min(metric.d(w, v) for v in path) for w in g)
    return PathGeodesicReport(to_g, max(to_g, to_p), vb, hb)


def bounded_neighbours(x: Slope, height: int) -> list[Slope]:
    """Farey neighbours ``r/s`` of ``x`` with ``|r|, s <= height``."""
    p, q = x
    out = [(r, s) for s in range(height + 1) for r in range(-height, height + 1) if abs(p * s - q * r) == 1]
    return sorted({normalize(r, s) for r, s in out})


def random_walk(rng: random.Random, start: Slope, m: int, spread: int = 3, max_height: int | None = None) -> list[Slope]:
    """A walk of ``m`` steps in the Farey graph.

    With ``max_height`` each step is uniform among the neighbours of height
    at most ``max_height``; otherwise it takes the ``k``-th neighbour for a
    uniform ``|k| <= spread``.
    """
    out = [normalize(*start)]
    while len(out) <= m:
        if max_height is None:
            out.append(farey_neighbour(out[-1], rng.randint(-spread, spread)))
        else:
            out.append(rng.choice(bounded_neighbours(out[-1], max_height)))
    return out


def random_slope(rng: random.Random, height: int) -> Slope:
    while True:
        p, q = rng.randint(-height, height), rng.randint(1, height)
        if _coprime(p, q):
            return normalize(p, q)


def sample_ball(rng: random.Random, centre: Slope, radius: int, count: int, spread: int = 3) -> list[Slope]:
    """Distinct slopes reached by random walks of length at most ``radius``."""
    seen = {normalize(*centre)}
    out = [normalize(*centre)]
    tries = 0
    while len(out) < count and tries < 50 * count:
        tries += 1
        walk = random_walk(rng, centre, rng.randint(1, radius), spread)
        if walk[-1] not in seen:
            seen.add(walk[-1])
            out.append(walk[-1])
    return out


def vertex_dist_fn(metric: Metric) -> Callable:
    return metric.d
