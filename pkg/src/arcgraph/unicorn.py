"""Unicorn arcs and unicorn paths between oriented arcs.

An oriented arc is traversed from its chosen endpoint.  For arcs ``a`` (from
``alpha``) and ``b`` (from ``beta``) in minimal position, a crossing ``pi``
gives the candidate ``a[alpha, pi] + b[pi, beta]``.  The candidate is
embedded exactly when no other crossing lies both before ``pi`` along ``a``
and before ``pi`` along ``b``, so the unicorns are the prefix minima of the
``b`` ordinals read in ``a`` order.  Each unicorn is stored as a normal path
oriented from ``alpha`` to ``beta``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

from .diagram import Crossing, intersection_number, path_crossings
from .errors import IndexOutOfRange, LemmaViolated, NotMinimalPosition, SameClass
from .normal import InessentialPath, NormalPath, orient_like, reduce_path
from .surface import MappingClassWord, OrientedArc, transport_arc
from .triangulation import Triangulation


@dataclass(frozen=True)
class UnicornArc:
    a: OrientedArc
    b: OrientedArc
    witness: Crossing
    path: NormalPath  # oriented from a's chosen end to b's chosen end
    arc_class: tuple[int, ...]

    @property
    def prefix_len_a(self) -> int:
        return self.witness.index_along_a

    def a_end(self, T: Triangulation) -> OrientedArc:
        """This arc with its chosen end where ``a`` starts."""
        return OrientedArc.from_path(T, self.path)

    def b_end(self, T: Triangulation) -> OrientedArc:
        """This arc with its chosen end where ``b`` starts."""
        return OrientedArc.from_path(T, self.path.reversed())


@dataclass(frozen=True)
class UnicornPath:
    """``P(a, b)``: ``a``, the unicorn arcs by decreasing ``a`` segment, ``b``."""

    a: OrientedArc
    b: OrientedArc
    arcs: tuple[UnicornArc, ...]

    @property
    def vertices(self) -> list[tuple[int, ...]]:
        return [self.a.coords] + [u.arc_class for u in self.arcs] + [self.b.coords]

    @property
    def witnesses(self) -> list[tuple[int, int]]:
        return [(u.witness.index_along_a, u.witness.index_along_b) for u in self.arcs]

    def __len__(self) -> int:
        """Number of edges of the path."""
        return len(self.arcs) + 1

    def oriented(self, T: Triangulation, k: int, end: str) -> OrientedArc:
        """Vertex ``k`` with its ``"a"`` end or ``"b"`` end chosen."""
        n = len(self.arcs) + 1
        if not 0 <= k <= n:
            raise IndexOutOfRange(f"vertex {k} of a path with {n + 1} vertices")
        if k == 0:
            if end == "a":
                return self.a
            raise IndexOutOfRange("a itself has no end at b's chosen puncture end")
        if k == n:
            if end == "b":
                return self.b
            raise IndexOutOfRange("b itself has no end at a's chosen puncture end")
        u = self.arcs[k - 1]
        return u.a_end(T) if end == "a" else u.b_end(T)

    def to_json(self) -> dict:
        return {
            "vertices": [list(v) for v in self.vertices],
            "witnesses": [list(w) for w in self.witnesses],
            "ends": [self.a.end, self.b.end],
        }


def _check_pair(T: Triangulation, a: OrientedArc, b: OrientedArc) -> tuple[NormalPath, NormalPath]:
    if a.coords == b.coords:
        raise SameClass("a and b are the same arc class")
    A, B = a.path(T), b.path(T)
    for P in (A, B):
        try:
            orient_like(T, P)
        except AssertionError as exc:
            raise NotMinimalPosition("input path is not normal") from exc
    return A, B


def unicorn_arcs(T: Triangulation, a: OrientedArc, b: OrientedArc) -> list[UnicornArc]:
    """The unicorn arcs of ``(a, b)`` ordered by decreasing ``a`` segment."""
    A, B = _check_pair(T, a, b)
    crossings = path_crossings(T, A, B)
    found = []
    best = None
    for c in crossings:
        if best is None or c.index_along_b < best:
            best = c.index_along_b
            found.append(c)
    out = []
    for c in reversed(found):
        path = _unicorn_path(T, A, B, c)
        out.append(UnicornArc(a, b, c, path, path.coords(T)))
    return out


def _unicorn_path(T: Triangulation, A: NormalPath, B: NormalPath, c: Crossing) -> NormalPath:
    p, q = c.a_segment, c.b_segment
    t = A.segments[p][0]
    segs = list(A.segments[:p])
    segs.append((t, A.segments[p][1], B.segments[q][1]))
    segs.extend((tt, y, x) for tt, x, y in reversed(B.segments[:q]))
    try:
        path = reduce_path(T, segs)
    except InessentialPath as exc:
        raise NotMinimalPosition("a unicorn candidate is inessential") from exc
    # an embedded normal path is the canonical path of its own coordinates
    orient_like(T, path)
    return path


def unicorn_path(T: Triangulation, a: OrientedArc, b: OrientedArc) -> UnicornPath:
    return UnicornPath(a, b, tuple(unicorn_arcs(T, a, b)))


def check_unicorn_path(T: Triangulation, P: UnicornPath) -> None:
    """Assert the defining properties of a unicorn path."""
    vs = P.vertices
    if vs[0] != P.a.coords or vs[-1] != P.b.coords:
        raise LemmaViolated("endpoints of the path are wrong")
    for x, y in zip(vs, vs[1:]):
        if intersection_number(T, x, y) != 0:
            raise LemmaViolated(f"consecutive vertices {x} and {y} intersect")
    lens = [u.prefix_len_a for u in P.arcs]
    if any(x <= y for x, y in zip(lens, lens[1:])):
        raise LemmaViolated("a-segment lengths are not strictly decreasing")


@dataclass(frozen=True)
class SubpathWitness:
    i: int
    j: int
    disjunct: str  # "subpath" or "adjacent"
    path: tuple[tuple[int, ...], ...]


def verify_subpath_lemma(T: Triangulation, P: UnicornPath, i: int, j: int) -> SubpathWitness:
    """Check that ``P(a_i, a_j)`` is a subpath, or ``j = i + 2`` with ``a_i, a_j`` disjoint.

    ``a_i`` keeps its end on ``a``'s chosen endpoint and ``a_j`` its end on
    ``b``'s chosen endpoint.
    """
    n = len(P.arcs) + 1
    if not 0 <= i < j <= n:
        raise IndexOutOfRange(f"need 0 <= i < j <= {n}, got ({i}, {j})")
    vs = P.vertices
    if j == i + 1:
        return SubpathWitness(i, j, "subpath", (vs[i], vs[j]))
    ai, aj = P.oriented(T, i, "a"), P.oriented(T, j, "b")
    sub = unicorn_path(T, ai, aj).vertices
    if sub == vs[i : j + 1]:
        return SubpathWitness(i, j, "subpath", tuple(sub))
    if j == i + 2 and intersection_number(T, vs[i], vs[j]) == 0:
        return SubpathWitness(i, j, "adjacent", tuple(sub))
    raise LemmaViolated(f"P(a_{i}, a_{j}) = {sub} is not a subpath of {vs}")


def common_prefix(xs: Sequence, ys: Sequence) -> int:
    n = 0
    for x, y in zip(xs, ys):
        if x != y:
            break
        n += 1
    return n


@dataclass(frozen=True)
class Truncation:
    n: int
    b_n: OrientedArc
    path: UnicornPath
    prefix: int  # common prefix length with the previous step (0 for n = 0)


def orbit(T: Triangulation, b: OrientedArc, f: MappingClassWord, n: int) -> list[OrientedArc]:
    """``b, f b, ..., f^n b`` with the chosen endpoint carried along."""
    out = [b]
    for _ in range(n):
        out.append(transport_arc(T, f, out[-1]))
    return out


def truncated_infinite_path(T: Triangulation, a: OrientedArc, b: OrientedArc, f: MappingClassWord, n: int) -> tuple[UnicornPath, int]:
    """``P(a, f^n b)`` and its common prefix length with ``P(a, f^(n-1) b)``."""
    steps = truncations(T, a, b, f, n)
    return steps[-1].path, steps[-1].prefix


def truncations(
    T: Triangulation,
    a: OrientedArc,
    b: OrientedArc,
    f: MappingClassWord,
    n: int,
    orbit_arcs: Sequence[OrientedArc] | None = None,
) -> list[Truncation]:
    """All truncations ``P(a, f^k b)`` for ``k = 0 .. n``.

    ``orbit_arcs`` may supply an already computed ``orbit(T, b, f, n)``.
    """
    out: list[Truncation] = []
    prev = None
    for k, bk in enumerate(orbit_arcs if orbit_arcs is not None else orbit(T, b, f, n)):
        P = unicorn_path(T, a, bk)
        pre = 0 if prev is None else common_prefix(prev.vertices, P.vertices)
        out.append(Truncation(k, bk, P, pre))
        prev = P
    return out


@dataclass(frozen=True)
class DyadicWitness:
    """A vertex ``c`` of ``P(x_0, x_m)`` and its nearest ``c*`` in some ``P(x_i, x_{i+1})``."""

    c: tuple[int, ...]
    i: int
    c_star: tuple[int, ...]
    distance: int
    k: int


def _vertices(T: Triangulation, a: OrientedArc, b: OrientedArc) -> list[tuple[int, ...]]:
    if a.coords == b.coords:
        return [a.coords]
    return unicorn_path(T, a, b).vertices


def verify_dyadic_lemma(T: Triangulation, walk: Sequence[OrientedArc], dist: Callable) -> list[DyadicWitness]:
    """Check every ``c`` in ``P(x_0, x_m)`` is within ``k`` of a segment path, ``m <= 2^k``.

    ``dist`` measures distance between coordinate vectors.  Returns one
    witness per vertex of ``P(x_0, x_m)``; raises :class:`LemmaViolated`
    on the first vertex that is too far.
    """
    m = len(walk) - 1
    if m < 1:
        raise IndexOutOfRange("a walk needs at least two vertices")
    k = (m - 1).bit_length()  # least k with m <= 2^k
    pieces = [_vertices(T, walk[i], walk[i + 1]) for i in range(m)]
    out = []
    for c in _vertices(T, walk[0], walk[-1]):
        d, i, star = min((dist(c, v), i, v) for i, piece in enumerate(pieces) for v in piece)
        if d > k:
            raise LemmaViolated(f"{c} is at distance {d} > {k} from every segment path")
        out.append(DyadicWitness(c, i, star, d, k))
    return out
