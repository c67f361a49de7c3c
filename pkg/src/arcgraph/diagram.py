"""Strand diagrams, intersection numbers and crossing sequences.

Two normal paths are compared in the universal cover.  Every lift of a
normal path is a geodesic of the dual tree, so two lifts share a (possibly
empty) run of consecutive triangles.  Runs are found as maximal *chains* of
segment pairs ``(p, q)`` lying in the same triangle and linked through
common sides.  A chain is a transverse crossing exactly when the two lifts
enter and leave the run on opposite sides of each other; a shared corner at
either end is a shared cusp and never counts.

The order of crossings along an arc comes from developing each path into
the Farey tessellation: cusps are primitive integer vectors, the lift of the
other path is located by matching one common triangle, and crossings are
sorted by nesting of the crossing chords about the starting cusp.

:func:`overlay` and :func:`tighten` give an independent strand-level route:
they draw both diagrams with explicit slot orders on every edge and remove
innermost bigons and half-bigons until none are left.
"""

from __future__ import annotations

import csv
import io
import random
from dataclasses import dataclass, field
from typing import Sequence

from gmpy2 import mpq

from .errors import NotAnArc
from .normal import Chord, Component, NormalPath, canonical_path, resolve_paths
from .triangulation import (
    Triangulation,
    corner_pos,
    corners_of_side,
    is_corner,
    pos_index,
    side_between,
    flip_triangulation,
    side_pos,
)

Vec = tuple[int, int]


# -- resolved diagrams -----------------------------------------------------

@dataclass(frozen=True)
class CurveDiagram:
    """A normal multiarc/multicurve drawn strand by strand.

    ``chords`` are grouped per triangle through :attr:`Chord.t`; the slot
    order of edge ``e`` is read from the first side slot of ``e``, the other
    side sees it reversed.
    """

    T: Triangulation
    coords: tuple[int, ...]
    chords: tuple[Chord, ...]
    components: tuple[Component, ...]

    @property
    def arcs(self) -> list[Component]:
        return [c for c in self.components if c.kind == "arc"]

    @property
    def curves(self) -> list[Component]:
        return [c for c in self.components if c.kind == "curve"]

    def endpoint_counts(self) -> list[int]:
        """Strand ends on each edge, read from the first side of the edge."""
        out = [0] * self.T.edges
        for e in range(self.T.edges):
            t, k = self.T.edge_slots(e)[0]
            out[e] = sum(1 for ch in self.chords if ch.t == t for pos, _ in ch.ends if pos == side_pos(k))
        return out


def resolve(T: Triangulation, x: Sequence[int]) -> CurveDiagram:
    chords, comps = resolve_paths(T, x)
    return CurveDiagram(T, tuple(int(v) for v in x), tuple(chords), tuple(comps))


# -- route 1: chains in the universal cover --------------------------------

@dataclass(frozen=True)
class Chain:
    """A maximal run of triangles shared by one lift of each path.

    ``p`` and ``q`` are the segment indices of the first shared triangle and
    ``length`` the number of shared triangles; along the run ``p`` increases
    and ``q`` moves by ``direction``.
    """

    p: int
    q: int
    length: int
    direction: int
    crosses: bool


def _interleave(a0: int, a1: int, b0: int, b1: int) -> bool:
    if len({a0, a1, b0, b1}) < 4:
        return False
    return ((b0 - a0) % 6 < (a1 - a0) % 6) != ((b1 - a0) % 6 < (a1 - a0) % 6)


def chains(A: NormalPath, B: NormalPath) -> list[Chain]:
    """All maximal shared runs of lifts of ``A`` and ``B``.

    Runs that wrap all the way round two closed paths (parallel curves) are
    dropped, since they never cross.
    """
    return list(iter_chains(A, B))


def iter_chains(A: NormalPath, B: NormalPath):
    for run in _scan(A, B):
        yield Chain(*run)


def _scan(A: NormalPath, B: NormalPath):
    """Yield ``(p, q, length, direction, crosses)`` for every maximal shared run."""
    sa, sb = A.segments, B.segments
    na, nb = len(sa), len(sb)
    ca, cb = A.closed, B.closed
    by_t: dict[int, list[int]] = {}
    for q, seg in enumerate(sb):
        by_t.setdefault(seg[0], []).append(q)
    for p0, (t, ain, aout0) in enumerate(sa):
        qs = by_t.get(t)
        if not qs:
            continue
        ain_side = ain % 2 == 0
        for q0 in qs:
            _, b0, b1 = sb[q0]
            if ain_side and (ain == b0 or ain == b1):
                continue  # linked to the previous pair
            p, q, d, length = p0, q0, 0, 1
            aout = aout0
            wrapped = False
            while aout % 2 == 0:
                _, bi, bo = sb[q]
                if d >= 0 and aout == bo:
                    step = 1
                elif d <= 0 and aout == bi:
                    step = -1
                else:
                    break
                np_, nq = p + 1, q + step
                if ca:
                    np_ %= na
                elif np_ >= na:
                    break
                if cb:
                    nq %= nb
                elif not 0 <= nq < nb:
                    break
                p, q, d = np_, nq, step
                length += 1
                if p == p0 and q == q0:
                    wrapped = True
                    break
                aout = sa[p][2]
            if not wrapped:
                yield p0, q0, length, d or 1, _run_crosses(sa, sb, p0, q0, p, q, d)


def _run_crosses(sa, sb, p0, q0, p1, q1, direction) -> bool:
    _, a_in, sigma = sa[p0]
    _, b0, b1 = sb[q0]
    if direction == 0:
        return _interleave(a_in, sigma, b0, b1)
    b_in = b0 if direction == 1 else b1
    if a_in == b_in:
        return False
    left_start = (b_in - sigma) % 6 < (a_in - sigma) % 6
    _, sigma2, a_out = sa[p1]
    _, c0, c1 = sb[q1]
    b_out = c1 if direction == 1 else c0
    if a_out == b_out:
        return False
    left_end = (b_out - sigma2) % 6 > (a_out - sigma2) % 6
    return left_start != left_end


def path_intersection(A: NormalPath, B: NormalPath) -> int:
    return sum(run[4] for run in _scan(A, B))


def paths_disjoint(A: NormalPath, B: NormalPath) -> bool:
    return not any(run[4] for run in _scan(A, B))


def _paths(T: Triangulation, x: Sequence[int]) -> list[NormalPath]:
    _, comps = resolve_paths(T, x)
    return [c.path for c in comps]


def intersection_number(T: Triangulation, x: Sequence[int], y: Sequence[int]) -> int:
    """Geometric intersection number of two (multi)classes.

    Components are compared pairwise; for multiclasses the result is the sum
    over all pairs of components, and a class never meets a parallel copy of
    one of its own components.
    """
    total = 0
    for A in _paths(T, x):
        for B in _paths(T, y):
            total += path_intersection(A, B)
    return total


# -- route 2: development into the Farey tessellation ----------------------

def _third(u: Vec, v: Vec, w: Vec) -> Vec:
    """The cusp across the Farey edge ``uv`` from ``w``."""
    s = (u[0] + v[0], u[1] + v[1])
    if s == w or s == (-w[0], -w[1]):
        return (u[0] - v[0], u[1] - v[1])
    return s


@dataclass
class Frame:
    """Cusps of a developed path: ``cusps[i][c]`` is corner ``c`` of segment ``i``.

    ``offset`` shifts segment indices for unrolled closed paths, whose frame
    covers indices ``-offset .. n + offset - 1`` of the cyclic sequence.
    """

    cusps: list[tuple[Vec, Vec, Vec]]
    start: Vec
    end: Vec
    offset: int = 0

    def at(self, i: int) -> tuple[Vec, Vec, Vec]:
        return self.cusps[i + self.offset]


def _develop_segments(T: Triangulation, segs: Sequence, first_corner: int | None) -> list[tuple[Vec, Vec, Vec]]:
    c = [None, None, None]
    s = first_corner if first_corner is not None else 0
    c[s], c[(s + 1) % 3], c[(s + 2) % 3] = (1, 0), (0, 1), (1, 1)
    out = [tuple(c)]
    for i in range(len(segs) - 1):
        t, _, pout = segs[i]
        k = pos_index(pout)
        t2, j = T.glue(t, k)
        cur = out[-1]
        nxt = [None, None, None]
        nxt[(j - 1) % 3] = cur[k]
        nxt[j] = cur[(k - 1) % 3]
        nxt[(j + 1) % 3] = _third(cur[k], cur[(k - 1) % 3], cur[(k + 1) % 3])
        out.append(tuple(nxt))
    return out


def _beyond(cusps: tuple[Vec, Vec, Vec], k: int) -> Vec:
    """The cusp across side ``k`` of a developed triangle."""
    return _third(cusps[k % 3], cusps[(k - 1) % 3], cusps[(k + 1) % 3])


def develop(T: Triangulation, path: NormalPath, pad: int = 0) -> Frame:
    """Develop an arc, or ``pad`` extra periods' worth of a closed curve."""
    segs = path.segments
    if not path.closed:
        cusps = _develop_segments(T, segs, pos_index(segs[0][1]))
        return Frame(cusps, cusps[0][pos_index(segs[0][1])], cusps[-1][pos_index(segs[-1][2])])
    n = len(segs)
    unrolled = [segs[i % n] for i in range(-pad, n + pad)]
    cusps = _develop_segments(T, unrolled, None)
    start = _beyond(cusps[0], pos_index(unrolled[0][1]))
    end = _beyond(cusps[-1], pos_index(unrolled[-1][2]))
    return Frame(cusps, start, end, pad)


def _signs(c: tuple[Vec, Vec, Vec]) -> tuple[int, int]:
    """Signs with ``e0 c0 + e1 c1 = c2``; the first two cusps form a unimodular basis."""
    (x0, y0), (x1, y1), (x2, y2) = c
    det = x0 * y1 - x1 * y0
    e0, e1 = (x2 * y1 - x1 * y2) * det, (x0 * y2 - x2 * y0) * det
    if e0 not in (1, -1) or e1 not in (1, -1):
        raise AssertionError("developed triangle is not a Farey triangle")
    return e0, e1


def _apply(m, v: Vec) -> Vec:
    return (m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1])


def _inverse(m):
    det = m[0][0] * m[1][1] - m[0][1] * m[1][0]
    return ((m[1][1] * det, -m[0][1] * det), (-m[1][0] * det, m[0][0] * det))


def to_infinity(v: Vec):
    """A unimodular matrix sending the primitive vector ``v`` to ``(1, 0)``."""
    x, y = v
    # extended Euclid: a x + b y = 1
    old_r, r = x, y
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        qt = old_r // r
        old_r, r = r, old_r - qt * r
        old_s, s = s, old_s - qt * s
        old_t, t = t, old_t - qt * t
    g = old_r
    a, b = old_s * g, old_t * g  # g is +-1
    return ((a, b), (-y, x))


def _real(v: Vec):
    if v[1] == 0:
        return None
    return mpq(v[0], v[1])


# -- route 4: flip an arc to an edge ---------------------------------------

def flip_weight(T: Triangulation, x: Sequence[int], e: int) -> int:
    """Weight of the single class ``x`` on the new diagonal after flipping ``e``.

    Counts the strands of the flipped quadrilateral that join its two halves
    (the halves cut out by the new diagonal), matching strands across ``e``
    by their slots.
    """
    return _flip_weight(_flip_plan(T, e), x)


def _flip_plan(T: Triangulation, e: int):
    """The quadrilateral of ``e``: edges of each triangle listed from ``e``."""
    (t, k), (t2, j) = T.edge_slots(e)
    return e, tuple(T.edge(t, (k + i) % 3) for i in range(3)), tuple(T.edge(t2, (j + i) % 3) for i in range(3))


def _turns(w0: int, w1: int, w2: int):
    """Turns round the apex and the two ends of side 0, plus apex strands through side 0.

    Sides are listed from side 0 counterclockwise, so the apex is the corner
    between sides 1 and 2, side 0 runs from the end shared with side 2 to
    the end shared with side 1.  Strands from an end corner to the opposite
    side join the two halves and are counted with the apex turns.
    """
    if w0 > w1 + w2:  # apex strands cross side 0
        return 0, w2, w1, w0 - w1 - w2
    if w1 > w0 + w2:  # strands from the end on side 2 cross side 1
        return w1 - w0, 0, w0, 0
    if w2 > w0 + w1:
        return w2 - w0, w0, 0, 0
    return (w1 + w2 - w0) // 2, (w0 + w2 - w1) // 2, (w0 + w1 - w2) // 2, 0


def _flip_weight(plan, x: Sequence[int]) -> int:
    e, (_, a1, b1), (_, a2, b2) = plan
    ew = x[e]
    if ew == -1:
        return 1
    c1, p1, q1, v1 = _turns(ew, max(x[a1], 0), max(x[b1], 0))
    c2, q2, p2, v2 = _turns(ew, max(x[a2], 0), max(x[b2], 0))  # e is reversed here
    if v1 and v2 and min(p1 + v1, p2 + v2) > max(p1, p2):
        return -1  # the class runs corner to corner: it is the new diagonal
    return c1 + c2 + max(0, p1 + q2 - ew) + max(0, q1 + p2 - ew)


def flip_to_edge(T: Triangulation, x: Sequence[int]) -> tuple[list[int], int]:
    """Flips (in order) that turn the arc ``x`` into an edge, and that edge."""
    x = list(x)
    flips = []
    while -1 not in x:
        for e in range(T.edges):
            if x[e] > 0 and T.is_flippable(e):
                f = _flip_weight(_flip_plan(T, e), x)
                if f < x[e]:
                    break
        else:
            raise NotAnArc(f"{tuple(x)} cannot be flipped to an edge")
        x[e] = f
        flips.append(e)
        T = flip_triangulation(T, e)[0]
    return flips, x.index(-1)


def flip_intersection(T: Triangulation, x: Sequence[int], y: Sequence[int]) -> int:
    """``i(x, y)`` for an arc ``x`` and a single class ``y``.

    Once ``x`` is an edge, its intersection with ``y`` is ``y``'s weight there.
    """
    return flip_intersections(T, x, [y])[0]


def flip_intersections(T: Triangulation, x: Sequence[int], ys: Sequence[Sequence[int]]) -> list[int]:
    """``i(x, y)`` for each ``y``, reusing one flip sequence for the arc ``x``."""
    flips, e = flip_to_edge(T, x)
    plans = []
    for f in flips:
        plans.append(_flip_plan(T, f))
        T = flip_triangulation(T, f)[0]
    out = []
    for y in ys:
        y = list(y)
        for plan in plans:
            y[plan[0]] = _flip_weight(plan, y)
        out.append(max(y[e], 0))
    return out


# -- crossing sequences ----------------------------------------------------

@dataclass(frozen=True, order=True)
class Crossing:
    index_along_a: int
    index_along_b: int
    triangle: int = field(compare=False)
    a_segment: int = field(compare=False)
    b_segment: int = field(compare=False)


def path_crossings(T: Triangulation, A: NormalPath, B: NormalPath, method: str = "auto") -> list[Crossing]:
    """Crossings of an oriented arc ``A`` with ``B`` in order along ``A``.

    ``index_along_b`` counts along ``B`` from its first segment (for a closed
    ``B`` this is the order along one period of a fixed lift).  ``method``
    is ``"global"`` (develop both paths, order by exact nesting keys),
    ``"edge"`` (an edge arc ``A``, ordered by slots along the edge, linear
    time) or ``"auto"``; the methods agree wherever both apply.
    """
    if A.closed:
        raise NotAnArc("crossing sequences need an arc to order along")
    found = [c for c in chains(A, B) if c.crosses]
    if not found:
        return []
    if method == "auto":
        method = "edge" if A.is_edge else "global"
    if method == "global":
        order_a, order_b = _global_orders(T, A, B, found)
    elif method == "edge":
        if not A.is_edge:
            raise ValueError("the edge method needs an edge arc to order along")
        order_a, order_b = _edge_orders(T, A, B, found)
    else:
        raise ValueError(f"unknown method {method!r}")
    rank_b = {i: r + 1 for r, i in enumerate(order_b)}
    out = []
    for r, i in enumerate(order_a):
        c = found[i]
        out.append(Crossing(r + 1, rank_b[i], A.segments[c.p][0], c.p, c.q))
    return out


def _frame_matrix(c: tuple[Vec, Vec, Vec]):
    """Unimodular matrix sending ``(1, 0), (0, 1), (1, 1)`` to the cusps ``c``, up to sign."""
    e0, e1 = _signs(c)
    return ((e0 * c[0][0], e1 * c[1][0]), (e0 * c[0][1], e1 * c[1][1]))


class _Side:
    """One path's developed frame, normalised so that its start is at infinity."""

    def __init__(self, frame: Frame):
        self.frame = frame
        self.norm = to_infinity(frame.start)
        self.end = _real(_apply(self.norm, frame.end))
        self._fwd: dict[int, tuple] = {}
        self._ends: dict[int, tuple[Vec, Vec]] = {}

    def forward(self, i: int):
        """Matrix from the standard triangle to segment ``i``, in normalised coordinates."""
        if i not in self._fwd:
            self._fwd[i] = _mul(self.norm, _frame_matrix(self.frame.at(i)))
        return self._fwd[i]

    def ends_from(self, i: int) -> tuple[Vec, Vec]:
        """This path's ends as seen from the standard triangle placed at segment ``i``."""
        if i not in self._ends:
            inv = _inverse(_frame_matrix(self.frame.at(i)))
            self._ends[i] = (_apply(inv, self.frame.start), _apply(inv, self.frame.end))
        return self._ends[i]

    def key(self, i: int, other: "_Side", j: int):
        """Nesting key of the other path's lift through its segment ``j``, matched at segment ``i``."""
        m = self.forward(i)
        s, t = other.ends_from(j)
        rs, rt = _real(_apply(m, s)), _real(_apply(m, t))
        if rs is None or rt is None:
            raise AssertionError("crossing chain does not separate the developed ends")
        lo, hi = (rs, rt) if rs < rt else (rt, rs)
        if not lo < self.end < hi:
            raise AssertionError("crossing chain does not separate the developed ends")
        return lo, -hi


def _mul(m, n):
    return (
        (m[0][0] * n[0][0] + m[0][1] * n[1][0], m[0][0] * n[0][1] + m[0][1] * n[1][1]),
        (m[1][0] * n[0][0] + m[1][1] * n[1][0], m[1][0] * n[0][1] + m[1][1] * n[1][1]),
    )


def _global_orders(T: Triangulation, A: NormalPath, B: NormalPath, found: list[Chain]):
    pad = len(A) + 2 * len(B) + 2 if B.closed else 0
    sa, sb = _Side(develop(T, A)), _Side(develop(T, B, pad))
    ka = [sa.key(c.p, sb, c.q) for c in found]
    kb = [sb.key(c.q, sa, c.p) for c in found]
    order_a = sorted(range(len(found)), key=ka.__getitem__)
    order_b = sorted(range(len(found)), key=kb.__getitem__)
    return order_a, order_b


def _edge_orders(T: Triangulation, A: NormalPath, B: NormalPath, found: list[Chain]):
    """Orders for an edge arc ``A``, read from the slots of ``B`` on that edge.

    ``A`` runs alongside side ``k`` of its triangle, so each crossing sits
    where ``B`` passes through that side, and the crossings along ``A`` come
    in slot order.  Along ``B`` each crossing is a single segment.
    """
    t, c1, c2 = A.segments[0]
    k = side_between(pos_index(c1), pos_index(c2))
    chords, comps = resolve_paths(T, B.coords(T))
    ids = _align(B, comps[0])
    slot = []
    for c in found:
        ends = chords[ids[c.q]].ends
        slot.append(next(i for pos, i in ends if pos == side_pos(k)))
    ascending = pos_index(c1) == (k - 1) % 3
    order_a = sorted(range(len(found)), key=lambda i: slot[i] if ascending else -slot[i])
    order_b = sorted(range(len(found)), key=lambda i: found[i].q)
    return order_a, order_b


def _align(B: NormalPath, comp: Component) -> list[int]:
    """Chord ids of the segments of ``B``, a traversal of the component ``comp``."""
    ids = [c for c, _ in comp.chords]
    segs = comp.path.segments
    n = len(segs)
    for flip in (False, True):
        seq = B.reversed().segments if flip else B.segments
        if not B.closed:
            r = 0 if seq == segs else None
        else:
            r = _find_rotation(segs + segs, seq, n)
        if r is not None:
            out = [ids[(r + i) % n] for i in range(n)]
            return out[::-1] if flip else out
    raise AssertionError("path is not a traversal of its own coordinates")


def _find_rotation(doubled, seq, n: int) -> int | None:
    tokens: dict = {}
    text = "".join(chr(tokens.setdefault(x, len(tokens))) for x in doubled[: 2 * n - 1])
    pat = "".join(chr(tokens.get(x, len(tokens))) for x in seq)
    r = text.find(pat)
    return None if r < 0 else r


def crossing_sequence(T: Triangulation, x, y, end: int = 0) -> list[Crossing]:
    """Crossings of the arc ``x`` (traversed from its end ``end``) with ``y``.

    ``x`` is an :class:`~arcgraph.surface.OrientedArc`, a normal path, or a
    coordinate vector (then ``end`` picks the orientation).  ``y`` may be an
    arc or a curve; arcs are read in canonical orientation unless given as
    oriented arcs or paths.
    """
    A = _as_path(T, x, end)
    B = _as_path(T, y, 0)
    if A.closed:
        raise NotAnArc("x is a closed curve")
    return path_crossings(T, A, B)


def _as_path(T: Triangulation, x, end: int) -> NormalPath:
    if isinstance(x, NormalPath):
        return x
    if hasattr(x, "coords") and hasattr(x, "end"):
        return x.path(T)
    p = canonical_path(T, x)
    return p.reversed() if end == 1 and not p.closed else p


def crossings_csv(crossings: Sequence[Crossing]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["a_ordinal", "b_ordinal", "triangle"])
    for c in crossings:
        w.writerow([c.index_along_a, c.index_along_b, c.triangle])
    return buf.getvalue()


# -- route 3: explicit overlay and bigon removal ---------------------------

@dataclass
class Overlay:
    """Two diagrams drawn together with explicit strand orders.

    ``edge_order[e]`` lists strand ends ``(d, t, k, slot)`` crossing edge
    ``e`` in the order read along the first side of ``e`` (``d`` is 0 for the
    first diagram, 1 for the second).  ``corner_order[(t, c)]`` lists the
    ends ``(d, chord)`` at a corner in counterclockwise angular order.
    """

    T: Triangulation
    diagrams: tuple[CurveDiagram, CurveDiagram]
    edge_order: dict[int, list[tuple[int, int]]]
    corner_order: dict[tuple[int, int], list[tuple[int, int]]]
    _chord_at: list[dict] = field(default_factory=list, repr=False)

    def crossings(self) -> list[tuple[int, int]]:
        """Pairs ``(chord of d_a, chord of d_b)`` that cross."""
        out = []
        for t in range(self.T.F):
            ca = [i for i, ch in enumerate(self.diagrams[0].chords) if ch.t == t]
            cb = [i for i, ch in enumerate(self.diagrams[1].chords) if ch.t == t]
            if not ca or not cb:
                continue
            for i in ca:
                a0, a1 = self.fine(0, i)
                for j in cb:
                    b0, b1 = self.fine(1, j)
                    if _interleave_fine(a0, a1, b0, b1):
                        out.append((i, j))
        return out

    def fine(self, d: int, cid: int) -> tuple[tuple, tuple]:
        ch = self.diagrams[d].chords[cid]
        return tuple(self._fine_end(d, cid, ch.t, end) for end in ch.ends)

    def _fine_end(self, d: int, cid: int, t: int, end) -> tuple:
        pos, idx = end
        if is_corner(pos):
            order = self.corner_order[(t, pos_index(pos))]
            return (pos, order.index((d, cid)))
        k = pos_index(pos)
        e = self.T.edge(t, k)
        order = self.edge_order[e]
        if self.T.edge_slots(e)[0] == (t, k):
            return (pos, order.index((d, idx)))
        w = self.diagrams[d].coords[e]
        return (pos, len(order) - 1 - order.index((d, w - 1 - idx)))


def _interleave_fine(a0, a1, b0, b1) -> bool:
    if len({a0, a1, b0, b1}) < 4:
        return False
    return (_between(a0, b0, a1)) != (_between(a0, b1, a1))


def _between(lo, x, hi) -> bool:
    """Whether ``x`` lies strictly on the ccw arc from ``lo`` to ``hi``."""
    return lo < x < hi if lo < hi else (x > lo or x < hi)


def _with_edge_chords(dg: CurveDiagram) -> tuple[CurveDiagram, set[int]]:
    """Add a chord for an edge-parallel component, pushed into its first triangle.

    Its corner ends get extreme angular ranks so that they hug the side.
    """
    extra = []
    for comp in dg.components:
        if not comp.path.is_edge:
            continue
        t, a, b = comp.path.segments[0]
        k = side_between(pos_index(a), pos_index(b))
        ends = []
        for pos in (a, b):
            # side k follows its start corner counterclockwise
            ends.append((pos, 10 ** 9 if pos_index(pos) == corners_of_side(k)[0] else -1))
        extra.append(Chord(t, tuple(ends)))
    if not extra:
        return dg, set()
    ids = set(range(len(dg.chords), len(dg.chords) + len(extra)))
    return CurveDiagram(dg.T, dg.coords, dg.chords + tuple(extra), dg.components), ids


def overlay(d_a: CurveDiagram, d_b: CurveDiagram, rng: random.Random | None = None) -> Overlay:
    """Draw two diagrams together.

    Without ``rng`` the strands of ``d_a`` precede those of ``d_b`` on every
    edge and at every corner; with ``rng`` both orders are uniform random
    shuffles.  An edge-parallel component is drawn just inside the first
    triangle on its edge and keeps the extreme angular place at its corners.
    """
    T = d_a.T
    (d_a, pin_a), (d_b, pin_b) = _with_edge_chords(d_a), _with_edge_chords(d_b)
    pinned = {(0, i) for i in pin_a} | {(1, i) for i in pin_b}
    edge_order = {}
    for e in range(T.edges):
        na = max(d_a.coords[e], 0)
        nb = max(d_b.coords[e], 0)
        edge_order[e] = _shuffle([(0, i) for i in range(na)], [(1, i) for i in range(nb)], rng)
    corner_order = {}
    for t in range(T.F):
        for c in range(3):
            ends = []
            low, high = [], []
            for d, dg in enumerate((d_a, d_b)):
                at = []
                for cid, ch in enumerate(dg.chords):
                    if ch.t != t:
                        continue
                    for pos, idx in ch.ends:
                        if pos != corner_pos(c):
                            continue
                        if (d, cid) in pinned:
                            (low if idx < 0 else high).append((d, cid))
                        else:
                            at.append((idx, (d, cid)))
                ends.append([v for _, v in sorted(at)])
            corner_order[(t, c)] = low + _shuffle(ends[0], ends[1], rng) + high
    return Overlay(T, (d_a, d_b), edge_order, corner_order)


def _shuffle(xs: list, ys: list, rng: random.Random | None) -> list:
    if rng is None:
        return list(xs) + list(ys)
    flags = [0] * len(xs) + [1] * len(ys)
    rng.shuffle(flags)
    it = (iter(xs), iter(ys))
    return [next(it[f]) for f in flags]


def tighten(ov: Overlay, max_steps: int | None = None) -> tuple[Overlay, list[tuple[int, int]], int]:
    """Remove innermost bigons and half-bigons until none remain.

    Returns the overlay (modified in place), its final crossings and the
    number of removals performed.  Each removal lowers the crossing count by
    two (bigon) or one (half-bigon).
    """
    steps = 0
    while True:
        found = _find_bigon(ov)
        if found is None:
            return ov, ov.crossings(), steps
        _remove(ov, found)
        steps += 1
        if max_steps is not None and steps > max_steps:
            raise AssertionError("bigon removal did not terminate")


def _tokens(ov: Overlay, t: int) -> list[tuple]:
    """Counterclockwise boundary of triangle ``t`` as a token list.

    Tokens are fine ends ``(pos, rank)`` and ``("H", c)`` markers standing
    for stretches of the horocycle at corner ``c``.
    """
    out: list[tuple] = []
    for k in range(3):
        e = ov.T.edge(t, k)
        for r in range(len(ov.edge_order[e])):
            out.append((side_pos(k), r))
        n = len(ov.corner_order[(t, k)])
        out.append(("H", k))
        for r in range(n):
            out.append((corner_pos(k), r))
            out.append(("H", k))
    return out


def _arc(tokens: list, i: int, j: int) -> list:
    """Tokens strictly between indices ``i`` and ``j`` going forward."""
    n = len(tokens)
    out = []
    x = (i + 1) % n
    while x != j:
        out.append(tokens[x])
        x = (x + 1) % n
    return out


def _fine_to_strand(ov: Overlay, t: int, fine: tuple) -> tuple[int, int, int]:
    """``(diagram, chord, end)`` owning a fine end of triangle ``t``."""
    pos, r = fine
    if is_corner(pos):
        d, cid = ov.corner_order[(t, pos_index(pos))][r]
        ch = ov.diagrams[d].chords[cid]
        for end, (p2, _) in enumerate(ch.ends):
            if p2 == pos:
                return d, cid, end
    k = pos_index(pos)
    e = ov.T.edge(t, k)
    order = ov.edge_order[e]
    first = ov.T.edge_slots(e)[0] == (t, k)
    d, slot = order[r if first else len(order) - 1 - r]
    if not first:
        slot = ov.diagrams[d].coords[e] - 1 - slot
    for cid, ch in enumerate(ov.diagrams[d].chords):
        if ch.t != t:
            continue
        for end, (p2, idx) in enumerate(ch.ends):
            if p2 == pos and idx == slot:
                return d, cid, end
    raise AssertionError("dangling strand end")


def _across(ov: Overlay, t: int, fine: tuple) -> tuple[int, tuple]:
    """The same strand end seen from the triangle across its side."""
    pos, r = fine
    k = pos_index(pos)
    t2, j = ov.T.glue(t, k)
    n = len(ov.edge_order[ov.T.edge(t, k)])
    return t2, (side_pos(j), n - 1 - r)


def _find_bigon(ov: Overlay):
    for ia, ib in ov.crossings():
        fa = ov.fine(0, ia)
        fb = ov.fine(1, ib)
        t = ov.diagrams[0].chords[ia].t
        toks = _tokens(ov, t)
        index = {tok: n for n, tok in enumerate(toks)}
        pts = sorted([(index[fa[0]], 0), (index[fa[1]], 0), (index[fb[0]], 1), (index[fb[1]], 1)])
        for n in range(4):
            (i, di), (j, dj) = pts[n], pts[(n + 1) % 4]
            walk = _walk(ov, t, toks[i], toks[j], _arc(toks, i, j))
            if walk is not None:
                return walk
    return None


def _walk(ov: Overlay, t: int, p: tuple, q: tuple, between: list):
    """Follow two adjacent strand ends outward looking for a bigon.

    ``p`` and ``q`` are fine ends in triangle ``t`` (ccw from ``p`` to ``q``
    with ``between`` the tokens in between).  Returns the list of edges and
    corners whose orders must be swapped, or ``None``.
    """
    swaps = []
    seen = set()
    while True:
        if between == [("H", pos_index(p[0]))] and is_corner(p[0]) and p[0] == q[0]:
            swaps.append(("corner", t, p, q))
            return swaps
        if between or is_corner(p[0]) or is_corner(q[0]) or p[0] != q[0]:
            return None
        swaps.append(("edge", t, p, q))
        key = (t, p, q)
        if key in seen:
            return None
        seen.add(key)
        # step across the shared side into the next triangle
        t2, p_in = _across(ov, t, p)
        _, q_in = _across(ov, t, q)
        dp, cp, ep = _fine_to_strand(ov, t2, p_in)
        dq, cq, eq = _fine_to_strand(ov, t2, q_in)
        p_out = ov.fine(dp, cp)[1 - ep]
        q_out = ov.fine(dq, cq)[1 - eq]
        ends_p = (p_in, p_out)
        ends_q = (q_in, q_out)
        if dp != dq and _interleave_fine(ends_p[0], ends_p[1], ends_q[0], ends_q[1]):
            return swaps
        toks = _tokens(ov, t2)
        index = {tok: n for n, tok in enumerate(toks)}
        # across the edge q_in precedes p_in, so the far side of the strip
        # runs counterclockwise from p_out to q_out
        between = _arc(toks, index[p_out], index[q_out])
        t, p, q = t2, p_out, q_out


def _remove(ov: Overlay, swaps) -> None:
    for kind, t, p, q in swaps:
        if kind == "edge":
            k = pos_index(p[0])
            e = ov.T.edge(t, k)
            order = ov.edge_order[e]
            rp, rq = p[1], q[1]
            if ov.T.edge_slots(e)[0] != (t, k):
                rp, rq = len(order) - 1 - rp, len(order) - 1 - rq
            order[rp], order[rq] = order[rq], order[rp]
        else:
            order = ov.corner_order[(t, pos_index(p[0]))]
            order[p[1]], order[q[1]] = order[q[1]], order[p[1]]


def realized_intersection(T: Triangulation, x, y, rng: random.Random | None = None) -> int:
    """Crossing count after overlaying and tightening (independent route)."""
    ov = overlay(resolve(T, x), resolve(T, y), rng)
    _, cr, _ = tighten(ov, max_steps=10 ** 6)
    return len(cr)
