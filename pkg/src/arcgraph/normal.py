"""Normal paths: arcs and curves as sequences of triangle segments.

A segment ``(t, pin, pout)`` crosses triangle ``t`` from boundary position
``pin`` to ``pout`` (see :mod:`arcgraph.triangulation` for the encoding).  An
arc starts and ends at corners; a closed curve is a cyclic sequence of
side-to-side segments.  A path is *normal* when no segment enters and leaves
through the same side and every corner segment runs to the opposite side.
Normal paths lift to geodesics of the dual tree of the lifted triangulation,
so each isotopy class has exactly one normal path (up to reversal and, for
curves, rotation).  A class equal to a triangulation edge is the single
segment running between the two corners of that side.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import DomainError, EdgeParallelAmbiguity, Unrealizable
from .triangulation import (
    FlipData,
    Triangulation,
    corner_adjacent,
    corner_pos,
    corners_of_side,
    flip_triangulation,
    is_corner,
    pos_index,
    side_between,
    side_pos,
)

Segment = tuple[int, int, int]


class InessentialPath(DomainError):
    """A path that reduces to a point (trivial arc or null-homotopic loop)."""


@dataclass(frozen=True)
class NormalPath:
    segments: tuple[Segment, ...]
    closed: bool = False

    def __len__(self) -> int:
        return len(self.segments)

    @property
    def is_arc(self) -> bool:
        return not self.closed

    @property
    def is_edge(self) -> bool:
        return not self.closed and len(self.segments) == 1 and is_corner(self.segments[0][2])

    def reversed(self) -> "NormalPath":
        return NormalPath(tuple((t, b, a) for t, a, b in reversed(self.segments)), self.closed)

    def start_corner(self) -> tuple[int, int]:
        t, p, _ = self.segments[0]
        return t, pos_index(p)

    def end_corner(self) -> tuple[int, int]:
        t, _, p = self.segments[-1]
        return t, pos_index(p)

    def coords(self, T: Triangulation) -> tuple[int, ...]:
        w = [0] * T.edges
        if self.is_edge:
            t, a, b = self.segments[0]
            w[T.edge(t, side_between(pos_index(a), pos_index(b)))] = -1
            return tuple(w)
        for t, _, pout in self.segments:
            if not is_corner(pout):
                w[T.edge(t, pos_index(pout))] += 1
        return tuple(w)


def _edge_path(T: Triangulation, t: int, c1: int, c2: int) -> NormalPath:
    """Canonical edge arc along the side joining corners c1, c2 of t."""
    k = side_between(c1, c2)
    e = T.edge(t, k)
    t0, k0 = T.edge_slots(e)[0]
    if (t0, k0) != (t, k):
        c1t, c1c = T.corner_across(t, k, c1)
        c2t, c2c = T.corner_across(t, k, c2)
        assert c1t == c2t == t0
        t, c1, c2 = t0, c1c, c2c
    return NormalPath(((t, corner_pos(c1), corner_pos(c2)),))


def reduce_path(T: Triangulation, segs: Sequence[Segment], closed: bool = False) -> NormalPath:
    """Pull a connected sequence of segments tight into its normal path."""
    if not segs:
        raise InessentialPath("empty path")
    if closed:
        gates = [(t, pos_index(pout)) for t, _, pout in segs]
        gates = _free_reduce(T, gates)
        while len(gates) >= 2 and gates[0] == T.glue(*gates[-1]):
            gates = gates[1:-1]
        if not gates:
            raise InessentialPath("null-homotopic loop")
        out = []
        for i, (t, k) in enumerate(gates):
            pt, pk = T.glue(*gates[i - 1])
            assert pt == t
            out.append((t, side_pos(pk), side_pos(k)))
        return NormalPath(tuple(out), True)

    t0, p0, _ = segs[0]
    tl, _, pl = segs[-1]
    if not (is_corner(p0) and is_corner(pl)):
        raise ValueError("an arc path must start and end at corners")
    start = (t0, pos_index(p0))
    end = (tl, pos_index(pl))
    gates = [(t, pos_index(pout)) for t, _, pout in segs[:-1]]
    gates = _free_reduce(T, gates)
    while gates and gates[0][0] == start[0] and corner_adjacent(start[1], gates[0][1]):
        start = T.corner_across(gates[0][0], gates[0][1], start[1])
        gates = gates[1:]
    while gates:
        t2, j = T.glue(*gates[-1])
        if t2 == end[0] and corner_adjacent(end[1], j):
            end = T.corner_across(t2, j, end[1])
            gates = gates[:-1]
        else:
            break
    if not gates:
        if start[0] != end[0]:
            raise AssertionError("broken path")
        if start[1] == end[1]:
            raise InessentialPath("arc is isotopic into a puncture")
        return _edge_path(T, start[0], start[1], end[1])
    out = []
    cur_t, cur_p = start[0], corner_pos(start[1])
    for t, k in gates:
        assert t == cur_t, "gates are not connected"
        out.append((t, cur_p, side_pos(k)))
        cur_t, j = T.glue(t, k)
        cur_p = side_pos(j)
    assert cur_t == end[0]
    out.append((cur_t, cur_p, corner_pos(end[1])))
    return NormalPath(tuple(out))


def _free_reduce(T: Triangulation, gates: Iterable[tuple[int, int]]) -> list[tuple[int, int]]:
    stack: list[tuple[int, int]] = []
    for g in gates:
        if stack and g == T.glue(*stack[-1]):
            stack.pop()
        else:
            stack.append(g)
    return stack


def is_peripheral(T: Triangulation, path: NormalPath) -> bool:
    """Whether a normal closed curve is the boundary of a puncture neighbourhood."""
    if not path.closed:
        return False
    turn = None
    for t, a, b in path.segments:
        ka, kb = pos_index(a), pos_index(b)
        # side k and side k + 1 meet at corner k
        if (kb - ka) % 3 == 1:
            d = 1
        else:
            d = -1
        if turn is None:
            turn = d
        elif turn != d:
            return False
    return True


# -- resolving coordinates -------------------------------------------------

@dataclass(frozen=True)
class Chord:
    """A strand inside one triangle, between two fine positions.

    A fine position is ``(pos, index)``: for a side, ``index`` counts slots
    counterclockwise along the side; for a corner it is the angular rank of
    the strand end, counterclockwise around the triangle boundary.
    """

    t: int
    ends: tuple[tuple[int, int], tuple[int, int]]


@dataclass(frozen=True)
class Component:
    path: NormalPath
    chords: tuple[tuple[int, int], ...]  # (chord id, direction) in traversal order

    @property
    def kind(self) -> str:
        return "curve" if self.path.closed else "arc"


@dataclass(frozen=True)
class Decomposition:
    turns: tuple[int, int, int]  # turns around corner k
    vertex_corner: int | None
    vertex_count: int


def triangle_decomposition(w: Sequence[int]) -> Decomposition:
    for k in range(3):
        excess = w[k] - w[(k + 1) % 3] - w[(k + 2) % 3]
        if excess > 0:
            turns = [0, 0, 0]
            turns[k] = w[(k + 1) % 3]
            turns[(k + 2) % 3] = w[(k + 2) % 3]
            return Decomposition(tuple(turns), (k + 1) % 3, excess)
    if sum(w) % 2:
        raise Unrealizable(f"side weights {tuple(w)} have odd sum")
    turns = tuple((w[k] + w[(k + 1) % 3] - w[(k + 2) % 3]) // 2 for k in range(3))
    return Decomposition(turns, None, 0)


def resolve_paths(T: Triangulation, x: Sequence[int]) -> tuple[list[Chord], list[Component]]:
    """Build the chords of the normal multiarc/multicurve with weights ``x``.

    Returns the chords and the connected components in canonical order:
    arcs first (ordered by their smallest end), each traced from its smallest
    end, then closed curves.  An edge-parallel component (weight ``-1``)
    comes last among the arcs.
    """
    if len(x) != T.edges:
        raise Unrealizable(f"expected {T.edges} weights, got {len(x)}")
    if any(v < -1 for v in x):
        raise Unrealizable("weights must be >= -1")
    parallel = [e for e, v in enumerate(x) if v == -1]
    if len(parallel) > 1:
        raise EdgeParallelAmbiguity("at most one weight may be -1")
    w = [max(v, 0) for v in x]

    chords: list[Chord] = []
    at: dict[tuple[int, int, int], tuple[int, int]] = {}  # (t, side, slot) -> (chord, end)
    vertex_ends: list[tuple[tuple, int]] = []
    for t in range(T.F):
        sw = [w[T.edge(t, k)] for k in range(3)]
        dec = triangle_decomposition(sw)
        for k in range(3):
            # turns around corner k join side k (last slots) and side k+1 (first slots)
            for r in range(dec.turns[k]):
                end_a = (side_pos(k), sw[k] - 1 - r)
                end_b = (side_pos(k + 1), r)
                cid = len(chords)
                chords.append(Chord(t, (end_a, end_b)))
                at[(t, k, sw[k] - 1 - r)] = (cid, 0)
                at[(t, (k + 1) % 3, r)] = (cid, 1)
        if dec.vertex_count:
            c = dec.vertex_corner
            k = (c - 1) % 3  # opposite side
            first = dec.turns[(k - 1) % 3]
            n = dec.vertex_count
            for r in range(n):
                slot = first + r
                # ends further along the side sit earlier in the angular order at the corner
                cid = len(chords)
                chords.append(Chord(t, ((corner_pos(c), n - 1 - r), (side_pos(k), slot))))
                at[(t, k, slot)] = (cid, 1)
                vertex_ends.append(((t, c, n - 1 - r), cid))

    def partner(t: int, k: int, slot: int) -> tuple[int, int]:
        t2, j = T.glue(t, k)
        return at[(t2, j, w[T.edge(t, k)] - 1 - slot)]

    used = [False] * len(chords)
    comps: list[Component] = []
    for _, cid in sorted(vertex_ends):
        if used[cid]:
            continue
        seq = []
        cur, d = cid, 0
        while True:
            used[cur] = True
            seq.append((cur, d))
            ch = chords[cur]
            pos, slot = ch.ends[1 - d]
            if is_corner(pos):
                break
            cur, d = partner(ch.t, pos_index(pos), slot)
        segs = tuple((chords[c].t, chords[c].ends[d][0], chords[c].ends[1 - d][0]) for c, d in seq)
        comps.append(Component(NormalPath(segs), tuple(seq)))
    for e in parallel:
        t, k = T.edge_slots(e)[0]
        c1, c2 = corners_of_side(k)
        comps.append(Component(_edge_path(T, t, c1, c2), ()))
    for cid in range(len(chords)):
        if used[cid]:
            continue
        seq = []
        cur, d = cid, 0
        while not used[cur]:
            used[cur] = True
            seq.append((cur, d))
            ch = chords[cur]
            pos, slot = ch.ends[1 - d]
            cur, d = partner(ch.t, pos_index(pos), slot)
        if (cur, d) != seq[0]:
            raise AssertionError("closed strand did not close consistently")
        segs = tuple((chords[c].t, chords[c].ends[d][0], chords[c].ends[1 - d][0]) for c, d in seq)
        comps.append(Component(NormalPath(segs, True), tuple(seq)))
    return chords, comps


def canonical_path(T: Triangulation, x: Sequence[int]) -> NormalPath:
    """The normal path of a single-component class, in canonical orientation."""
    _, comps = resolve_paths(T, x)
    if len(comps) != 1:
        raise Unrealizable(f"coordinates describe {len(comps)} components, expected 1")
    return comps[0].path


def same_path(p: NormalPath, q: NormalPath) -> bool:
    """Equality of normal paths up to rotation for closed curves."""
    if p.closed != q.closed or len(p) != len(q):
        return False
    if not p.closed:
        return p.segments == q.segments
    n = len(p)
    s = p.segments
    return any(s[i:] + s[:i] == q.segments for i in range(n))


def orient_like(T: Triangulation, path: NormalPath) -> tuple[NormalPath, int]:
    """Express ``path`` through its canonical orientation.

    Returns ``(canonical path, end)`` where ``end`` is 0 when ``path`` starts
    at the canonical first end and 1 when it starts at the other end.
    """
    canon = canonical_path(T, path.coords(T))
    if canon.segments == path.segments:
        return canon, 0
    if canon.reversed().segments == path.segments:
        return canon, 1
    raise AssertionError("path is not normal")


# -- flips ---------------------------------------------------------------

def rewrite_through_flip(T: Triangulation, flip: FlipData, path: NormalPath, new_T: Triangulation) -> NormalPath:
    """The normal path in the flipped triangulation of the same class."""
    segs = list(path.segments)
    Q = (flip.t, flip.t2)
    if path.closed:
        n = len(segs)
        start = 0
        for i in range(n):
            pt, _, pp = segs[i - 1]
            if not (pt in Q and flip.old[(pt, pp)] == "e"):
                start = i
                break
        segs = segs[start:] + segs[:start]
    out: list[Segment] = []
    i = 0
    while i < len(segs):
        t, pin, pout = segs[i]
        if t not in Q:
            out.append((t, pin, pout))
            i += 1
            continue
        entry = flip.old[(t, pin)]
        j = i
        while flip.old[(segs[j][0], segs[j][2])] == "e":
            j += 1
        exit_ = flip.old[(segs[j][0], segs[j][2])]
        out.extend(_route(flip, entry, exit_))
        i = j + 1
    return reduce_path(new_T, out, path.closed)


def _route(flip: FlipData, entry: str, exit_: str) -> list[Segment]:
    where_in = dict(flip.new_pos[entry])
    where_out = dict(flip.new_pos[exit_])
    for tt in (flip.t, flip.t2):
        if tt in where_in and tt in where_out:
            return [(tt, where_in[tt], where_out[tt])]
    (ta, pa), = where_in.items()
    (tb, pb), = where_out.items()
    return [(ta, pa, dict(flip.new_pos["e"])[ta]), (tb, dict(flip.new_pos["e"])[tb], pb)]


def flip_path(T: Triangulation, e: int, path: NormalPath) -> tuple[Triangulation, NormalPath]:
    new_T, data = flip_triangulation(T, e)
    return new_T, rewrite_through_flip(T, data, path, new_T)


def relabel_path(path: NormalPath) -> NormalPath:
    # positions are local to triangles, so edge relabelling leaves paths unchanged
    return path
