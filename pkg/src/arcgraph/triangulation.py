"""Ideal triangulations of punctured surfaces.

A triangle is a triple of sides listed counterclockwise.  Side ``k`` of a
triangle runs from corner ``k - 1`` to corner ``k``; corner ``k`` sits between
sides ``k`` and ``k + 1`` and is opposite side ``k - 1``.  Each side carries an
``(edge, flag)`` descriptor where ``flag`` is the orientation sign of the edge
as seen from the triangle; the two sides glued along one edge carry opposite
flags.

Positions on the boundary circle of a triangle are encoded as integers in
``range(6)``: side ``k`` is ``2 * k`` and corner ``k`` is ``2 * k + 1``, so the
counterclockwise cyclic order is side 0, corner 0, side 1, corner 1, side 2,
corner 2.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from .errors import EdgeDegree, MalformedInput, NonNegativeChi, NotFlippable

Slot = tuple[int, int]  # (triangle, side)
Corner = tuple[int, int]  # (triangle, corner)


def side_pos(k: int) -> int:
    return 2 * (k % 3)


def corner_pos(k: int) -> int:
    return 2 * (k % 3) + 1


def is_corner(pos: int) -> bool:
    return pos % 2 == 1


def pos_index(pos: int) -> int:
    return pos // 2


def corners_of_side(k: int) -> tuple[int, int]:
    """Corners at the two ends of side ``k`` (start, end) in ccw order."""
    return ((k - 1) % 3, k % 3)


def side_between(c1: int, c2: int) -> int:
    """The side joining two distinct corners of a triangle."""
    for k in range(3):
        if set(corners_of_side(k)) == {c1 % 3, c2 % 3}:
            return k
    raise ValueError("corners must be distinct")


def opposite_corner(k: int) -> int:
    return (k + 1) % 3


def corner_adjacent(c: int, k: int) -> bool:
    """Whether corner ``c`` is an endpoint of side ``k``."""
    return (k - c) % 3 in (0, 1)


@dataclass(frozen=True)
class Triangulation:
    edges: int
    triangles: tuple[tuple[tuple[int, int], tuple[int, int], tuple[int, int]], ...]
    _slots: tuple[tuple[Slot, Slot], ...] = field(repr=False, compare=False, default=())

    @property
    def F(self) -> int:
        return len(self.triangles)

    @property
    def E(self) -> int:
        return self.edges

    @cached_property
    def P(self) -> int:
        return len(puncture_classes(self))

    @property
    def euler_characteristic(self) -> int:
        """Euler characteristic of the punctured surface, ``F - E``."""
        return self.F - self.E

    @cached_property
    def genus(self) -> int:
        # 2 - 2g = P - E + F on the filled-in closed surface
        return (2 - (self.P - self.E + self.F)) // 2

    def edge(self, t: int, k: int) -> int:
        return self.triangles[t][k % 3][0]

    def edge_slots(self, e: int) -> tuple[Slot, Slot]:
        return self._slots[e]

    def glue(self, t: int, k: int) -> Slot:
        """The slot glued to side ``k`` of triangle ``t``."""
        s0, s1 = self._slots[self.edge(t, k)]
        return s1 if s0 == (t, k % 3) else s0

    def corner_across(self, t: int, k: int, c: int) -> Corner:
        """Image of corner ``c`` (an endpoint of side ``k``) across that side."""
        t2, j = self.glue(t, k)
        if c % 3 == k % 3:
            return t2, (j - 1) % 3
        if c % 3 == (k - 1) % 3:
            return t2, j % 3
        raise ValueError("corner is not on the side")

    def edge_labels(self) -> tuple[tuple[int, int, int], ...]:
        return tuple(tuple(s[0] for s in tri) for tri in self.triangles)

    def to_json(self) -> dict:
        return {
            "format": 1,
            "edges": self.edges,
            "triangles": [[list(s) for s in tri] for tri in self.triangles],
        }

    def is_flippable(self, e: int) -> bool:
        (t1, _), (t2, _) = self._slots[e]
        return t1 != t2

    def relabel(self, perm: Sequence[int]) -> "Triangulation":
        """Rename edge ``i`` to ``perm[i]``."""
        return _build(self.edges, [[(perm[s[0]], s[1]) for s in tri] for tri in self.triangles])

    def canonical_form(self) -> tuple:
        """Triangles as edge-label triples up to rotation and ordering."""
        rots = []
        for tri in self.edge_labels():
            rots.append(min(tri[i:] + tri[:i] for i in range(3)))
        return tuple(sorted(rots))


def _build(edges: int, triangles: Iterable[Iterable[tuple[int, int]]]) -> Triangulation:
    tris = tuple(tuple((int(e), int(f)) for e, f in tri) for tri in triangles)
    slots: list[list[Slot]] = [[] for _ in range(edges)]
    for t, tri in enumerate(tris):
        for k, (e, _) in enumerate(tri):
            slots[e].append((t, k))
    return Triangulation(edges, tris, tuple((s[0], s[1]) for s in slots))


def validate_triangulation(raw) -> Triangulation:
    """Check a raw description and return a :class:`Triangulation`.

    ``raw`` is either a mapping with ``edges`` and ``triangles`` keys (the file
    format) or a plain sequence of triangles.  Sides may be given as
    ``[edge, flag]`` pairs or bare edge indices; bare indices get flag ``+1`` on
    the first occurrence and ``-1`` on the second.
    """
    try:
        if isinstance(raw, dict):
            fmt = raw.get("format", 1)
            if fmt != 1:
                raise MalformedInput(f"unsupported format {fmt!r}")
            triangles = raw["triangles"]
            edges = raw.get("edges")
        else:
            triangles, edges = raw, None
        tris = []
        seen: dict[int, int] = {}
        for tri in triangles:
            tri = list(tri)
            if len(tri) != 3:
                raise MalformedInput("every triangle needs exactly three sides")
            sides = []
            for s in tri:
                if isinstance(s, (list, tuple)):
                    if len(s) != 2:
                        raise MalformedInput(f"bad side descriptor {s!r}")
                    e, f = int(s[0]), int(s[1])
                else:
                    e = int(s)
                    f = 1 if seen.get(e, 0) == 0 else -1
                if f not in (1, -1):
                    raise MalformedInput(f"side flag must be +1 or -1, got {f}")
                if e < 0:
                    raise MalformedInput(f"negative edge index {e}")
                seen[e] = seen.get(e, 0) + 1
                sides.append((e, f))
            tris.append(sides)
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedInput(str(exc)) from exc
    if not tris:
        raise NonNegativeChi("empty triangulation has chi = 0")
    if edges is None:
        edges = max(seen) + 1
    edges = int(edges)
    for e in range(edges):
        if seen.get(e, 0) != 2:
            raise EdgeDegree(f"edge {e} is used {seen.get(e, 0)} times")
    for e in seen:
        if e >= edges:
            raise EdgeDegree(f"edge {e} is out of range")
    for e in range(edges):
        flags = [s[1] for tri in tris for s in tri if s[0] == e]
        if flags[0] == flags[1]:
            raise MalformedInput(f"edge {e} is glued with equal flags (non-orientable)")
    if 3 * len(tris) != 2 * edges:
        raise EdgeDegree("3F != 2E")
    T = _build(edges, tris)
    if T.euler_characteristic >= 0:
        raise NonNegativeChi(f"chi = {T.euler_characteristic}")
    _check_connected(T)
    return T


def _check_connected(T: Triangulation) -> None:
    seen = {0}
    stack = [0]
    while stack:
        t = stack.pop()
        for k in range(3):
            t2, _ = T.glue(t, k)
            if t2 not in seen:
                seen.add(t2)
                stack.append(t2)
    if len(seen) != T.F:
        raise MalformedInput("triangulation is disconnected")


def puncture_classes(T: Triangulation) -> tuple[tuple[Corner, ...], ...]:
    """Partition of triangle corners into vertex classes (punctures).

    Classes are listed in order of their smallest corner and each class lists
    its corners in counterclockwise order around the puncture, starting from
    its smallest corner.
    """
    done: set[Corner] = set()
    classes = []
    for t in range(T.F):
        for c in range(3):
            if (t, c) in done:
                continue
            cyc = []
            cur = (t, c)
            while cur not in done:
                done.add(cur)
                cyc.append(cur)
                # rotate counterclockwise around the vertex: cross side c + 1
                ct, cc = cur
                cur = T.corner_across(ct, cc + 1, cc)
            if cur != (t, c):
                raise MalformedInput("corner cycle does not close")
            classes.append(tuple(cyc))
    return tuple(classes)


def puncture_of(T: Triangulation) -> dict[Corner, int]:
    return {c: i for i, cls in enumerate(puncture_classes(T)) for c in cls}


@dataclass(frozen=True)
class FlipData:
    """Bookkeeping for rewriting paths through a flip.

    ``old`` and ``new`` map ``(triangle, position)`` in the flipped
    quadrilateral to labels ``a b c d`` (boundary sides), ``P0..P3``
    (corners) or ``e`` (the diagonal).
    """

    edge: int
    t: int
    t2: int
    old: dict
    new_pos: dict  # label -> list of (triangle, position)


def flip_triangulation(T: Triangulation, e: int) -> tuple[Triangulation, FlipData]:
    if not 0 <= e < T.edges:
        raise NotFlippable(f"no edge {e}")
    (t, i), (t2, j) = T.edge_slots(e)
    if t == t2:
        raise NotFlippable(f"edge {e} is a side of a single triangle twice")
    tri, tri2 = T.triangles[t], T.triangles[t2]
    A, B = tri[(i + 1) % 3], tri[(i + 2) % 3]
    C, D = tri2[(j + 1) % 3], tri2[(j + 2) % 3]
    U = (B, C, (e, 1))
    V = (D, A, (e, -1))
    tris = list(T.triangles)
    tris[t], tris[t2] = U, V
    new = _build(T.edges, tris)
    old = {
        (t, side_pos(i)): "e",
        (t, side_pos(i + 1)): "a",
        (t, side_pos(i + 2)): "b",
        (t, corner_pos(i)): "P0",
        (t, corner_pos(i + 1)): "P1",
        (t, corner_pos(i + 2)): "P2",
        (t2, side_pos(j)): "e",
        (t2, side_pos(j + 1)): "c",
        (t2, side_pos(j + 2)): "d",
        (t2, corner_pos(j)): "P2",
        (t2, corner_pos(j + 1)): "P3",
        (t2, corner_pos(j + 2)): "P0",
    }
    new_pos: dict[str, list] = {}
    for tt, labels in ((t, ("b", "P2", "c", "P3", "e", "P1")), (t2, ("d", "P0", "a", "P1", "e", "P3"))):
        for pos, lab in enumerate(labels):
            new_pos.setdefault(lab, []).append((tt, pos))
    return new, FlipData(e, t, t2, old, new_pos)
