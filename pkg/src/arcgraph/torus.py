"""The once-punctured torus S_{1,1} and its slope arithmetic.

The bundled triangulation is the lattice picture: triangle 0 is the
lower-right half of the unit square, triangle 1 the upper-left half, and
edges 0, 1, 2 are the slopes 0/1, 1/0 and 1/1.  A slope ``p/q`` is the arc
(or curve) in direction ``(q, p)``.  Developing a normal path into the plane
recovers its displacement vector, which gives an oracle for slopes that is
independent of the coordinate formulas.
"""

from __future__ import annotations

from functools import lru_cache
from math import gcd
from typing import Sequence

from .errors import DomainError
from .normal import NormalPath, canonical_path, is_corner, pos_index
from .surface import Surface, apply_to_path, builtin_surface
from .triangulation import Triangulation

Slope = tuple[int, int]  # (p, q) with gcd 1, q > 0 or (1, 0)

_CORNERS = {0: ((1, 0), (1, 1), (0, 0)), 1: ((1, 1), (0, 1), (0, 0))}
_STEP = {
    (0, 0): (1, (0, -1)),
    (0, 1): (1, (1, 0)),
    (0, 2): (1, (0, 0)),
    (1, 0): (0, (0, 0)),
    (1, 1): (0, (0, 1)),
    (1, 2): (0, (-1, 0)),
}


@lru_cache(maxsize=None)
def punctured_torus() -> Surface:
    return builtin_surface("s11")


def normalize(p: int, q: int) -> Slope:
    g = gcd(p, q)
    if g == 0:
        raise DomainError("0/0 is not a slope")
    p, q = p // g, q // g
    if q < 0 or (q == 0 and p < 0):
        p, q = -p, -q
    return p, q


def develop(path: NormalPath) -> tuple[int, int]:
    """Displacement ``(dx, dy)`` of a path lifted to the plane."""
    off = (0, 0)
    t, p0, _ = path.segments[0]
    start = None
    if is_corner(p0):
        cx, cy = _CORNERS[t][pos_index(p0)]
        start = (cx, cy)
    for t, _, pout in path.segments:
        if is_corner(pout):
            cx, cy = _CORNERS[t][pos_index(pout)]
            end = (cx + off[0], cy + off[1])
            return end[0] - start[0], end[1] - start[1]
        _, d = _STEP[(t, pos_index(pout))]
        off = (off[0] + d[0], off[1] + d[1])
    return off


def oriented_slope(T: Triangulation, path: NormalPath) -> tuple[int, int]:
    """``(p, q)`` displacement of an oriented arc, not sign-normalised."""
    dx, dy = develop(path)
    return dy, dx


def slope_of(T: Triangulation, x) -> Slope:
    path = canonical_path(T, x)
    dx, dy = develop(path)
    return normalize(dy, dx)


def slope_coords(p: int, q: int, curve: bool = False) -> tuple[int, int, int]:
    """Edge coordinates of the slope ``p/q`` arc (or curve).

    Curves meet the edge of slope ``r/s`` in ``|ps - qr|`` points; arcs in
    one point fewer, and the three edge slopes themselves use the ``-1``
    convention.
    """
    p, q = normalize(p, q)
    w = (abs(p), abs(q), abs(q - p))
    if curve:
        return w
    if (p, q) in ((0, 1), (1, 0), (1, 1)):
        return tuple(-1 if v == 0 else 0 for v in (p, q, q - p))
    return tuple(v - 1 for v in w)


def slope_intersection(s: Slope, t: Slope, curves: bool = False) -> int:
    """Intersection number of two slopes from the determinant formula.

    Distinct arcs meet ``|ps - qr| - 1`` times; curves meet ``|ps - qr|`` times.
    """
    (p, q), (r, u) = normalize(*s), normalize(*t)
    det = abs(p * u - q * r)
    return det if curves or det == 0 else det - 1


def apply_matrix(m, s: Slope) -> Slope:
    (a, b), (c, d) = m
    p, q = s
    return normalize(a * p + b * q, c * p + d * q)


R_MATRIX = ((1, 1), (0, 1))
L_MATRIX = ((1, 0), (1, 1))


def matmul(m, n):
    return tuple(tuple(sum(m[i][k] * n[k][j] for k in range(2)) for j in range(2)) for i in range(2))


def classify_coords(x: Sequence[int]) -> tuple[str, Slope]:
    """``("arc" | "curve", slope)`` read straight off edge coordinates.

    Curve weights ``(|p|, |q|, |q - p|)`` have one entry equal to the sum of
    the other two; arc weights are one less on every edge.
    """
    x = tuple(x)
    if -1 in x:
        return "arc", {(-1, 0, 0): (0, 1), (0, -1, 0): (1, 0), (0, 0, -1): (1, 1)}[x]
    w = sorted(x)
    if w[2] == w[0] + w[1]:
        kind, (a, b, c) = "curve", x
    elif w[2] == w[0] + w[1] + 1:
        kind, (a, b, c) = "arc", (x[0] + 1, x[1] + 1, x[2] + 1)
    else:
        raise DomainError(f"{x} is not a single slope class")
    # a = |p|, b = |q|, c = |q - p|; the sign of p is fixed by c
    p = a if abs(b - a) == c else -a
    return kind, normalize(p, b)


def is_standard_torus(T: Triangulation) -> bool:
    return T.triangles == punctured_torus().T.triangles


def word_matrix(T: Triangulation, w) -> tuple[tuple[int, int], tuple[int, int]]:
    """The integer matrix by which ``w`` acts on oriented slopes ``(p, q)``.

    Read off the images of two oriented arcs forming a basis, so the sign of
    the matrix is meaningful (the elliptic involution acts as ``-I``).
    """
    cols = []
    src = []
    for s in ((1, 0), (0, 1)):
        path = canonical_path(T, slope_coords(*s))
        src.append(oriented_slope(T, path))
        cols.append(oriented_slope(T, apply_to_path(T, w, path)))
    # solve M @ src = cols; the source basis has determinant +-1
    (a, c), (b, d) = src  # columns u1 = (a, c), u2 = (b, d)
    det = a * d - b * c
    inv = ((d * det, -b * det), (-c * det, a * det))
    img = ((cols[0][0], cols[1][0]), (cols[0][1], cols[1][1]))
    return matmul(img, inv)
