import random
from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given, strategies as st

from arcgraph.diagram import intersection_number
from arcgraph.errors import IndexOutOfRange, SameClass
from arcgraph.graph import TorusCoordsMetric, random_walk
from arcgraph.surface import OrientedArc, apply_mapping_class, transport_arc
from arcgraph.torus import classify_coords, develop, normalize, punctured_torus, slope_coords
from arcgraph.unicorn import (
    check_unicorn_path,
    common_prefix,
    orbit,
    truncated_infinite_path,
    truncations,
    unicorn_arcs,
    unicorn_path,
    verify_dyadic_lemma,
    verify_subpath_lemma,
)

slopes = st.tuples(st.integers(-12, 12), st.integers(1, 12)).filter(lambda s: gcd(*s) == 1)


def lattice_unicorns(T, a, b):
    """Slopes of the unicorn arcs from straight lifts, by decreasing ``a`` segment.

    The crossing at ``w = t a - u b`` cuts ``a`` at ``t`` and ``b`` at ``u``;
    the arc ``a[0, t]`` followed by ``b[u, 0]`` has displacement ``w``.  It is
    embedded unless another crossing comes earlier on both segments.
    """
    A, B = develop(a.path(T)), develop(b.path(T))
    det = A[0] * B[1] - A[1] * B[0]
    xs = [0, A[0], -B[0], A[0] - B[0]]
    ys = [0, A[1], -B[1], A[1] - B[1]]
    hits = []
    for vx in range(min(xs), max(xs) + 1):
        for vy in range(min(ys), max(ys) + 1):
            t = Fraction(vx * B[1] - vy * B[0], det)
            u = Fraction(vx * A[1] - vy * A[0], det)
            if 0 < t < 1 and 0 < u < 1:
                hits.append((t, u, vx, vy))
    good = [h for h in hits if not any(o[0] < h[0] and o[1] < h[1] for o in hits)]
    return [normalize(h[3], h[2]) for h in sorted(good, reverse=True)]


def slopes_of(vertices):
    return [classify_coords(v)[1] for v in vertices]


def arc(s, end=0):
    return OrientedArc(slope_coords(*s), end)


def test_one_zero_to_one_three(T):
    P = unicorn_path(T, arc((1, 0)), arc((1, 3)))
    assert slopes_of(P.vertices) == [(1, 0)] + lattice_unicorns(T, arc((1, 0)), arc((1, 3))) + [(1, 3)]
    assert slopes_of(P.vertices) == [(1, 0), (0, 1), (1, 3)]
    assert P.witnesses == [(1, 1)]
    check_unicorn_path(T, P)


def test_one_zero_to_one_three_other_ends(T):
    P = unicorn_path(T, arc((1, 0)), arc((1, 3), 1))
    assert slopes_of(P.vertices) == [(1, 0), (1, 1), (1, 2), (1, 3)]


def test_disjoint_pair(T):
    assert unicorn_arcs(T, arc((0, 1)), arc((1, 0))) == []
    assert len(unicorn_path(T, arc((0, 1)), arc((1, 0)))) == 1


def test_same_class_rejected(T):
    with pytest.raises(SameClass):
        unicorn_path(T, arc((2, 3), 0), arc((2, 3), 1))


@given(slopes, slopes, st.integers(0, 1), st.integers(0, 1))
def test_matches_lattice_oracle(s, t, ea, eb):
    T = punctured_torus().T
    if s == t:
        return
    a, b = arc(s, ea), arc(t, eb)
    P = unicorn_path(T, a, b)
    assert slopes_of(P.vertices)[1:-1] == lattice_unicorns(T, a, b)
    check_unicorn_path(T, P)


@given(slopes, slopes, st.integers(0, 1), st.integers(0, 1))
def test_reverse_symmetry(s, t, ea, eb):
    T = punctured_torus().T
    if s == t:
        return
    a, b = arc(s, ea), arc(t, eb)
    assert unicorn_path(T, b, a).vertices[::-1] == unicorn_path(T, a, b).vertices
    assert {u.arc_class for u in unicorn_arcs(T, b, a)} == {u.arc_class for u in unicorn_arcs(T, a, b)}


@given(slopes, slopes, st.integers(0, 1), st.integers(0, 1))
def test_vertices_are_embedded_arcs(s, t, ea, eb):
    T = punctured_torus().T
    if s == t:
        return
    P = unicorn_path(T, arc(s, ea), arc(t, eb))
    for v in P.vertices:
        assert classify_coords(v)[0] == "arc"
    for x, y in zip(P.vertices, P.vertices[1:]):
        assert intersection_number(T, x, y) == 0
    lens = [u.prefix_len_a for u in P.arcs]
    assert lens == sorted(lens, reverse=True) and len(set(lens)) == len(lens)


def test_unicorn_ends(T):
    P = unicorn_path(T, arc((1, 0)), arc((3, 7), 1))
    for k in range(1, len(P)):
        assert P.oriented(T, k, "a").coords == P.vertices[k]
        assert P.oriented(T, k, "b") == P.oriented(T, k, "a").flipped()
    with pytest.raises(IndexOutOfRange):
        P.oriented(T, 0, "b")


# -- lemmas ------------------------------------------------------------------

def test_subpath_trivial_cases(T):
    P = unicorn_path(T, arc((1, 0)), arc((5, 13), 1))
    n = len(P)
    assert verify_subpath_lemma(T, P, 0, n).path == tuple(P.vertices)
    assert verify_subpath_lemma(T, P, 2, 3).disjunct == "subpath"
    with pytest.raises(IndexOutOfRange):
        verify_subpath_lemma(T, P, 3, 3)


@given(slopes, slopes, st.integers(0, 1), st.integers(0, 1))
def test_subpath_lemma_exhaustive(s, t, ea, eb):
    T = punctured_torus().T
    if s == t:
        return
    P = unicorn_path(T, arc(s, ea), arc(t, eb))
    n = len(P)
    for i in range(n + 1):
        for j in range(i + 1, n + 1):
            w = verify_subpath_lemma(T, P, i, j)
            if w.disjunct == "adjacent":
                assert j == i + 2


def test_dyadic_lemma_on_walks(T):
    d = TorusCoordsMetric().d
    rng = random.Random(6)
    for _ in range(20):
        walk = random_walk(rng, (1, 2), rng.randint(2, 16), max_height=10)
        if walk[0] == walk[-1]:
            continue
        wit = verify_dyadic_lemma(T, [arc(s, rng.randint(0, 1)) for s in walk], d)
        m = len(walk) - 1
        assert all(w.distance <= w.k for w in wit)
        assert wit[0].k == (m - 1).bit_length() and m <= 2 ** wit[0].k


def test_dyadic_lemma_needs_a_step(T):
    with pytest.raises(IndexOutOfRange):
        verify_dyadic_lemma(T, [arc((1, 2))], TorusCoordsMetric().d)


# -- truncations -------------------------------------------------------------

def test_truncation_zero_is_the_path(torus):
    T = torus.T
    a, b = arc((0, 1)), arc((1, 0))
    P, pre = truncated_infinite_path(T, a, b, torus.word("RL"), 0)
    assert P.vertices == unicorn_path(T, a, b).vertices and pre == 0


def test_truncations_grow(torus):
    T = torus.T
    steps = truncations(T, arc((0, 1)), arc((1, 0)), torus.word("RL"), 8)
    lens = [len(s.path) for s in steps]
    assert all(x < y for x, y in zip(lens[2:], lens[3:]))
    pre = [s.prefix for s in steps]
    assert pre[-1] > pre[2]
    for s in steps:
        check_unicorn_path(T, s.path)


def test_orbit_follows_the_matrix(torus):
    T = torus.T
    b = arc((1, 0))
    want = [(1, 0)]
    for _ in range(4):
        p, q = want[-1]
        want.append((2 * p + q, p + q))
    assert want[:3] == [(1, 0), (2, 1), (5, 3)]
    assert [classify_coords(o.coords)[1] for o in orbit(T, b, torus.word("RL"), 4)] == want


def test_orbit_transports_ends(torus):
    T = torus.T
    f = torus.word("RL")
    b = arc((1, 0), 1)
    orb = orbit(T, b, f, 3)
    assert orb[1] == transport_arc(T, f, b)
    assert orb[2].coords == apply_mapping_class(T, f, orb[1].coords)


def test_common_prefix():
    assert common_prefix([1, 2, 3], [1, 2, 4, 5]) == 2
    assert common_prefix([], [1]) == 0
