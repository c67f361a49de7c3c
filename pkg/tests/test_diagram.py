import random
from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given, strategies as st

from arcgraph.diagram import (
    crossing_sequence,
    crossings_csv,
    flip_intersection,
    flip_intersections,
    flip_to_edge,
    intersection_number,
    overlay,
    path_crossings,
    realized_intersection,
    resolve,
    tighten,
)
from arcgraph.errors import NotAnArc, Unrealizable
from arcgraph.surface import OrientedArc
from arcgraph.torus import develop, slope_coords, slope_intersection
from arcgraph.torus import punctured_torus

slopes = st.tuples(st.integers(-15, 15), st.integers(1, 15)).filter(lambda s: gcd(*s) == 1)


def lattice_crossings(A, B):
    """Crossing ordinals of two arcs from their straight lifts in the plane.

    ``A`` runs from the origin along ``a``; the lifts of ``B`` that meet it
    start at lattice points ``w = t a - u b`` with ``0 < t, u < 1``.  Ranking
    the solutions by ``t`` and ``u`` gives the order along each arc.
    """
    a, b = develop(A), develop(B)
    det = a[0] * b[1] - a[1] * b[0]
    xs = [0, a[0], -b[0], a[0] - b[0]]
    ys = [0, a[1], -b[1], a[1] - b[1]]
    hits = []
    for vx in range(min(xs), max(xs) + 1):
        for vy in range(min(ys), max(ys) + 1):
            t = Fraction(vx * b[1] - vy * b[0], det)
            u = Fraction(vx * a[1] - vy * a[0], det)
            if 0 < t < 1 and 0 < u < 1:
                hits.append((t, u))
    by_t = {h: i + 1 for i, h in enumerate(sorted(hits))}
    by_u = {h: i + 1 for i, h in enumerate(sorted(hits, key=lambda h: h[1]))}
    return sorted((by_t[h], by_u[h]) for h in hits)


# -- resolve -----------------------------------------------------------------

def test_resolve_empty(T):
    assert resolve(T, (0, 0, 0)).components == ()


def test_resolve_edge_arc(T):
    (comp,) = resolve(T, slope_coords(1, 0)).components
    assert comp.path.is_edge and not comp.path.closed


def test_one_strand_on_one_edge_is_an_arc(T):
    # with arc weights one below curve weights this is the slope 2/1 arc
    (comp,) = resolve(T, (1, 0, 0)).components
    assert not comp.path.closed
    assert develop(comp.path) in ((1, 2), (-1, -2))


def test_odd_triangle_is_unrealizable(T):
    with pytest.raises(Unrealizable):
        resolve(T, (1, 1, 1))


# -- small examples ----------------------------------------------------------

@pytest.mark.parametrize(
    "s, t, want",
    [((0, 1), (1, 0), 0), ((1, 0), (1, 3), 2), ((1, 2), (0, 1), 0), ((0, 1), (1, 1), 0), ((1, 0), (2, 5), 4)],
)
def test_small_intersections(T, s, t, want):
    x, y = slope_coords(*s), slope_coords(*t)
    assert realized_intersection(T, x, y) == want
    assert intersection_number(T, x, y) == want
    assert flip_intersection(T, x, y) == want


def test_farey_formula_against_tightening(T):
    rng = random.Random(20)
    for _ in range(20):
        s, t = [(rng.randint(-6, 6), rng.randint(1, 6)) for _ in range(2)]
        if gcd(*s) != 1 or gcd(*t) != 1:
            continue
        got = realized_intersection(T, slope_coords(*s), slope_coords(*t), rng)
        assert got == slope_intersection(s, t)


def test_overlay_with_empty(T):
    ov = overlay(resolve(T, slope_coords(2, 3)), resolve(T, (0, 0, 0)))
    assert ov.crossings() == []


def test_tighten_fixed_point(T):
    ov = overlay(resolve(T, slope_coords(1, 0)), resolve(T, slope_coords(1, 3)))
    ov, first, _ = tighten(ov)
    _, again, steps = tighten(ov)
    assert steps == 0 and again == first


def test_parallel_copies_cancel(T):
    x = slope_coords(2, 5)
    for seed in range(5):
        assert realized_intersection(T, x, x, random.Random(seed)) == 0


def test_tightening_is_minimal_over_rerealizations(T):
    x, y = slope_coords(1, 2), slope_coords(-2, 3)
    want = slope_intersection((1, 2), (-2, 3))
    for seed in range(200):
        ov = overlay(resolve(T, x), resolve(T, y), random.Random(seed))
        before = len(ov.crossings())
        _, cr, steps = tighten(ov)
        assert len(cr) == want
        assert steps <= before


# -- routes agree ------------------------------------------------------------

@given(slopes, slopes)
def test_chain_scan_matches_formula(s, t):
    T = punctured_torus().T
    x, y = slope_coords(*s), slope_coords(*t)
    assert intersection_number(T, x, y) == slope_intersection(s, t)
    assert intersection_number(T, x, y) == intersection_number(T, y, x)


@given(slopes, st.lists(slopes, min_size=1, max_size=5))
def test_flip_route_matches_formula(s, ts):
    T = punctured_torus().T
    got = flip_intersections(T, slope_coords(*s), [slope_coords(*t) for t in ts])
    assert got == [slope_intersection(s, t) for t in ts]


@given(slopes, slopes)
def test_flip_route_on_curves(s, t):
    T = punctured_torus().T
    y = slope_coords(*t, curve=True)
    assert flip_intersection(T, slope_coords(*s), y) == intersection_number(T, slope_coords(*s), y)


def test_flip_to_edge_needs_an_arc(T):
    with pytest.raises(NotAnArc):
        flip_to_edge(T, slope_coords(1, 2, curve=True))


# -- crossing orders ---------------------------------------------------------

@given(slopes, slopes, st.integers(0, 1), st.integers(0, 1))
def test_crossing_order_matches_lattice(s, t, ea, eb):
    T = punctured_torus().T
    if s == t:
        return
    A = OrientedArc(slope_coords(*s), ea).path(T)
    B = OrientedArc(slope_coords(*t), eb).path(T)
    got = sorted((c.index_along_a, c.index_along_b) for c in path_crossings(T, A, B))
    assert got == lattice_crossings(A, B)


@given(st.sampled_from([(0, 1), (1, 0), (1, 1)]), slopes, st.integers(0, 1), st.integers(0, 1))
def test_edge_method_matches_global(e, t, ea, eb):
    T = punctured_torus().T
    if e == t:
        return
    A = OrientedArc(slope_coords(*e), ea).path(T)
    B = OrientedArc(slope_coords(*t), eb).path(T)
    assert path_crossings(T, A, B, "edge") == path_crossings(T, A, B, "global")


def test_unknown_method(T):
    A, B = OrientedArc(slope_coords(1, 2)).path(T), OrientedArc(slope_coords(1, 0)).path(T)
    with pytest.raises(ValueError):
        path_crossings(T, A, B, "nearest")
    with pytest.raises(ValueError):
        path_crossings(T, A, B, "edge")


def test_one_zero_against_one_three(T):
    cr = crossing_sequence(T, slope_coords(1, 0), slope_coords(1, 3))
    assert [c.index_along_a for c in cr] == [1, 2]
    assert sorted(c.index_along_b for c in cr) == [1, 2]


def test_disjoint_pair_has_no_crossings(T):
    assert crossing_sequence(T, slope_coords(0, 1), slope_coords(1, 1)) == []


@given(slopes, slopes)
def test_reversal_reverses_order(s, t):
    T = punctured_torus().T
    x, y = slope_coords(*s), slope_coords(*t)
    fwd = crossing_sequence(T, x, y, 0)
    back = crossing_sequence(T, x, y, 1)
    n = len(fwd)
    assert sorted((n + 1 - c.index_along_a, c.index_along_b) for c in back) == sorted(
        (c.index_along_a, c.index_along_b) for c in fwd
    )


@given(slopes, slopes)
def test_ordinals_are_permutations(s, t):
    T = punctured_torus().T
    cr = crossing_sequence(T, slope_coords(*s), slope_coords(*t))
    n = len(cr)
    assert sorted(c.index_along_a for c in cr) == list(range(1, n + 1))
    assert sorted(c.index_along_b for c in cr) == list(range(1, n + 1))


def test_closed_first_argument(T):
    with pytest.raises(NotAnArc):
        crossing_sequence(T, slope_coords(1, 2, curve=True), slope_coords(1, 0))


def test_arc_against_curve_orders(T):
    cr = crossing_sequence(T, slope_coords(1, 0), slope_coords(1, 3, curve=True))
    assert len(cr) == 3
    assert [c.index_along_a for c in cr] == [1, 2, 3]


def test_same_class_is_empty(T):
    assert crossing_sequence(T, slope_coords(3, 5), slope_coords(3, 5)) == []


def test_crossings_csv(T):
    text = crossings_csv(crossing_sequence(T, slope_coords(1, 0), slope_coords(1, 3)))
    assert text.splitlines()[0] == "a_ordinal,b_ordinal,triangle"
    assert len(text.splitlines()) == 3


def test_sphere_intersections_agree(sphere):
    T = sphere.T
    rng = random.Random(4)
    edge = lambda e: tuple(-1 if i == e else 0 for i in range(6))  # noqa: E731
    from arcgraph.surface import apply_mapping_class

    for _ in range(15):
        w = sphere.word("".join(rng.choice("RLrl") for _ in range(rng.randint(1, 3))))
        x = apply_mapping_class(T, w, edge(rng.randrange(6)))
        y = apply_mapping_class(T, sphere.word("RL"), edge(rng.randrange(6)))
        want = realized_intersection(T, x, y)
        assert intersection_number(T, x, y) == want
        if x != y:
            assert flip_intersection(T, x, y) == want
