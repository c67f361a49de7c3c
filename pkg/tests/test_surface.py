import json
from math import gcd

import pytest
from hypothesis import given, strategies as st

from arcgraph.diagram import intersection_number
from arcgraph.errors import EdgeDegree, MalformedInput, NonNegativeChi, NotFlippable
from arcgraph.surface import (
    IDENTITY,
    OrientedArc,
    apply_mapping_class,
    builtin_surface,
    flip,
    load_coordinates,
    load_surface,
    parse_word,
    transport_arc,
)
from arcgraph.torus import L_MATRIX, R_MATRIX, apply_matrix, slope_coords, slope_of
from arcgraph.triangulation import puncture_classes, validate_triangulation


def traced_vertices(T):
    """Vertex classes by union-find over edge gluings (independent of the library trace)."""
    parent = {}

    def find(c):
        parent.setdefault(c, c)
        while parent[c] != c:
            parent[c] = parent[parent[c]]
            c = parent[c]
        return c

    ends = {}
    for t, tri in enumerate(T.triangles):
        for k, (e, sign) in enumerate(tri):
            tail, head = (t, (k - 1) % 3), (t, k)
            if sign < 0:
                tail, head = head, tail
            ends.setdefault(e, []).append((tail, head))
    for (t1, h1), (t2, h2) in ends.values():
        parent[find(t1)] = find(t2)
        parent[find(h1)] = find(h2)
    classes = {}
    for t in range(len(T.triangles)):
        for c in range(3):
            classes.setdefault(find((t, c)), set()).add((t, c))
    return sorted(map(frozenset, classes.values()), key=min)


def test_torus_counts(T):
    assert (T.E, T.F, T.P, T.euler_characteristic) == (3, 2, 1, -1)
    assert [frozenset(c) for c in puncture_classes(T)] == traced_vertices(T)
    assert len(puncture_classes(T)[0]) == 6


def test_sphere_counts(sphere):
    T = sphere.T
    assert (T.E, T.F, T.P, T.euler_characteristic) == (6, 4, 4, -2)
    classes = puncture_classes(T)
    assert sorted(map(frozenset, classes), key=min) == traced_vertices(T)
    assert all(len(c) == 3 for c in classes)


def test_bare_indices_give_torus():
    T = validate_triangulation([[0, 1, 2], [0, 1, 2]])
    assert (T.E, T.F, T.P) == (3, 2, 1)


def test_edge_used_three_times():
    with pytest.raises(EdgeDegree):
        validate_triangulation([[0, 0, 0]])
    with pytest.raises(EdgeDegree):
        validate_triangulation({"edges": 3, "triangles": [[0, 1, 2], [0, 1, 1]]})


def test_thrice_punctured_sphere():
    T = validate_triangulation([[[0, 1], [1, 1], [2, 1]], [[0, -1], [2, -1], [1, -1]]])
    assert (T.P, T.euler_characteristic, T.genus) == (3, -1, 0)
    assert sorted(map(frozenset, puncture_classes(T)), key=min) == traced_vertices(T)


def test_empty_triangulation_rejected():
    with pytest.raises(NonNegativeChi):
        validate_triangulation([])


def test_malformed_inputs(tmp_path):
    with pytest.raises(MalformedInput):
        load_surface(tmp_path / "missing.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(MalformedInput):
        load_surface(bad)
    with pytest.raises(MalformedInput):
        load_coordinates([1, 2], validate_triangulation([[0, 1, 2], [0, 1, 2]]))


def test_relabelled_partition(sphere):
    T = sphere.T
    perm = [3, 0, 5, 1, 2, 4]
    R = T.relabel(perm)
    assert sorted(map(frozenset, puncture_classes(R)), key=min) == traced_vertices(T)


def test_surface_file_round_trip(tmp_path, torus):
    path = tmp_path / "s.json"
    path.write_text(json.dumps(torus.to_json()))
    S = load_surface(path)
    assert S.T.triangles == torus.T.triangles
    assert apply_mapping_class(S.T, S.word("RL"), slope_coords(1, 2)) == apply_mapping_class(torus.T, torus.word("RL"), slope_coords(1, 2))


# -- flips -------------------------------------------------------------------

def test_flip_fixes_empty_class(T):
    _, transfer = flip(T, 2)
    assert transfer((0, 0, 0)) == (0, 0, 0)


def test_flip_preserves_intersections_of_curve(T):
    new_T, transfer = flip(T, 2)
    c = slope_coords(1, 1, curve=True)
    arcs = [slope_coords(p, q) for p, q in [(0, 1), (1, 0), (1, 2), (2, 1), (3, 5), (-2, 3)]]
    for x in arcs:
        assert intersection_number(new_T, transfer(c), transfer(x)) == intersection_number(T, c, x)


def test_flip_twice_is_identity_on_coordinates(T):
    mid, there = flip(T, 2)
    back_T, back = flip(mid, 2)
    assert back_T.canonical_form() == T.canonical_form()
    for p, q in [(1, 2), (3, 7), (-4, 5)]:
        x = slope_coords(p, q)
        assert intersection_number(back_T, back(there(x)), slope_coords(1, 0)) == intersection_number(T, x, slope_coords(1, 0))


def test_sphere_locality(sphere):
    T = sphere.T
    # edge 3 is a side of the quadrilateral, so its arc survives both flips
    x = tuple(-1 if i == 3 else 0 for i in range(6))
    y = apply_mapping_class(T, parse_word([{"flip": 2}, {"flip": 2}], 6), x)
    assert y == x


def test_flip_needs_distinct_slots():
    # edge 0 is glued to itself inside triangle 0
    T = validate_triangulation([[[0, 1], [0, -1], [1, 1]], [[1, -1], [2, 1], [2, -1]]])
    with pytest.raises(NotFlippable):
        flip(T, 0)


# -- mapping classes ---------------------------------------------------------

def test_identity_word(T):
    for p, q in [(0, 1), (2, 5), (-3, 4)]:
        assert apply_mapping_class(T, IDENTITY, slope_coords(p, q)) == slope_coords(p, q)


@pytest.mark.parametrize("name, matrix", [("R", R_MATRIX), ("L", L_MATRIX)])
def test_twists_act_as_matrices(torus, name, matrix):
    w = torus.word(name)
    for p in range(-6, 7):
        for q in range(0, 7):
            if (p, q) == (0, 0) or gcd(p, q) != 1:
                continue
            image = apply_mapping_class(torus.T, w, slope_coords(p, q))
            assert slope_of(torus.T, image) == apply_matrix(matrix, (p, q))


def test_lowercase_letters_invert(torus):
    T = torus.T
    for raw in ("Rr", "rR", "Ll", "RLlr"):
        x = slope_coords(3, 8)
        assert apply_mapping_class(T, torus.word(raw), x) == x


words = st.text(alphabet="RLrl", min_size=1, max_size=6)
slopes = st.tuples(st.integers(-12, 12), st.integers(1, 12)).filter(lambda s: gcd(*s) == 1)


@given(words, slopes, st.integers(0, 1))
def test_word_then_inverse(raw, s, end):
    from arcgraph.torus import punctured_torus

    S = punctured_torus()
    w = S.word(raw)
    a = OrientedArc(slope_coords(*s), end)
    assert transport_arc(S.T, w.inverse(), transport_arc(S.T, w, a)) == a


@given(words, slopes, slopes)
def test_intersections_preserved(raw, s, t):
    from arcgraph.torus import punctured_torus

    S = punctured_torus()
    w = S.word(raw)
    x, y = slope_coords(*s), slope_coords(*t)
    wx, wy = apply_mapping_class(S.T, w, x), apply_mapping_class(S.T, w, y)
    assert intersection_number(S.T, wx, wy) == intersection_number(S.T, x, y)


@given(st.text(alphabet="RLrl", min_size=1, max_size=4), st.integers(0, 5))
def test_sphere_words_preserve_intersections(raw, e):
    S = builtin_surface("s04")
    w = S.word(raw)
    x = tuple(-1 if i == e else 0 for i in range(6))
    y = apply_mapping_class(S.T, S.word("RL"), tuple(-1 if i == (e + 1) % 6 else 0 for i in range(6)))
    assert intersection_number(S.T, apply_mapping_class(S.T, w, x), apply_mapping_class(S.T, w, y)) == intersection_number(S.T, x, y)
    assert apply_mapping_class(S.T, w.inverse(), apply_mapping_class(S.T, w, y)) == y


def test_unknown_twist(torus):
    with pytest.raises(MalformedInput):
        torus.word("RX")
