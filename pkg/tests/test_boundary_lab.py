import json
import random

import numpy as np
import pytest

from arcgraph.boundary_lab import (
    burn_in,
    check_equivariance,
    gromov_gap_experiment,
    line_chart_svg,
    pa_iteration,
    run_convergence,
    run_divergence,
    torus_eigenvector,
)
from arcgraph.errors import LimitsCoincide, NotGrowing
from arcgraph.graph import FareyMetric, farey_distance
from arcgraph.surface import IDENTITY, OrientedArc
from arcgraph.torus import slope_coords, word_matrix


def arcs():
    return OrientedArc(slope_coords(0, 1), 0), OrientedArc(slope_coords(1, 0), 0)


@pytest.fixture(scope="module")
def rl_run(torus):
    a, b = arcs()
    return run_convergence(torus.T, a, b, torus.word("RL"), 8)


def test_word_matrix(torus):
    assert word_matrix(torus.T, torus.word("RL")) == ((2, 1), (1, 1))
    assert word_matrix(torus.T, torus.word("R")) == ((1, 1), (0, 1))


def test_eigenvector_against_numpy():
    m = ((2, 1), (1, 1))
    vals, vecs = np.linalg.eig(np.array(m, dtype=float))
    v = vecs[:, int(np.argmax(vals))]
    v = v / np.max(np.abs(v))
    v = v if v[1] >= 0 else -v
    assert np.allclose(torus_eigenvector(m), v, atol=1e-12)


def test_identity_is_not_growing(T):
    a, b = arcs()
    with pytest.raises(NotGrowing):
        run_convergence(T, a, b, IDENTITY, 5)


def test_horizon_too_short(torus):
    a, b = arcs()
    with pytest.raises(ValueError):
        run_convergence(torus.T, a, b, torus.word("RL"), 2)


def test_growth_rate(torus):
    it = pa_iteration(torus.T, torus.word("RL"), arcs()[1], 10)
    lam = (3 + 5 ** 0.5) / 2
    assert abs(it.growth - lam) < 1e-3
    assert all(r >= it.growth - 0.05 for r in it.ratios()[5:])


def test_distances_against_farey(rl_run):
    # the orbit of 1/0 under [[2,1],[1,1]] in slope form
    p, q = 1, 0
    want = []
    for _ in rl_run.rows:
        want.append(farey_distance((0, 1), (p, q)))
        p, q = 2 * p + q, p + q
    ds = [row.distance for row in rl_run.rows]
    assert ds == want
    assert all(x < y for x, y in zip(ds[2:], ds[3:]))


def test_flags(rl_run):
    assert all(rl_run.flags.values()) and "projectiveGapSmall" in rl_run.flags
    gaps = [row.proj_gap for row in rl_run.rows]
    assert gaps[-1] < 1e-6 < gaps[4]
    assert rl_run.config["burnIn"] == burn_in(8) == 2


def test_csv_and_svg(rl_run):
    rows = rl_run.to_csv().splitlines()
    assert rows[0] == "n,distance,pathLen,prefixLen,projGap" and len(rows) == 10
    svg = rl_run.to_svg()
    assert svg.startswith("<svg") and svg.rstrip().endswith("</svg>")
    assert line_chart_svg({"x": [1, None, 3]}).count("<polyline") == 1


def test_report_is_deterministic(torus, rl_run):
    a, b = arcs()
    again = run_convergence(torus.T, a, b, torus.word("RL"), 8)
    assert json.dumps(again.to_json()) == json.dumps(rl_run.to_json())


def test_divergence(torus):
    a, b = arcs()
    f, g = torus.word("RL"), torus.word("LR")
    rep = run_divergence(torus.T, a, f, g, b, 6)
    assert rep.passed
    assert rep.sup < rep.same_f and rep.sup < rep.same_g
    swapped = run_divergence(torus.T, a, g, f, b, 6)
    assert swapped.sup == rep.sup


def test_equal_words_coincide(torus):
    a, b = arcs()
    f = torus.word("RL")
    with pytest.raises(LimitsCoincide):
        run_divergence(torus.T, a, f, f, b, 5)


def test_equivariance_identity(T):
    a, b = arcs()
    rep = check_equivariance(T, IDENTITY, pairs=[(a.coords, b.coords)], paths=[(a, OrientedArc(slope_coords(2, 7), 1))])
    assert rep.passed and rep.pairs_checked == 1 and rep.paths_checked == 1


def test_equivariance_random_words(torus):
    from arcgraph.boundary_lab import default_metric

    rng = random.Random(8)
    metric = default_metric(torus.T)
    for _ in range(10):
        w = torus.word("".join(rng.choice("RLrl") for _ in range(rng.randint(1, 6))))
        s, t = slope_coords(rng.randint(-6, 6), 7), slope_coords(1, rng.randint(1, 6))
        rep = check_equivariance(torus.T, w, pairs=[(s, t)], paths=[(OrientedArc(s, 1), OrientedArc(t, 0))], metric=metric)
        assert rep.passed and rep.distances_checked == 1


def test_equivariance_on_the_sphere(sphere):
    edge = lambda e: tuple(-1 if i == e else 0 for i in range(6))  # noqa: E731
    rep = check_equivariance(sphere.T, sphere.word("RlR"), pairs=[(edge(0), edge(4))], paths=[(OrientedArc(edge(0)), OrientedArc(edge(5), 1))])
    assert rep.passed


def test_gromov_gap():
    rep = gromov_gap_experiment(FareyMetric(), random.Random(1), (0, 1), radius=4, points=30, triangles=100, triples=100)
    assert rep.passed and rep.max_gap <= 2 * rep.delta
    assert farey_distance((0, 1), rep.centre) == 0
