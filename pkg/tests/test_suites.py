import json

import pytest

from arcgraph.errors import InputError
from arcgraph.suites import SUITES, SuiteConfig, case_rng, grid_slopes, random_pair, run_suite, unicorn_paths

SMALL = {
    "bounds6-12": dict(pairs=15, height=20),
    "subpath-lemma": dict(pairs=10, height=8),
    "dyadic-lemma": dict(pairs=10, height=8),
    "farey-crosscheck": dict(pairs=30, height=6),
    "equivariance": dict(pairs=10, height=6),
    "convergence": dict(horizon=8),
    "divergence": dict(horizon=5),
    "gromov-gap": dict(pairs=40, height=3),
}


@pytest.mark.parametrize("name", sorted(SMALL))
def test_small_runs_pass(name):
    rep = run_suite(name, SuiteConfig(seed=4, **SMALL[name]))
    assert rep.passed, rep.violations
    out = rep.to_json()
    assert out["pass"] and out["config"]["seed"] == 4 and out["config"]["suite"] == name
    json.dumps(out)


def test_bounds_7_14_small():
    rep = run_suite("bounds7-14", SuiteConfig(seed=1, pairs=10, height=15), cross_pairs=20, cross_height=4)
    assert rep.passed, rep.violations


@pytest.mark.parametrize("name", ["bounds6-12", "bounds7-14"])
def test_self_test_fails(name):
    kw = {"cross_pairs": 5, "cross_height": 3} if name == "bounds7-14" else {}
    rep = run_suite(name, SuiteConfig(pairs=5, height=10, self_test=True), **kw)
    assert not rep.passed


def test_self_test_only_for_bounds():
    with pytest.raises(InputError):
        run_suite("convergence", SuiteConfig(self_test=True))


def test_unknown_suite():
    with pytest.raises(InputError):
        run_suite("bounds8-16")


def test_every_listed_suite_has_defaults():
    for name in SUITES:
        SuiteConfig().resolved(name)


def test_reports_are_deterministic():
    cfg = SuiteConfig(seed=11, pairs=8, height=8)
    a, b = run_suite("subpath-lemma", cfg), run_suite("subpath-lemma", cfg)
    assert a.cases == b.cases and a.stats.keys() == b.stats.keys()


def test_workers_keep_case_order():
    one = run_suite("dyadic-lemma", SuiteConfig(seed=2, pairs=6, height=8))
    two = run_suite("dyadic-lemma", SuiteConfig(seed=2, pairs=6, height=8, workers=2))
    assert one.cases == two.cases


def test_case_streams():
    assert case_rng(1, "x", 3).random() == case_rng(1, "x", 3).random()
    assert case_rng(1, "x", 3).random() != case_rng(1, "x", 4).random()
    a, b = random_pair(0, 7, 30)
    assert a.coords != b.coords


def test_paths_are_shared_by_seed():
    cfg = SuiteConfig(seed=3, pairs=4, height=10).resolved("bounds6-12")
    assert unicorn_paths(cfg) == unicorn_paths(cfg)


def test_grid_slopes():
    g = grid_slopes(2)
    assert sorted(g) == sorted([(0, 1), (1, 0), (1, 1), (-1, 1), (1, 2), (-1, 2), (2, 1), (-2, 1)])
