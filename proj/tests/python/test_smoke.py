import math
from fractions import Fraction

import pytest

import tilebasis as tb


def test_split_tile_patterns():
    tile = tb.split_two_tile()
    assert tb.verify_k_tile(tile) == 2
    ps = tb.pattern_cells(tile)
    assert len(ps) == 2
    assert sum(tb.measures(ps)) == 1
    assert [p.points for p in ps.patterns()] == [[[0], [1]], [[0], [2]]]


def test_bounds_and_det_gap():
    ps = tb.pattern_cells(tb.interval_ktile(2))
    b = tb.riesz_bounds(ps, ["0", "1/2"])
    assert b.A == pytest.approx(2)
    assert b.B == pytest.approx(2)
    assert tb.det_gap(ps, [0, Fraction(1, 2)]) == pytest.approx(2)
    assert tb.lower_bound_from_det(math.sqrt(3), 3, 2) == pytest.approx(1)


def test_search_methods():
    ps = tb.pattern_cells(tb.split_two_tile())
    v = tb.search(ps)
    assert v["x"] == ["1/3"]
    a = tb.search(ps, method="admissible")
    assert a["n"] == 3
    o = tb.search(ps, method="optimizer", restarts=2, iters=300, seed=4)
    assert o["objective"] >= 1 - 1e-6


def test_user_built_tile_and_fiber_matrix():
    tile = tb.MultiTile([(0, 1), ("3/2", "5/2")])
    assert tile.measure == "2"
    E = tb.fiber_matrix(tb.Pattern([0, 1]), "0;1/2")
    assert E[1][1] == pytest.approx(-1)


def test_not_a_multitile():
    with pytest.raises(tb.NotAMultiTile):
        tb.verify_k_tile(tb.MultiTile([(0, "3/2")]))


def test_round_trip():
    ps = tb.pattern_cells(tb.split_two_tile())
    r = tb.round_trip(ps, "1/3;2/3", N=8, grid=256, trials=5)
    assert r["max_relative_error"] < 1e-8
    assert r["A"] - 0.01 <= r["ratio_min"] <= r["ratio_max"] <= r["B"] + 0.01
    with pytest.raises(tb.SingularFiber):
        tb.round_trip(ps, "0;0", trials=1)


def test_certificates():
    out = tb.kronecker_certificate(tb.factorial_odd(0), 8)
    assert not out["certified"]
    assert out["kronecker"]["epsilon_achieved"] > out["kronecker"]["epsilon_target"]
    assert tb.epsilon_for_k(2) == pytest.approx(0.2247)


def test_gaps_and_two_tile():
    assert tb.annihilator_gap([1, 2], "1/3") == pytest.approx(math.sqrt(3))
    r = tb.two_tile_test(tb.split_two_tile(), 32, [0])
    assert r["verdict"] == "certified_candidate"
    assert tb.fraction(r["witness"]) == Fraction(1, 3)


def test_cli_in_process():
    code, out, err = tb.run_cli(["gallery", "split_two_tile"])
    assert code == 0
    assert "tile split_two_tile" in out
    code, _, _ = tb.run_cli(["bogus"])
    assert code == 1
