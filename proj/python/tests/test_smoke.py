import math

import pytest

import tga


def test_norm_and_greedy():
    assert tga.norm("lp:2", [3.0, 4.0]) == pytest.approx(5.0)
    assert tga.greedy_ordering([1.0, -3.0, 3.0]) == [1, 2, 0]
    assert tga.greedy_set([1.0, -3.0, 3.0], 2) == [1, 2]


def test_sigma_and_dm():
    r = tga.sigma_m("lp:2", [3.0, 1.0, 0.0], 1)
    assert r["value"] == pytest.approx(1.0)
    assert r["support"] == [0]
    w = tga.sigma_m("wl1:1,2", [1.0, 1.0], 1, method="generic")
    assert w["value"] == pytest.approx(1.0, abs=1e-9)
    assert tga.d_m("lp:2", [3.0, 1.0, 0.0], 0)["value"] == pytest.approx(math.sqrt(10.0))


def test_estimate():
    e = tga.estimate("wl1:1,2", kind="Delta_d", samples=100, seed=1)
    assert e["kind"] == "Delta_d"
    assert e["value"] == pytest.approx(2.0)
    assert tga.estimate("lp:2", 4, "Cg", samples=200, seed=3)["value"] == pytest.approx(1.0)


def test_verify():
    v = tga.verify("wl1:1,2", suite="main", samples=200, seed=7)
    assert v["status"] == "holds_on_budget"
    assert v["detail"]["pattern"] == "all_exceed"
    assert tga.verify("lp:2", 3, "gaps", samples=100, seed=1, gaps=[1, 3])["status"] == "holds_on_budget"


def test_errors():
    with pytest.raises(tga.SpaceError):
        tga.norm("lp:0.5", [1.0])
    with pytest.raises(ValueError):
        tga.estimate("lp:2", 3, "Nope", seed=1)
    with pytest.raises(ValueError):
        tga.sigma_m("lorentz:2,1", [1.0, 2.0], 1, method="fastpath")
