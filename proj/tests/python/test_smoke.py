import math

import pytest
from scipy import special

import oscpair


def test_analyze_constant():
    r = oscpair.analyze("constant", {"c": 1.0}, xmax=50.0)
    assert r["classification"] == "L-finite"
    assert abs(r["L"] - 1.0) <= 1e-6
    c = r["coefficients"]
    assert abs(c["A"] * c["B"] - c["C"] ** 2 - 1.0) <= 1e-9


def test_analyze_cauchy_euler_slope():
    r = oscpair.analyze("cauchy-euler", {"gamma": 1.0}, xmax=500.0)
    assert r["classification"] == "L-infinite"
    assert abs(r["K"] - 2 / math.sqrt(3)) <= 1e-3
    assert oscpair.normalization_note in r["notes"]


def test_inverse_x_amplitude_against_bessel():
    # principal pair of y'' + y/x = 0 is 2 sqrt(x) (J1, Y1)(2 sqrt x) scaled to unit Wronskian
    xs = [100.0, 200.0, 400.0]
    v, dv = oscpair.principal_amplitude("inverse-x", xs, xmax=400.0)
    for x, vx in zip(xs, v):
        t = 2 * math.sqrt(x)
        ref = math.pi * x * (special.j1(t) ** 2 + special.y1(t) ** 2)
        assert abs(vx / ref - 1) <= 1e-5
    assert all(d > 0 for d in dv)


def test_zero_gaps_constant():
    r = oscpair.zero_gaps("constant", {"c": 1.0})
    assert len(r["rows"]) >= 5
    assert max(row["gap"] for row in r["rows"]) <= 1e-9


@pytest.mark.parametrize("nu,t", [(1 / 3, 0.5), (1 / 3, 5.0), (0.4, 30.0)])
def test_bessel_against_scipy(nu, t):
    J, Y, _ = oscpair.bessel_jy(nu, t)
    assert J == pytest.approx(special.jv(nu, t), rel=1e-9, abs=1e-12)
    assert Y == pytest.approx(special.yv(nu, t), rel=1e-9, abs=1e-12)
    assert oscpair.bessel_modulus(nu, t) == pytest.approx(t * (special.jv(nu, t) ** 2 + special.yv(nu, t) ** 2), rel=1e-9)


def test_q_catalog():
    assert oscpair.q("gen-airy", [8.0], {"nu": 1 / 3})[0] == pytest.approx(9 / 4 * 8.0, rel=1e-14)


def test_errors():
    with pytest.raises(oscpair.ConfigError):
        oscpair.analyze("constant", {"c": -1.0})
    with pytest.raises(ValueError):
        oscpair.analyze("constant", window=0.9)
    with pytest.raises(oscpair.ConfigError):
        oscpair.q("x +", [1.0])
