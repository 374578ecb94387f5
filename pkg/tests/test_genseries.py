from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from krfermion.cartan import build_cartan
from krfermion.genseries import (IdentityReport, compose, convergence_sanity, h_modes,
                                 k0_jacobian_series, log_jacobian_det, v_of_w, v_of_z,
                                 verify_binomial_expansion, verify_k0_identities,
                                 verify_generating_identities, verify_zv_jacobian, w_of_v, w_space,
                                 z_of_v)
from krfermion.series import TruncatedSeries, pow_int

A1 = build_cartan("A1")


def test_h_modes_and_space():
    assert h_modes(build_cartan("B2"), 1) == ((1, 1), (2, 1), (2, 2))
    with pytest.raises(ValueError):
        w_space(A1, 1, 0)


def test_v_of_w_a1():
    sp = w_space(A1, 1, 3)
    w = sp.var((1, 1))
    assert v_of_w(A1, 1, 3)[(1, 1)] == w - w * w.scale(2) + pow_int(w, 3).scale(5)


def test_degree_one_is_identity():
    c = build_cartan("A2")
    sp = w_space(c, 1, 1)
    for am, v in v_of_w(c, 1, 1).items():
        assert v == sp.var(am)


@pytest.mark.parametrize("name,l,D", [("A1", 2, 4), ("A2", 1, 4), ("B2", 1, 3), ("G2", 1, 3)])
def test_round_trips(name, l, D):
    c = build_cartan(name)
    sp = w_space(c, l, D)
    x = {am: sp.var(am) for am in sp.modes}
    assert compose(sp, w_of_v(c, l, D), v_of_w(c, l, D)) == x
    assert compose(sp, z_of_v(c, l, D), v_of_z(c, l, D)) == x


def test_z_of_v_examples():
    sp = w_space(A1, 1, 3)
    assert z_of_v(A1, 1, 3)[(1, 1)] == sp.var((1, 1))
    sp = w_space(A1, 2, 4)
    v1, v2 = sp.var((1, 1)), sp.var((1, 2))
    z = z_of_v(A1, 2, 4)
    assert z[(1, 2)] == v2 * pow_int(sp.one() - v1, 2)
    assert z[(1, 1)] == v1


def test_zv_jacobian_det_is_one():
    assert verify_zv_jacobian(build_cartan("A2"), 1, 3).ok
    assert verify_zv_jacobian(A1, 2, 3).ok


def test_log_jacobian_det_a1():
    # v = w (1 - v)^2 gives (w/v) dv/dw = (1 - v)/(1 + v)
    D = 4
    sp = w_space(A1, 1, D)
    v = v_of_w(A1, 1, D + 1)
    jac = log_jacobian_det(sp, v)
    vlo = v_of_w(A1, 1, D)[(1, 1)]
    one = sp.one()
    assert jac * (one + vlo) == one - vlo


@pytest.mark.parametrize("name,nu,l,D", [
    ("A1", {(1, 1): 2}, 1, 4),
    ("A1", {(1, 2): 1}, 2, 3),
    ("A2", {(1, 1): 1, (2, 1): 1}, 1, 3),
    ("B2", {(2, 1): 1}, 1, 3),
    ("G2", {}, 1, 2),
])
def test_generating_identities(name, nu, l, D):
    rep = verify_generating_identities(build_cartan(name), nu, l, D)
    assert rep.ok, rep.to_json()


@pytest.mark.parametrize("name,l,D", [("A1", 2, 3), ("A2", 1, 3), ("B2", 1, 3)])
def test_binomial_expansion(name, l, D):
    rep = verify_binomial_expansion(build_cartan(name), l, D)
    assert rep.ok, rep.to_json()
    c = build_cartan(name)
    beta = {am: Fraction(1, 2) for am in h_modes(c, l)}
    rep = verify_binomial_expansion(c, l, D, beta=beta)
    assert rep.ok, rep.to_json()


@pytest.mark.parametrize("name", ["A1", "A2", "B2", "C2", "G2"])
def test_k0_identities(name):
    rep = verify_k0_identities(build_cartan(name), 2)
    assert rep.ok, rep.to_json()


def test_k0_a1_level1():
    s = k0_jacobian_series(A1, 1)
    assert s.coeff((0,)) == 1 and s.coeff((1,)) == -1 and s.coeff((2,)) == 0


def test_identity_report():
    rep = IdentityReport()
    sp = w_space(A1, 1, 2)
    rep.add("same", sp.one(), sp.one())
    assert rep.ok
    rep.add("differ", sp.one(), sp.var((1, 1)))
    rep.add_flag("flag", True)
    assert not rep.ok
    js = rep.to_json()
    assert js["ok"] is False and js["checks"]["differ"] == [[0], [1]] and js["checks"]["flag"] == []


def test_convergence_sanity():
    out = convergence_sanity()
    assert out["ok"] and out["increments_decreasing"]
    assert abs(out["partial_sum"] - out["closed_form"]) < 1e-6


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 3), st.integers(0, 3), st.integers(2, 4))
def test_round_trip_a1_property(n1, n2, D):
    sp = w_space(A1, 2, D)
    x = {am: sp.var(am) for am in sp.modes}
    back = compose(sp, v_of_w(A1, 2, D), w_of_v(A1, 2, D))
    assert back == x
