import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from zenocat.cavity import (
    AtomState, CavityError, CavityParams, dimensionless, empty_cavity_loss, scatter_coeffs,
    type1_loss,
)

REF = CavityParams(g=7.8, gamma=3.0, kappa_r=2.3)

rates = st.floats(0.0, 50.0)
positive = st.floats(0.05, 50.0)
detuning = st.floats(-50.0, 50.0)


def test_reference_up_coefficients():
    c = scatter_coeffs(REF, AtomState.UP)
    assert c.r == pytest.approx(0.7962798937112489)
    assert c.t == 0
    assert c.s == pytest.approx(0.604928368380259)


def test_type1_loss_anchor():
    assert type1_loss(REF) == pytest.approx(0.366, abs=1e-3)


def test_empty_cavity_loss_anchor():
    params = CavityParams(kappa_r=2.3, kappa_t=0.2)
    assert empty_cavity_loss(params) == pytest.approx(1 - 0.84 ** 2, abs=1e-12)


def test_down_closed_form():
    c = scatter_coeffs(CavityParams(kappa_r=2.3, kappa_t=0.2), AtomState.DOWN)
    assert c.r == pytest.approx(-2.1 / 2.5)
    assert c.t == pytest.approx(-2 * math.sqrt(0.46) / 2.5)
    assert c.s == 0


def test_no_atom_interaction_is_perfect_mirror():
    c = scatter_coeffs(CavityParams(g=0.0, gamma=0.0, kappa_r=1.0), AtomState.UP)
    assert c.r == pytest.approx(-1.0)


def test_strong_coupling_lossless_up_reflects():
    c = scatter_coeffs(CavityParams(g=10.0, gamma=0.0, kappa_r=1.0), AtomState.UP)
    assert c.r == pytest.approx(1.0)


@given(rates, rates, positive, st.floats(0.0, 5.0), detuning)
def test_unitarity(g, gamma, kappa_r, kappa_t, delta):
    params = CavityParams(g=g, gamma=gamma, kappa_r=kappa_r, kappa_t=kappa_t, delta=delta)
    for atom in AtomState:
        assert scatter_coeffs(params, atom).total == pytest.approx(1.0, abs=1e-10)


@given(rates, rates, positive, st.floats(0.0, 5.0), detuning)
def test_detuning_sign_conjugates(g, gamma, kappa_r, kappa_t, delta):
    a = scatter_coeffs(CavityParams(g, gamma, kappa_r, kappa_t, delta))
    b = scatter_coeffs(CavityParams(g, gamma, kappa_r, kappa_t, -delta))
    assert a.r == pytest.approx(b.r.conjugate(), abs=1e-12)
    assert a.s == pytest.approx(b.s.conjugate(), abs=1e-12)


@given(rates, rates, rates)
def test_down_ignores_atom(g1, g2, gamma):
    a = scatter_coeffs(CavityParams(g=g1, gamma=gamma, kappa_r=2.3, kappa_t=0.1), AtomState.DOWN)
    b = scatter_coeffs(CavityParams(g=g2, gamma=0.0, kappa_r=2.3, kappa_t=0.1), AtomState.DOWN)
    assert (a.r, a.t, a.s) == (b.r, b.t, b.s)


def test_reflectivity_falls_with_gamma():
    values = [scatter_coeffs(CavityParams.from_dimensionless(7.8, 2.3, gamma_tilde=gt)).reflectivity
              for gt in (0.0, 0.1, 0.3, 0.6, 0.9)]
    assert values == sorted(values, reverse=True)
    assert scatter_coeffs(CavityParams.from_dimensionless(7.8, 2.3, gamma_tilde=1.0)).reflectivity \
        == pytest.approx(0.0, abs=1e-14)


def test_dimensionless_round_trip():
    params = CavityParams.from_dimensionless(7.8, 2.3, gamma_tilde=0.4, delta_tilde=-0.2)
    gt, dt = dimensionless(params)
    assert (gt, dt) == pytest.approx((0.4, -0.2))


def test_dimensionless_needs_coupling():
    with pytest.raises(CavityError):
        dimensionless(CavityParams(g=0.0))


@pytest.mark.parametrize("kwargs", [
    {"kappa_r": 0.0}, {"gamma": -1.0}, {"kappa_t": -0.1}, {"g": float("nan")},
])
def test_invalid_params(kwargs):
    with pytest.raises(CavityError):
        CavityParams(**kwargs)
