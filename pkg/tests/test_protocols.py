import math
from dataclasses import replace

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zenocat.cavity import AtomState, CavityParams
from zenocat.protocols import (
    ChainConfig, ConfigError, LossChannel, ObjectState, RunConfig, chain_closed_form,
    ledger_log_overlap, run_chain, run_multiple_reflection, run_single_reflection,
)

IDEAL = CavityParams(gamma=0.0)
REF = CavityParams(g=7.8, gamma=3.0, kappa_r=2.3)


def zeno(m):
    return math.cos(math.pi / (2 * m)) ** 2 * math.cos(math.pi / m) ** (m - 1)


@pytest.mark.parametrize("state", list(ObjectState))
@pytest.mark.parametrize("n", [1, 2, 5, 12, 40])
def test_chain_matches_closed_form(state, n):
    cfg = ChainConfig(1.5, n, math.pi / (2 * n), state)
    final, losses = run_chain(cfg)
    expect, expect_losses = chain_closed_form(cfg)
    assert final.a0 == pytest.approx(expect.a0, abs=1e-12)
    assert final.a1 == pytest.approx(expect.a1, abs=1e-12)
    assert losses == pytest.approx(expect_losses, abs=1e-12)


def test_chain_pass_transfers_everything():
    final, _ = run_chain(ChainConfig(1.0, 20, math.pi / 40, ObjectState.PASS))
    assert abs(final.a1) ** 2 == pytest.approx(1.0)


def test_chain_block_energy_budget():
    final, losses = run_chain(ChainConfig(2.0, 20, math.pi / 40, ObjectState.BLOCK))
    total = final.energy + sum(abs(x) ** 2 for x in losses)
    assert total == pytest.approx(4.0)
    assert abs(final.a0) ** 2 / 4 > 0.88


@pytest.mark.parametrize("m", [1, 2, 5, 20, 100])
def test_freezing_law(m):
    out = run_multiple_reflection(RunConfig(alpha=1.0, m_cycles=m,
                                            cavity=CavityParams.from_dimensionless(7.8, 2.3, 1.0)))
    assert abs(out.c0_up) == pytest.approx(zeno(m), abs=1e-12)


def test_ideal_cat():
    out = run_multiple_reflection(RunConfig(alpha=2.0, m_cycles=10, cavity=IDEAL))
    assert out.c0_up == pytest.approx(2.0, abs=1e-12)
    assert out.c0_down == pytest.approx(-2.0, abs=1e-12)
    assert abs(out.loss_log_overlap) < 1e-30
    # peak photon number at the atom, |alpha|^2 sin^2(pi/2M)
    assert out.v_max == pytest.approx(4 * math.sin(math.pi / 20) ** 2)


def test_vmax_ideal_ten_photons():
    out = run_multiple_reflection(RunConfig(alpha=math.sqrt(10), m_cycles=20, cavity=IDEAL))
    assert out.v_max == pytest.approx(0.0615582970243)


@settings(max_examples=30, deadline=None)
@given(st.floats(0.1, 4.0), st.integers(1, 60), st.floats(0.0, 0.2))
def test_epsilon_law(alpha, m, eps):
    out = run_multiple_reflection(RunConfig(alpha=alpha, m_cycles=m, epsilon=eps, cavity=REF))
    assert abs(out.alpha_ef) ** 2 == pytest.approx(alpha ** 2 * (1 - eps) ** m, rel=1e-10)


def test_down_branch_independent_of_atom_rates():
    a = run_multiple_reflection(RunConfig(alpha=1.7, m_cycles=8, epsilon=0.01, cavity=REF))
    b = run_multiple_reflection(RunConfig(alpha=1.7, m_cycles=8, epsilon=0.01,
                                          cavity=CavityParams(g=1.0, gamma=20.0, kappa_r=2.3)))
    assert a.c0_down == b.c0_down
    assert a.c1_down == b.c1_down


@pytest.mark.parametrize("m,eps,kt", [(5, 0.01, 0.0), (50, 1e-3, 0.02), (300, 1e-4, 0.002)])
def test_ledger_matches_accumulator(m, eps, kt):
    cav = CavityParams(g=7.8, gamma=3.0, kappa_r=2.3, kappa_t=kt, delta=0.4)
    out = run_multiple_reflection(RunConfig(alpha=3.0, m_cycles=m, epsilon=eps, cavity=cav))
    assert abs(ledger_log_overlap(out.losses) - out.loss_log_overlap) <= 1e-10
    channels = {e.channel for e in out.losses}
    assert LossChannel.SM0 in channels and LossChannel.OUT1 in channels
    assert sum(1 for e in out.losses if e.channel is LossChannel.SM1) == m


@settings(max_examples=30, deadline=None)
@given(st.floats(0.1, 3.0), st.integers(1, 40), st.floats(0.0, 0.1), st.floats(0.0, 2.0),
       st.floats(0.0, 1.0))
def test_energy_conserved_per_branch(alpha, m, eps, gt, kt):
    cav = CavityParams.from_dimensionless(7.8, 2.3, gamma_tilde=gt, kappa_t=kt)
    out = run_multiple_reflection(RunConfig(alpha=alpha, m_cycles=m, epsilon=eps, cavity=cav))
    for atom in (AtomState.UP, AtomState.DOWN):
        c0 = out.c0_up if atom is AtomState.UP else out.c0_down
        lost = sum(abs(e.amp_up if atom is AtomState.UP else e.amp_down) ** 2 for e in out.losses)
        assert abs(c0) ** 2 + lost == pytest.approx(alpha ** 2, rel=1e-10)


def test_single_reflection_reference():
    out = run_single_reflection(RunConfig(alpha=2.0, m_cycles=1, cavity=REF))
    assert out.c0_up == pytest.approx(2 * 0.7962798937112489)
    assert out.c0_down == pytest.approx(-2.0)
    assert out.v_max == pytest.approx(4.0)


def test_single_reflection_applies_loss_once():
    base = RunConfig(alpha=2.0, m_cycles=30, epsilon=0.01, cavity=REF)
    out = run_single_reflection(base)
    assert abs(out.alpha_ef) ** 2 == pytest.approx(4 * 0.99)
    assert run_single_reflection(replace(base, m_cycles=5)).c0_up == out.c0_up


def test_trace_rows():
    out = run_multiple_reflection(RunConfig(alpha=1.0, m_cycles=3, cavity=REF, trace_enabled=True))
    rows = out.trace_rows()
    assert len(rows) == 2 * 4 * 2
    assert rows[0] == (0, "up", 0, 1.0, 0.0)
    assert run_multiple_reflection(RunConfig(alpha=1.0, m_cycles=3, cavity=REF)).trace_rows() == []


@pytest.mark.parametrize("kwargs,field", [
    ({"epsilon": 1.5}, "epsilon"),
    ({"epsilon": -0.1}, "epsilon"),
    ({"m_cycles": 0}, "m_cycles"),
    ({"alpha": float("inf")}, "alpha"),
])
def test_run_config_validation(kwargs, field):
    params = {"alpha": 1.0, "m_cycles": 3, **kwargs}
    with pytest.raises(ConfigError) as exc:
        RunConfig(**params)
    assert exc.value.field == field


@pytest.mark.parametrize("theta", [0.0, -0.1, 2.0])
def test_chain_theta_range(theta):
    with pytest.raises(ConfigError):
        ChainConfig(1.0, 5, theta, ObjectState.PASS)
