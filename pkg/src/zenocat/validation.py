"""Self-validation: structural invariants plus the acceptance checks.

The report is plain text, one line per check, with no timings so that two
runs produce identical bytes.
"""

from __future__ import annotations

import math
from dataclasses import replace

import numpy as np

from . import acceptance
from .acceptance import REFERENCE_CAVITY, CheckResult, gamma_tilde_cavity, random_outcomes
from .cavity import AtomState, CavityParams, scatter_coeffs
from .coherent import ModePair, OverlapAccumulator, bs_transform, coherent_overlap
from .config import SimulationConfig, dump_config, parse_config
from .experiments import find_epsilon_tolerance
from .metrics import cattiness_fock_oracle, cattiness_value, effective_fidelity, fidelity
from .protocols import (
    ChainConfig, ObjectState, RunConfig, ledger_log_overlap, run_chain, run_multiple_reflection,
)


def _check(name, worst, tol):
    return CheckResult(name, worst <= tol, f"max deviation {worst:.2e} (tol {tol:.0e})")


def check_rotation_inverse(rng):
    worst = 0.0
    for _ in range(200):
        state = ModePair(complex(*rng.normal(size=2)) * 3, complex(*rng.normal(size=2)) * 3)
        theta = rng.uniform(-math.pi, math.pi)
        back = bs_transform(bs_transform(state, theta), -theta)
        worst = max(worst, abs(back.a0 - state.a0), abs(back.a1 - state.a1))
    return _check("beam splitter inverse", worst, 1e-12)


def check_accumulator_product(rng):
    worst = 0.0
    for _ in range(50):
        acc, direct = OverlapAccumulator(), 1.0 + 0j
        for _ in range(rng.integers(1, 40)):
            up, down = complex(*rng.normal(size=2)), complex(*rng.normal(size=2))
            acc = acc.add(up, down)
            direct *= coherent_overlap(down, up)
        if abs(acc.overlap) > 1.0:
            return CheckResult("log accumulator = direct product", False, "|overlap| > 1")
        if direct != 0:
            worst = max(worst, abs(acc.overlap - direct) / abs(direct))
    return _check("log accumulator = direct product", worst, 1e-10)


def check_conjugation_symmetry(rng):
    worst = 0.0
    for _ in range(200):
        params = CavityParams(g=rng.uniform(0, 30), gamma=rng.uniform(0, 10),
                              kappa_r=rng.uniform(0.1, 10), kappa_t=rng.uniform(0, 2),
                              delta=rng.uniform(-20, 20))
        a = scatter_coeffs(params, AtomState.UP)
        b = scatter_coeffs(replace(params, delta=-params.delta), AtomState.UP)
        worst = max(worst, abs(a.r - b.r.conjugate()), abs(a.t - b.t.conjugate()),
                    abs(a.s - b.s.conjugate()))
    return _check("coefficient conjugation under delta -> -delta", worst, 1e-12)


def check_monotone_reflectivity():
    grid = np.linspace(0, 1, 201)
    refl = [scatter_coeffs(gamma_tilde_cavity(gt), AtomState.UP).reflectivity for gt in grid]
    ok = all(b < a for a, b in zip(refl, refl[1:])) and refl[-1] < 1e-12
    return CheckResult("up-state reflectivity decreasing in gamma", ok,
                       f"|r|^2 from {refl[0]:.3f} to {refl[-1]:.1e}")


def check_down_independent_of_atom(rng):
    worst = 0.0
    ref = scatter_coeffs(CavityParams(g=1.0, gamma=1.0, kappa_r=2.3, kappa_t=0.2), AtomState.DOWN)
    for _ in range(50):
        c = scatter_coeffs(CavityParams(g=rng.uniform(0, 50), gamma=rng.uniform(0, 50),
                                        kappa_r=2.3, kappa_t=0.2), AtomState.DOWN)
        worst = max(worst, abs(c.r - ref.r), abs(c.t - ref.t), abs(c.s))
    return _check("down-state response independent of g, gamma", worst, 0.0)


def check_ledger_consistency():
    worst = 0.0
    for m, eps, gt, kt in ((5, 0.01, 0.11, 0.0), (50, 1e-3, 1.0, 0.02), (200, 1e-4, 0.5, 0.002)):
        out = run_multiple_reflection(RunConfig(alpha=3.0, m_cycles=m, epsilon=eps,
                                                cavity=gamma_tilde_cavity(gt, kappa_t=kt)))
        worst = max(worst, abs(ledger_log_overlap(out.losses) - out.loss_log_overlap))
        if abs(out.loss_overlap) > 1.0:
            return CheckResult("loss ledger = running accumulator", False, "|overlap| > 1")
    return _check("loss ledger = running accumulator", worst, 1e-10)


def check_chain_matches_michelson():
    alpha, n = 2.0, 12
    final, _ = run_chain(ChainConfig(alpha, n, math.pi / n, ObjectState.PASS))
    out = run_multiple_reflection(RunConfig(alpha=alpha, m_cycles=n, cavity=CavityParams(gamma=0)))
    worst = max(abs(final.a0 - out.c0_down), abs(final.a1 - out.c1_down), abs(final.a0 + alpha))
    return _check("chain PASS = Michelson ideal down branch", worst, 1e-12)


def check_measurement_outcomes():
    worst = 0.0
    for out in random_outcomes(10, seed=3):
        worst = max(worst, abs(cattiness_fock_oracle(out, outcome_sign=1)
                               - cattiness_fock_oracle(out, outcome_sign=-1)))
    return _check("cattiness equal for both atom outcomes", worst, 1e-10)


def check_sensitivity_ordering():
    out = run_multiple_reflection(RunConfig(alpha=2.0, m_cycles=20, epsilon=1e-3, cavity=REFERENCE_CAVITY))
    worst = 0.0
    for x in (0.3, 0.7):
        scaled = replace(out, loss_log_overlap=out.loss_log_overlap + math.log(x))
        f_cross = 2 * (fidelity(out, 2.0) - fidelity(replace(out, loss_log_overlap=-1e300 + 0j), 2.0))
        f_cross_scaled = 2 * (fidelity(scaled, 2.0) - fidelity(replace(out, loss_log_overlap=-1e300 + 0j), 2.0))
        worst = max(worst, abs(f_cross_scaled - x * f_cross))
        coh = 0.25 * abs(out.c0_up - out.c0_down) ** 2
        c_cross = cattiness_value(out.c0_up, out.c0_down, out.loss_overlap) \
            + coh * abs(coherent_overlap(out.c0_up, out.c0_down)) ** 2
        c_scaled = cattiness_value(scaled.c0_up, scaled.c0_down, scaled.loss_overlap) \
            + coh * abs(coherent_overlap(out.c0_up, out.c0_down)) ** 2
        worst = max(worst, abs(c_scaled - x * x * c_cross))
    return _check("F cross term ~ |L|, C_a cross term ~ |L|^2", worst, 1e-12)


def check_metric_ranges(rng):
    bad = 0
    for _ in range(100):
        cav = gamma_tilde_cavity(rng.uniform(0, 1.5), kappa_t=rng.uniform(0, 0.5),
                                 delta_tilde=rng.uniform(-1, 1))
        out = run_multiple_reflection(RunConfig(alpha=rng.uniform(0.5, 4), m_cycles=int(rng.integers(1, 60)),
                                                epsilon=rng.uniform(0, 0.05), cavity=cav))
        f, fe = fidelity(out, 1.0), effective_fidelity(out)
        bad += not (0 <= f <= 1 and 0 <= fe <= 1)
    return CheckResult("F, F_ef within [0, 1]", bad == 0, f"{bad} of 100 random runs out of range")


def check_table_self_consistency():
    worst = 0.0
    for alpha_sq, m, threshold, *_ in acceptance.FEF_TOLERANCE_ROWS:
        res = find_epsilon_tolerance(RunConfig(alpha=math.sqrt(alpha_sq), m_cycles=m,
                                               cavity=REFERENCE_CAVITY), "fef", threshold)
        law = alpha_sq * (1 - res.epsilon_star) ** m
        worst = max(worst, abs(res.alpha_ef_sq_at_star - law) / law)
    return _check("table rows obey |a_ef|^2 = |a|^2 (1-eps)^M", worst, 1e-9)


def check_bisection_bracket():
    problems = 0
    for alpha_sq, m, threshold, *_ in acceptance.FEF_TOLERANCE_ROWS:
        base = RunConfig(alpha=math.sqrt(alpha_sq), m_cycles=m, cavity=REFERENCE_CAVITY)
        res = find_epsilon_tolerance(base, "fef", threshold)
        above = effective_fidelity(run_multiple_reflection(replace(base, epsilon=res.epsilon_star)))
        beyond = effective_fidelity(run_multiple_reflection(replace(base, epsilon=1.02 * res.epsilon_star)))
        problems += not (above >= threshold > beyond)
    return CheckResult("tolerance search brackets the crossing", problems == 0,
                       f"{problems} rows violate metric(eps*) >= t > metric(1.02 eps*)")


def check_config_round_trip():
    import json

    cfg = SimulationConfig(alpha_sq=3.0, m_cycles=6, epsilon=0.0391, g_mhz=7.8, gamma_mhz=3.0,
                           kappa_r_mhz=2.3, kappa_t_mhz=0.0, delta_mhz=-0.5, mode="multi", trace=True)
    again = parse_config(json.loads(dump_config(cfg)))
    return CheckResult("config schema round trip", again == cfg, f"identical={again == cfg}")


def property_checks():
    rng = np.random.default_rng(1234)
    return [
        check_rotation_inverse(rng),
        check_accumulator_product(rng),
        check_conjugation_symmetry(rng),
        check_monotone_reflectivity(),
        check_down_independent_of_atom(rng),
        check_ledger_consistency(),
        check_chain_matches_michelson(),
        check_measurement_outcomes(),
        check_sensitivity_ordering(),
        check_metric_ranges(rng),
        check_table_self_consistency(),
        check_bisection_bracket(),
        check_config_round_trip(),
    ]


def run_validation():
    """Return ``(all_passed, results)`` for properties followed by acceptance checks."""
    results = property_checks() + acceptance.run_all()
    return all(r.passed for r in results), results


def format_report(results) -> str:
    lines = [r.line() for r in results]
    failed = [r.name for r in results if not r.passed]
    lines.append(f"{len(results) - len(failed)}/{len(results)} checks passed")
    if failed:
        lines.append("failed: " + "; ".join(failed))
    return "\n".join(lines) + "\n"
