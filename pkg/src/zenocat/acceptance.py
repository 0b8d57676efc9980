"""Exit criteria, as independent check functions.

Each check returns a :class:`CheckResult`; the ``validate`` command and
``tests/test_acceptance.py`` run the same functions. Reference values are
published tolerance tables and reference points for the
``(g, gamma, kappa_r) = 2pi x (7.8, 3.0, 2.3) MHz`` atom-cavity system.
"""

from __future__ import annotations

import cmath
import math
import time
from dataclasses import dataclass, replace

import numpy as np

from .cavity import AtomState, CavityParams, empty_cavity_loss, scatter_coeffs, type1_loss
from .experiments import SweepAxis, SweepSpec, find_epsilon_tolerance, sweep, tolerance_table
from .metrics import (
    cattiness, cattiness_fock_oracle, cattiness_value, effective_fidelity, fidelity,
)
from .protocols import RunConfig, RunOutcome, run_multiple_reflection

REFERENCE_CAVITY = CavityParams(g=7.8, gamma=3.0, kappa_r=2.3, kappa_t=0.0, delta=0.0)

# (alpha_sq, M, threshold, epsilon_star, alpha_ef_sq)
FEF_TOLERANCE_ROWS = (
    (3, 6, 0.70, 3.91e-2, 2.36),
    (4, 10, 0.90, 2.38e-5, 4.00),
    (4, 50, 0.95, 3.05e-4, 3.94),
    (8, 50, 0.90, 3.36e-4, 7.87),
)
# thresholds are absolute cattiness values (fraction of alpha_sq)
CATTINESS_TOLERANCE_ROWS = (
    (3, 10, 0.6 * 3, 2.02e-3, 2.94),
    (8, 50, 0.8 * 8, 4.12e-5, 7.98),
    (16, 50, 0.5 * 16, 1.99e-4, 15.8),
)
EPS_REL_TOL = 0.05
ALPHA_EF_ABS_TOL = 0.02
ROW_SECONDS = 1.0


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.name}: {self.detail}"


def gamma_tilde_cavity(gamma_tilde, g=7.8, kappa_r=2.3, **kw) -> CavityParams:
    return CavityParams.from_dimensionless(g, kappa_r, gamma_tilde=gamma_tilde, **kw)


def _table_rows(name, rows, metric):
    parts, ok = [], True
    for alpha_sq, m, threshold, eps_ref, ef_ref in rows:
        start = time.perf_counter()
        res = find_epsilon_tolerance(
            RunConfig(alpha=math.sqrt(alpha_sq), m_cycles=m, cavity=REFERENCE_CAVITY), metric, threshold)
        elapsed = time.perf_counter() - start
        eps_err = abs(res.epsilon_star - eps_ref) / eps_ref
        ef_err = abs(res.alpha_ef_sq_at_star - ef_ref)
        row_ok = (res.feasible and eps_err <= EPS_REL_TOL and ef_err <= ALPHA_EF_ABS_TOL
                  and elapsed < ROW_SECONDS)
        ok &= row_ok
        parts.append(
            f"({alpha_sq},{m},{threshold:g}) eps*={res.epsilon_star:.4g} (ref {eps_ref:.3g}, "
            f"rel {eps_err:.2%}) |a_ef|^2={res.alpha_ef_sq_at_star:.4f} (ref {ef_ref}, "
            f"diff {ef_err:.4f}) {'ok' if row_ok else 'MISS'}"
        )
    return CheckResult(name, ok, "; ".join(parts))


def check_fef_tolerances():
    return _table_rows("1 effective-fidelity tolerance rows", FEF_TOLERANCE_ROWS, "fef")


def check_cattiness_tolerances():
    return _table_rows("2 cattiness tolerance rows", CATTINESS_TOLERANCE_ROWS, "cattiness")


def check_type1_loss():
    loss = type1_loss(REFERENCE_CAVITY)
    return CheckResult("3 type-1 loss anchor", abs(loss - 0.366) <= 0.001,
                       f"1-|r_up|^2 = {loss:.5f} (target 0.366 +/- 0.001)")


def check_empty_cavity_loss():
    loss = empty_cavity_loss(CavityParams(kappa_r=2.3, kappa_t=0.2))
    return CheckResult("4 empty-cavity loss anchor", abs(loss - 0.294) <= 0.005,
                       f"loss = {loss:.5f} (target 0.294 +/- 0.005)")


def zeno_closed_form(m):
    return math.cos(math.pi / (2 * m)) ** 2 * math.cos(math.pi / m) ** (m - 1)


def check_zeno_freezing():
    cav = gamma_tilde_cavity(1.0)
    worst = 0.0
    for m in (2, 5, 20, 100):
        out = run_multiple_reflection(RunConfig(alpha=1.0, m_cycles=m, cavity=cav))
        worst = max(worst, abs(abs(out.c0_up) - zeno_closed_form(m)))
    at_100 = abs(run_multiple_reflection(RunConfig(alpha=1.0, m_cycles=100, cavity=cav)).c0_up)
    approx = 1 - math.pi ** 2 / 200
    rel = abs(at_100 - approx) / approx
    return CheckResult("5 Zeno freezing law", worst <= 1e-12 and rel <= 0.005,
                       f"max |engine - closed form| = {worst:.2e}; M=100 {at_100:.5f} vs "
                       f"1-pi^2/2M {approx:.5f} (rel {rel:.3%})")


def check_large_m_cattiness():
    out = run_multiple_reflection(
        RunConfig(alpha=4.0, m_cycles=1000, cavity=gamma_tilde_cavity(1.0)))
    value = cattiness(out)
    return CheckResult("6 large-M cattiness > 10", value > 10, f"C_a = {value:.4f} at |a|^2=16, M=1000")


def check_vmax_bound():
    worst = 0.0
    for gt in (0.0, 0.25, 0.5, 0.75, 1.0):
        for alpha_sq in (4, 10, 16):
            out = run_multiple_reflection(
                RunConfig(alpha=math.sqrt(alpha_sq), m_cycles=20, cavity=gamma_tilde_cavity(gt)))
            worst = max(worst, out.v_max)
    return CheckResult("7 photons at the atom below 1", worst < 1, f"max v_max = {worst:.4f}")


def check_fef_anchor():
    cav = CavityParams(g=7.8, gamma=3.0, kappa_r=10.0, kappa_t=0.002)
    value = effective_fidelity(run_multiple_reflection(
        RunConfig(alpha=math.sqrt(8), m_cycles=50, cavity=cav)))
    return CheckResult("8 8-photon effective fidelity anchor", abs(value - 0.75) <= 0.03,
                       f"F_ef = {value:.4f} (target 0.75 +/- 0.03)")


def check_fiber_estimates():
    cav = CavityParams(g=7.8, gamma=3.0, kappa_r=10.0)
    base = RunConfig(alpha=math.sqrt(3), m_cycles=20, cavity=cav)
    fiber = effective_fidelity(run_multiple_reflection(replace(base, epsilon=0.0053)))
    extra = effective_fidelity(run_multiple_reflection(replace(base, epsilon=0.0253)))
    ok = abs(fiber - 0.77) <= 0.02 and abs(extra - 0.63) <= 0.02
    return CheckResult("9 fiber estimates", ok,
                       f"F_ef(0.53%) = {fiber:.4f} (0.77), F_ef(2.53%) = {extra:.4f} (0.63)")


def random_outcomes(n=50, seed=20240607):
    """Outcomes with ``|c0|^2 <= 4`` and ``|<loss_down|loss_up>|`` in ``[e^-3, 1]``."""
    rng = np.random.default_rng(seed)
    outcomes = []
    for _ in range(n):
        amps = [cmath.rect(2.0 * math.sqrt(rng.uniform()), rng.uniform(0, 2 * math.pi))
                for _ in range(2)]
        log_overlap = complex(-rng.uniform(0, 3), rng.uniform(-math.pi, math.pi))
        outcomes.append(RunOutcome(c0_up=amps[0], c1_up=0j, c0_down=amps[1], c1_down=0j,
                                   loss_log_overlap=log_overlap, v_max=0.0, alpha_ef=-amps[1]))
    return outcomes


def check_oracle_equivalence(closed_form=None):
    closed_form = closed_form or cattiness_value
    worst = 0.0
    for out in random_outcomes():
        exact = closed_form(out.c0_up, out.c0_down, out.loss_overlap)
        worst = max(worst, abs(exact - cattiness_fock_oracle(out)))
    return CheckResult("10 Fock oracle equivalence", worst <= 1e-8,
                       f"max |closed form - oracle| = {worst:.2e} over 50 outcomes")


def _unitarity_worst(n=1000, seed=7):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n):
        params = CavityParams(g=rng.uniform(0, 40), gamma=rng.uniform(0, 20),
                              kappa_r=rng.uniform(0.01, 20), kappa_t=rng.uniform(0, 5),
                              delta=rng.uniform(-30, 30))
        for atom in AtomState:
            worst = max(worst, abs(scatter_coeffs(params, atom).total - 1.0))
    return worst


def check_exact_cases():
    problems = []
    # ideal run
    ideal = CavityParams(gamma=0.0)
    for alpha_sq in (1, 4, 10):
        a = math.sqrt(alpha_sq)
        out = run_multiple_reflection(RunConfig(alpha=a, m_cycles=10, cavity=ideal))
        expected = alpha_sq * (1 - math.exp(-4 * alpha_sq))
        if abs(fidelity(out, a) - 1) > 1e-12 or abs(out.c1_up) > 1e-12 or abs(out.c1_down) > 1e-12:
            problems.append(f"ideal |a|^2={alpha_sq} F/C1")
        if abs(cattiness(out) - expected) > 1e-12:
            problems.append(f"ideal |a|^2={alpha_sq} C_a")
    # down-branch closed form and epsilon intensity law
    for kt, eps, m, gt in ((0.0, 0.01, 6, 0.11), (0.3, 0.002, 20, 1.0), (0.02, 0.0, 50, 0.5)):
        cav = gamma_tilde_cavity(gt, kappa_t=kt)
        out = run_multiple_reflection(RunConfig(alpha=2.0, m_cycles=m, epsilon=eps, cavity=cav))
        ratio = (cav.kappa_r - cav.kappa_t) / cav.kappa
        expected = -2.0 * ratio ** m * (1 - eps) ** (m / 2)
        if abs(out.c0_down - expected) > 1e-12 or abs(out.c1_down) > 1e-12:
            problems.append(f"down branch kt={kt}")
    for eps, m in ((3.91e-2, 6), (1e-4, 50), (0.2, 100)):
        out = run_multiple_reflection(RunConfig(alpha=math.sqrt(3), m_cycles=m, epsilon=eps,
                                                cavity=REFERENCE_CAVITY))
        if abs(abs(out.alpha_ef) ** 2 - 3 * (1 - eps) ** m) > 1e-12:
            problems.append(f"epsilon law eps={eps}")
    unitarity = _unitarity_worst()
    if unitarity > 1e-12:
        problems.append(f"unitarity {unitarity:.1e}")
    # detuning symmetry
    for dt in (0.1, 0.7, 2.0):
        pair = []
        for sign in (1, -1):
            cav = CavityParams.from_dimensionless(7.8, 2.3, gamma_tilde=0.11, delta_tilde=sign * dt)
            out = run_multiple_reflection(RunConfig(alpha=2.0, m_cycles=20, cavity=cav))
            pair.append((fidelity(out, 2.0), effective_fidelity(out), cattiness(out)))
        if max(abs(x - y) for x, y in zip(*pair)) > 1e-12:
            problems.append(f"detuning symmetry {dt}")
    detail = "all exact cases hold" if not problems else "failed: " + ", ".join(problems)
    return CheckResult("11 exact-case suite", not problems,
                       f"{detail}; max unitarity defect {unitarity:.1e}")


def determinism_outputs():
    base = RunConfig(alpha=2.0, m_cycles=10, cavity=REFERENCE_CAVITY)
    chunks = []
    for axis, grid in ((SweepAxis.GAMMA_TILDE, np.linspace(0, 1, 11)),
                       (SweepAxis.DELTA_TILDE, np.linspace(-1, 1, 11)),
                       (SweepAxis.EPSILON, np.geomspace(1e-6, 1e-1, 11)),
                       (SweepAxis.KAPPA_R, np.linspace(1, 20, 11))):
        chunks.append(sweep(SweepSpec(axis, grid, base, include_single_reflection=True)).to_csv())
    chunks.append(tolerance_table([(3, 6, 0.7), (4, 10, 0.9)], "fef").to_csv())
    return "".join(chunks)


def check_determinism():
    first, second = determinism_outputs(), determinism_outputs()
    return CheckResult("12 determinism", first == second,
                       f"{len(first)} bytes of sweep/table output, identical={first == second}")


CHECKS = (
    check_fef_tolerances,
    check_cattiness_tolerances,
    check_type1_loss,
    check_empty_cavity_loss,
    check_zeno_freezing,
    check_large_m_cattiness,
    check_vmax_bound,
    check_fef_anchor,
    check_fiber_estimates,
    check_oracle_equivalence,
    check_exact_cases,
    check_determinism,
)


def run_all():
    return [check() for check in CHECKS]
