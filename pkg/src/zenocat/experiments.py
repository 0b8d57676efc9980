"""Parameter sweeps, loss-tolerance inversion and interferometer geometry."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np
from sklearn.base import clone

from .cavity import CavityParams
from .estimator import METRIC_COLUMNS, CatStateSimulator
from .cavity import AtomState
from .coherent import log_coherent_overlap
from .metrics import cattiness_array, cattiness_value, effective_fidelity, effective_fidelity_array
from .protocols import ENGINES, ConfigError, LossChannel, RunConfig, run_multiple_reflection
from .tables import OutputTable

logger = logging.getLogger(__name__)

SPEED_OF_LIGHT = 2.998e8  # m/s

EPSILON_UPPER = 0.3
RELATIVE_WIDTH = 1e-3
PROBE_GRID = np.geomspace(1e-7, EPSILON_UPPER, 8)
FALLBACK_POINTS = 4096


class SweepAxis(Enum):
    GAMMA_TILDE = "gamma"
    DELTA_TILDE = "delta"
    EPSILON = "epsilon"
    KAPPA_R = "kappa_r"


class ToleranceMetric(Enum):
    F_EF = "fef"
    CATTINESS = "cattiness"


@dataclass(frozen=True)
class SweepSpec:
    axis: SweepAxis
    grid: tuple
    base_config: RunConfig
    include_single_reflection: bool = False
    mode: str = "multi"

    def __post_init__(self):
        object.__setattr__(self, "axis", SweepAxis(self.axis))
        grid = tuple(float(x) for x in self.grid)
        if not grid:
            raise ConfigError("grid", "must not be empty")
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise ConfigError("grid", "must be strictly increasing")
        object.__setattr__(self, "grid", grid)


def _axis_params(axis: SweepAxis, value: float, est: CatStateSimulator) -> dict:
    if axis is SweepAxis.EPSILON:
        return {"epsilon": value}
    if axis is SweepAxis.KAPPA_R:
        return {"kappa_r": value}
    if est.g == 0:
        raise ConfigError("g", "dimensionless axes need g > 0")
    unit = est.g ** 2 / est.kappa_r
    if axis is SweepAxis.GAMMA_TILDE:
        return {"gamma": value * unit}
    return {"delta": value * unit}


def sweep_header(include_single_reflection=False):
    header = ["axis_value", *METRIC_COLUMNS]
    if include_single_reflection:
        header += [f"single_{c}" for c in METRIC_COLUMNS]
    return header


def sweep(spec: SweepSpec) -> OutputTable:
    """One row of metrics per grid value, in grid order.

    The cattiness column is the signed closed form; it dips slightly below
    zero in the heavy-loss corner of parameter space.
    """
    base = CatStateSimulator.from_run_config(spec.base_config, mode=spec.mode)
    alpha = spec.base_config.alpha
    table = OutputTable(sweep_header(spec.include_single_reflection))
    for value in spec.grid:
        est = clone(base)
        est.set_params(**_axis_params(spec.axis, value, est)).fit()
        row = [value, *est.metric_row(alpha)]
        if spec.include_single_reflection:
            single = clone(est).set_params(mode="single").fit()
            row += list(single.metric_row(alpha))
        table.append(row)
    return table


@dataclass(frozen=True)
class ToleranceResult:
    epsilon_star: float
    metric_at_star: float
    alpha_ef_sq_at_star: float
    feasible: bool
    method: str = "bisection"


@dataclass(frozen=True)
class EpsilonProfile:
    """A lossless Michelson run decomposed so any mirror loss can be applied later.

    The mirror loss is a real factor ``k = sqrt(1 - epsilon)`` per cycle and
    commutes with the rest of the cycle, so cycle ``m`` of a lossy run is
    the lossless one scaled by ``k^(m-1)`` (``k^m`` after the mirror). Each
    per-channel log-overlap scales with the squared amplitude, giving::

        log L(eps) = sum_m k^(2(m-1)) (cavity_m + eps * mirror_m) + k^(2M) out
    """

    m_cycles: int
    c0_up: complex
    c0_down: complex
    cavity_terms: np.ndarray
    mirror_terms: np.ndarray
    out_term: complex

    @classmethod
    def from_config(cls, config: RunConfig) -> "EpsilonProfile":
        outcome = run_multiple_reflection(replace(config, epsilon=0.0, trace_enabled=True))
        m = config.m_cycles
        cavity = np.zeros(m, dtype=complex)
        out_term = 0j
        for event in outcome.losses:
            term = log_coherent_overlap(event.amp_down, event.amp_up)
            if event.channel is LossChannel.OUT1:
                out_term += term
            elif event.channel not in (LossChannel.SM0, LossChannel.SM1):
                cavity[event.cycle - 1] += term
        up = [pair for _, atom, pair in outcome.trace if atom is AtomState.UP]
        down = [pair for _, atom, pair in outcome.trace if atom is AtomState.DOWN]
        mirror = np.array([
            log_coherent_overlap(d.a0, u.a0) + log_coherent_overlap(d.a1, u.a1)
            for u, d in zip(up[1:], down[1:])
        ])
        return cls(m, outcome.c0_up, outcome.c0_down, cavity, mirror, out_term)

    def evaluate(self, eps):
        """Arrays ``(c0_up, c0_down, log_loss_overlap)`` at each ``eps``."""
        eps = np.asarray(eps, dtype=float)
        keep_sq = 1.0 - eps
        powers = keep_sq[..., None] ** np.arange(self.m_cycles)
        log_overlap = (powers * (self.cavity_terms + eps[..., None] * self.mirror_terms)).sum(axis=-1)
        log_overlap = log_overlap + keep_sq ** self.m_cycles * self.out_term
        scale = np.sqrt(keep_sq) ** self.m_cycles
        return scale * self.c0_up, scale * self.c0_down, log_overlap

    def metric(self, eps, metric) -> np.ndarray:
        c0_up, c0_down, log_overlap = self.evaluate(eps)
        if ToleranceMetric(metric) is ToleranceMetric.F_EF:
            return effective_fidelity_array(c0_up, c0_down, log_overlap)
        return cattiness_array(c0_up, c0_down, log_overlap)


def _metric(config: RunConfig, metric: ToleranceMetric, mode: str) -> tuple[float, float]:
    outcome = ENGINES[mode](config)
    if metric is ToleranceMetric.F_EF:
        value = effective_fidelity(outcome)
    else:
        value = cattiness_value(outcome.c0_up, outcome.c0_down, outcome.loss_overlap)
    return value, abs(outcome.alpha_ef) ** 2


def _bisect(evaluate, threshold, lo, hi):
    """Shrink ``[lo, hi]`` (``f(lo) >= threshold > f(hi)``) to relative width."""
    while hi - lo > RELATIVE_WIDTH * hi:
        mid = 0.5 * (lo + hi)
        if evaluate(mid)[0] >= threshold:
            lo = mid
        else:
            hi = mid
    return lo


def find_epsilon_tolerance(base: RunConfig, metric, threshold: float,
                           mode: str = "multi") -> ToleranceResult:
    """Largest per-cycle loss ``epsilon`` keeping ``metric >= threshold``.

    The metric is first probed on a log grid; if those samples fall
    monotonically the crossing is bisected inside the bracketing probe
    interval, otherwise a 4096-point linear scan over ``[0, 0.3]`` locates
    the first crossing before bisecting it. (Effective fidelity is not
    monotone there: at large loss the shrunken target approaches vacuum.)
    The scan runs on an :class:`EpsilonProfile`; every bisection step runs
    the full engine.
    """
    metric = ToleranceMetric(metric)
    if not threshold > 0:
        raise ConfigError("threshold", f"must be > 0, got {threshold!r}")

    cache = {}

    def evaluate(eps):
        if eps not in cache:
            cache[eps] = _metric(replace(base, epsilon=float(eps)), metric, mode)
        return cache[eps]

    at_zero, ef_zero = evaluate(0.0)
    if at_zero < threshold:
        return ToleranceResult(0.0, at_zero, ef_zero, feasible=False)

    probe = [0.0, *PROBE_GRID]
    values = [evaluate(e)[0] for e in probe]
    monotone = all(b <= a for a, b in zip(values, values[1:]))
    method = "bisection"
    if not monotone:
        logger.warning("metric not monotone on the probe grid; scanning %d points", FALLBACK_POINTS)
        method = "grid-scan"
        probe = list(np.linspace(0.0, EPSILON_UPPER, FALLBACK_POINTS))
        if mode == "multi":
            values = list(EpsilonProfile.from_config(base).metric(probe, metric))
        else:
            values = [evaluate(e)[0] for e in probe]

    crossing = next((i for i, v in enumerate(values) if v < threshold), None)
    if crossing is None:
        value, ef = evaluate(EPSILON_UPPER)
        return ToleranceResult(EPSILON_UPPER, value, ef, feasible=True, method=method)
    eps_star = _bisect(evaluate, threshold, probe[crossing - 1], probe[crossing])
    value, ef = evaluate(eps_star)
    return ToleranceResult(eps_star, value, ef, feasible=True, method=method)


@dataclass(frozen=True)
class GeometryEstimate:
    t_p: float
    t_s: float
    l_min: float
    total_flight: float


def geometry_estimate(t_p: float, t_s: float = 0.0, m_cycles: int = 1) -> GeometryEstimate:
    """Minimum arm length ``(t_p + t_s) c / 2`` and total flight ``M t_p c`` (SI units)."""
    if not t_p > 0:
        raise ConfigError("t_p", f"must be > 0, got {t_p!r}")
    if not t_s >= 0:
        raise ConfigError("t_s", f"must be >= 0, got {t_s!r}")
    if int(m_cycles) != m_cycles or m_cycles < 1:
        raise ConfigError("m_cycles", f"must be an integer >= 1, got {m_cycles!r}")
    return GeometryEstimate(
        t_p=t_p,
        t_s=t_s,
        l_min=(t_p + t_s) * SPEED_OF_LIGHT / 2.0,
        total_flight=m_cycles * t_p * SPEED_OF_LIGHT,
    )


def tolerance_table(triples, metric, cavity=None, mode="multi") -> OutputTable:
    """Tolerance search over ``(alpha_sq, m_cycles, threshold)`` triples."""
    cavity = cavity or CavityParams()
    table = OutputTable(["alpha_sq", "m_cycles", "threshold", "epsilon_star",
                         "metric_at_star", "alpha_ef_sq", "feasible"])
    for alpha_sq, m_cycles, threshold in triples:
        base = RunConfig(alpha=math.sqrt(alpha_sq), m_cycles=m_cycles, cavity=cavity)
        res = find_epsilon_tolerance(base, metric, threshold, mode=mode)
        table.append([float(alpha_sq), int(m_cycles), float(threshold), res.epsilon_star,
                      res.metric_at_star, res.alpha_ef_sq_at_star, res.feasible])
    return table
