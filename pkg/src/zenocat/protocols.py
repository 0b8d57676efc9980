"""Protocol engines: chain interferometer, Michelson multiple reflection,
and the single-reflection baseline.

Both atomic branches are propagated independently as two-mode coherent
states. Every photon that leaves the interferometer (cavity transmission,
atomic scattering, mirror loss, the unused output port) is kept as a
``LossEvent`` holding the amplitude it carries in each branch; the branch
coherence that survives is ``<loss_down|loss_up>``, the product of the
per-event coherent overlaps.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from enum import Enum

from .cavity import AtomState, CavityParams, scatter_coeffs
from .coherent import ModePair, OverlapAccumulator, bs_transform, log_coherent_overlap


class ConfigError(ValueError):
    """Invalid protocol configuration; ``field`` names the offending input."""

    def __init__(self, field_name, message):
        super().__init__(f"{field_name}: {message}")
        self.field = field_name


class ObjectState(Enum):
    PASS = "pass"
    BLOCK = "block"
    PHASE = "phase"


class LossChannel(Enum):
    SSC0_TRANS = "ssc0_trans"
    SSC0_SCAT = "ssc0_scat"
    SSC1_TRANS = "ssc1_trans"
    SSC1_SCAT = "ssc1_scat"
    SM0 = "sm0"
    SM1 = "sm1"
    # light leaving through the Zone 1 switchable mirror at extraction
    OUT1 = "out1"


@dataclass(frozen=True)
class ChainConfig:
    alpha: complex
    n_stages: int
    theta: float
    object_state: ObjectState = ObjectState.PASS

    def __post_init__(self):
        if int(self.n_stages) != self.n_stages or self.n_stages < 1:
            raise ConfigError("n_stages", f"must be a positive integer, got {self.n_stages!r}")
        if not (0 < self.theta <= math.pi / 2):
            raise ConfigError("theta", f"must lie in (0, pi/2], got {self.theta!r}")
        object.__setattr__(self, "object_state", ObjectState(self.object_state))


@dataclass(frozen=True)
class RunConfig:
    """Input to the Michelson and single-reflection engines.

    ``epsilon`` is the per-arm intensity loss of the classical optics in
    one cycle.
    """

    alpha: complex
    m_cycles: int = 10
    epsilon: float = 0.0
    cavity: CavityParams = field(default_factory=CavityParams)
    trace_enabled: bool = False

    def __post_init__(self):
        alpha = complex(self.alpha)
        if not (math.isfinite(alpha.real) and math.isfinite(alpha.imag)):
            raise ConfigError("alpha", f"must be finite, got {self.alpha!r}")
        object.__setattr__(self, "alpha", alpha)
        if isinstance(self.m_cycles, bool) or int(self.m_cycles) != self.m_cycles or self.m_cycles < 1:
            raise ConfigError("m_cycles", f"must be an integer >= 1, got {self.m_cycles!r}")
        object.__setattr__(self, "m_cycles", int(self.m_cycles))
        if not (0.0 <= self.epsilon < 1.0):
            raise ConfigError("epsilon", f"must lie in [0, 1), got {self.epsilon!r}")

    @property
    def theta(self) -> float:
        return math.pi / (2 * self.m_cycles)


@dataclass(frozen=True)
class LossEvent:
    channel: LossChannel
    cycle: int
    amp_up: complex
    amp_down: complex


@dataclass(frozen=True)
class RunOutcome:
    c0_up: complex
    c1_up: complex
    c0_down: complex
    c1_down: complex
    loss_log_overlap: complex
    v_max: float
    alpha_ef: complex
    losses: tuple = ()
    # (cycle, AtomState, ModePair) after each cycle, cycle 0 being the input
    trace: tuple | None = None

    @property
    def loss_overlap(self) -> complex:
        """``<loss_down|loss_up>``."""
        return cmath.exp(self.loss_log_overlap)

    def trace_rows(self):
        """Tabular trace: ``(cycle, branch, zone, re, im)`` rows."""
        if self.trace is None:
            return []
        rows = []
        for cycle, branch, pair in self.trace:
            for zone, amp in ((0, pair.a0), (1, pair.a1)):
                rows.append((cycle, branch.value, zone, amp.real, amp.imag))
        return rows


def run_chain(config: ChainConfig) -> tuple[ModePair, tuple]:
    """Chain Mach-Zehnder interferometer with ``n_stages`` beam splitters.

    The object sits on the Zone 1 path between consecutive beam splitters,
    so it is met ``n_stages - 1`` times. ``BLOCK`` absorbs the Zone 1 field
    (its amplitudes are returned as losses), ``PHASE`` flips its sign.
    """
    state = ModePair(complex(config.alpha), 0j)
    losses = []
    for stage in range(config.n_stages):
        state = bs_transform(state, config.theta)
        if stage == config.n_stages - 1:
            break
        if config.object_state is ObjectState.BLOCK:
            losses.append(state.a1)
            state = ModePair(state.a0, 0j)
        elif config.object_state is ObjectState.PHASE:
            state = ModePair(state.a0, -state.a1)
    return state, tuple(losses)


def chain_closed_form(config: ChainConfig) -> tuple[ModePair, tuple]:
    """Closed-form counterpart of :func:`run_chain`."""
    a, n, th = complex(config.alpha), config.n_stages, config.theta
    c, s = math.cos(th), math.sin(th)
    if config.object_state is ObjectState.PASS:
        return ModePair(a * math.cos(n * th), a * math.sin(n * th)), ()
    if config.object_state is ObjectState.BLOCK:
        losses = tuple(a * c ** (k - 1) * s for k in range(1, n))
        return ModePair(a * c ** n, a * c ** (n - 1) * s), losses
    if n % 2:
        return ModePair(a * c, a * s), ()
    return ModePair(a, 0j), ()


def _branch(config: RunConfig, atom: AtomState):
    """Propagate one atomic branch through ``m_cycles`` Michelson cycles.

    Returns the final pair, the lost amplitudes in ledger order, the
    per-cycle Zone 1 intensity incident on the atom cavity and the trace.
    """
    theta = config.theta
    empty = scatter_coeffs(config.cavity, AtomState.DOWN)
    atom_cav = scatter_coeffs(config.cavity, atom)
    keep = math.sqrt(1.0 - config.epsilon)
    leak = math.sqrt(config.epsilon)

    state = ModePair(config.alpha, 0j)
    lost = []
    incident = []
    trace = [(0, atom, state)] if config.trace_enabled else None
    for m in range(1, config.m_cycles + 1):
        state = bs_transform(state, theta)
        # phase shifter on the way to the cavities
        state = ModePair(-state.a0, -state.a1)
        u, v = state.a0, state.a1
        incident.append(abs(v) ** 2)
        lost.append((LossChannel.SSC0_TRANS, m, empty.t * u))
        lost.append((LossChannel.SSC0_SCAT, m, empty.s * u))
        lost.append((LossChannel.SSC1_TRANS, m, atom_cav.t * v))
        lost.append((LossChannel.SSC1_SCAT, m, atom_cav.s * v))
        state = ModePair(empty.r * u, atom_cav.r * v)
        state = bs_transform(state, theta)
        lost.append((LossChannel.SM0, m, leak * state.a0))
        lost.append((LossChannel.SM1, m, leak * state.a1))
        state = state.scale(keep)
        if trace is not None:
            trace.append((m, atom, state))
    lost.append((LossChannel.OUT1, config.m_cycles, state.a1))
    if not state.is_finite():
        raise FloatingPointError(f"non-finite amplitude in {atom.value} branch")
    return state, lost, incident, trace


def _collect(config, up, down, v_max):
    """Pair the two branches' ledgers and fold them into a ``RunOutcome``."""
    up_state, up_lost, up_trace = up
    down_state, down_lost, down_trace = down
    acc = OverlapAccumulator()
    events = []
    for (channel, cycle, a_up), (channel_d, cycle_d, a_down) in zip(up_lost, down_lost, strict=True):
        assert channel is channel_d and cycle == cycle_d
        events.append(LossEvent(channel, cycle, a_up, a_down))
        acc = acc.add(a_up, a_down)
    trace = None
    if config.trace_enabled:
        trace = tuple(up_trace) + tuple(down_trace)
    return RunOutcome(
        c0_up=up_state.a0,
        c1_up=up_state.a1,
        c0_down=down_state.a0,
        c1_down=down_state.a1,
        loss_log_overlap=acc.log_overlap,
        v_max=v_max,
        alpha_ef=-down_state.a0,
        losses=tuple(events),
        trace=trace,
    )


def run_multiple_reflection(config: RunConfig) -> RunOutcome:
    """Simulate ``m_cycles`` round trips of the Michelson scheme.

    One cycle per branch: beam splitter, sign flip on both zones, cavity
    reflection (empty cavity in Zone 0, atom cavity in Zone 1), beam
    splitter, then a ``sqrt(1 - epsilon)`` mirror loss on each arm.
    """
    up_state, up_lost, up_incident, up_trace = _branch(config, AtomState.UP)
    down_state, down_lost, _, down_trace = _branch(config, AtomState.DOWN)
    return _collect(
        config,
        (up_state, up_lost, up_trace),
        (down_state, down_lost, down_trace),
        v_max=max(up_incident),
    )


def run_single_reflection(config: RunConfig) -> RunOutcome:
    """Reflect the input once off the atom cavity (``m_cycles`` is ignored).

    The classical optics loss ``epsilon`` is applied once to the reflected
    field.
    """
    keep = math.sqrt(1.0 - config.epsilon)
    leak = math.sqrt(config.epsilon)
    branches = []
    for atom in (AtomState.UP, AtomState.DOWN):
        coeffs = scatter_coeffs(config.cavity, atom)
        reflected = coeffs.r * config.alpha
        lost = [
            (LossChannel.SSC1_TRANS, 1, coeffs.t * config.alpha),
            (LossChannel.SSC1_SCAT, 1, coeffs.s * config.alpha),
            (LossChannel.SM0, 1, leak * reflected),
        ]
        final = ModePair(keep * reflected, 0j)
        trace = None
        if config.trace_enabled:
            trace = [(0, atom, ModePair(config.alpha, 0j)), (1, atom, final)]
        branches.append((final, lost, trace))
    return _collect(config, branches[0], branches[1], v_max=abs(config.alpha) ** 2)


def ledger_log_overlap(losses) -> complex:
    """Recompute ``log <loss_down|loss_up>`` from a loss ledger."""
    return sum((log_coherent_overlap(e.amp_down, e.amp_up) for e in losses), 0j)


ENGINES = {
    "multi": run_multiple_reflection,
    "single": run_single_reflection,
}
