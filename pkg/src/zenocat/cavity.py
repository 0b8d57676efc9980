"""Steady-state input-output response of the one-sided atom-cavity system.

Rates are stored as the ``x`` in ``2*pi*x MHz``. Every coefficient depends
only on ratios of rates, so the ``2*pi`` never has to be materialized.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum


class CavityError(ValueError):
    pass


class AtomState(Enum):
    UP = "up"
    DOWN = "down"


@dataclass(frozen=True)
class CavityParams:
    """Atom-cavity rates in 2*pi x MHz units.

    Attributes:
        g: atom-cavity coupling.
        gamma: atomic dipole decay (half the spontaneous emission rate).
        kappa_r: field decay through the coupling mirror.
        kappa_t: field decay through the nominally closed mirror.
        delta: atom-cavity detuning, may be negative.
    """

    g: float = 7.8
    gamma: float = 3.0
    kappa_r: float = 2.3
    kappa_t: float = 0.0
    delta: float = 0.0

    def __post_init__(self):
        for name in ("g", "gamma", "kappa_r", "kappa_t", "delta"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise CavityError(f"{name} must be finite, got {value!r}")
        if self.g < 0:
            raise CavityError(f"g must be >= 0, got {self.g}")
        if self.gamma < 0:
            raise CavityError(f"gamma must be >= 0, got {self.gamma}")
        if self.kappa_r <= 0:
            raise CavityError(f"kappa_r must be > 0, got {self.kappa_r}")
        if self.kappa_t < 0:
            raise CavityError(f"kappa_t must be >= 0, got {self.kappa_t}")

    @property
    def kappa(self) -> float:
        return self.kappa_r + self.kappa_t

    @classmethod
    def from_dimensionless(cls, g, kappa_r, gamma_tilde=0.0, delta_tilde=0.0, kappa_t=0.0):
        """Build params from ``gamma~ = kappa_r*gamma/g^2`` and ``delta~ = kappa_r*delta/g^2``."""
        unit = g * g / kappa_r
        return cls(g=g, gamma=gamma_tilde * unit, kappa_r=kappa_r,
                   kappa_t=kappa_t, delta=delta_tilde * unit)


@dataclass(frozen=True)
class ScatterCoeffs:
    """Reflection, transmission and scattering amplitude ratios."""

    r: complex
    t: complex
    s: complex

    @property
    def reflectivity(self) -> float:
        return abs(self.r) ** 2

    @property
    def reflection_phase(self) -> float:
        return cmath.phase(self.r)

    @property
    def total(self) -> float:
        return abs(self.r) ** 2 + abs(self.t) ** 2 + abs(self.s) ** 2


def scatter_coeffs(params: CavityParams, atom: AtomState = AtomState.UP) -> ScatterCoeffs:
    """Output amplitudes per unit input amplitude on the coupling mirror.

    With ``D = kappa*(i*delta + gamma) + g_eff^2`` and ``g_eff = g`` for the
    coupled state (0 for the decoupled state)::

        r = 1 - 2 kappa_r (i delta + gamma) / D
        t = -2 sqrt(kappa_t kappa_r) (i delta + gamma) / D
        s = 2 g_eff sqrt(kappa_r gamma) / D

    The decoupled atom leaves an empty cavity whose response does not depend
    on ``gamma`` or ``delta``; it is evaluated in the ``(i delta + gamma)``
    cancelled form so that ``gamma = delta = 0`` is regular.
    """
    kappa = params.kappa
    if atom is AtomState.DOWN:
        return ScatterCoeffs(
            r=complex((params.kappa_t - params.kappa_r) / kappa),
            t=complex(-2.0 * math.sqrt(params.kappa_t * params.kappa_r) / kappa),
            s=0j,
        )
    x = complex(params.gamma, params.delta)
    denom = kappa * x + params.g ** 2
    if denom == 0:
        # g = gamma = delta = 0: the coupled state degenerates to the empty cavity
        return scatter_coeffs(params, AtomState.DOWN)
    return ScatterCoeffs(
        r=1.0 - 2.0 * params.kappa_r * x / denom,
        t=-2.0 * math.sqrt(params.kappa_t * params.kappa_r) * x / denom,
        s=2.0 * params.g * math.sqrt(params.kappa_r * params.gamma) / denom,
    )


def empty_cavity_loss(params: CavityParams) -> float:
    """Fraction of intensity not reflected by the empty cavity."""
    ratio = (params.kappa_t - params.kappa_r) / (params.kappa_t + params.kappa_r)
    return 1.0 - ratio * ratio


def type1_loss(params: CavityParams) -> float:
    """Fraction of intensity not reflected when the atom is coupled."""
    return 1.0 - scatter_coeffs(params, AtomState.UP).reflectivity


def dimensionless(params: CavityParams) -> tuple[float, float]:
    """Return ``(gamma~, delta~)``; ``1/gamma~`` is the cooperativity."""
    if params.g == 0:
        raise CavityError("dimensionless rates need g > 0")
    unit = params.kappa_r / params.g ** 2
    return params.gamma * unit, params.delta * unit
