"""Coherent-state amplitude algebra.

Amplitudes are plain Python ``complex`` values. A two-mode coherent state
``|u, v>`` is carried as a :class:`ModePair`; linear optics acts on the
amplitudes directly, so no Fock representation is needed here.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass


@dataclass(frozen=True)
class ModePair:
    """Zone 0 / Zone 1 amplitudes of a two-mode coherent state."""

    a0: complex
    a1: complex

    @property
    def energy(self) -> float:
        return abs(self.a0) ** 2 + abs(self.a1) ** 2

    def scale(self, f0: complex, f1: complex | None = None) -> "ModePair":
        """Multiply zone amplitudes by ``f0`` and ``f1`` (``f1`` defaults to ``f0``)."""
        if f1 is None:
            f1 = f0
        return ModePair(self.a0 * f0, self.a1 * f1)

    def is_finite(self) -> bool:
        return cmath.isfinite(self.a0) and cmath.isfinite(self.a1)


def bs_transform(state: ModePair, theta: float) -> ModePair:
    """Beam splitter with reflectivity cos^2(theta).

    Maps ``|u, v>`` to ``|u cos - v sin, u sin + v cos>``.
    """
    c, s = math.cos(theta), math.sin(theta)
    u, v = state.a0, state.a1
    return ModePair(u * c - v * s, u * s + v * c)


def phase_shift(amp: complex, phi: float) -> complex:
    return amp * cmath.exp(1j * phi)


def log_coherent_overlap(bra: complex, ket: complex) -> complex:
    """Natural log of ``<bra|ket>``."""
    if bra == ket:
        return 0j
    # real part written as -|ket - bra|^2 / 2 so it can never round above zero
    return complex(-0.5 * abs(ket - bra) ** 2, (bra.conjugate() * ket).imag)


def coherent_overlap(bra: complex, ket: complex) -> complex:
    """Inner product ``<bra|ket>`` of two coherent states.

    >>> abs(coherent_overlap(2.0, -2.0) - math.exp(-8)) < 1e-15
    True
    """
    return cmath.exp(log_coherent_overlap(bra, ket))


@dataclass(frozen=True)
class OverlapAccumulator:
    """Running ``log <loss_down|loss_up>`` over independent loss modes.

    Each loss channel is a separate mode holding coherent amplitude
    ``l_up`` (atom up) or ``l_down`` (atom down); the total overlap is the
    product of per-channel overlaps, kept as a sum of logs so hundreds of
    factors below one never underflow.
    """

    log_overlap: complex = 0j

    def add(self, l_up: complex, l_down: complex) -> "OverlapAccumulator":
        return accumulate_loss(self, l_up, l_down)

    @property
    def overlap(self) -> complex:
        return cmath.exp(self.log_overlap)

    @property
    def magnitude(self) -> float:
        return math.exp(self.log_overlap.real)


def accumulate_loss(acc: OverlapAccumulator, l_up: complex, l_down: complex) -> OverlapAccumulator:
    l_up, l_down = complex(l_up), complex(l_down)
    return OverlapAccumulator(acc.log_overlap + log_coherent_overlap(l_down, l_up))
