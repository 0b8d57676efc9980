"""Fidelity, effective fidelity and cattiness of a protocol outcome.

The production cattiness is the closed form in terms of coherent overlaps.
:func:`cattiness_fock_oracle` recomputes it by brute force in a truncated
Fock basis and shares no code with the closed form; it exists to check it.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .coherent import coherent_overlap
from .protocols import RunOutcome

NEGATIVE_GUARD = 1e-12


class NumericDiagnosticError(ArithmeticError):
    pass


class TruncationError(ValueError):
    pass


@dataclass(frozen=True)
class MetricsReport:
    fidelity: float
    effective_fidelity: float
    cattiness: float
    alpha_ef_sq: float
    v_max: float = 0.0


def _clip_unit(value: float) -> float:
    if -NEGATIVE_GUARD <= value < 0.0:
        return 0.0
    if 1.0 < value <= 1.0 + NEGATIVE_GUARD:
        return 1.0
    return value


def fidelity(outcome: RunOutcome, target_alpha: complex) -> float:
    """Fidelity against ``(|a>|up> + |-a>|down>)/sqrt(2)`` after tracing out losses."""
    target = complex(target_alpha)
    up = coherent_overlap(target, outcome.c0_up)
    down = coherent_overlap(-target, outcome.c0_down)
    cross = up * down.conjugate() * outcome.loss_overlap
    value = 0.25 * (abs(up) ** 2 + abs(down) ** 2 + 2.0 * cross.real)
    return _clip_unit(value)


def effective_fidelity(outcome: RunOutcome) -> float:
    """Fidelity against the shrunken target ``alpha_ef = -C0_down``."""
    return fidelity(outcome, outcome.alpha_ef)


def cattiness_value(c0_up: complex, c0_down: complex, loss_overlap: complex) -> float:
    """Closed-form cattiness without the sign guard.

    Goes negative once the branch coherence ``|L|^2`` drops below
    ``|<C0_up|C0_down>|^2``, which happens for heavily lossy runs.
    """
    coherence = abs(loss_overlap) ** 2
    distinguishability = abs(coherent_overlap(c0_up, c0_down)) ** 2
    return 0.25 * (coherence - distinguishability) * abs(c0_up - c0_down) ** 2


def cattiness(outcome: RunOutcome) -> float:
    value = cattiness_value(outcome.c0_up, outcome.c0_down, outcome.loss_overlap)
    if value < 0.0:
        if value < -NEGATIVE_GUARD:
            raise NumericDiagnosticError(f"negative cattiness {value:.3e}")
        return 0.0
    return value


def evaluate(outcome: RunOutcome, target_alpha: complex) -> MetricsReport:
    """All metrics for one run; ``target_alpha`` is the fidelity target, normally the input."""
    return MetricsReport(
        fidelity=fidelity(outcome, target_alpha),
        effective_fidelity=effective_fidelity(outcome),
        cattiness=cattiness(outcome),
        alpha_ef_sq=abs(outcome.alpha_ef) ** 2,
        v_max=outcome.v_max,
    )


def _log_overlap_np(bra, ket):
    return -0.5 * np.abs(ket - bra) ** 2 + 1j * np.imag(np.conj(bra) * ket)


def effective_fidelity_array(c0_up, c0_down, log_loss_overlap):
    """Vectorized :func:`effective_fidelity` over arrays of outcome amplitudes."""
    c0_up, c0_down = np.asarray(c0_up, dtype=complex), np.asarray(c0_down, dtype=complex)
    target = -c0_down
    up = np.exp(_log_overlap_np(target, c0_up))
    down = np.exp(_log_overlap_np(-target, c0_down))
    cross = up * np.conj(down) * np.exp(log_loss_overlap)
    return 0.25 * (np.abs(up) ** 2 + np.abs(down) ** 2 + 2.0 * cross.real)


def cattiness_array(c0_up, c0_down, log_loss_overlap):
    """Vectorized :func:`cattiness_value`."""
    c0_up, c0_down = np.asarray(c0_up, dtype=complex), np.asarray(c0_down, dtype=complex)
    coherence = np.exp(2.0 * np.real(log_loss_overlap))
    distinguishability = np.exp(2.0 * np.real(_log_overlap_np(c0_up, c0_down)))
    return 0.25 * (coherence - distinguishability) * np.abs(c0_up - c0_down) ** 2


@dataclass(frozen=True)
class FockTruncation:
    n_max: int

    @classmethod
    def for_amplitudes(cls, *amps: complex) -> "FockTruncation":
        """Cutoff ``n >= |a|^2 + 10|a| + 20`` for the largest amplitude."""
        n_bar = max((abs(a) ** 2 for a in amps), default=0.0)
        return cls(int(math.ceil(n_bar + 10.0 * math.sqrt(n_bar) + 20.0)))


def _fock_vector(amp: complex, n_max: int) -> np.ndarray:
    """``<n|amp>`` for ``n = 0..n_max``, built from the number-state expansion."""
    n = np.arange(n_max + 1)
    vec = np.zeros(n_max + 1, dtype=complex)
    if amp == 0:
        vec[0] = 1.0
        return vec
    log_mag = -0.5 * abs(amp) ** 2 + n * math.log(abs(amp)) - 0.5 * gammaln(n + 1)
    return np.exp(log_mag) * np.exp(1j * n * cmath.phase(amp))


def _tail_mass(amp: complex, n_max: int) -> float:
    vec = _fock_vector(amp, n_max)
    return max(0.0, 1.0 - float(np.sum(np.abs(vec) ** 2)))


def cattiness_fock_oracle(outcome: RunOutcome, trunc: FockTruncation | None = None,
                          outcome_sign: int = 1) -> float:
    """Cattiness from the reduced density matrix in a truncated Fock basis.

    Builds the (unnormalized) post-measurement field state

        rho = 1/2 (|u><u| + |d><d| + s L |u><d| + s L* |d><u|)

    with ``u = C0_up``, ``d = C0_down``, ``L = <loss_down|loss_up>`` and
    ``s = outcome_sign`` (+1 or -1 for the two atom measurement results),
    and evaluates ``Tr(N rho^2) - Tr(rho a rho a^dagger)``.
    """
    if outcome_sign not in (1, -1):
        raise ValueError("outcome_sign must be +1 or -1")
    u_amp, d_amp = complex(outcome.c0_up), complex(outcome.c0_down)
    if trunc is None:
        trunc = FockTruncation.for_amplitudes(u_amp, d_amp)
    n_max = trunc.n_max
    for amp in (u_amp, d_amp):
        tail = _tail_mass(amp, n_max)
        if tail > 1e-10:
            raise TruncationError(f"tail mass {tail:.2e} beyond n_max={n_max} for |amp|^2={abs(amp) ** 2:.3g}")

    u = _fock_vector(u_amp, n_max)
    d = _fock_vector(d_amp, n_max)
    lo = np.exp(outcome.loss_log_overlap)
    rho = 0.5 * (
        np.outer(u, u.conj())
        + np.outer(d, d.conj())
        + outcome_sign * lo * np.outer(u, d.conj())
        + outcome_sign * np.conj(lo) * np.outer(d, u.conj())
    )
    number = np.arange(n_max + 1, dtype=float)
    lower = np.diag(np.sqrt(number[1:]), k=1)
    rho_sq_diag = np.einsum("ij,ji->i", rho, rho)
    term_number = np.sum(number * rho_sq_diag)
    term_jump = np.trace(rho @ lower @ rho @ lower.conj().T)
    return float(np.real(term_number - term_jump))
