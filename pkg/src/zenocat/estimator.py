"""scikit-learn style front end for the protocol engines.

``CatStateSimulator`` holds the cavity, cycle and loss settings as
estimator parameters, so sweeps are plain ``clone(est).set_params(...)``
and the simulator drops into pipelines or ``ParameterGrid`` loops. Its
``transform`` maps a column of input photon numbers ``|alpha|^2`` to the
metric columns.
"""

from __future__ import annotations

import math
import numbers

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .cavity import CavityError, CavityParams
from .metrics import cattiness_value, effective_fidelity, evaluate, fidelity
from .protocols import ENGINES, ConfigError, RunConfig, RunOutcome

METRIC_COLUMNS = ("F", "F_ef", "C_a", "alpha_ef_sq", "v_max")


def _check_real(name, value, low=None, high=None, low_inclusive=True):
    if isinstance(value, bool) or not isinstance(value, numbers.Real) or not math.isfinite(value):
        raise ConfigError(name, f"must be a finite real number, got {value!r}")
    if low is not None and (value < low or (value == low and not low_inclusive)):
        raise ConfigError(name, f"must be {'>=' if low_inclusive else '>'} {low}, got {value!r}")
    if high is not None and value >= high:
        raise ConfigError(name, f"must be < {high}, got {value!r}")


class CatStateSimulator(TransformerMixin, BaseEstimator):
    """Multiple-reflection (or single-reflection) cat-state simulator.

    Parameters
    ----------
    m_cycles : int
        Number of Michelson round trips; the beam splitter angle is
        ``pi / (2 * m_cycles)``.
    epsilon : float
        Per-arm, per-cycle intensity loss of the classical optics.
    g, gamma, kappa_r, kappa_t, delta : float
        Atom-cavity rates, each the ``x`` in ``2*pi*x MHz``.
    mode : {"multi", "single"}
        Engine to run.
    """

    def __init__(self, m_cycles=10, epsilon=0.0, g=7.8, gamma=3.0, kappa_r=2.3,
                 kappa_t=0.0, delta=0.0, mode="multi"):
        self.m_cycles = m_cycles
        self.epsilon = epsilon
        self.g = g
        self.gamma = gamma
        self.kappa_r = kappa_r
        self.kappa_t = kappa_t
        self.delta = delta
        self.mode = mode

    @classmethod
    def from_run_config(cls, config: RunConfig, mode="multi"):
        cav = config.cavity
        return cls(m_cycles=config.m_cycles, epsilon=config.epsilon, g=cav.g, gamma=cav.gamma,
                   kappa_r=cav.kappa_r, kappa_t=cav.kappa_t, delta=cav.delta, mode=mode)

    def _validate_params(self):
        if isinstance(self.m_cycles, bool) or not isinstance(self.m_cycles, numbers.Integral) \
                or self.m_cycles < 1:
            raise ConfigError("m_cycles", f"must be an integer >= 1, got {self.m_cycles!r}")
        _check_real("epsilon", self.epsilon, 0.0, 1.0)
        _check_real("g", self.g, 0.0)
        _check_real("gamma", self.gamma, 0.0)
        _check_real("kappa_r", self.kappa_r, 0.0, low_inclusive=False)
        _check_real("kappa_t", self.kappa_t, 0.0)
        _check_real("delta", self.delta)
        if self.mode not in ENGINES:
            raise ConfigError("mode", f"must be one of {sorted(ENGINES)}, got {self.mode!r}")

    def fit(self, X=None, y=None):
        """Validate parameters; there is nothing to learn."""
        self._validate_params()
        try:
            self.cavity_ = CavityParams(g=float(self.g), gamma=float(self.gamma),
                                        kappa_r=float(self.kappa_r), kappa_t=float(self.kappa_t),
                                        delta=float(self.delta))
        except CavityError as exc:
            raise ConfigError("cavity", str(exc)) from exc
        self.engine_ = ENGINES[self.mode]
        if X is not None:
            X = self._check_input(X, reset=True)
        return self

    def _check_input(self, X, reset=False):
        X = check_array(X, ensure_2d=False, dtype=np.float64)
        if X.ndim == 1:
            X = X.reshape(-1, 1)
        if X.shape[1] != 1:
            raise ValueError(f"expected one column of |alpha|^2 values, got {X.shape[1]}")
        if np.any(X < 0):
            raise ValueError("|alpha|^2 must be non-negative")
        if reset:
            self.n_features_in_ = 1
        return X

    def run_config(self, alpha, trace=False) -> RunConfig:
        check_is_fitted(self, "cavity_")
        return RunConfig(alpha=alpha, m_cycles=int(self.m_cycles), epsilon=float(self.epsilon),
                         cavity=self.cavity_, trace_enabled=trace)

    def simulate(self, alpha, trace=False) -> RunOutcome:
        """Run the engine for a single complex input amplitude."""
        return self.engine_(self.run_config(alpha, trace=trace))

    def report(self, alpha):
        """:class:`~zenocat.metrics.MetricsReport` for one input amplitude."""
        return evaluate(self.simulate(alpha), alpha)

    def metric_row(self, alpha) -> np.ndarray:
        """``[F, F_ef, C_a, |alpha_ef|^2, v_max]`` with the signed cattiness."""
        outcome = self.simulate(alpha)
        return np.array([
            fidelity(outcome, alpha),
            effective_fidelity(outcome),
            cattiness_value(outcome.c0_up, outcome.c0_down, outcome.loss_overlap),
            abs(outcome.alpha_ef) ** 2,
            outcome.v_max,
        ])

    def transform(self, X):
        """Map a column of ``|alpha|^2`` (real input amplitude) to metric columns."""
        check_is_fitted(self, "cavity_")
        X = self._check_input(X)
        return np.vstack([self.metric_row(math.sqrt(x)) for x in X[:, 0]]) if len(X) else \
            np.empty((0, len(METRIC_COLUMNS)))

    def get_feature_names_out(self, input_features=None):
        return np.asarray(METRIC_COLUMNS, dtype=object)

    def score(self, X, y=None):
        """Mean effective fidelity over the input photon numbers."""
        return float(np.mean(self.transform(X)[:, 1]))
