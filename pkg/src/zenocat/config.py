"""Flat JSON run configuration.

Example::

    {"alpha_sq": 4, "m_cycles": 10, "epsilon": 0.0,
     "g_mhz": 7.8, "gamma_mhz": 3.0, "kappa_r_mhz": 2.3,
     "kappa_t_mhz": 0.0, "delta_mhz": 0.0, "mode": "multi"}

Rates use the ``2*pi*x MHz`` convention: ``"g_mhz": 7.8`` is
``g = 2*pi * 7.8 MHz``. Unknown keys are rejected so a typo never silently
falls back to a default.
"""

from __future__ import annotations

import json
import math
import numbers
from dataclasses import asdict, dataclass

from .cavity import CavityParams
from .estimator import CatStateSimulator
from .protocols import ConfigError, RunConfig

REQUIRED_KEYS = ("alpha_sq", "m_cycles", "epsilon", "g_mhz", "gamma_mhz",
                 "kappa_r_mhz", "kappa_t_mhz", "delta_mhz", "mode")
OPTIONAL_KEYS = ("trace",)


@dataclass(frozen=True)
class SimulationConfig:
    alpha_sq: float
    m_cycles: int
    epsilon: float
    g_mhz: float
    gamma_mhz: float
    kappa_r_mhz: float
    kappa_t_mhz: float
    delta_mhz: float
    mode: str = "multi"
    trace: bool = False

    @property
    def alpha(self) -> float:
        return math.sqrt(self.alpha_sq)

    @property
    def cavity(self) -> CavityParams:
        return CavityParams(g=self.g_mhz, gamma=self.gamma_mhz, kappa_r=self.kappa_r_mhz,
                            kappa_t=self.kappa_t_mhz, delta=self.delta_mhz)

    def run_config(self) -> RunConfig:
        return RunConfig(alpha=self.alpha, m_cycles=self.m_cycles, epsilon=self.epsilon,
                         cavity=self.cavity, trace_enabled=self.trace)

    def estimator(self) -> CatStateSimulator:
        return CatStateSimulator(m_cycles=self.m_cycles, epsilon=self.epsilon, g=self.g_mhz,
                                 gamma=self.gamma_mhz, kappa_r=self.kappa_r_mhz,
                                 kappa_t=self.kappa_t_mhz, delta=self.delta_mhz, mode=self.mode)


def _real(data, key, *, low=None, low_open=False, high=None):
    value = data[key]
    if isinstance(value, bool) or not isinstance(value, numbers.Real) or not math.isfinite(value):
        raise ConfigError(key, f"must be a finite number, got {value!r}")
    value = float(value)
    if low is not None and (value < low or (low_open and value == low)):
        raise ConfigError(key, f"must be {'>' if low_open else '>='} {low}, got {value!r}")
    if high is not None and value >= high:
        raise ConfigError(key, f"must be < {high}, got {value!r}")
    return value


def parse_config(data: dict) -> SimulationConfig:
    if not isinstance(data, dict):
        raise ConfigError("config", "top level must be an object of key/value pairs")
    for key in data:
        if key not in REQUIRED_KEYS and key not in OPTIONAL_KEYS:
            raise ConfigError(key, "unknown key")
    for key in REQUIRED_KEYS:
        if key not in data:
            raise ConfigError(key, "missing required key")

    m_cycles = data["m_cycles"]
    if isinstance(m_cycles, bool) or not isinstance(m_cycles, numbers.Integral) or m_cycles < 1:
        raise ConfigError("m_cycles", f"must be an integer >= 1, got {m_cycles!r}")
    mode = data["mode"]
    if mode not in ("multi", "single"):
        raise ConfigError("mode", f"must be 'multi' or 'single', got {mode!r}")
    trace = data.get("trace", False)
    if not isinstance(trace, bool):
        raise ConfigError("trace", f"must be true or false, got {trace!r}")

    return SimulationConfig(
        alpha_sq=_real(data, "alpha_sq", low=0.0, low_open=True),
        m_cycles=int(m_cycles),
        epsilon=_real(data, "epsilon", low=0.0, high=1.0),
        g_mhz=_real(data, "g_mhz", low=0.0),
        gamma_mhz=_real(data, "gamma_mhz", low=0.0),
        kappa_r_mhz=_real(data, "kappa_r_mhz", low=0.0, low_open=True),
        kappa_t_mhz=_real(data, "kappa_t_mhz", low=0.0),
        delta_mhz=_real(data, "delta_mhz"),
        mode=mode,
        trace=trace,
    )


def load_config(path) -> SimulationConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigError("config", f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError("config", f"{path} is not valid JSON: {exc}") from exc
    return parse_config(data)


def dump_config(config: SimulationConfig) -> str:
    return json.dumps(asdict(config), indent=2, sort_keys=False) + "\n"
