"""Cat-state generation by a Zeno-blockade Michelson interferometer with an atom-cavity switch."""

from .cavity import AtomState, CavityError, CavityParams, ScatterCoeffs, scatter_coeffs
from .coherent import ModePair, OverlapAccumulator, bs_transform, coherent_overlap, log_coherent_overlap
from .config import SimulationConfig, dump_config, load_config, parse_config
from .estimator import CatStateSimulator
from .experiments import (
    SweepAxis, SweepSpec, ToleranceMetric, ToleranceResult, find_epsilon_tolerance,
    geometry_estimate, sweep, tolerance_table,
)
from .metrics import (
    MetricsReport, NumericDiagnosticError, cattiness, cattiness_fock_oracle, cattiness_value,
    effective_fidelity, evaluate, fidelity,
)
from .protocols import (
    ChainConfig, ConfigError, LossChannel, ObjectState, RunConfig, RunOutcome,
    run_chain, run_multiple_reflection, run_single_reflection,
)
from .tables import OutputTable

__version__ = "0.1.0"

__all__ = [
    "AtomState", "CavityError", "CavityParams", "ScatterCoeffs", "scatter_coeffs",
    "ModePair", "OverlapAccumulator", "bs_transform", "coherent_overlap", "log_coherent_overlap",
    "SimulationConfig", "dump_config", "load_config", "parse_config",
    "CatStateSimulator",
    "SweepAxis", "SweepSpec", "ToleranceMetric", "ToleranceResult", "find_epsilon_tolerance",
    "geometry_estimate", "sweep", "tolerance_table",
    "MetricsReport", "NumericDiagnosticError", "cattiness", "cattiness_fock_oracle",
    "cattiness_value", "effective_fidelity", "evaluate", "fidelity",
    "ChainConfig", "ConfigError", "LossChannel", "ObjectState", "RunConfig", "RunOutcome",
    "run_chain", "run_multiple_reflection", "run_single_reflection",
    "OutputTable",
]
