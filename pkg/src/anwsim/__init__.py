"""Biphoton quantum-walk transport in arrays of quadratically nonlinear waveguides.

Exact closed-form evolution of the degenerate-down-conversion biphoton
state in a coupled waveguide array, transport statistics (sigma, gamma),
regime and border detection, and seeded disorder ensembles.
"""

from anwsim.model import (
    ArrayConfig,
    ConfigError,
    DisorderSpec,
    PumpSpec,
    TransportSeries,
    homogeneous_array,
    validate,
)
from anwsim.spectral import SupermodeDecomposition, decompose, homogeneous_reference
from anwsim.evolution import (
    Basis,
    BiphotonAmplitude,
    border_onset,
    detect_regime_transition,
    gamma_extrema,
    gamma_series,
    photon_distribution,
    propagate_series,
    pump_position_scan,
    qtilde,
    sigma,
    to_individual,
)
from anwsim.disorder import (
    DisorderType,
    EnsembleResult,
    regime_map,
    run_ensemble,
    sample_array,
    sigma_vs_kappa,
)

__version__ = "0.1.0"

__all__ = [
    "ArrayConfig",
    "Basis",
    "BiphotonAmplitude",
    "ConfigError",
    "DisorderSpec",
    "DisorderType",
    "EnsembleResult",
    "PumpSpec",
    "SupermodeDecomposition",
    "TransportSeries",
    "__version__",
    "border_onset",
    "decompose",
    "detect_regime_transition",
    "gamma_extrema",
    "gamma_series",
    "homogeneous_array",
    "homogeneous_reference",
    "photon_distribution",
    "propagate_series",
    "pump_position_scan",
    "qtilde",
    "regime_map",
    "run_ensemble",
    "sample_array",
    "sigma",
    "sigma_vs_kappa",
    "to_individual",
    "validate",
]
