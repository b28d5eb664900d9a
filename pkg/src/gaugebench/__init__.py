"""Truncation-error benchmarks for two gauge-equivalent cavity-QED models.

A charged particle in an infinite square well couples to a single photon
mode either through its momentum (Coulomb-gauge minimal coupling) or
through its dipole against a conjugate field quadrature.  The package
converges exact low-lying gaps, scores fixed few-level matter
truncations against them, and maps the resulting errors over coupling
strength and geometry.
"""

__version__ = "0.1.0"

from .errors import (
    ConfigurationError,
    ConsistencyError,
    DimensionCapError,
    DomainError,
    GaugebenchError,
    NumericalError,
)
from .hamiltonians import (
    Gauge,
    ModelParams,
    amplitude_for_g_tilde,
    build,
    build_factored,
    coupling_diagnostics,
    resonant_geometry,
    well_length_for_omega10,
)
from .operators import (
    HermitianOperator,
    MatterBasisSpec,
    PhotonBasisSpec,
    isw_energies,
    isw_momentum_matrix,
    isw_position_matrix,
)
from .regimes import RegimeEntry, load_regimes
from .spectrum import ConvergenceReport, GapResult, converge_gap, lowest_gap, relative_error
from .sweep import (
    AxisSpec,
    ErrorMap,
    SweepConfig,
    SweepMode,
    default_resonant_config,
    run_sweep,
    sweep_point,
    to_csv,
)

__all__ = [
    "__version__",
    "AxisSpec",
    "ConfigurationError",
    "ConsistencyError",
    "ConvergenceReport",
    "DimensionCapError",
    "DomainError",
    "ErrorMap",
    "Gauge",
    "GapResult",
    "GaugebenchError",
    "HermitianOperator",
    "MatterBasisSpec",
    "ModelParams",
    "NumericalError",
    "PhotonBasisSpec",
    "RegimeEntry",
    "SweepConfig",
    "SweepMode",
    "amplitude_for_g_tilde",
    "build",
    "build_factored",
    "converge_gap",
    "coupling_diagnostics",
    "default_resonant_config",
    "isw_energies",
    "isw_momentum_matrix",
    "isw_position_matrix",
    "load_regimes",
    "lowest_gap",
    "relative_error",
    "resonant_geometry",
    "run_sweep",
    "sweep_point",
    "to_csv",
    "well_length_for_omega10",
]
