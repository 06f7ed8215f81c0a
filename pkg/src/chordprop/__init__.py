"""Closed-form chord-function propagators for the damped harmonic oscillator."""

from .phase_maps import (
    MapKind,
    KernelKind,
    RegimeError,
    EvolutionMap,
    QuadraticKernel,
    DriveVector,
    generator,
    evolution_map,
    compose,
    inverse,
    alpha_kernel,
    dissipation_kernel,
    drive_vector,
)
from .chord_state import (
    ChordVector,
    GaussianChordState,
    WignerGaussian,
    UnphysicalStateWarning,
    coherent_state,
    evaluate,
    energy,
    to_wigner,
    marginal,
)
from .models import (
    Variant,
    ODRegime,
    Drive,
    ModelParams,
    propagate,
    propagate_pointwise,
    stationary_state,
    closed_form_energy,
)
from .oracle import (
    OracleConfig,
    FockTraceResult,
    map_matrix_rk4,
    characteristics_value,
    kernel_quadrature,
    drive_vector_quadrature,
    fock_energy_trace,
)

__version__ = "0.1.0"

__all__ = [
    "MapKind",
    "KernelKind",
    "RegimeError",
    "EvolutionMap",
    "QuadraticKernel",
    "DriveVector",
    "generator",
    "evolution_map",
    "compose",
    "inverse",
    "alpha_kernel",
    "dissipation_kernel",
    "drive_vector",
    "ChordVector",
    "GaussianChordState",
    "WignerGaussian",
    "UnphysicalStateWarning",
    "coherent_state",
    "evaluate",
    "energy",
    "to_wigner",
    "marginal",
    "Variant",
    "ODRegime",
    "Drive",
    "ModelParams",
    "propagate",
    "propagate_pointwise",
    "stationary_state",
    "closed_form_energy",
    "OracleConfig",
    "FockTraceResult",
    "map_matrix_rk4",
    "characteristics_value",
    "kernel_quadrature",
    "drive_vector_quadrature",
    "fock_energy_trace",
    "__version__",
]
