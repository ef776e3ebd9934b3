"""Stability atlas, simulation and chaos detection for scalar
fractional-order delay differential equations D^alpha x = f(x, x_delayed)."""

from .chaos import EmbeddingConfig, LyapunovEstimate, attractor_xy, delay_embed, mle
from .dynamics import (
    Equilibrium,
    EquilibriumReport,
    Rhs2,
    analyze_equilibrium,
    builtin_rhs,
    find_equilibria,
    linear_rhs,
    linearize,
    parse_rhs,
)
from .errors import (
    ConfigError,
    DegenerateError,
    DomainError,
    ExprSyntaxError,
    FddeAtlasError,
    LengthError,
    NoRootError,
    UnknownIdentifierError,
)
from .solver import (
    FddeProblem,
    KernelWeights,
    Trajectory,
    amplitude_verdict,
    delayed_value,
    kernel_weights,
    simulate,
)
from .stability import (
    CriticalAlphaKind,
    CriticalAlphaResult,
    Region,
    RegionLabel,
    StableSide,
    SystemParams,
    TauExtrema,
    Verdict,
    a0_of,
    a1_of,
    boundary_tau,
    classify_region,
    critical_alpha,
    a0_implicit_residual,
    stability_verdict,
    tau_extrema,
)

__version__ = "0.1.0"

__all__ = [
    "EmbeddingConfig",
    "LyapunovEstimate",
    "attractor_xy",
    "delay_embed",
    "mle",
    "Equilibrium",
    "EquilibriumReport",
    "Rhs2",
    "analyze_equilibrium",
    "builtin_rhs",
    "find_equilibria",
    "linear_rhs",
    "linearize",
    "parse_rhs",
    "ConfigError",
    "DegenerateError",
    "DomainError",
    "ExprSyntaxError",
    "FddeAtlasError",
    "LengthError",
    "NoRootError",
    "UnknownIdentifierError",
    "FddeProblem",
    "KernelWeights",
    "Trajectory",
    "amplitude_verdict",
    "delayed_value",
    "kernel_weights",
    "simulate",
    "CriticalAlphaKind",
    "CriticalAlphaResult",
    "Region",
    "RegionLabel",
    "StableSide",
    "SystemParams",
    "TauExtrema",
    "Verdict",
    "a0_of",
    "a1_of",
    "boundary_tau",
    "classify_region",
    "critical_alpha",
    "a0_implicit_residual",
    "stability_verdict",
    "tau_extrema",
]
