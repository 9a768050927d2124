"""Transfer-operator thermodynamics for circle local diffeomorphisms.

Numerically realizes the thermodynamic formalism of the geometric potential
family -t log|Df|: discretized transfer operators, pressure curves, phase
transition location and classification, equilibrium states, and spectral
gap diagnostics, all cross-checked against analytic and periodic-orbit
oracles.
"""

from .errors import (
    BranchSolverError,
    BudgetError,
    ConfigError,
    ConvergenceError,
    InvalidMapError,
    NoSignStructureError,
    PerronStructureError,
)
from .maps import (
    CircleMap,
    MapDiagnostics,
    circle_distance,
    d_adic,
    derivative,
    diagnose,
    evaluate,
    inverse_branches,
    make_map,
    manneville_pomeau_circle,
    neutral_doubling,
    perturbed_expanding,
    piecewise_linear,
)
from .oracles import (
    PeriodicOrbitSet,
    birkhoff_average,
    birkhoff_averages,
    exact_pressure_piecewise_linear,
    periodic_orbits,
    pressure_periodic_orbits,
)
from .spectral import (
    EquilibriumState,
    SpectralData,
    equilibrium_state,
    leading_eigenvalue,
    leading_spectrum,
    spectral_data,
)
from .thermo import (
    EssentialBoundCheck,
    PressureCurve,
    TransitionReport,
    VarianceReport,
    bowen_root,
    classify_transition,
    entropy_rokhlin,
    essential_bound_check,
    find_t0,
    lyapunov_extrema,
    pressure,
    pressure_curve,
    variance,
)
from .transfer import (
    GeometricPotential,
    OperatorMatrix,
    apply_pointwise,
    assemble,
    assemble_collocation,
    assemble_ulam,
)

__version__ = "0.1.0"

__all__ = [
    "BranchSolverError",
    "BudgetError",
    "CircleMap",
    "ConfigError",
    "ConvergenceError",
    "EquilibriumState",
    "EssentialBoundCheck",
    "GeometricPotential",
    "InvalidMapError",
    "MapDiagnostics",
    "NoSignStructureError",
    "OperatorMatrix",
    "PeriodicOrbitSet",
    "PerronStructureError",
    "PressureCurve",
    "SpectralData",
    "TransitionReport",
    "VarianceReport",
    "apply_pointwise",
    "assemble",
    "assemble_collocation",
    "assemble_ulam",
    "birkhoff_average",
    "birkhoff_averages",
    "bowen_root",
    "circle_distance",
    "classify_transition",
    "d_adic",
    "derivative",
    "diagnose",
    "entropy_rokhlin",
    "equilibrium_state",
    "essential_bound_check",
    "evaluate",
    "exact_pressure_piecewise_linear",
    "find_t0",
    "inverse_branches",
    "leading_eigenvalue",
    "leading_spectrum",
    "lyapunov_extrema",
    "make_map",
    "manneville_pomeau_circle",
    "neutral_doubling",
    "periodic_orbits",
    "perturbed_expanding",
    "piecewise_linear",
    "pressure",
    "pressure_curve",
    "pressure_periodic_orbits",
    "spectral_data",
    "variance",
]
