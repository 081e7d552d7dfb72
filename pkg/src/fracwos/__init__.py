"""Walk-on-spheres Monte Carlo and deterministic ball quadrature for the
fractional Poisson equation with exterior Dirichlet data."""

from ._backend import backend_name, using_numba
from .errors import (ConfigError, DomainError, EstimationFailure, FracwosError,
                     SingularityError, UnsupportedParameterError)
from .geometry import Domain, contains, inscribed_radius, spherical_to_cartesian
from .kernels import (BallContext, FracConstants, classical_green_limit,
                      constants, exit_mass_a, green_function, green_mass_b,
                      interior_weight, poisson_kernel)
from .quadrature import (GridSpec, convergence_study, scheme1_homogeneous,
                         scheme1_source_2d)
from .sampling import (AngularLaw, RngStream, sample_direction,
                       sample_exit_point, sample_exit_radius,
                       sample_interior_point, sample_interior_radius,
                       sample_sin_power_angle)
from .theory import (StepBoundInputs, empirical_step_check,
                     expected_steps_bound, green_bound_constants)
from .wos import (EstimatorSummary, ProblemSpec, WalkResult, estimate,
                  run_walk, source_contribution_1d)

__version__ = "0.1.0"

__all__ = [
    "backend_name", "using_numba",
    "FracwosError", "DomainError", "SingularityError",
    "UnsupportedParameterError", "ConfigError", "EstimationFailure",
    "Domain", "contains", "inscribed_radius", "spherical_to_cartesian",
    "FracConstants", "BallContext", "constants", "poisson_kernel",
    "green_function", "exit_mass_a", "green_mass_b", "interior_weight",
    "classical_green_limit",
    "RngStream", "AngularLaw", "sample_exit_radius", "sample_interior_radius",
    "sample_sin_power_angle", "sample_direction", "sample_exit_point",
    "sample_interior_point",
    "ProblemSpec", "WalkResult", "EstimatorSummary", "run_walk",
    "source_contribution_1d", "estimate",
    "GridSpec", "scheme1_homogeneous", "scheme1_source_2d", "convergence_study",
    "StepBoundInputs", "expected_steps_bound", "green_bound_constants",
    "empirical_step_check",
]
