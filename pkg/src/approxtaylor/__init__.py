"""Approximate Taylor methods for ODEs.

High-order one-step integrators that replace the derivative chain of a
classical Taylor method with centered finite differences of ``f``, plus the
exact Runge-Kutta tableau of each method and its stability polynomial.
"""
from .errors import DomainError, IntegrationError, ShapeError, StepFailure
from .stencil import StencilCoefficients, apply_stencil, derive_stencil, gamma_coefficients
from .integrator import (
    DerivativeStack,
    OdeProblem,
    autonomize,
    derivative_recursion,
    exact_taylor_linear_step,
    integrate,
    linear_problem,
    step,
    taylor_poly_eval,
)
from .tableau import (
    ButcherTableau,
    StageIndex,
    build_tableau,
    explicit_rk_step,
    index_map,
    stage_count,
    stage_halfwidth,
    structural_report,
)
from .stability import (
    StabilityGrid,
    in_region,
    q_eval,
    real_stability_interval,
    region_scan,
    verify_linear_equivalence,
)

__version__ = "0.1.0"
