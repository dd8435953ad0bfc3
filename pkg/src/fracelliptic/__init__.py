"""Finite differences for one-dimensional two-sided space-fractional
elliptic problems -(kappa(x) D^{alpha,theta} u)' = f with variable
diffusivity and zero boundary values.

The discrete operator weights a left-sided and a right-sided
Riemann-Liouville derivative by theta and 1-theta; assembled systems are
lower/upper Hessenberg at the skewness extremes, full in between, and
collapse to the classical tridiagonal scheme at alpha = 1.  Manufactured
solutions x^p (1-x)^q with exact fractional forcings, a quadrature oracle,
convergence-study drivers and bundled benchmark tables are included.
"""

__version__ = "0.1.0"

from .analysis import (ConvergenceReport, LevelResult, convergence_study,
                       emit_report, error_inf, rate, rate_alpha_sweep,
                       solve_case_on_mesh, truncation_residual)
from .assembly import (AssembledSystem, Scheme, SystemStructure, assemble_general,
                       assemble_ls, assemble_rs, assemble_two_sided, build_rhs,
                       dump_matrix, rhs_scaling)
from .coefficients import (CoefficientField, ConstantField, ExpressionField,
                           OnePlusExpField, TabulatedField, make_field)
from .kernels import (FracOrder, KernelWeights, b_seq, cell_kernel_integral,
                      e_seq, omega, snap_alpha, w_alpha_matrix, weight)
from .manufactured import (CaseLabel, ManufacturedCase, QuadratureError,
                           SeriesConvergenceError, custom_case, example1_case,
                           example2_case, f_manufactured, flux_derivative,
                           flux_exact, ls_frac_deriv_monomial, oracle_flux,
                           oracle_forcing, u_exact)
from .mesh import Mesh, MeshKind, Side, graded_mesh, half_points, uniform_mesh
from .solvers import (SingularMatrixError, Solution, solve_auto, solve_dense,
                      solve_hessenberg)

__all__ = [
    "__version__",
    # mesh
    "Mesh", "MeshKind", "Side", "uniform_mesh", "graded_mesh", "half_points",
    # kernels
    "FracOrder", "KernelWeights", "snap_alpha", "weight", "b_seq", "omega",
    "cell_kernel_integral", "w_alpha_matrix", "e_seq",
    # coefficients
    "CoefficientField", "ConstantField", "OnePlusExpField", "ExpressionField",
    "TabulatedField", "make_field",
    # assembly
    "Scheme", "SystemStructure", "AssembledSystem", "assemble_ls", "assemble_rs",
    "assemble_two_sided", "assemble_general", "build_rhs", "rhs_scaling",
    "dump_matrix",
    # solvers
    "Solution", "SingularMatrixError", "solve_dense", "solve_hessenberg",
    "solve_auto",
    # manufactured
    "CaseLabel", "ManufacturedCase", "example1_case", "example2_case",
    "custom_case", "u_exact", "ls_frac_deriv_monomial", "flux_exact",
    "flux_derivative", "f_manufactured", "oracle_flux", "oracle_forcing",
    "SeriesConvergenceError", "QuadratureError",
    # analysis
    "ConvergenceReport", "LevelResult", "error_inf", "rate", "convergence_study",
    "truncation_residual", "rate_alpha_sweep", "emit_report", "solve_case_on_mesh",
]
