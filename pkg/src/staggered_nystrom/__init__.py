"""Two-grid staggered Nystrom discretization of the hypersingular equation for
exterior Neumann Helmholtz problems on smooth closed curves."""

from .assembly import (
    AssemblyError,
    BlockSystem,
    Direct,
    Indirect,
    StaggeredGrid,
    assemble_calderon_v,
    assemble_system,
    assemble_w,
    build_grid,
    quadrature_error_matrix,
)
from .dense_solver import SingularMatrixError, cond2, estimate_cond2, lu_factor, lu_solve
from .experiments import RunConfig, default_config, run, to_csv, write_result
from .geometry import ParametricCurve, ScattererConfig, circle, ellipse, reduce_eps, scaled_normal
from .potential import (
    DensitySolution,
    boundary_error,
    evaluate_potential,
    observation_error,
    postprocess_functional,
    richardson,
    solve,
)
from .specfun import DomainError, bessel_jy01, hankel1_0, hankel1_1

__all__ = [
    "AssemblyError", "BlockSystem", "Direct", "Indirect", "StaggeredGrid",
    "assemble_calderon_v", "assemble_system", "assemble_w", "build_grid",
    "quadrature_error_matrix", "SingularMatrixError", "cond2", "estimate_cond2",
    "lu_factor", "lu_solve", "ParametricCurve", "ScattererConfig", "circle", "ellipse",
    "reduce_eps", "scaled_normal", "DensitySolution", "boundary_error",
    "evaluate_potential", "observation_error", "postprocess_functional", "richardson",
    "solve", "DomainError", "bessel_jy01", "hankel1_0", "hankel1_1",
    "RunConfig", "default_config", "run", "to_csv", "write_result",
]
