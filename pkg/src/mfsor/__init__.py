"""Parallel multi-frontal SOR on structured grids.

Sequential directional Gauss-Seidel/SOR baselines, a box-decomposed
parallel solver with coupled interface systems, explicit-matrix
convergence analysis, and an experiment harness.
"""
import os as _os

# Prefer OpenMP over an outdated TBB runtime, which numba warns about.
_os.environ.setdefault("NUMBA_THREADING_LAYER_PRIORITY", "omp workqueue tbb")

from .discretization import ProblemSpec, Stencil, assemble, l1_error, residual_norm  # noqa: E402
from .grid import (  # noqa: E402
    Decomposition,
    StructuredGrid,
    SweepDirection,
    SweepSchedule,
    build_uniform_grid,
    decompose,
    frontal_order,
    schedule,
)
from .solvers_par import ParallelEngine, parallel_iteration, solve_parallel  # noqa: E402
from .solvers_seq import RelaxationSet, SolveReport, solve_sequential  # noqa: E402

__version__ = "0.1.0"

__all__ = [
    "ProblemSpec",
    "Stencil",
    "assemble",
    "l1_error",
    "residual_norm",
    "Decomposition",
    "StructuredGrid",
    "SweepDirection",
    "SweepSchedule",
    "build_uniform_grid",
    "decompose",
    "frontal_order",
    "schedule",
    "ParallelEngine",
    "parallel_iteration",
    "solve_parallel",
    "RelaxationSet",
    "SolveReport",
    "solve_sequential",
]
