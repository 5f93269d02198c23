"""Stochastic proximal solvers for sparse composite objectives.

Thin wrapper over the compiled extension. The heavy lifting (penalties,
projections, solvers, benchmark driver) lives in the C++ core; this package
exposes the pieces that are useful interactively: proximal points and
penalty values, feasible-set projections, the synthetic sparse
principal-component generator, a one-call PCA solve, and the benchmark
runner fed by a JSON string.
"""

from ._spgm import (
    penalty_value,
    project,
    prox,
    run_benchmark_json,
    solve_pca,
    synthetic_pca,
)

__all__ = [
    "penalty_value",
    "project",
    "prox",
    "run_benchmark_json",
    "solve_pca",
    "synthetic_pca",
]
