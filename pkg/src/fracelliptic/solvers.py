"""Dense and structured solvers for the assembled systems.

solve_dense is the reference path (LAPACK LU with partial pivoting).
solve_hessenberg exploits the single off-triangular diagonal of the one-sided
schemes for O(P^2) work; tridiagonal systems are accepted as a degenerate
case.  Both recompute the residual against the original system so the
diagnostics are trustworthy, and both raise SingularMatrixError when a pivot
collapses (which, for admissible positive kappa, signals a bug rather than a
genuinely singular system).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.linalg import LinAlgWarning, lu_factor, lu_solve

from .assembly import AssembledSystem, SystemStructure

__all__ = ["Solution", "SingularMatrixError", "solve_dense", "solve_hessenberg",
           "solve_auto", "PIVOT_RTOL"]

# pivot magnitudes below PIVOT_RTOL * ||B||_inf are treated as singular
PIVOT_RTOL = 1e-14


class SingularMatrixError(RuntimeError):
    pass


@dataclass(frozen=True)
class Solution:
    """Interior solution values plus diagnostics.

    with_boundary has length P+1 and carries the homogeneous boundary values
    exactly; residual_inf is ||B U - F||_inf recomputed after the solve.
    """

    interior: np.ndarray
    with_boundary: np.ndarray
    pivot_min: float
    residual_inf: float


def _finish(system: AssembledSystem, interior: np.ndarray, pivot_min: float) -> Solution:
    residual = float(np.max(np.abs(system.matrix @ interior - system.rhs))) \
        if interior.size else 0.0
    full = np.zeros(interior.size + 2)
    full[1:-1] = interior
    return Solution(interior=interior, with_boundary=full,
                    pivot_min=pivot_min, residual_inf=residual)


def _check_finite(system: AssembledSystem) -> None:
    if not (np.all(np.isfinite(system.matrix)) and np.all(np.isfinite(system.rhs))):
        raise ValueError("system contains non-finite entries")


def solve_dense(system: AssembledSystem) -> Solution:
    """LU with partial pivoting; works for any structure tag."""
    _check_finite(system)
    norm = float(np.max(np.abs(system.matrix))) if system.n else 0.0
    with warnings.catch_warnings():
        # near-singularity is diagnosed via the pivot check below
        warnings.simplefilter("ignore", LinAlgWarning)
        lu, piv = lu_factor(system.matrix, check_finite=False)
    pivots = np.abs(np.diag(lu))
    pivot_min = float(pivots.min()) if pivots.size else np.inf
    if pivot_min < PIVOT_RTOL * norm:
        raise SingularMatrixError(
            f"pivot {pivot_min:.3e} below {PIVOT_RTOL:.0e} * ||B||_inf; "
            "system is numerically singular")
    interior = lu_solve((lu, piv), system.rhs, check_finite=False)
    return _finish(system, interior, pivot_min)


def solve_hessenberg(system: AssembledSystem) -> Solution:
    """O(P^2) elimination for Hessenberg (or tridiagonal) systems.

    Lower-Hessenberg systems are solved by reversing rows and columns, which
    turns them upper Hessenberg.  Partial pivoting swaps at most the two
    candidate rows per column, preserving the O(P^2) bound.  Results agree
    with solve_dense to solver tolerance.
    """
    _check_finite(system)
    if system.structure is SystemStructure.FULL:
        raise ValueError("solve_hessenberg requires a Hessenberg or tridiagonal "
                         "structure tag; use solve_dense")
    flip = system.structure is SystemStructure.LOWER_HESSENBERG
    A = system.matrix[::-1, ::-1].copy() if flip else system.matrix.copy()
    b = system.rhs[::-1].copy() if flip else system.rhs.copy()
    n = A.shape[0]
    norm = float(np.max(np.abs(system.matrix))) if n else 0.0
    tiny = PIVOT_RTOL * norm
    pivot_min = np.inf
    for k in range(n - 1):
        if abs(A[k + 1, k]) > abs(A[k, k]):
            A[[k, k + 1], k:] = A[[k + 1, k], k:]
            b[k], b[k + 1] = b[k + 1], b[k]
        pivot = A[k, k]
        if abs(pivot) < tiny:
            raise SingularMatrixError(
                f"pivot {abs(pivot):.3e} below {PIVOT_RTOL:.0e} * ||B||_inf at "
                f"column {k}")
        pivot_min = min(pivot_min, abs(pivot))
        if A[k + 1, k] != 0.0:
            mult = A[k + 1, k] / pivot
            A[k + 1, k:] -= mult * A[k, k:]
            A[k + 1, k] = 0.0
            b[k + 1] -= mult * b[k]
    if n:
        if abs(A[n - 1, n - 1]) < tiny:
            raise SingularMatrixError(
                f"pivot {abs(A[n - 1, n - 1]):.3e} below {PIVOT_RTOL:.0e} * "
                f"||B||_inf at column {n - 1}")
        pivot_min = min(pivot_min, abs(A[n - 1, n - 1]))
    u = np.zeros(n)
    for k in range(n - 1, -1, -1):
        u[k] = (b[k] - A[k, k + 1:] @ u[k + 1:]) / A[k, k]
    interior = u[::-1].copy() if flip else u
    return _finish(system, interior, float(pivot_min))


def solve_auto(system: AssembledSystem) -> Solution:
    """Route to the Hessenberg path when the structure allows, else dense."""
    if system.structure is SystemStructure.FULL:
        return solve_dense(system)
    return solve_hessenberg(system)
