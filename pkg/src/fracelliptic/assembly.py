"""Assembly of the finite-difference systems for
-(kappa(x) * D^{alpha,theta} u)' = f on (a, b) with zero boundary values.

The two-sided operator weights the left-sided fractional derivative by theta
and the right-sided one by 1-theta.  On uniform meshes the closed-form entry
formulas are used: the left-sided matrix is lower Hessenberg, the right-sided
one upper Hessenberg, their theta-combination is full, and at alpha = 1 both
collapse to the classical symmetric tridiagonal scheme.  The uniform system
is assembled in scaled form (entries O(1), right-hand side
Gamma(2-alpha) h^(1+alpha) f).

Non-uniform meshes go through assemble_general, which discretizes the
product-rule expansion of the operator with exact kernel integrals over the
cells.  That formulation is this package's generalization (the uniform
theory does not define one); see assemble_general for how it relates to the
closed-form uniform assembly.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from math import gamma as _gamma

import numpy as np
from scipy.linalg import toeplitz

from .coefficients import CoefficientField
from .kernels import FracOrder, b_seq, snap_alpha
from .mesh import Mesh, half_points

__all__ = [
    "Scheme",
    "SystemStructure",
    "AssembledSystem",
    "assemble_ls",
    "assemble_rs",
    "assemble_two_sided",
    "assemble_general",
    "build_rhs",
    "rhs_scaling",
    "dump_matrix",
]


@dataclass(frozen=True)
class Scheme:
    """The pair (alpha, theta) fixing the discrete operator.

    alpha in (0, 1] is the fractional order; theta in [0, 1] is the skewness
    (theta = 1 purely left-sided, theta = 0 purely right-sided).
    """

    alpha: float
    theta: float

    def __post_init__(self):
        object.__setattr__(self, "alpha", snap_alpha(self.alpha))
        if not 0.0 <= self.theta <= 1.0:
            raise ValueError(f"theta must lie in [0, 1], got {self.theta}")
        object.__setattr__(self, "theta", float(self.theta))

    @property
    def order(self) -> FracOrder:
        return FracOrder(self.alpha)


class SystemStructure(enum.Enum):
    LOWER_HESSENBERG = "lower-hessenberg"
    UPPER_HESSENBERG = "upper-hessenberg"
    TRIDIAGONAL = "tridiagonal"
    FULL = "full"


@dataclass(frozen=True)
class AssembledSystem:
    """Dense (P-1) x (P-1) system with a truthful structure tag.

    scaling is the factor applied to nodal f values in the right-hand side:
    Gamma(2-alpha) h^(1+alpha) for the scaled uniform assembly, 1.0 for the
    unscaled general (physical) assembly.
    """

    matrix: np.ndarray
    rhs: np.ndarray
    structure: SystemStructure
    scaling: float

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=float)
        r = np.asarray(self.rhs, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("matrix must be square")
        if r.shape != (m.shape[0],):
            raise ValueError("rhs length must match the matrix size")
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "rhs", r)

    @property
    def n(self) -> int:
        return self.matrix.shape[0]


def _structure_tag(scheme: Scheme) -> SystemStructure:
    if scheme.alpha == 1.0:
        return SystemStructure.TRIDIAGONAL
    if scheme.theta == 1.0:
        return SystemStructure.LOWER_HESSENBERG
    if scheme.theta == 0.0:
        return SystemStructure.UPPER_HESSENBERG
    return SystemStructure.FULL


def _half_kappa(m: Mesh, kappa: CoefficientField) -> tuple[np.ndarray, np.ndarray]:
    """kappa at x_{n-1/2} and x_{n+1/2} for rows n = 1..P-1; validates positivity."""
    kh = np.asarray(kappa.value(half_points(m)), dtype=float)
    if np.any(kh <= 0.0) or not np.all(np.isfinite(kh)):
        raise ValueError("kappa must be positive and finite on the domain")
    return kh[:-1], kh[1:]


def _require_uniform(m: Mesh, who: str) -> None:
    if not m.is_uniform():
        raise ValueError(f"{who} requires a uniform mesh; use assemble_general")


def assemble_ls(m: Mesh, kappa: CoefficientField, alpha: float) -> np.ndarray:
    """Left-sided scheme matrix B_L on a uniform mesh (lower Hessenberg).

    Row n: diagonal kappa^{n-1/2} + kappa^{n+1/2} (2 - 2^(1-alpha)),
    superdiagonal -kappa^{n+1/2}, and below the diagonal
    kappa^{n-1/2}(b_m - b_{m-1}) - kappa^{n+1/2}(b_{m+1} - b_m) at lag m = n-j.
    """
    alpha = snap_alpha(alpha)
    _require_uniform(m, "assemble_ls")
    kL, kR = _half_kappa(m, kappa)
    N = m.P - 1
    b = b_seq(np.arange(N + 1), alpha)
    diag = 2.0 - 2.0 ** (1.0 - alpha)
    # lag profiles: T_A carries the kappa^{n-1/2} factors, T_B the kappa^{n+1/2}
    colA = np.zeros(N)
    colA[0] = 1.0
    if N > 1:
        colA[1:] = b[1:N] - b[0:N - 1]
    rowA = np.zeros(N)
    rowA[0] = 1.0
    colB = np.zeros(N)
    colB[0] = diag
    if N > 1:
        colB[1:] = -(b[2:N + 1] - b[1:N])
    rowB = np.zeros(N)
    rowB[0] = diag
    if N > 1:
        rowB[1] = -1.0
    return kL[:, None] * toeplitz(colA, rowA) + kR[:, None] * toeplitz(colB, rowB)


def assemble_rs(m: Mesh, kappa: CoefficientField, alpha: float) -> np.ndarray:
    """Right-sided scheme matrix B_R on a uniform mesh (upper Hessenberg).

    Mirror image of assemble_ls: with R the index-reversal permutation and
    kappa_tilde(x) = kappa(a+b-x), R B_R(kappa_tilde) R equals B_L(kappa).
    """
    alpha = snap_alpha(alpha)
    _require_uniform(m, "assemble_rs")
    kL, kR = _half_kappa(m, kappa)
    N = m.P - 1
    b = b_seq(np.arange(N + 1), alpha)
    diag = 2.0 - 2.0 ** (1.0 - alpha)
    # upper lags: d_{n,n+m} = -kL (b_{m+1}-b_m) + kR (b_m - b_{m-1}), m >= 1
    colA = np.zeros(N)
    colA[0] = diag
    if N > 1:
        colA[1] = -1.0
    rowA = np.zeros(N)
    rowA[0] = diag
    if N > 1:
        rowA[1:] = -(b[2:N + 1] - b[1:N])
    colB = np.zeros(N)
    colB[0] = 1.0
    rowB = np.zeros(N)
    rowB[0] = 1.0
    if N > 1:
        rowB[1:] = b[1:N] - b[0:N - 1]
    return kL[:, None] * toeplitz(colA, rowA) + kR[:, None] * toeplitz(colB, rowB)


def rhs_scaling(h: float, alpha: float) -> float:
    """Right-hand-side factor h^2 / omega_{2-alpha}(h) = Gamma(2-alpha) h^(1+alpha)."""
    alpha = snap_alpha(alpha)
    return _gamma(2.0 - alpha) * h ** (1.0 + alpha)


def build_rhs(m: Mesh, f_values, alpha: float) -> np.ndarray:
    """Scaled right-hand side Gamma(2-alpha) h^(1+alpha) f^n for the uniform system."""
    _require_uniform(m, "build_rhs")
    f = np.asarray(f_values, dtype=float)
    if f.shape != (m.P - 1,):
        raise ValueError(f"f_values must have length P-1 = {m.P - 1}, got {f.shape}")
    return rhs_scaling((m.b - m.a) / m.P, alpha) * f


def assemble_two_sided(m: Mesh, kappa: CoefficientField, scheme: Scheme,
                       f_values=None) -> AssembledSystem:
    """Scaled uniform system for the theta-weighted two-sided operator.

    matrix = theta B_L + (1-theta) B_R; rhs = Gamma(2-alpha) h^(1+alpha) f
    (zeros when no forcing values are supplied).
    """
    _require_uniform(m, "assemble_two_sided")
    theta = scheme.theta
    if theta == 1.0:
        matrix = assemble_ls(m, kappa, scheme.alpha)
    elif theta == 0.0:
        matrix = assemble_rs(m, kappa, scheme.alpha)
    else:
        matrix = (theta * assemble_ls(m, kappa, scheme.alpha)
                  + (1.0 - theta) * assemble_rs(m, kappa, scheme.alpha))
    h = (m.b - m.a) / m.P
    rhs = (np.zeros(m.P - 1) if f_values is None
           else build_rhs(m, f_values, scheme.alpha))
    return AssembledSystem(matrix=matrix, rhs=rhs,
                           structure=_structure_tag(scheme),
                           scaling=rhs_scaling(h, scheme.alpha))


def _omega2(t, alpha: float):
    """omega_{2-alpha}(t) with omega(0) := 0, vectorized, unvalidated."""
    t = np.asarray(t, dtype=float)
    safe = np.where(t > 0.0, t, 1.0)
    return np.where(t > 0.0, safe ** (1.0 - alpha), 0.0) / _gamma(2.0 - alpha)


def assemble_general(m: Mesh, kappa: CoefficientField, scheme: Scheme,
                     f_values=None) -> AssembledSystem:
    """Unscaled (physical) system on an arbitrary mesh.

    On uniform meshes this is exactly the closed-form assembly divided by its
    right-hand-side scaling, so the two paths cross-validate each other.

    On non-uniform meshes each row discretizes the expanded operator
    -(kappa D u)'(x_n) = -kappa'(x_n) D(x_n) - kappa(x_n) D'(x_n), with the
    discrete flux D(z) = sum_j (dU^j / h_j) int_{I_j} omega_{1-alpha}(|z-s|) ds
    built from exact kernel cell integrals, D' approximated by the one-sided
    difference towards the operator's downwind node (forward over h_{n+1} for
    the left-sided part, backward over h_n for the right-sided part), and
    kappa'(x_n) by the centered difference of the half-point kappa values.
    This product form is exact whenever the flux is linear, which keeps the
    interior error negligible on strongly graded meshes; the uniform layout's
    forward-collocation bias (an O(h) term baked into the closed-form scheme)
    is deliberately not carried onto graded meshes, where it would swamp the
    boundary error the grading is there to resolve.

    The non-uniform operator is this package's generalization (the uniform
    formulation does not define one); it is validated through the classical
    limit, the mirrored-problem symmetry and the graded-mesh rate targets.
    """
    alpha, theta = scheme.alpha, scheme.theta
    N = m.P - 1
    rhs = np.zeros(N)
    if f_values is not None:
        f = np.asarray(f_values, dtype=float)
        if f.shape != (N,):
            raise ValueError(f"f_values must have length P-1 = {N}, got {f.shape}")
        rhs = f.copy()
    if m.is_uniform():
        scaled = assemble_two_sided(m, kappa, scheme)
        return AssembledSystem(matrix=scaled.matrix / scaled.scaling, rhs=rhs,
                               structure=scaled.structure, scaling=1.0)
    x = m.points
    P = m.P
    hj = m.widths
    xh = half_points(m)
    kh = np.asarray(kappa.value(xh), dtype=float)
    kn = np.asarray(kappa.value(x[1:-1]), dtype=float)
    if np.any(kh <= 0.0) or np.any(kn <= 0.0) \
            or not (np.all(np.isfinite(kh)) and np.all(np.isfinite(kn))):
        raise ValueError("kappa must be positive and finite on the domain")
    A = np.zeros((N, N))
    for n in range(1, P):
        g = np.zeros(P + 2)  # coefficients over dU^j, j = 1..P
        kprime = (kh[n] - kh[n - 1]) / (xh[n] - xh[n - 1])
        if theta > 0.0:
            Dn = np.zeros(P + 2)
            Dn1 = np.zeros(P + 2)
            Dn[1:n + 1] = (_omega2(x[n] - x[0:n], alpha)
                           - _omega2(x[n] - x[1:n + 1], alpha)) / hj[0:n]
            Dn1[1:n + 2] = (_omega2(x[n + 1] - x[0:n + 1], alpha)
                            - _omega2(x[n + 1] - x[1:n + 2], alpha)) / hj[0:n + 1]
            g -= theta * (kprime * Dn + kn[n - 1] * (Dn1 - Dn) / hj[n])
        if theta < 1.0:
            Dm = np.zeros(P + 2)   # right-sided flux at x_{n-1}
            Dm1 = np.zeros(P + 2)  # right-sided flux at x_n
            Dm[n:P + 1] = (_omega2(x[n:P + 1] - x[n - 1], alpha)
                           - _omega2(x[n - 1:P] - x[n - 1], alpha)) / hj[n - 1:P]
            Dm1[n + 1:P + 1] = (_omega2(x[n + 1:P + 1] - x[n], alpha)
                                - _omega2(x[n:P] - x[n], alpha)) / hj[n:P]
            g -= (1.0 - theta) * (kprime * Dm1 + kn[n - 1] * (Dm1 - Dm) / hj[n - 1])
        A[n - 1, :] = g[1:P] - g[2:P + 1]
    return AssembledSystem(matrix=A, rhs=rhs, structure=_structure_tag(scheme),
                           scaling=1.0)


def dump_matrix(system: AssembledSystem, path) -> None:
    """Plain-text dense dump, one row per line, 17 significant digits."""
    np.savetxt(path, system.matrix, fmt="%.16e")
