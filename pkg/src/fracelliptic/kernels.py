"""Fractional-kernel quantities shared by the difference schemes.

Everything here derives from the kernel omega_mu(t) = t^(mu-1)/Gamma(mu):
the uniform-mesh weights w_{n,j} = (n+1-j)^(1-a) - (n-j)^(1-a), the lag
sequence b_j = w_{j+1,1}, exact kernel integrals over arbitrary cells, and
the lower-triangular Toeplitz matrix W_a (with its inverse's first column
e_j) that underpins the uniqueness argument for the schemes.

The convention 0^(1-a) := 0 is used throughout, which makes the formulas
exact in the classical limit a = 1 (b_0 = 1, b_j = 0 for j >= 1).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gamma as _gamma

import numpy as np
from scipy.linalg import toeplitz

__all__ = [
    "ALPHA_ONE_TOL",
    "FracOrder",
    "KernelWeights",
    "snap_alpha",
    "weight",
    "b_seq",
    "omega",
    "cell_kernel_integral",
    "w_alpha_matrix",
    "e_seq",
]

# Orders within this distance of 1 are treated as exactly classical to avoid
# catastrophic cancellation in (j+1)^(1-a) - j^(1-a).
ALPHA_ONE_TOL = 1e-13


def snap_alpha(alpha: float) -> float:
    """Validate a fractional order and snap near-1 values to exactly 1."""
    alpha = float(alpha)
    if not 0.0 < alpha <= 1.0 + ALPHA_ONE_TOL:
        raise ValueError(f"fractional order must lie in (0, 1], got {alpha}")
    if abs(1.0 - alpha) <= ALPHA_ONE_TOL:
        return 1.0
    return alpha


@dataclass(frozen=True)
class FracOrder:
    """Fractional order alpha in (0, 1]; alpha = 1 is the classical limit."""

    alpha: float

    def __post_init__(self):
        object.__setattr__(self, "alpha", snap_alpha(self.alpha))

    @property
    def is_classical(self) -> bool:
        return self.alpha == 1.0


def _pow1m(t, alpha: float):
    """t^(1-alpha) with the 0^(1-alpha) := 0 convention, elementwise."""
    t = np.asarray(t, dtype=float)
    out = np.where(t > 0.0, np.power(np.where(t > 0.0, t, 1.0), 1.0 - alpha), 0.0)
    return out if out.ndim else float(out)


def weight(n: int, j: int, alpha: float) -> float:
    """Uniform-mesh weight w_{n,j} = (n+1-j)^(1-a) - (n-j)^(1-a), n >= j >= 1."""
    alpha = snap_alpha(alpha)
    if j < 1 or j > n:
        raise ValueError(f"weight requires n >= j >= 1, got n={n}, j={j}")
    m = n - j
    return float(_pow1m(m + 1, alpha) - _pow1m(m, alpha))


def b_seq(j, alpha: float):
    """Lag sequence b_j = (j+1)^(1-a) - j^(1-a) for j >= 0 (scalar or array).

    b_0 = 1; the sequence is positive, strictly decreasing and log-convex
    for 0 < a < 1.  At a = 1 it degenerates to (1, 0, 0, ...).
    """
    alpha = snap_alpha(alpha)
    j_arr = np.asarray(j, dtype=float)
    if np.any(j_arr < 0):
        raise ValueError("b_seq requires j >= 0")
    out = _pow1m(j_arr + 1.0, alpha) - _pow1m(j_arr, alpha)
    return out if np.ndim(j) else float(out)


def omega(mu: float, x) -> float | np.ndarray:
    """Kernel antiderivative family omega_mu(x) = x^(mu-1)/Gamma(mu), x > 0.

    The schemes use mu = 1-a (the convolution kernel itself) and mu = 2-a
    (its antiderivative).
    """
    x_arr = np.asarray(x, dtype=float)
    if np.any(x_arr <= 0.0):
        raise ValueError("omega requires x > 0")
    out = x_arr ** (mu - 1.0) / _gamma(mu)
    return out if np.ndim(x) else float(out)


def _omega2(t, alpha: float):
    """omega_{2-a}(t) with omega_{2-a}(0) := 0, vectorized (no validation)."""
    t = np.asarray(t, dtype=float)
    return np.where(t > 0.0, np.power(np.where(t > 0.0, t, 1.0), 1.0 - alpha), 0.0) / _gamma(2.0 - alpha)


def cell_kernel_integral(x: float, left: float, right: float, alpha: float) -> float:
    """Exact integral of the convolution kernel over one mesh cell.

    For left < right <= x (cells to the left of the evaluation point):
        int_left^right omega_{1-a}(x - s) ds
            = omega_{2-a}(x - left) - omega_{2-a}(x - right),
    with the convention omega_{2-a}(0) = 0.  For x <= left < right the
    mirrored orientation int omega_{1-a}(s - x) ds is returned.  On a uniform
    mesh these integrals reduce to omega_{2-a}(h) * w_{n,j}.
    """
    alpha = snap_alpha(alpha)
    if not left < right:
        raise ValueError(f"inverted cell: left={left}, right={right}")
    if right <= x:
        return float(_omega2(x - left, alpha) - _omega2(x - right, alpha))
    if left >= x:
        return float(_omega2(right - x, alpha) - _omega2(left - x, alpha))
    raise ValueError(f"cell [{left}, {right}] straddles the evaluation point {x}")


def w_alpha_matrix(P: int, alpha: float) -> np.ndarray:
    """Lower-triangular Toeplitz matrix with symbol b_j, size P x P.

    Its positive definiteness (of the symmetric part) is what makes the
    assembled systems uniquely solvable.
    """
    if P < 1:
        raise ValueError(f"P must be >= 1, got {P}")
    col = b_seq(np.arange(P), alpha)
    row = np.zeros(P)
    row[0] = col[0]
    return toeplitz(col, row)


def e_seq(P: int, alpha: float) -> np.ndarray:
    """First column e_0..e_{P-1} of the inverse of w_alpha_matrix(P, alpha).

    Computed by the forward recurrence e_0 = 1, e_j = -sum_{i<j} b_{j-i} e_i.
    For 0 < a < 1: e_j < 0 for j >= 1 while all partial sums stay positive.
    """
    if P < 1:
        raise ValueError(f"P must be >= 1, got {P}")
    b = b_seq(np.arange(P), alpha)
    e = np.zeros(P)
    e[0] = 1.0
    for j in range(1, P):
        e[j] = -np.dot(b[1:j + 1][::-1], e[:j])
    return e


class KernelWeights:
    """Cached per-lag weight table for one fractional order.

    w_{n,j} depends on n, j only through the lag n-j, so a single vector of
    b-values serves every row; the table grows on demand.
    """

    def __init__(self, alpha: float):
        self.order = FracOrder(alpha)
        self._b = b_seq(np.arange(16), self.order.alpha)

    @property
    def alpha(self) -> float:
        return self.order.alpha

    def _grow(self, m: int) -> None:
        if m >= self._b.size:
            self._b = b_seq(np.arange(max(m + 1, 2 * self._b.size)), self.alpha)

    def b(self, j: int) -> float:
        """b_j = w_{j+1,1}."""
        if j < 0:
            raise ValueError("b requires j >= 0")
        self._grow(j)
        return float(self._b[j])

    def b_upto(self, m: int) -> np.ndarray:
        """Array of b_0..b_m (a view; do not mutate)."""
        self._grow(m)
        return self._b[: m + 1]

    def weight(self, n: int, j: int) -> float:
        """w_{n,j} for n >= j >= 1."""
        if j < 1 or j > n:
            raise ValueError(f"weight requires n >= j >= 1, got n={n}, j={j}")
        return self.b(n - j)
