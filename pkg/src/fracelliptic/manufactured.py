"""Manufactured solutions u = x^p (1-x)^q on (0, 1): exact fractional flux,
forcing f = -(kappa * flux)', and an independent quadrature oracle.

The flux combines the left- and right-sided derivatives with weights theta
and 1-theta.  The left-sided derivative of x^p (1-x)^q is evaluated by
expanding (1-x)^q binomially and applying the monomial rule

    D^a x^s = Gamma(s+1)/Gamma(s+1-a) x^(s-a),

giving a series in powers of x; the right-sided derivative is reduced to a
left-sided one through the reflection identity

    rsD[x^p (1-x)^q](x) = -lsD[x^q (1-x)^p](1-x),

so its series runs in powers of 1-x.  (The minus sign is forced by the
operator convention used throughout this package: the right-sided derivative
is +d/dx of the right fractional integral, which makes both one-sided
derivatives tend to u' in the classical limit.)  Each series terminates for
integer exponents and otherwise stops under a geometric remainder majorant.

The quadrature oracle integrates the defining fractional integrals of u'
directly (singular endpoint factors handled by weighted adaptive
quadrature), independent of the series path.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from math import gamma as _gamma

import numpy as np
from scipy.integrate import quad

from .assembly import Scheme
from .coefficients import CoefficientField, OnePlusExpField

__all__ = [
    "CaseLabel",
    "ManufacturedCase",
    "example1_case",
    "example2_case",
    "custom_case",
    "u_exact",
    "ls_frac_deriv_monomial",
    "flux_exact",
    "flux_derivative",
    "f_manufactured",
    "oracle_flux",
    "oracle_forcing",
    "SeriesConvergenceError",
    "QuadratureError",
    "MAX_SERIES_TERMS",
]

MAX_SERIES_TERMS = 1_000_000


class SeriesConvergenceError(RuntimeError):
    """The power series failed to reach the requested tolerance in budget."""


class QuadratureError(RuntimeError):
    """The adaptive quadrature's error estimate exceeded its target."""


class CaseLabel(enum.Enum):
    EXAMPLE1 = "example1"
    EXAMPLE2 = "example2"
    CUSTOM = "custom"


@dataclass(frozen=True)
class ManufacturedCase:
    """Exact solution x^p (1-x)^q paired with a scheme and a diffusivity.

    The two bundled benchmark families tie the exponents to the scheme:
    example1 (smooth): p = 4 - theta(1-alpha), q = 4 - (1-theta)(1-alpha);
    example2 (nonsmooth): p = 1 - theta(1-alpha), q = 1 - (1-theta)(1-alpha).
    """

    p: float
    q: float
    scheme: Scheme
    kappa: CoefficientField
    label: CaseLabel = CaseLabel.CUSTOM

    def __post_init__(self):
        if not (self.p > 0.0 and self.q > 0.0):
            raise ValueError("exponents must be positive for zero boundary values")


def example1_case(scheme: Scheme, kappa: CoefficientField | None = None) -> ManufacturedCase:
    """Smooth benchmark case (solution in C^3 of the closed interval)."""
    kappa = kappa if kappa is not None else OnePlusExpField()
    a, t = scheme.alpha, scheme.theta
    return ManufacturedCase(p=4.0 - t * (1.0 - a), q=4.0 - (1.0 - t) * (1.0 - a),
                            scheme=scheme, kappa=kappa, label=CaseLabel.EXAMPLE1)


def example2_case(scheme: Scheme, kappa: CoefficientField | None = None) -> ManufacturedCase:
    """Nonsmooth benchmark case (endpoint-singularity exponents)."""
    kappa = kappa if kappa is not None else OnePlusExpField()
    a, t = scheme.alpha, scheme.theta
    return ManufacturedCase(p=1.0 - t * (1.0 - a), q=1.0 - (1.0 - t) * (1.0 - a),
                            scheme=scheme, kappa=kappa, label=CaseLabel.EXAMPLE2)


def custom_case(p: float, q: float, scheme: Scheme,
                kappa: CoefficientField | None = None) -> ManufacturedCase:
    kappa = kappa if kappa is not None else OnePlusExpField()
    return ManufacturedCase(p=float(p), q=float(q), scheme=scheme, kappa=kappa,
                            label=CaseLabel.CUSTOM)


def u_exact(case: ManufacturedCase, x):
    """x^p (1-x)^q, vanishing at both endpoints."""
    x_arr = np.asarray(x, dtype=float)
    out = x_arr ** case.p * (1.0 - x_arr) ** case.q
    return out if np.ndim(x) else float(out)


def ls_frac_deriv_monomial(p: float, alpha: float, x):
    """Left-sided derivative of x^p: Gamma(p+1)/Gamma(p+1-alpha) x^(p-alpha)."""
    coef = _gamma(p + 1.0) / _gamma(p + 1.0 - alpha)
    out = coef * np.asarray(x, dtype=float) ** (p - alpha)
    return out if np.ndim(x) else float(out)


def _ls_series(p: float, q: float, alpha: float, x: np.ndarray, tol: float,
               want_derivative: bool):
    """Left-sided derivative of s^p (1-s)^q at points x in [0, 1), and
    optionally its d/dx, by the termwise monomial rule.

    Terms: c_k x^(p+k-alpha) with c_k = (-1)^k C(q,k) Gamma(p+k+1)/Gamma(p+k+1-alpha).
    The coefficient recurrence terminates for integer q; otherwise the loop
    stops once a geometric majorant bounds both tails below tol.
    """
    coef = _gamma(p + 1.0) / _gamma(p + 1.0 - alpha)
    pw = x ** (p - alpha)
    value = coef * pw
    deriv = None
    pwd = None
    if want_derivative:
        pwd = x ** (p - alpha - 1.0)
        deriv = coef * (p - alpha) * pwd
    k = 0
    while True:
        k += 1
        if k > MAX_SERIES_TERMS:
            raise SeriesConvergenceError(
                f"series did not reach tol={tol:.1e} within {MAX_SERIES_TERMS} terms "
                f"(p={p}, q={q}, alpha={alpha}, max x={x.max():.6f})")
        coef *= ((k - 1.0 - q) / k) * ((p + k) / (p + k - alpha))
        if coef == 0.0:
            break  # integer q: series terminated exactly
        pw = pw * x
        term = coef * pw
        value = value + term
        if want_derivative:
            pwd = pwd * x
            dterm = coef * (p + k - alpha) * pwd
            deriv = deriv + dterm
        if k > q:
            # ratio of successive term magnitudes is bounded by r below
            r = x * ((p + k + 1.0) / (p + k - alpha))
            rmax = float(np.max(r)) if r.size else 0.0
            if rmax < 1.0:
                bound = np.max(np.abs(term) * r) / (1.0 - rmax)
                if want_derivative:
                    bound = max(bound, float(np.max(np.abs(dterm) * r)) / (1.0 - rmax))
                if bound <= tol:
                    break
    return value, deriv


def _as_points(x) -> np.ndarray:
    pts = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any((pts < 0.0) | (pts >= 1.0)):
        raise ValueError("evaluation points must lie in [0, 1)")
    return pts


def flux_exact(case: ManufacturedCase, x, tol: float = 1e-12):
    """Two-sided fractional flux theta*lsD u + (1-theta)*rsD u, abs error <= tol."""
    if tol < 1e-13:
        raise ValueError("tol must be >= 1e-13")
    pts = _as_points(x)
    theta, alpha = case.scheme.theta, case.scheme.alpha
    out = np.zeros_like(pts)
    if theta > 0.0:
        ls, _ = _ls_series(case.p, case.q, alpha, pts, tol, False)
        out += theta * ls
    if theta < 1.0:
        mirrored, _ = _ls_series(case.q, case.p, alpha, 1.0 - pts, tol, False)
        out -= (1.0 - theta) * mirrored
    return out if np.ndim(x) else float(out[0])


def flux_derivative(case: ManufacturedCase, x, tol: float = 1e-12):
    """d/dx of flux_exact, by termwise differentiation of the same series."""
    if tol < 1e-13:
        raise ValueError("tol must be >= 1e-13")
    pts = _as_points(x)
    theta, alpha = case.scheme.theta, case.scheme.alpha
    out = np.zeros_like(pts)
    if theta > 0.0:
        _, dls = _ls_series(case.p, case.q, alpha, pts, tol, True)
        out += theta * dls
    if theta < 1.0:
        # d/dx of -M(q, p, 1-x) is +M'(q, p, 1-x)
        _, dmir = _ls_series(case.q, case.p, alpha, 1.0 - pts, tol, True)
        out += (1.0 - theta) * dmir
    return out if np.ndim(x) else float(out[0])


def f_manufactured(case: ManufacturedCase, x, tol: float = 1e-12):
    """Forcing f = -kappa'(x) flux(x) - kappa(x) flux'(x), abs error <= tol."""
    pts = _as_points(x)
    kval = np.asarray(case.kappa.value(pts), dtype=float)
    kder = np.asarray(case.kappa.derivative(pts), dtype=float)
    scale = float(np.max(np.abs(kval)) + np.max(np.abs(kder))) if pts.size else 1.0
    part_tol = max(tol / max(scale, 1.0), 1e-13)
    fl = flux_exact(case, pts, part_tol)
    fd = flux_derivative(case, pts, part_tol)
    out = -kder * fl - kval * fd
    return out if np.ndim(x) else float(out[0])


# ---------------------------------------------------------------------------
# quadrature oracle (independent of the series path)

def _u_prime_smooth(p: float, q: float):
    """u'(s) = s^(p-1) (1-s)^(q-1) [p - (p+q) s]; returns the smooth bracket."""
    def bracket(s):
        return p - (p + q) * s
    return bracket


def _ls_integral_quad(p: float, q: float, alpha: float, x: float,
                      epsabs: float) -> tuple[float, float]:
    """int_0^x omega_{1-a}(x-s) u'(s) ds with the singular factors s^(p-1)
    and (x-s)^(-a) carried by the quadrature weight."""
    bracket = _u_prime_smooth(p, q)
    g = lambda s: (1.0 - s) ** (q - 1.0) * bracket(s) / _gamma(1.0 - alpha)
    val, err = quad(g, 0.0, x, weight="alg", wvar=(p - 1.0, -alpha),
                    epsabs=epsabs, epsrel=1e-12, limit=200)
    return val, err


def _rs_integral_quad(p: float, q: float, alpha: float, x: float,
                      epsabs: float) -> tuple[float, float]:
    """int_x^1 omega_{1-a}(s-x) u'(s) ds with (s-x)^(-a) and (1-s)^(q-1)
    in the quadrature weight."""
    bracket = _u_prime_smooth(p, q)
    g = lambda s: s ** (p - 1.0) * bracket(s) / _gamma(1.0 - alpha)
    val, err = quad(g, x, 1.0, weight="alg", wvar=(-alpha, q - 1.0),
                    epsabs=epsabs, epsrel=1e-12, limit=200)
    return val, err


def _u_prime_exact(p: float, q: float, x: float) -> float:
    return x ** (p - 1.0) * (1.0 - x) ** (q - 1.0) * (p - (p + q) * x)


def oracle_flux(case: ManufacturedCase, x, target: float = 1e-10):
    """Flux via adaptive quadrature of the defining integrals of u'.

    Valid for cases with p, q > 0 (zero boundary values), where the
    Riemann-Liouville derivatives equal the fractional integrals of u'.
    Raises QuadratureError when the combined error estimate exceeds target.
    At alpha = 1 the kernel collapses to the identity and u'(x) is returned.
    """
    if np.ndim(x):
        return np.array([oracle_flux(case, float(xi), target) for xi in
                         np.asarray(x, dtype=float)])
    x = float(x)
    if not 0.0 < x < 1.0:
        raise ValueError("oracle evaluation points must lie in (0, 1)")
    theta, alpha = case.scheme.theta, case.scheme.alpha
    if alpha == 1.0:
        return _u_prime_exact(case.p, case.q, x)
    total, est = 0.0, 0.0
    if theta > 0.0:
        val, err = _ls_integral_quad(case.p, case.q, alpha, x, target / 2.0)
        total += theta * val
        est += theta * err
    if theta < 1.0:
        val, err = _rs_integral_quad(case.p, case.q, alpha, x, target / 2.0)
        total += (1.0 - theta) * val
        est += (1.0 - theta) * err
    if est > target:
        raise QuadratureError(
            f"quadrature error estimate {est:.2e} exceeds target {target:.2e} "
            f"at x={x}")
    return total


def _u_second_smooth(p: float, q: float):
    """u''(s) = s^(p-2) (1-s)^(q-2) * bracket(s); returns the bracket."""
    def bracket(s):
        return (p * (p - 1.0) * (1.0 - s) ** 2
                - 2.0 * p * q * s * (1.0 - s)
                + q * (q - 1.0) * s ** 2)
    return bracket


def _ls_flux_deriv_quad(p: float, q: float, alpha: float, x: float,
                        ls_value: float, epsabs: float) -> tuple[float, float]:
    """d/dx of the left-sided integral, via the exact identity
    I'(x) = (1-a) I(x)/x + (1/Gamma(1-a)) int_0^x (x-s)^(-a) (s/x) u''(s) ds."""
    bracket = _u_second_smooth(p, q)
    g = lambda s: (1.0 - s) ** (q - 2.0) * bracket(s) / (x * _gamma(1.0 - alpha))
    val, err = quad(g, 0.0, x, weight="alg", wvar=(p - 1.0, -alpha),
                    epsabs=epsabs, epsrel=1e-12, limit=200)
    return (1.0 - alpha) * ls_value / x + val, err


def oracle_forcing(case: ManufacturedCase, x, target: float = 1e-9) -> float:
    """Forcing -(kappa * flux)' evaluated entirely through quadrature.

    The flux derivative uses a series-independent identity (scaling the
    integration variable), so this is a genuine second route for f.
    """
    if np.ndim(x):
        return np.array([oracle_forcing(case, float(xi), target) for xi in
                         np.asarray(x, dtype=float)])
    x = float(x)
    if not 0.0 < x < 1.0:
        raise ValueError("oracle evaluation points must lie in (0, 1)")
    theta, alpha = case.scheme.theta, case.scheme.alpha
    kval = float(case.kappa.value(x))
    kder = float(case.kappa.derivative(x))
    if alpha == 1.0:
        flux = _u_prime_exact(case.p, case.q, x)
        p, q = case.p, case.q
        dflux = (_u_second_smooth(p, q)(x)
                 * x ** (p - 2.0) * (1.0 - x) ** (q - 2.0))
        return -kder * flux - kval * dflux
    sub = target / 6.0
    flux_parts, deriv_parts, est = 0.0, 0.0, 0.0
    if theta > 0.0:
        ls, e1 = _ls_integral_quad(case.p, case.q, alpha, x, sub)
        dls, e2 = _ls_flux_deriv_quad(case.p, case.q, alpha, x, ls, sub)
        flux_parts += theta * ls
        deriv_parts += theta * dls
        est += e1 + e2
    if theta < 1.0:
        # mirror: rs(x) = -ls_{q,p}(1-x), rs'(x) = +ls'_{q,p}(1-x)
        lsm, e1 = _ls_integral_quad(case.q, case.p, alpha, 1.0 - x, sub)
        dlsm, e2 = _ls_flux_deriv_quad(case.q, case.p, alpha, 1.0 - x, lsm, sub)
        flux_parts -= (1.0 - theta) * lsm
        deriv_parts += (1.0 - theta) * dlsm
        est += e1 + e2
    if est > target:
        raise QuadratureError(
            f"quadrature error estimate {est:.2e} exceeds target {target:.2e} "
            f"at x={x}")
    return -kder * flux_parts - kval * deriv_parts
