"""Error measurement, convergence-rate estimation, and study drivers.

A convergence study assembles, solves and measures one manufactured case
over a ladder of mesh sizes and reports discrete max-norm errors E_h with
the empirical orders sigma_h = log2(E_{2h} / E_h) between consecutive
levels.  The truncation-residual check applies the assembled operator to
exact-solution samples, which isolates the scheme's consistency error from
the solve.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .assembly import (AssembledSystem, Scheme, assemble_general,
                       assemble_two_sided)
from .manufactured import ManufacturedCase, f_manufactured, u_exact
from .mesh import Mesh, MeshKind, Side, graded_mesh, uniform_mesh
from .solvers import Solution, solve_auto

__all__ = [
    "LevelResult",
    "ConvergenceReport",
    "error_inf",
    "rate",
    "convergence_study",
    "truncation_residual",
    "rate_alpha_sweep",
    "emit_report",
    "solve_case_on_mesh",
]


def error_inf(solution: Solution, case: ManufacturedCase, m: Mesh) -> float:
    """Discrete max-norm error over all nodes (boundary nodes included)."""
    if solution.with_boundary.shape != m.points.shape:
        raise ValueError("solution and mesh sizes are inconsistent")
    return float(np.max(np.abs(solution.with_boundary - u_exact(case, m.points))))


def rate(e_coarse: float, e_fine: float) -> float:
    """Empirical order log2(E_coarse / E_fine) for a mesh halving."""
    if not (e_coarse > 0.0 and e_fine > 0.0):
        raise ValueError("errors must be positive to estimate a rate")
    return float(np.log2(e_coarse / e_fine))


@dataclass(frozen=True)
class LevelResult:
    P: int
    error: float
    sigma: float | None  # absent on the first level


@dataclass
class ConvergenceReport:
    """Per-level errors and rates for one (scheme, case, mesh-family) study."""

    scheme: Scheme
    case_label: str
    mesh_kind: MeshKind
    gamma: float | None
    levels: list[LevelResult] = field(default_factory=list)
    pointwise: dict[int, np.ndarray] = field(default_factory=dict)  # P -> (x, |err|) rows

    def errors(self) -> list[float]:
        return [lv.error for lv in self.levels]

    def sigmas(self) -> list[float | None]:
        return [lv.sigma for lv in self.levels]


def _build_mesh(P: int, mesh_kind: MeshKind, gamma: float | None) -> Mesh:
    if mesh_kind is MeshKind.UNIFORM:
        return uniform_mesh(0.0, 1.0, P)
    if gamma is None:
        raise ValueError("graded meshes need a grading exponent")
    side = Side.LEFT if mesh_kind is MeshKind.GRADED_LEFT else Side.RIGHT
    return graded_mesh(P, gamma, side)


def solve_case_on_mesh(case: ManufacturedCase, m: Mesh,
                       series_tol: float = 1e-12) -> tuple[Solution, AssembledSystem]:
    """Assemble and solve one manufactured case on one mesh.

    Uniform meshes take the closed-form scaled assembly; anything else goes
    through the general kernel-integral assembly.
    """
    f = f_manufactured(case, m.interior, series_tol)
    if m.is_uniform():
        system = assemble_two_sided(m, case.kappa, case.scheme, f_values=f)
    else:
        system = assemble_general(m, case.kappa, case.scheme, f_values=f)
    return solve_auto(system), system


def convergence_study(case_factory, scheme: Scheme, levels,
                      mesh_kind: MeshKind = MeshKind.UNIFORM,
                      gamma: float | None = None,
                      series_tol: float = 1e-12,
                      pointwise: bool = False) -> ConvergenceReport:
    """Run one scheme over increasing mesh sizes and collect E_h, sigma_h.

    case_factory maps a Scheme to a ManufacturedCase (the bundled example
    constructors fit directly); levels is an increasing list of cell counts,
    each >= 4.
    """
    levels = [int(P) for P in levels]
    if any(P < 4 for P in levels) or any(b <= a for a, b in zip(levels, levels[1:])):
        raise ValueError("levels must be increasing cell counts, each >= 4")
    case = case_factory(scheme)
    report = ConvergenceReport(scheme=scheme, case_label=case.label.value,
                               mesh_kind=mesh_kind, gamma=gamma)
    prev_error = None
    for P in levels:
        m = _build_mesh(P, mesh_kind, gamma)
        solution, _ = solve_case_on_mesh(case, m, series_tol)
        err = error_inf(solution, case, m)
        sigma = None if prev_error is None else rate(prev_error, err)
        report.levels.append(LevelResult(P=P, error=err, sigma=sigma))
        if pointwise:
            abs_err = np.abs(solution.with_boundary - u_exact(case, m.points))
            report.pointwise[P] = np.column_stack([m.points, abs_err])
        prev_error = err
    return report


def truncation_residual(case: ManufacturedCase, m: Mesh,
                        series_tol: float = 1e-12) -> np.ndarray:
    """Per-node scaled residual |row_n(B) u_exact - rhs_n| / scaling.

    Applying the assembled (uniform, scaled) operator to exact-solution
    samples and unscaling gives the discrete truncation error, first order
    away from the boundaries for the smooth benchmark family.
    """
    if not m.is_uniform():
        raise ValueError("truncation residuals are defined on uniform meshes")
    f = f_manufactured(case, m.interior, series_tol)
    system = assemble_two_sided(m, case.kappa, case.scheme, f_values=f)
    u = u_exact(case, m.interior)
    return np.abs(system.matrix @ u - system.rhs) / system.scaling


def interior_residual_max(residual: np.ndarray) -> float:
    """Max of the residual over the middle half of the nodes, [P/4, 3P/4]."""
    P = residual.size + 1
    lo, hi = P // 4, 3 * P // 4
    return float(np.max(residual[lo - 1:hi]))


def rate_alpha_sweep(theta: float, P: int, alphas, case_factory,
                     series_tol: float = 1e-12) -> list[tuple[float, float]]:
    """sigma_h at fixed P as a function of alpha (each point needs a P/2 run)."""
    out = []
    for alpha in alphas:
        scheme = Scheme(alpha=float(alpha), theta=theta)
        report = convergence_study(case_factory, scheme, [P // 2, P],
                                   series_tol=series_tol)
        out.append((float(alpha), report.levels[-1].sigma))
    return out


def _fmt_error(e: float, full: bool) -> str:
    return f"{e:.17g}" if full else f"{e:.5e}"


def _fmt_sigma(s: float | None, full: bool) -> str:
    if s is None:
        return ""
    return f"{s:.17g}" if full else f"{s:.4f}"


def emit_report(report: ConvergenceReport, fmt: str = "csv",
                full_precision: bool = False) -> str:
    """Render a report as CSV (theta,alpha,log2P,E_h,sigma_h) or Markdown."""
    if not report.levels:
        raise ValueError("cannot emit an empty report")
    theta, alpha = report.scheme.theta, report.scheme.alpha
    if fmt == "csv":
        lines = ["theta,alpha,log2P,E_h,sigma_h"]
        for lv in report.levels:
            log2p = int(round(np.log2(lv.P)))
            lines.append(f"{theta:g},{alpha:g},{log2p},"
                         f"{_fmt_error(lv.error, full_precision)},"
                         f"{_fmt_sigma(lv.sigma, full_precision)}")
        return "\n".join(lines) + "\n"
    if fmt == "markdown":
        title = f"case {report.case_label}, theta={theta:g}, alpha={alpha:g}"
        if report.gamma is not None:
            title += f", {report.mesh_kind.value} mesh, gamma={report.gamma:g}"
        lines = [f"### {title}", "",
                 "| log2 P | E_h | sigma_h |", "| --- | --- | --- |"]
        for lv in report.levels:
            log2p = int(round(np.log2(lv.P)))
            lines.append(f"| {log2p} | {_fmt_error(lv.error, full_precision)} "
                         f"| {_fmt_sigma(lv.sigma, full_precision)} |")
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown report format {fmt!r}")
