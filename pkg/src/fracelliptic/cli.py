"""Command-line front end.

Subcommands:
  solve         solve one problem and write the solution as CSV
  study         run a convergence study over a ladder of mesh sizes
  tables        regenerate the bundled benchmark tables (CSV + Markdown)
  oracle-check  cross-validate the series forcing against the quadrature oracle

Exit codes: 0 success, 2 configuration error, 3 numerical failure,
4 oracle disagreement.  Output files are deterministic for identical flags;
the only timestamp lives in a banner comment that --no-banner removes.
"""

from __future__ import annotations

import argparse
import os
import sys
from datetime import datetime, timezone

import numpy as np

from . import __version__
from .analysis import (convergence_study, emit_report, error_inf,
                       solve_case_on_mesh)
from .assembly import (Scheme, assemble_general, assemble_two_sided,
                       dump_matrix)
from .coefficients import ExpressionField, make_field
from .exprparse import EvalDomainError, ExprSyntaxError
from .manufactured import (QuadratureError, SeriesConvergenceError,
                           custom_case, example1_case, example2_case,
                           f_manufactured, oracle_forcing, oracle_flux,
                           flux_exact, u_exact)
from .mesh import MeshKind, Side, graded_mesh, uniform_mesh
from .solvers import SingularMatrixError, solve_auto
from .tables import TABLES, run_table

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_ORACLE = 4


class ConfigError(ValueError):
    pass


def _banner(enabled: bool) -> str:
    if not enabled:
        return ""
    stamp = datetime.now(timezone.utc).isoformat(timespec="seconds")
    return f"# fracelliptic {__version__} {stamp}\n"


def _write(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _parse_scheme(args) -> Scheme:
    try:
        return Scheme(alpha=args.alpha, theta=args.theta)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _parse_case_spec(spec: str) -> tuple[str, float | None, float | None]:
    if spec in ("example1", "example2"):
        return spec, None, None
    if spec.startswith("custom:"):
        body = spec.split(":", 1)[1]
        try:
            p_str, q_str = body.split(",")
            return "custom", float(p_str), float(q_str)
        except ValueError as exc:
            raise ConfigError(
                f"bad case {spec!r}: expected custom:p,q with numeric exponents"
            ) from exc
    raise ConfigError(f"unknown case {spec!r}: choose example1, example2 or custom:p,q")


def _make_case(args, scheme: Scheme):
    kind, p, q = _parse_case_spec(args.case)
    try:
        kappa = make_field(args.kappa)
    except ExprSyntaxError as exc:
        raise ConfigError(f"bad kappa expression: {exc}") from exc
    try:
        if kind == "example1":
            return example1_case(scheme, kappa)
        if kind == "example2":
            return example2_case(scheme, kappa)
        return custom_case(p, q, scheme, kappa)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _make_mesh(args):
    kind = args.mesh
    if args.P < 2:
        raise ConfigError(f"P must be >= 2, got {args.P}")
    if kind == "uniform":
        return uniform_mesh(0.0, 1.0, args.P)
    if args.gamma is None:
        raise ConfigError(f"--mesh {kind} requires --gamma")
    if args.gamma < 1.0:
        raise ConfigError(f"gamma must be >= 1, got {args.gamma}")
    side = Side.LEFT if kind == "graded-left" else Side.RIGHT
    return graded_mesh(args.P, args.gamma, side)


def _parse_levels(spec: str) -> list[int]:
    try:
        if ":" in spec:
            lo, hi = (int(s) for s in spec.split(":"))
            exponents = list(range(lo, hi + 1))
        else:
            exponents = [int(s) for s in spec.split(",")]
    except ValueError as exc:
        raise ConfigError(f"bad levels {spec!r}: use LO:HI or a comma list of "
                          "log2 cell counts") from exc
    if not exponents or any(e < 2 for e in exponents) \
            or any(b <= a for a, b in zip(exponents, exponents[1:])):
        raise ConfigError(f"levels must be increasing log2 cell counts >= 2, got {spec!r}")
    return [2 ** e for e in exponents]


def _fmt(value: float, full: bool) -> str:
    return f"{value:.17g}" if full else f"{value:.6e}"


def cmd_solve(args) -> int:
    scheme = _parse_scheme(args)
    mesh = _make_mesh(args)
    if args.f is not None:
        try:
            forcing = ExpressionField(args.f)
        except ExprSyntaxError as exc:
            raise ConfigError(f"bad forcing expression: {exc}") from exc
        try:
            kappa = make_field(args.kappa)
        except ExprSyntaxError as exc:
            raise ConfigError(f"bad kappa expression: {exc}") from exc
        f_values = np.asarray(forcing.value(mesh.interior), dtype=float)
        if mesh.is_uniform():
            system = assemble_two_sided(mesh, kappa, scheme, f_values=f_values)
        else:
            system = assemble_general(mesh, kappa, scheme, f_values=f_values)
        solution = solve_auto(system)
        case = None
    else:
        case = _make_case(args, scheme)
        solution, system = solve_case_on_mesh(case, mesh, args.series_tol)
    if args.dump_matrix:
        dump_matrix(system, args.dump_matrix)
    # solution vectors always carry full precision; --precision table only
    # abbreviates derived study/table quantities
    lines = [_banner(not args.no_banner), "x,u\n"]
    for xi, ui in zip(mesh.points, solution.with_boundary):
        lines.append(f"{xi:.17g},{ui:.17g}\n")
    _write(args.out, "".join(lines))
    print(f"wrote {args.out} ({mesh.P + 1} rows)")
    print(f"residual_inf = {solution.residual_inf:.3e}, "
          f"pivot_min = {solution.pivot_min:.3e}")
    if case is not None:
        print(f"max-norm error vs exact solution = "
              f"{error_inf(solution, case, mesh):.6e}")
    return EXIT_OK


def cmd_study(args) -> int:
    scheme = _parse_scheme(args)
    levels = _parse_levels(args.levels)
    if min(levels) < 4:
        raise ConfigError("study levels must have at least 4 cells")
    kind, p, q = _parse_case_spec(args.case)
    try:
        kappa = make_field(args.kappa)
    except ExprSyntaxError as exc:
        raise ConfigError(f"bad kappa expression: {exc}") from exc
    if kind == "example1":
        factory = lambda s: example1_case(s, kappa)
    elif kind == "example2":
        factory = lambda s: example2_case(s, kappa)
    else:
        factory = lambda s: custom_case(p, q, s, kappa)
    mesh_kind = MeshKind(args.mesh)
    if mesh_kind is not MeshKind.UNIFORM and args.gamma is None:
        raise ConfigError(f"--mesh {args.mesh} requires --gamma")
    if args.gamma is not None and args.gamma < 1.0:
        raise ConfigError(f"gamma must be >= 1, got {args.gamma}")
    report = convergence_study(factory, scheme, levels, mesh_kind=mesh_kind,
                               gamma=args.gamma, series_tol=args.series_tol,
                               pointwise=args.pointwise)
    text = emit_report(report, args.format, full_precision=args.precision == "full")
    _write(args.out, _banner(not args.no_banner) + text)
    print(f"wrote {args.out}")
    if args.pointwise:
        stem, _, ext = args.out.rpartition(".")
        stem = stem or args.out
        full = args.precision == "full"
        for P, rows in report.pointwise.items():
            path = f"{stem}_pointwise_P{P}.csv"
            body = "".join(f"{_fmt(x, full)},{_fmt(e, full)}\n" for x, e in rows)
            _write(path, _banner(not args.no_banner) + "x,abs_error\n" + body)
            print(f"wrote {path}")
    for lv in report.levels:
        sig = "" if lv.sigma is None else f" sigma={lv.sigma:.4f}"
        print(f"  P={lv.P}: E={lv.error:.6e}{sig}")
    return EXIT_OK


def cmd_tables(args) -> int:
    if args.table not in TABLES:
        raise ConfigError(f"table must be one of {sorted(TABLES)}, got {args.table}")
    os.makedirs(args.out_dir, exist_ok=True)
    full = args.precision == "full"
    progress = print if args.table in (2, 3) else None
    results = run_table(args.table, series_tol=args.series_tol, jobs=args.jobs,
                        progress=progress)
    spec = TABLES[args.table]
    csv_lines = ["theta,alpha" + (",gamma" if spec.gammas else "")
                 + ",log2P,E_h,sigma_h"]
    md_lines = [f"## benchmark table {args.table}", "",
                "| theta | alpha " + ("| gamma " if spec.gammas else "")
                + "| log2 P | E_h | sigma_h |",
                "| --- | --- " + ("| --- " if spec.gammas else "")
                + "| --- | --- | --- |"]
    for block in results:
        for lv in block.printed_levels:
            log2p = int(round(np.log2(lv.P)))
            err = f"{lv.error:.17g}" if full else f"{lv.error:.5e}"
            sig = "" if lv.sigma is None else (
                f"{lv.sigma:.17g}" if full else f"{lv.sigma:.4f}")
            gcol_csv = f",{block.gamma:g}" if spec.gammas else ""
            gcol_md = f"| {block.gamma:g} " if spec.gammas else ""
            csv_lines.append(f"{block.theta_label:g},{block.alpha:g}{gcol_csv},"
                             f"{log2p},{err},{sig}")
            md_lines.append(f"| {block.theta_label:g} | {block.alpha:g} "
                            f"{gcol_md}| {log2p} | {err} | {sig} |")
    banner = _banner(not args.no_banner)
    csv_path = os.path.join(args.out_dir, f"table{args.table}.csv")
    md_path = os.path.join(args.out_dir, f"table{args.table}.md")
    _write(csv_path, banner + "\n".join(csv_lines) + "\n")
    _write(md_path, banner + "\n".join(md_lines) + "\n")
    print(f"wrote {csv_path}")
    print(f"wrote {md_path}")
    return EXIT_OK


def cmd_oracle_check(args) -> int:
    scheme = _parse_scheme(args)
    case = _make_case(args, scheme)
    if args.samples < 1:
        raise ConfigError("need at least one sample point")
    pts = np.linspace(0.0, 1.0, args.samples + 2)[1:-1]
    worst_flux = 0.0
    worst_forcing = 0.0
    for x in pts:
        flux_series = flux_exact(case, float(x), args.series_tol)
        flux_quad = oracle_flux(case, float(x), target=args.tol / 10.0)
        worst_flux = max(worst_flux, abs(flux_series - flux_quad))
        f_series = f_manufactured(case, float(x), args.series_tol)
        f_quad = oracle_forcing(case, float(x), target=args.tol / 10.0)
        worst_forcing = max(worst_forcing, abs(f_series - f_quad))
    print(f"max flux discrepancy    = {worst_flux:.3e}")
    print(f"max forcing discrepancy = {worst_forcing:.3e}")
    print(f"tolerance               = {args.tol:.3e}")
    if max(worst_flux, worst_forcing) > args.tol:
        print("ORACLE DISAGREEMENT")
        return EXIT_ORACLE
    print("oracle agreement OK")
    return EXIT_OK


def _add_common(p: argparse.ArgumentParser, *, theta_default=None) -> None:
    p.add_argument("--alpha", type=float, required=True,
                   help="fractional order in (0, 1]")
    p.add_argument("--theta", type=float, default=theta_default, required=theta_default is None,
                   help="skewness in [0, 1] (1 = purely left-sided)")
    p.add_argument("--kappa", default="one_plus_exp",
                   help="diffusivity: one_plus_exp, constant:C, or an expression in x")
    p.add_argument("--case", default="example1",
                   help="example1 | example2 | custom:p,q")
    p.add_argument("--series-tol", type=float, default=1e-12,
                   help="absolute tolerance for the forcing series")
    p.add_argument("--precision", choices=("table", "full"), default="table",
                   help="output number formatting")
    p.add_argument("--no-banner", action="store_true",
                   help="omit the timestamped banner comment from output files")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fracelliptic",
        description="Finite differences for two-sided variable-diffusivity "
                    "space-fractional elliptic problems on (0, 1)")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    ps = sub.add_parser("solve", help="solve one problem and write x,u CSV")
    _add_common(ps)
    ps.add_argument("--P", type=int, required=True, help="number of mesh cells")
    ps.add_argument("--mesh", choices=("uniform", "graded-left", "graded-right"),
                    default="uniform")
    ps.add_argument("--gamma", type=float, default=None, help="grading exponent >= 1")
    ps.add_argument("--f", default=None,
                    help="forcing expression in x (overrides the manufactured case)")
    ps.add_argument("--out", default="solution.csv")
    ps.add_argument("--dump-matrix", default=None, metavar="PATH",
                    help="also dump the assembled matrix as plain text")
    ps.set_defaults(func=cmd_solve)

    pt = sub.add_parser("study", help="convergence study over a level ladder")
    _add_common(pt)
    pt.add_argument("--levels", required=True,
                    help="log2 cell counts, LO:HI or comma list (e.g. 6:10)")
    pt.add_argument("--mesh", choices=("uniform", "graded-left", "graded-right"),
                    default="uniform")
    pt.add_argument("--gamma", type=float, default=None)
    pt.add_argument("--format", choices=("csv", "markdown"), default="csv")
    pt.add_argument("--pointwise", action="store_true",
                    help="also write per-node |error| files for each level")
    pt.add_argument("--out", default="study.csv")
    pt.set_defaults(func=cmd_study)

    pb = sub.add_parser("tables", help="regenerate a bundled benchmark table")
    pb.add_argument("--table", type=int, required=True, choices=(1, 2, 3))
    pb.add_argument("--out-dir", default=".")
    pb.add_argument("--jobs", type=int, default=min(4, os.cpu_count() or 1),
                    help="worker threads for independent table cells")
    pb.add_argument("--series-tol", type=float, default=1e-12)
    pb.add_argument("--precision", choices=("table", "full"), default="table")
    pb.add_argument("--no-banner", action="store_true")
    pb.set_defaults(func=cmd_tables)

    po = sub.add_parser("oracle-check",
                        help="series vs quadrature cross-validation of the forcing")
    _add_common(po)
    po.add_argument("--samples", type=int, default=33)
    po.add_argument("--tol", type=float, default=1e-8)
    po.set_defaults(func=cmd_oracle_check)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse uses exit code 2 for usage errors already
        return int(exc.code or 0)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (SingularMatrixError, SeriesConvergenceError, EvalDomainError,
            ValueError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except QuadratureError as exc:
        print(f"oracle failure: {exc}", file=sys.stderr)
        return EXIT_ORACLE


if __name__ == "__main__":
    sys.exit(main())
