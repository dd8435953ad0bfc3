import numpy as np
import pytest

from fracelliptic import (AssembledSystem, ConstantField, OnePlusExpField,
                          Scheme, SingularMatrixError, SystemStructure,
                          assemble_ls, assemble_two_sided, build_rhs,
                          solve_auto, solve_dense, solve_hessenberg,
                          uniform_mesh)

KAPPA = OnePlusExpField()


def _system(P, alpha, theta, f_values=None, kappa=KAPPA):
    m = uniform_mesh(0.0, 1.0, P)
    f = f_values if f_values is not None else np.zeros(P - 1)
    return m, assemble_two_sided(m, kappa, Scheme(alpha, theta), f_values=f)


def test_classical_scheme_exact_for_quadratic():
    # alpha = 1, kappa = 1, f = 2: U^n = x_n (1 - x_n) to rounding
    P = 64
    m, sys_ = _system(P, 1.0, 0.0, f_values=2.0 * np.ones(P - 1),
                      kappa=ConstantField(1.0))
    sol = solve_hessenberg(sys_)
    exact = m.interior * (1.0 - m.interior)
    assert np.max(np.abs(sol.interior - exact)) <= 1e-12
    assert sol.with_boundary[0] == 0.0 and sol.with_boundary[-1] == 0.0


def test_zero_rhs_gives_zero_solution():
    _, sys_ = _system(32, 0.5, 0.5)
    assert np.all(solve_dense(sys_).interior == 0.0)
    _, sys_ = _system(32, 0.5, 1.0)
    assert np.all(solve_hessenberg(sys_).interior == 0.0)


def test_round_trip_recovers_prescribed_vector():
    m = uniform_mesh(0.0, 1.0, 4)
    B = assemble_ls(m, ConstantField(1.0), 0.5)
    target = np.array([1.0, 2.0, 1.0])
    sys_ = AssembledSystem(matrix=B, rhs=B @ target,
                           structure=SystemStructure.LOWER_HESSENBERG, scaling=1.0)
    for solver in (solve_dense, solve_hessenberg):
        sol = solver(sys_)
        assert np.max(np.abs(sol.interior - target)) <= 1e-13


@pytest.mark.parametrize("alpha", [0.25, 0.5, 0.75])
@pytest.mark.parametrize("P", [64, 256])
@pytest.mark.parametrize("theta", [0.0, 1.0])
def test_hessenberg_agrees_with_dense(alpha, P, theta):
    rng = np.random.default_rng(42)
    _, sys_ = _system(P, alpha, theta, f_values=rng.standard_normal(P - 1))
    dense = solve_dense(sys_)
    hess = solve_hessenberg(sys_)
    scale = max(1.0, np.max(np.abs(dense.interior)))
    assert np.max(np.abs(dense.interior - hess.interior)) <= 1e-10 * scale


def test_hessenberg_large_one_sided():
    P = 512
    rng = np.random.default_rng(7)
    for theta in (0.0, 1.0):
        _, sys_ = _system(P, 0.5, theta, f_values=rng.standard_normal(P - 1))
        dense = solve_dense(sys_)
        hess = solve_hessenberg(sys_)
        assert np.max(np.abs(dense.interior - hess.interior)) <= 1e-10


def test_tridiagonal_accepted_as_degenerate_hessenberg():
    _, sys_ = _system(32, 1.0, 0.5, f_values=np.ones(31))
    assert sys_.structure is SystemStructure.TRIDIAGONAL
    sol = solve_hessenberg(sys_)
    assert sol.residual_inf <= 1e-12


def test_hessenberg_rejects_full_structure():
    _, sys_ = _system(16, 0.5, 0.5, f_values=np.ones(15))
    with pytest.raises(ValueError):
        solve_hessenberg(sys_)
    assert solve_auto(sys_).residual_inf < 1e-12


def test_scale_equivariance():
    P = 128
    rng = np.random.default_rng(3)
    _, sys_ = _system(P, 0.6, 0.25, f_values=rng.standard_normal(P - 1))
    base = solve_dense(sys_)
    scaled = solve_dense(AssembledSystem(matrix=1e3 * sys_.matrix,
                                         rhs=1e3 * sys_.rhs,
                                         structure=sys_.structure,
                                         scaling=sys_.scaling))
    denom = np.max(np.abs(base.interior))
    assert np.max(np.abs(base.interior - scaled.interior)) <= 1e-12 * denom


def test_repeated_solves_bit_identical():
    P = 128
    rng = np.random.default_rng(11)
    _, sys_ = _system(P, 0.4, 1.0, f_values=rng.standard_normal(P - 1))
    a = solve_hessenberg(sys_).interior
    b = solve_hessenberg(sys_).interior
    assert np.array_equal(a, b)
    c = solve_dense(sys_).interior
    d = solve_dense(sys_).interior
    assert np.array_equal(c, d)


def test_residual_bound_contract():
    P = 256
    rng = np.random.default_rng(5)
    _, sys_ = _system(P, 0.5, 0.5, f_values=rng.standard_normal(P - 1))
    sol = solve_dense(sys_)
    bound = 1e-10 * (np.max(np.abs(sys_.matrix)) * np.max(np.abs(sol.interior))
                     + np.max(np.abs(sys_.rhs)))
    assert sol.residual_inf <= bound


def test_singular_matrix_raises():
    matrix = np.array([[1.0, 2.0], [2.0, 4.0]])  # rank 1
    sys_ = AssembledSystem(matrix=matrix, rhs=np.array([1.0, 2.0]),
                           structure=SystemStructure.FULL, scaling=1.0)
    with pytest.raises(SingularMatrixError):
        solve_dense(sys_)
    sys_h = AssembledSystem(matrix=matrix, rhs=np.array([1.0, 2.0]),
                            structure=SystemStructure.UPPER_HESSENBERG, scaling=1.0)
    with pytest.raises(SingularMatrixError):
        solve_hessenberg(sys_h)


def test_nonfinite_entries_rejected():
    matrix = np.array([[1.0, np.nan], [0.0, 1.0]])
    sys_ = AssembledSystem(matrix=matrix, rhs=np.zeros(2),
                           structure=SystemStructure.FULL, scaling=1.0)
    with pytest.raises(ValueError):
        solve_dense(sys_)
