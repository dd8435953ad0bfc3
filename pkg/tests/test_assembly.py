import math

import numpy as np
import pytest

from fracelliptic import (ConstantField, ExpressionField, OnePlusExpField,
                          Scheme, Side, SystemStructure, assemble_general,
                          assemble_ls, assemble_rs, assemble_two_sided,
                          b_seq, build_rhs, graded_mesh, half_points,
                          rhs_scaling, uniform_mesh)

ONE = ConstantField(1.0)
KAPPA = OnePlusExpField()


def weights_path_ls_row(m, kappa, alpha, n, u_interior):
    """Direct evaluation of the left-sided scheme row from the weight sums:
    k^{n-1/2} sum_{j<=n} w_{n,j} dU^j - k^{n+1/2} sum_{j<=n+1} w_{n+1,j} dU^j."""
    P = m.P
    u = np.zeros(P + 1)
    u[1:P] = u_interior
    du = np.diff(u)  # dU^j at index j-1
    kh = kappa.value(half_points(m))
    b = b_seq(np.arange(P + 1), alpha)

    def wsum(row):
        lags = row - np.arange(1, row + 1)
        return float(np.dot(b[lags], du[:row]))

    return kh[n - 1] * wsum(n) - kh[n] * wsum(n + 1)


def test_entry_anchors_unit_kappa():
    m = uniform_mesh(0.0, 1.0, 4)
    B = assemble_ls(m, ONE, 0.5)
    assert B[0, 0] == pytest.approx(3.0 - math.sqrt(2.0), rel=1e-15)
    assert B[0, 1] == -1.0
    # c_{2,1} = (sqrt2 - 2) - (sqrt3 - 2 sqrt2 + 1)
    assert B[1, 0] == pytest.approx(3 * math.sqrt(2) - 3 - math.sqrt(3), rel=1e-13)


def test_constant_kappa_gives_toeplitz():
    m = uniform_mesh(0.0, 1.0, 16)
    for builder in (assemble_ls, assemble_rs):
        B = builder(m, ConstantField(2.0), 0.4)
        for k in range(-(m.P - 2), m.P - 1):
            d = np.diag(B, k)
            assert np.max(np.abs(d - d[0])) <= 1e-15 * np.max(np.abs(B))


@pytest.mark.parametrize("alpha", [0.25, 0.5, 0.75, 1.0])
@pytest.mark.parametrize("theta", [0.0, 0.25, 0.5, 0.75, 1.0])
def test_structure_tags_are_truthful(alpha, theta):
    m = uniform_mesh(0.0, 1.0, 64)
    sys_ = assemble_two_sided(m, KAPPA, Scheme(alpha=alpha, theta=theta))
    B = sys_.matrix
    N = B.shape[0]
    lower_ok = all(B[n, j] == 0.0 for n in range(N) for j in range(n + 2, N))
    upper_ok = all(B[n, j] == 0.0 for n in range(N) for j in range(0, n - 1))
    if alpha == 1.0:
        assert sys_.structure is SystemStructure.TRIDIAGONAL
        assert lower_ok and upper_ok
    elif theta == 1.0:
        assert sys_.structure is SystemStructure.LOWER_HESSENBERG
        assert lower_ok
    elif theta == 0.0:
        assert sys_.structure is SystemStructure.UPPER_HESSENBERG
        assert upper_ok
    else:
        assert sys_.structure is SystemStructure.FULL


def test_alpha_one_reduces_to_classical_tridiagonal():
    m = uniform_mesh(0.0, 1.0, 8)
    kh = KAPPA.value(half_points(m))
    BL = assemble_ls(m, KAPPA, 1.0)
    BR = assemble_rs(m, KAPPA, 1.0)
    assert np.allclose(BL, BR, rtol=0, atol=1e-15)
    N = m.P - 1
    for n in range(N):
        assert BL[n, n] == pytest.approx(kh[n] + kh[n + 1], rel=1e-15)
        if n + 1 < N:
            assert BL[n, n + 1] == pytest.approx(-kh[n + 1], rel=1e-15)
            assert BL[n + 1, n] == pytest.approx(-kh[n + 1], rel=1e-15)
    assert np.allclose(BL, BL.T, rtol=0, atol=1e-15)


def test_alpha_one_two_sided_is_theta_independent():
    m = uniform_mesh(0.0, 1.0, 16)
    ref = assemble_two_sided(m, KAPPA, Scheme(alpha=1.0, theta=0.0)).matrix
    for theta in (0.25, 0.5, 1.0):
        B = assemble_two_sided(m, KAPPA, Scheme(alpha=1.0, theta=theta)).matrix
        assert np.max(np.abs(B - ref)) <= 1e-14 * np.max(np.abs(ref))


@pytest.mark.parametrize("alpha", [0.25, 0.5, 0.75])
def test_mirror_identity_rs_vs_ls(alpha):
    # R * B_R(kappa~) * R == B_L(kappa) with kappa~(x) = kappa(a+b-x)
    m = uniform_mesh(0.0, 1.0, 8)
    mirrored = ExpressionField("1+exp(1-x)")
    BL = assemble_ls(m, KAPPA, alpha)
    BR = assemble_rs(m, mirrored, alpha)
    assert np.max(np.abs(BR[::-1, ::-1] - BL)) <= 1e-13 * np.max(np.abs(BL))


def test_rs_constant_kappa_is_transposed_ls():
    m = uniform_mesh(0.0, 1.0, 8)
    BL = assemble_ls(m, ONE, 0.5)
    BR = assemble_rs(m, ONE, 0.5)
    assert np.max(np.abs(BR - BL.T)) <= 1e-14


def test_two_sided_endpoints_and_linearity():
    m = uniform_mesh(0.0, 1.0, 12)
    alpha = 0.6
    BL = assemble_ls(m, KAPPA, alpha)
    BR = assemble_rs(m, KAPPA, alpha)
    assert np.array_equal(assemble_two_sided(m, KAPPA, Scheme(alpha, 1.0)).matrix, BL)
    assert np.array_equal(assemble_two_sided(m, KAPPA, Scheme(alpha, 0.0)).matrix, BR)
    B03 = assemble_two_sided(m, KAPPA, Scheme(alpha, 0.3)).matrix
    assert np.max(np.abs(B03 - (0.3 * BL + 0.7 * BR))) == 0.0


def test_two_sided_theta_half_diagonal_identity():
    # l_{ii} = (k^{i-1/2} + k^{i+1/2}) (3 - 2^(1-alpha)) before the 1/2 factor
    m = uniform_mesh(0.0, 1.0, 10)
    alpha = 0.37
    kh = KAPPA.value(half_points(m))
    B = assemble_two_sided(m, KAPPA, Scheme(alpha, 0.5)).matrix
    expected = 0.5 * (kh[:-1] + kh[1:]) * (3.0 - 2.0 ** (1.0 - alpha))
    assert np.allclose(np.diag(B), expected, rtol=1e-14)


@pytest.mark.parametrize("alpha", [0.25, 0.75])
def test_ls_matrix_agrees_with_weights_path(alpha):
    # B_L acting on samples of a cubic vanishing at both ends
    m = uniform_mesh(0.0, 1.0, 16)
    x = m.interior
    u = x * (1.0 - x) * (x + 0.2)
    B = assemble_ls(m, KAPPA, alpha)
    action = B @ u
    for n in range(1, m.P):
        direct = weights_path_ls_row(m, KAPPA, alpha, n, u)
        assert action[n - 1] == pytest.approx(direct, rel=1e-12, abs=1e-13)


def test_build_rhs_scaling_values():
    m = uniform_mesh(0.0, 1.0, 2 ** 6)
    h = 2.0 ** -6
    assert rhs_scaling(h, 1.0) == pytest.approx(h * h, rel=1e-15)
    assert rhs_scaling(h, 0.5) == pytest.approx(math.gamma(1.5) * h ** 1.5,
                                                rel=1e-15)
    f = np.ones(m.P - 1)
    assert np.allclose(build_rhs(m, f, 0.5), math.gamma(1.5) * h ** 1.5,
                       rtol=1e-15)
    assert np.all(build_rhs(m, np.zeros(m.P - 1), 0.5) == 0.0)
    with pytest.raises(ValueError):
        build_rhs(m, np.ones(7), 0.5)


@pytest.mark.parametrize("theta", [0.0, 0.3, 1.0])
def test_general_assembly_matches_closed_form_on_uniform(theta):
    alpha = 0.5
    m = uniform_mesh(0.0, 1.0, 8)
    kappa = ExpressionField("1+exp(x)")
    scheme = Scheme(alpha=alpha, theta=theta)
    f = np.sin(3.0 * m.interior) + 1.0
    scaled = assemble_two_sided(m, kappa, scheme, f_values=f)
    general = assemble_general(m, kappa, scheme, f_values=f)
    assert general.scaling == 1.0
    scale = scaled.scaling
    assert np.max(np.abs(general.matrix * scale - scaled.matrix)) \
        <= 1e-13 * np.max(np.abs(scaled.matrix))
    assert np.allclose(general.rhs * scale, scaled.rhs, rtol=1e-14)


def test_general_assembly_gamma_one_equals_uniform():
    m_graded = graded_mesh(8, 1.0, Side.LEFT)
    m_uniform = uniform_mesh(0.0, 1.0, 8)
    scheme = Scheme(alpha=0.4, theta=0.7)
    A = assemble_general(m_graded, KAPPA, scheme).matrix
    B = assemble_general(m_uniform, KAPPA, scheme).matrix
    assert np.array_equal(A, B)


def _classical_residual(P):
    # u = x^2 (1-x) vanishes at both ends; f = -(kappa u')' in closed form
    m = graded_mesh(P, 3.0, Side.LEFT)
    A = assemble_general(m, KAPPA, Scheme(alpha=1.0, theta=1.0)).matrix
    x = m.interior
    u = x ** 2 * (1.0 - x)
    f = -(np.exp(x) * (2 * x - 3 * x ** 2) + (1.0 + np.exp(x)) * (2.0 - 6.0 * x))
    return m, A, np.abs(A @ u - f)


def test_general_assembly_alpha_one_is_classical_three_point():
    # kernel collapses to a point mass: 3-point scheme on the graded mesh
    m, A, resid256 = _classical_residual(256)
    N = m.P - 1
    for n in range(N):
        for j in range(N):
            if abs(n - j) > 1:
                assert A[n, j] == 0.0
    # consistency: interior truncation residual shrinks under refinement
    _, _, resid512 = _classical_residual(512)
    mid256 = np.max(resid256[64:192])
    mid512 = np.max(resid512[128:384])
    assert mid256 < 0.1
    assert mid512 < 0.6 * mid256  # first-order halving


def test_general_assembly_structure_tags():
    m = graded_mesh(16, 2.0, Side.LEFT)
    assert assemble_general(m, KAPPA, Scheme(0.5, 1.0)).structure \
        is SystemStructure.LOWER_HESSENBERG
    assert assemble_general(m, KAPPA, Scheme(0.5, 0.0)).structure \
        is SystemStructure.UPPER_HESSENBERG
    A = assemble_general(m, KAPPA, Scheme(0.5, 1.0)).matrix
    N = m.P - 1
    assert all(A[n, j] == 0.0 for n in range(N) for j in range(n + 2, N))


def test_assembly_rejects_nonpositive_kappa():
    m = uniform_mesh(0.0, 1.0, 8)
    bad = ExpressionField("x - 0.5")
    with pytest.raises(ValueError):
        assemble_two_sided(m, bad, Scheme(0.5, 0.5))
    with pytest.raises(ValueError):
        assemble_general(graded_mesh(8, 2.0, Side.LEFT), bad, Scheme(0.5, 1.0))


def test_closed_form_assembly_rejects_graded_mesh():
    m = graded_mesh(8, 2.0, Side.LEFT)
    with pytest.raises(ValueError):
        assemble_ls(m, KAPPA, 0.5)
    with pytest.raises(ValueError):
        assemble_two_sided(m, KAPPA, Scheme(0.5, 0.5))
