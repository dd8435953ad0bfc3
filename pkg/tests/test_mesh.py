import numpy as np
import pytest

from fracelliptic import MeshKind, Side, graded_mesh, half_points, uniform_mesh


def test_uniform_points_quarters():
    m = uniform_mesh(0.0, 1.0, 4)
    assert np.allclose(m.points, [0.0, 0.25, 0.5, 0.75, 1.0], rtol=0, atol=0)


def test_uniform_symmetric_interval():
    m = uniform_mesh(-1.0, 1.0, 2)
    assert np.allclose(m.points, [-1.0, 0.0, 1.0], rtol=0, atol=0)


def test_uniform_step_matches_table_levels():
    m = uniform_mesh(0.0, 1.0, 2 ** 6)
    assert m.h == pytest.approx(2.0 ** -6, rel=0, abs=1e-18)


@pytest.mark.parametrize("a,b,P", [(0.0, 1.0, 7), (-2.5, 3.25, 33), (0.1, 0.3, 12)])
def test_uniform_nodes_within_formula_tolerance(a, b, P):
    m = uniform_mesh(a, b, P)
    eps = np.finfo(float).eps
    exact = a + np.arange(P + 1) * (b - a) / P
    assert np.max(np.abs(m.points - exact)) <= 8 * eps * (b - a)
    assert m.points[0] == a and m.points[-1] == b


@pytest.mark.parametrize("bad", [(0.0, 1.0, 1), (1.0, 0.0, 4), (1.0, 1.0, 4)])
def test_uniform_rejects_bad_arguments(bad):
    with pytest.raises(ValueError):
        uniform_mesh(*bad)


def test_graded_left_quartic_points():
    m = graded_mesh(4, 2.0, Side.LEFT)
    assert np.allclose(m.points, [0.0, 1 / 16, 1 / 4, 9 / 16, 1.0], rtol=0, atol=0)
    assert m.kind is MeshKind.GRADED_LEFT


def test_graded_right_reflects_left():
    m = graded_mesh(4, 2.0, Side.RIGHT)
    assert np.allclose(m.points, [0.0, 7 / 16, 3 / 4, 15 / 16, 1.0], rtol=0, atol=0)


@pytest.mark.parametrize("P,gamma", [(4, 2.0), (16, 3.0), (64, 4.0)])
def test_right_is_one_minus_reversed_left(P, gamma):
    left = graded_mesh(P, gamma, Side.LEFT)
    right = graded_mesh(P, gamma, Side.RIGHT)
    assert np.allclose(right.points, 1.0 - left.points[::-1], rtol=0, atol=1e-16)


def test_gamma_one_degenerates_to_uniform():
    m = graded_mesh(4, 1.0, Side.LEFT)
    assert m.kind is MeshKind.UNIFORM
    assert np.allclose(m.points, [0.0, 0.25, 0.5, 0.75, 1.0], rtol=0, atol=0)


def test_graded_rejects_gamma_below_one():
    with pytest.raises(ValueError):
        graded_mesh(8, 0.5, Side.LEFT)


@pytest.mark.parametrize("mesh", [
    uniform_mesh(0.0, 1.0, 37),
    uniform_mesh(-3.0, 5.0, 64),
    graded_mesh(100, 3.0, Side.LEFT),
    graded_mesh(100, 4.0, Side.RIGHT),
])
def test_cell_widths_sum_to_interval(mesh):
    eps = np.finfo(float).eps
    assert abs(mesh.widths.sum() - (mesh.b - mesh.a)) <= 16 * eps * (mesh.b - mesh.a)


def test_half_points_uniform():
    assert np.allclose(half_points(uniform_mesh(0, 1, 4)),
                       [0.125, 0.375, 0.625, 0.875], rtol=0, atol=0)
    assert np.allclose(half_points(uniform_mesh(0, 1, 2)), [0.25, 0.75],
                       rtol=0, atol=0)


def test_half_points_graded():
    m = graded_mesh(4, 2.0, Side.LEFT)
    assert np.allclose(half_points(m), [1 / 32, 5 / 32, 13 / 32, 25 / 32],
                       rtol=0, atol=0)


def test_mesh_is_immutable():
    m = uniform_mesh(0, 1, 4)
    with pytest.raises(Exception):
        m.a = 2.0
