import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from heisenberg_helix import ambient
from heisenberg_helix.ambient import (
    E1,
    E2,
    E3,
    SIGNATURE,
    Tau,
    cross,
    frame_at,
    inner,
    killing_residual,
    metric_coords,
    nabla_field,
    nabla_frame,
    riemann_formula,
    riemann_from_connection,
    riemann_table,
    to_coords,
    to_frame,
)
from heisenberg_helix.errors import InvalidSpec, NonFiniteValue

vec = arrays(np.float64, 3, elements=st.floats(-3, 3))
taus = st.sampled_from([1.0, -1.0, 0.5, -0.5, 2.0]) | st.floats(0.1, 3) | st.floats(-3, -0.1)


def test_tau_rejects_zero_and_nonfinite():
    for bad in (0.0, float("nan"), float("inf")):
        with pytest.raises(InvalidSpec):
            Tau(bad)
    assert float(Tau(2)) == 2.0


@pytest.mark.parametrize(
    "p, tau, expected",
    [
        ((0, 0, 0), 1, [(1, 0, 0), (0, 1, 0), (0, 0, 1)]),
        ((1, 2, 5), 1, [(1, 0, 2), (0, 1, -1), (0, 0, 1)]),
        ((1, 0, 0), 2, [(1, 0, 0), (0, 1, -2), (0, 0, 1)]),
    ],
)
def test_frame_at(p, tau, expected):
    np.testing.assert_array_equal(np.array(frame_at(p, tau)), np.array(expected, dtype=float))


def test_metric_coords_examples():
    np.testing.assert_array_equal(metric_coords((0, 0, 0), 3.0), SIGNATURE)
    g = metric_coords((1, 0, 0), 1.0)
    np.testing.assert_allclose(g, [[1, 0, 0], [0, 0, -1], [0, -1, -1]], atol=1e-15)
    assert np.linalg.det(g) == pytest.approx(-1.0, abs=1e-12)


def _metric_by_hand(p, t):
    # dx^2 + dy^2 - (dz - t(y dx - x dy))^2 expanded term by term
    x, y, _ = p
    return np.array([
        [1 - t * t * y * y, t * t * x * y, t * y],
        [t * t * x * y, 1 - t * t * x * x, -t * x],
        [t * y, -t * x, -1.0],
    ])


@given(vec, taus)
def test_metric_matches_expansion_and_frame_is_orthonormal(p, t):
    g = metric_coords(p, t)
    np.testing.assert_allclose(g, _metric_by_hand(p, t), atol=1e-12)
    assert np.linalg.det(g) == pytest.approx(-1.0, abs=1e-9)
    F = np.array(frame_at(p, t))
    np.testing.assert_allclose(F @ g @ F.T, SIGNATURE, atol=1e-12)


@given(vec, vec, taus)
def test_frame_coord_roundtrip(p, c, t):
    np.testing.assert_allclose(to_frame(p, to_coords(p, c, t), t), c, atol=1e-12)
    # the coordinate metric and the frame inner product agree
    v = to_coords(p, c, t)
    assert v @ metric_coords(p, t) @ v == pytest.approx(inner(c, c), abs=1e-9)


def test_cross_basis():
    np.testing.assert_array_equal(cross(E1, E2), -E3)
    np.testing.assert_array_equal(cross(E2, E3), E1)
    np.testing.assert_array_equal(cross(E3, E1), E2)


@given(vec, vec, vec)
def test_cross_properties(u, v, w):
    np.testing.assert_allclose(cross(u, u), 0.0, atol=0)
    np.testing.assert_allclose(cross(u, v), -cross(v, u), atol=1e-12)
    assert inner(cross(u, v), w) == pytest.approx(np.linalg.det(np.array([u, v, w])), abs=1e-9)
    assert inner(cross(u, v), u) == pytest.approx(0.0, abs=1e-9)


def test_nabla_frame_table():
    np.testing.assert_array_equal(nabla_frame(2, 1, 1.0), E3)
    np.testing.assert_array_equal(nabla_frame(1, 1, 1.0), np.zeros(3))
    np.testing.assert_array_equal(nabla_frame(3, 2, 2.0), 2 * E1)
    t = 0.7
    np.testing.assert_allclose(nabla_frame(1, 2, t), -t * E3)
    np.testing.assert_allclose(nabla_frame(3, 1, t), -t * E2)
    np.testing.assert_allclose(nabla_frame(1, 3, t), -t * E2)
    np.testing.assert_allclose(nabla_frame(2, 3, t), t * E1)
    for i in (1, 2, 3):
        np.testing.assert_array_equal(nabla_frame(i, i, t), 0.0)
    with pytest.raises(IndexError):
        nabla_frame(0, 1, t)
    with pytest.raises(IndexError):
        nabla_frame(1, 4, t)


@given(taus)
def test_connection_is_torsion_free_and_metric(t):
    # [E1, E2] = -2 tau E3 in coordinates; the other brackets vanish
    np.testing.assert_allclose(nabla_frame(1, 2, t) - nabla_frame(2, 1, t), -2 * t * E3)
    np.testing.assert_allclose(nabla_frame(1, 3, t) - nabla_frame(3, 1, t), 0.0)
    np.testing.assert_allclose(nabla_frame(2, 3, t) - nabla_frame(3, 2, t), 0.0)
    basis = (E1, E2, E3)
    for i in range(1, 4):
        for j in range(1, 4):
            for k in range(1, 4):
                lhs = inner(nabla_frame(i, j, t), basis[k - 1]) + inner(basis[j - 1], nabla_frame(i, k, t))
                assert lhs == pytest.approx(0.0, abs=1e-15)


def test_nabla_field_examples():
    p = np.array([0.3, -0.2, 1.0])
    const = lambda e: (lambda q: e)  # noqa: E731
    np.testing.assert_allclose(nabla_field(const(E3), const(E3), p, 1.0), 0.0, atol=1e-12)
    np.testing.assert_allclose(nabla_field(const(E1), const(E3), p, 1.5), -1.5 * E2, atol=1e-10)
    X = lambda q: np.array([q[0], 0.0, 0.0])  # noqa: E731
    np.testing.assert_allclose(nabla_field(X, const(E1), [2.0, 0.0, 0.0], 1.0), 0.0, atol=1e-12)


def test_nabla_field_nonfinite():
    with pytest.raises(NonFiniteValue):
        nabla_field(lambda q: E1, lambda q: np.full(3, np.nan), np.zeros(3), 1.0)


@settings(max_examples=30, deadline=None)
@given(vec, taus)
def test_nabla_field_metric_compatibility(p, t):
    X = lambda q: np.array([1.0 + q[1], 0.5, q[0]])  # noqa: E731
    Y = lambda q: np.array([np.sin(q[0]), q[2], 1.0])  # noqa: E731
    Z = lambda q: np.array([q[1] * q[2], np.cos(q[1]), q[0]])  # noqa: E731
    h = 1e-5
    d = to_coords(p, X(p), t)
    lhs = (inner(Y(p + h * d), Z(p + h * d)) - inner(Y(p - h * d), Z(p - h * d))) / (2 * h)
    rhs = inner(nabla_field(X, Y, p, t), Z(p)) + inner(Y(p), nabla_field(X, Z, p, t))
    assert lhs == pytest.approx(rhs, abs=1e-6)


@given(vec, vec, taus)
def test_killing_identity(x, p, t):
    np.testing.assert_allclose(killing_residual(x, p, t), 0.0, atol=1e-12)


def test_killing_examples():
    np.testing.assert_array_equal(killing_residual(E1, np.zeros(3), 1.0), 0.0)
    np.testing.assert_array_equal(killing_residual(E3, np.zeros(3), 1.0), 0.0)


def test_curvature_component_table():
    t = 1.0
    np.testing.assert_array_equal(riemann_table(E1, E2, E1, t), -3 * E2)
    np.testing.assert_array_equal(riemann_table(E2, E1, E1, t), 3 * E2)
    np.testing.assert_array_equal(riemann_table(E1, E2, E3, t), 0.0)
    np.testing.assert_array_equal(riemann_formula(E1, E2, E2, t), 3 * E1)
    np.testing.assert_allclose(riemann_formula(E1, E3, E3, 2.0), 4 * E1)
    np.testing.assert_allclose(riemann_formula(E1, E2, E3, t), 0.0)
    t = 0.6
    listed = [
        ((E1, E2, E1), -3 * E2), ((E1, E3, E1), E3), ((E1, E2, E2), 3 * E1),
        ((E2, E3, E2), E3), ((E2, E3, E3), E2), ((E1, E3, E3), E1),
    ]
    for args, value in listed:
        np.testing.assert_allclose(riemann_table(*args, t), t * t * value, atol=1e-15)
        np.testing.assert_allclose(riemann_formula(*args, t), t * t * value, atol=1e-15)


def test_curvature_table_is_exhaustive():
    # every frame triple agrees across the table, the closed formula and the connection
    basis = (E1, E2, E3)
    for t in (1.0, -0.5):
        for x in basis:
            for y in basis:
                for z in basis:
                    a = riemann_table(x, y, z, t)
                    np.testing.assert_allclose(a, riemann_formula(x, y, z, t), atol=1e-14)
                    np.testing.assert_allclose(a, riemann_from_connection(x, y, z, t), atol=1e-14)


@given(vec, vec, vec, vec, taus)
def test_curvature_symmetries(x, y, z, w, t):
    R = lambda a, b, c: riemann_formula(a, b, c, t)  # noqa: E731
    np.testing.assert_allclose(riemann_table(x, y, z, t), R(x, y, z), atol=1e-12 * max(1, t * t) * 30)
    np.testing.assert_allclose(R(x, y, z), -R(y, x, z), atol=1e-10)
    assert inner(R(x, y, z), w) == pytest.approx(-inner(R(x, y, w), z), abs=1e-9)
    assert inner(R(x, y, z), w) == pytest.approx(inner(R(z, w, x), y), abs=1e-9)
    np.testing.assert_allclose(R(x, y, z) + R(y, z, x) + R(z, x, y), 0.0, atol=1e-10)


def test_sign_convention_matches_connection():
    # an opposite-sign implementation would flip this
    np.testing.assert_allclose(riemann_from_connection(E1, E2, E1, 1.0), -3 * E2, atol=1e-15)
