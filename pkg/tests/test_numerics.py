import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from heisenberg_helix.errors import NonFiniteValue
from heisenberg_helix.numerics import (
    DEFAULT_TOLERANCES,
    ToleranceConfig,
    central_diff,
    five_point_derivative,
    rk4_integrate,
    second_diff,
    steps_for,
)

finite = st.floats(-50, 50, allow_nan=False, allow_infinity=False)


@given(finite)
def test_central_diff_identity_is_exact(x):
    assert central_diff(lambda t: t, x, 0.5) == pytest.approx(1.0, abs=1e-12)


def test_central_diff_square():
    assert abs(central_diff(lambda t: t * t, 3.0, 1e-5) - 6.0) <= 1e-9


def test_central_diff_sin_truncation_bound():
    h = 1e-3
    assert abs(central_diff(math.sin, 0.0, h) - 1.0) <= h * h / 6


def test_central_diff_second_order():
    f, x = np.exp, 0.7
    errs = [abs(central_diff(f, x, h) - np.exp(x)) for h in (1e-2, 5e-3)]
    assert errs[0] / errs[1] == pytest.approx(4.0, rel=0.01)


def test_central_diff_vector_valued():
    d = central_diff(lambda t: np.array([t, t * t]), 2.0)
    np.testing.assert_allclose(d, [1.0, 4.0], atol=1e-9)


def test_central_diff_rejects_nonfinite():
    with pytest.raises(NonFiniteValue):
        central_diff(lambda t: 1.0 / t if t > 0 else math.nan, 0.0, 1e-3)
    with pytest.raises(ValueError):
        central_diff(math.sin, 0.0, 0.0)


def test_second_diff():
    assert second_diff(lambda t: t**3, 2.0) == pytest.approx(12.0, abs=1e-6)


def test_five_point_derivative_fourth_order():
    errs = []
    for n in (41, 81):
        x = np.linspace(0, 1, n)
        d = five_point_derivative(np.sin(x), x[1] - x[0])
        errs.append(np.abs(d - np.cos(x[2:-2])).max())
    assert 12 < errs[0] / errs[1] < 20
    with pytest.raises(ValueError):
        five_point_derivative(np.zeros(4), 0.1)


@given(st.floats(-5, 5))
def test_rk4_zero_derivative_is_constant(c):
    sol = rk4_integrate(lambda x, y: 0.0 * y, c, (0.0, 1.0), 10)
    np.testing.assert_array_equal(sol.values, c)


def test_rk4_cosine_quadrature():
    sol = rk4_integrate(lambda x, y: math.cos(x), 0.0, (0.0, math.pi / 2), 100)
    assert np.abs(sol.values - np.sin(sol.x)).max() <= 1e-9
    # the Hermite interpolant keeps fourth order between nodes
    xs = np.linspace(0, math.pi / 2, 333)
    assert np.abs(sol(xs) - np.sin(xs)).max() <= 1e-9


def test_rk4_convergence_order():
    def err(n):
        sol = rk4_integrate(lambda x, y: -y, 1.0, (0.0, 2.0), n)
        return abs(sol.values[-1] - math.exp(-2.0))

    assert 15 < err(20) / err(40) < 17


def test_rk4_vertical_profile_quadrature():
    th, t = 0.8, 1.0
    sh = math.sinh(th)

    def rhs(v, y):
        f1, f2 = sh * math.cos(v), -sh * math.sin(v)
        d1, d2 = -sh * math.sin(v), -sh * math.cos(v)
        return t * (f2 * d1 - f1 * d2)

    sol = rk4_integrate(rhs, 0.0, (0.0, 2 * math.pi), 200)
    assert np.abs(sol.values - t * sol.x * sh * sh).max() <= 1e-12


def test_rk4_nonfinite_derivative():
    with pytest.raises(NonFiniteValue):
        rk4_integrate(lambda x, y: math.inf, 0.0, (0.0, 1.0), 4)


def test_steps_for():
    assert steps_for((0.0, 1.0), 0.1) == 10
    assert steps_for((0.0, 1e-9), 0.1) == 2


def test_tolerance_config_roundtrip_and_checks():
    cfg = ToleranceConfig.from_mapping({"fd_tol": 1e-5})
    assert ToleranceConfig.from_mapping(cfg.to_dict()) == cfg
    assert ToleranceConfig.from_mapping(None) == DEFAULT_TOLERANCES
    with pytest.raises(ValueError):
        ToleranceConfig(exact_tol=0.0)
    with pytest.raises(ValueError):
        ToleranceConfig(fd_tol=1e-12)
    with pytest.raises(ValueError):
        ToleranceConfig.from_mapping({"nope": 1.0})
