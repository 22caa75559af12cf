"""Finite differences, fixed-step RK4 quadrature and tolerance settings."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, fields
from typing import Any, Callable, Mapping

import numpy as np
from scipy.interpolate import CubicHermiteSpline

from .errors import NonFiniteValue


@dataclass(frozen=True)
class ToleranceConfig:
    """Numerical tolerances and step sizes shared by all modules.

    ``fd_step`` drives first-order central differences of analytic fields,
    ``curvature_step`` the nested differences of the intrinsic Gauss curvature.
    """

    exact_tol: float = 1e-12
    fd_tol: float = 1e-6
    fd_step: float = 1e-5
    curvature_step: float = 1e-4
    ode_step: float = 1e-3
    singular_window: float = 1e-3
    # fd_tol >= FD_CALIBRATION * fd_step**2; measured on the plane test patch
    fd_calibration: float = 100.0

    def __post_init__(self) -> None:
        for f in fields(self):
            value = getattr(self, f.name)
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"tolerance {f.name} must be positive, got {value!r}")
        if self.fd_tol < self.fd_calibration * self.fd_step**2:
            raise ValueError("fd_tol is below the truncation floor for fd_step")

    @classmethod
    def from_mapping(cls, data: Mapping[str, Any] | None) -> "ToleranceConfig":
        if not data:
            return cls()
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown tolerance keys: {sorted(unknown)}")
        return cls(**{k: float(v) for k, v in data.items()})

    def to_dict(self) -> dict[str, float]:
        return asdict(self)


DEFAULT_TOLERANCES = ToleranceConfig()


def _finite(value, what: str = "sample"):
    if not np.all(np.isfinite(value)):
        raise NonFiniteValue(f"non-finite {what}: {value!r}")
    return value


def central_diff(f: Callable[[float], Any], x: float, h: float = 1e-5):
    """Second-order central difference ``(f(x+h) - f(x-h)) / 2h``.

    Works for scalar- or array-valued ``f``.
    """
    if h <= 0:
        raise ValueError("step must be positive")
    fp = _finite(np.asarray(f(x + h), dtype=float))
    fm = _finite(np.asarray(f(x - h), dtype=float))
    d = (fp - fm) / (2.0 * h)
    return float(d) if d.ndim == 0 else d


def second_diff(f: Callable[[float], Any], x: float, h: float = 1e-4):
    """Three-point second derivative, error O(h^2)."""
    fp = _finite(np.asarray(f(x + h), dtype=float))
    f0 = _finite(np.asarray(f(x), dtype=float))
    fm = _finite(np.asarray(f(x - h), dtype=float))
    d = (fp - 2.0 * f0 + fm) / (h * h)
    return float(d) if d.ndim == 0 else d


def five_point_derivative(samples: np.ndarray, h: float) -> np.ndarray:
    """Fourth-order derivative of uniformly spaced samples at interior nodes.

    Returns an array two shorter at each end than ``samples``.
    """
    y = np.asarray(samples, dtype=float)
    if y.shape[0] < 5:
        raise ValueError("need at least 5 samples")
    return (-y[4:] + 8.0 * y[3:-1] - 8.0 * y[1:-3] + y[:-4]) / (12.0 * h)


@dataclass(frozen=True, eq=False)
class SampledFunction:
    """Values and derivatives on a grid, interpolated by cubic Hermite pieces.

    ``values`` has shape ``(n,)`` or ``(n, d)``; interpolation error is
    O(h^4) because exact derivative data is used at the nodes.
    """

    x: np.ndarray
    values: np.ndarray
    derivs: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "_spline", CubicHermiteSpline(self.x, self.values, self.derivs, axis=0))

    def __call__(self, x):
        return self._spline(x)

    def derivative(self, x, order: int = 1):
        return self._spline(x, nu=order)

    @property
    def span(self) -> tuple[float, float]:
        return float(self.x[0]), float(self.x[-1])


def rk4_integrate(
    deriv: Callable[[float, Any], Any],
    y0,
    span: tuple[float, float],
    n: int,
) -> SampledFunction:
    """Classical fixed-step RK4 for ``y' = deriv(x, y)`` on ``span``.

    With a ``deriv`` that ignores ``y`` this is a cumulative fourth-order
    quadrature (Simpson's rule per step).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    a, b = map(float, span)
    h = (b - a) / n
    y = np.array(y0, dtype=float)
    xs = a + h * np.arange(n + 1)
    ys = np.empty((n + 1,) + y.shape)
    ds = np.empty_like(ys)

    def f(x, yy):
        return _finite(np.asarray(deriv(x, yy), dtype=float), "derivative")

    ys[0] = y
    for i in range(n):
        x = xs[i]
        k1 = f(x, y)
        ds[i] = k1
        k2 = f(x + h / 2, y + h / 2 * k1)
        k3 = f(x + h / 2, y + h / 2 * k2)
        k4 = f(x + h, y + h * k3)
        y = y + h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
        ys[i + 1] = y
    ds[n] = f(xs[n], y)
    return SampledFunction(xs, ys, ds)


def steps_for(span: tuple[float, float], step: float, minimum: int = 2) -> int:
    """Number of fixed steps no coarser than ``step`` over ``span``."""
    return max(minimum, int(math.ceil(abs(span[1] - span[0]) / step)))
