"""Closed-form geometry of the Lorentzian Heisenberg group H3(tau).

Vectors are stored as length-3 numpy arrays of components in the
left-invariant Lorentzian orthonormal frame {E1, E2, E3}, where

    E1 = d/dx + tau*y d/dz,   E2 = d/dy - tau*x d/dz,   E3 = d/dz,

and <E1,E1> = <E2,E2> = 1, <E3,E3> = -1.  Coordinate components
(d/dx, d/dy, d/dz) only appear at the chart boundary (``to_frame`` /
``to_coords``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import InvalidSpec, NonFiniteValue

# Frame components with signature (+, +, -).
FrameVector = np.ndarray
CoordVector = np.ndarray
PointR3 = np.ndarray

SIGNATURE = np.diag([1.0, 1.0, -1.0])
E1 = np.array([1.0, 0.0, 0.0])
E2 = np.array([0.0, 1.0, 0.0])
E3 = np.array([0.0, 0.0, 1.0])
FRAME = (E1, E2, E3)


@dataclass(frozen=True)
class Tau:
    """Bundle-curvature parameter; zero is the flat Minkowski case and is rejected."""

    value: float

    def __post_init__(self) -> None:
        v = float(self.value)
        if not math.isfinite(v) or v == 0.0:
            raise InvalidSpec(f"tau must be a finite nonzero real, got {self.value!r}")
        object.__setattr__(self, "value", v)

    def __float__(self) -> float:
        return self.value


def tau_value(tau: "Tau | float") -> float:
    """Validate and unwrap ``tau``."""
    return tau.value if isinstance(tau, Tau) else Tau(tau).value


def frame_at(p: PointR3, tau: "Tau | float") -> tuple[CoordVector, CoordVector, CoordVector]:
    """Coordinate components of E1, E2, E3 at ``p``."""
    t = tau_value(tau)
    x, y, _ = np.asarray(p, dtype=float)
    return (
        np.array([1.0, 0.0, t * y]),
        np.array([0.0, 1.0, -t * x]),
        np.array([0.0, 0.0, 1.0]),
    )


def metric_coords(p: PointR3, tau: "Tau | float") -> np.ndarray:
    """Matrix of g_tau in the coordinate basis at ``p``."""
    t = tau_value(tau)
    x, y, _ = np.asarray(p, dtype=float)
    # g = dx^2 + dy^2 - w^2 with w = dz - t*y dx + t*x dy
    w = np.array([-t * y, t * x, 1.0])
    return np.diag([1.0, 1.0, 0.0]) - np.outer(w, w)


def to_frame(p: PointR3, v: CoordVector, tau: "Tau | float") -> FrameVector:
    """Coordinate components at ``p`` -> frame components."""
    t = tau_value(tau)
    x, y, _ = np.asarray(p, dtype=float)
    vx, vy, vz = np.asarray(v, dtype=float)
    return np.array([vx, vy, vz - t * y * vx + t * x * vy])


def to_coords(p: PointR3, c: FrameVector, tau: "Tau | float") -> CoordVector:
    """Frame components at ``p`` -> coordinate components."""
    t = tau_value(tau)
    x, y, _ = np.asarray(p, dtype=float)
    c1, c2, c3 = np.asarray(c, dtype=float)
    return np.array([c1, c2, c3 + t * y * c1 - t * x * c2])


def inner(u: FrameVector, v: FrameVector) -> float:
    """Lorentzian inner product of frame-component vectors."""
    return float(u[0] * v[0] + u[1] * v[1] - u[2] * v[2])


def cross(u: FrameVector, v: FrameVector) -> FrameVector:
    """Lorentzian cross product; satisfies <u ^ v, w> = det(u, v, w)."""
    return np.array([
        u[1] * v[2] - u[2] * v[1],
        -(u[0] * v[2] - u[2] * v[0]),
        -(u[0] * v[1] - u[1] * v[0]),
    ])


# _CONNECTION[i, j] = (nabla_{E_i} E_j) / tau
_CONNECTION = np.zeros((3, 3, 3))
_CONNECTION[1, 0] = E3
_CONNECTION[0, 1] = -E3
_CONNECTION[2, 0] = -E2
_CONNECTION[0, 2] = -E2
_CONNECTION[2, 1] = E1
_CONNECTION[1, 2] = E1


def nabla_frame(i: int, j: int, tau: "Tau | float") -> FrameVector:
    """Levi-Civita derivative of E_j along E_i (1-based indices)."""
    if i not in (1, 2, 3) or j not in (1, 2, 3):
        raise IndexError(f"frame indices must be in 1..3, got ({i}, {j})")
    return tau_value(tau) * _CONNECTION[i - 1, j - 1].copy()


def connection_term(x: FrameVector, y: FrameVector, tau: "Tau | float") -> FrameVector:
    """sum_ij x^i y^j nabla_{E_i} E_j: the part of nabla_X Y not from d(Y^i)."""
    return tau_value(tau) * np.einsum("i,j,ijk->k", x, y, _CONNECTION)


def covariant_derivative(
    x: FrameVector, y: FrameVector, dy: FrameVector, tau: "Tau | float"
) -> FrameVector:
    """nabla_X Y given the directional derivative ``dy = X(Y^i)`` of Y's components."""
    return np.asarray(dy, dtype=float) + connection_term(x, y, tau)


def nabla_field(
    X: Callable[[PointR3], FrameVector],
    Y: Callable[[PointR3], FrameVector],
    p: PointR3,
    tau: "Tau | float",
    h: float = 1e-5,
) -> FrameVector:
    """nabla_X Y at ``p`` for frame-component vector fields on H3.

    The component derivatives X(Y^i) are central differences along the
    straight coordinate line through ``p`` with velocity X(p).
    """
    t = tau_value(tau)
    p = np.asarray(p, dtype=float)
    xp = np.asarray(X(p), dtype=float)
    yp = np.asarray(Y(p), dtype=float)
    if not (np.all(np.isfinite(xp)) and np.all(np.isfinite(yp))):
        raise NonFiniteValue("vector field is not finite at p")
    direction = to_coords(p, xp, t)
    y_plus = np.asarray(Y(p + h * direction), dtype=float)
    y_minus = np.asarray(Y(p - h * direction), dtype=float)
    if not (np.all(np.isfinite(y_plus)) and np.all(np.isfinite(y_minus))):
        raise NonFiniteValue("vector field is not finite near p")
    dy = (y_plus - y_minus) / (2.0 * h)
    return covariant_derivative(xp, yp, dy, t)


def killing_residual(x: FrameVector, p: PointR3, tau: "Tau | float") -> FrameVector:
    """nabla_X E3 - tau X ^ E3, identically zero since E3 is a unit Killing field.

    ``p`` is accepted for interface symmetry; the frame is left-invariant so
    the connection table does not depend on the base point.
    """
    t = tau_value(tau)
    x = np.asarray(x, dtype=float)
    return connection_term(x, E3, t) - t * cross(x, E3)


def _riemann_components() -> np.ndarray:
    # _R[a, b, c] = R(E_a, E_b) E_c / tau^2
    R = np.zeros((3, 3, 3, 3))
    R[0, 1, 0] = -3 * E2
    R[0, 2, 0] = E3
    R[0, 1, 1] = 3 * E1
    R[1, 2, 1] = E3
    R[1, 2, 2] = E2
    R[0, 2, 2] = E1
    for a in range(3):
        for b in range(a + 1, 3):
            R[b, a] = -R[a, b]
    return R


_RIEMANN = _riemann_components()


def riemann_table(x: FrameVector, y: FrameVector, z: FrameVector, tau: "Tau | float") -> FrameVector:
    """R(X,Y)Z as the trilinear extension of the frame component table.

    Sign convention: R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z.
    """
    t = tau_value(tau)
    return t * t * np.einsum("a,b,c,abck->k", x, y, z, _RIEMANN)


def riemann_formula(x: FrameVector, y: FrameVector, z: FrameVector, tau: "Tau | float") -> FrameVector:
    """R(X,Y)Z from the closed invariant expression in <.,.> and E3."""
    t2 = tau_value(tau) ** 2
    x, y, z = (np.asarray(v, dtype=float) for v in (x, y, z))
    yz, xz = inner(y, z), inner(x, z)
    xe, ye, ze = inner(x, E3), inner(y, E3), inner(z, E3)
    return 3 * t2 * (yz * x - xz * y) + 4 * t2 * (
        ye * ze * x - xe * ze * y + yz * xe * E3 - xz * ye * E3
    )


def riemann_from_connection(x: FrameVector, y: FrameVector, z: FrameVector, tau: "Tau | float") -> FrameVector:
    """R(X,Y)Z for constant-component X, Y, Z straight from the connection table.

    With constant components, nabla_X Y = connection_term(X, Y) and the
    curvature reduces to nested applications of the table.
    """
    t = tau_value(tau)

    def nab(a, b):
        return connection_term(a, b, t)

    bracket = nab(x, y) - nab(y, x)
    return nab(x, nab(y, z)) - nab(y, nab(x, z)) - nab(bracket, z)
