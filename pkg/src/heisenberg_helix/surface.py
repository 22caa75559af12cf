"""Extrinsic and intrinsic geometry of immersed surfaces F(u, v) in H3(tau).

Every routine works pointwise. First and second partial derivatives of F
come from the immersion's analytic jet when one is attached, otherwise from
central differences. Derivatives of the normal, of T and of JT along the
parameter lines are then exact given the jet; only Codazzi (which needs a
third derivative of F) and the intrinsic curvature difference further.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import ambient
from .ambient import E3, connection_term, cross, inner, to_frame
from .errors import DegenerateMetric, NullNormal, SingularBasis
from .numerics import central_diff, second_diff

NULL_TOL = 1e-12
BASIS_TOL = 1e-10


class Causal(str, enum.Enum):
    SPACELIKE = "spacelike"
    TIMELIKE = "timelike"

    @classmethod
    def parse(cls, value: "Causal | str") -> "Causal":
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower()
        aliases = {"s": cls.SPACELIKE, "t": cls.TIMELIKE}
        if key in aliases:
            return aliases[key]
        return cls(key)

    @property
    def eps(self) -> int:
        """<N, N> for a unit normal of this causal type."""
        return -1 if self is Causal.SPACELIKE else 1


@dataclass(frozen=True)
class Jet:
    """Coordinate components of F and its partials up to second order."""

    p: np.ndarray
    Fu: np.ndarray
    Fv: np.ndarray
    Fuu: np.ndarray
    Fuv: np.ndarray
    Fvv: np.ndarray


@dataclass(frozen=True, eq=False)
class Immersion:
    """A parametrized surface (u, v) -> R^3 in H3(tau).

    ``jets`` returns a :class:`Jet`; without it the partials are central
    differences with ``fd_step`` (first order) and ``fd_step2`` (second).
    """

    F: Callable[[float, float], np.ndarray]
    tau: float
    domain: tuple[tuple[float, float], tuple[float, float]] = ((0.0, 1.0), (0.0, 1.0))
    jets: Callable[[float, float], Jet] | None = None
    fd_step: float = 1e-5
    fd_step2: float = 1e-4

    def __post_init__(self) -> None:
        object.__setattr__(self, "tau", ambient.tau_value(self.tau))

    def __call__(self, u: float, v: float) -> np.ndarray:
        return np.asarray(self.F(u, v), dtype=float)

    def jet(self, u: float, v: float) -> Jet:
        if self.jets is not None:
            return self.jets(u, v)
        return self.fd_jet(u, v)

    def fd_jet(self, u: float, v: float) -> Jet:
        h, k = self.fd_step, self.fd_step2
        F = self.__call__
        Fu = central_diff(lambda s: F(s, v), u, h)
        Fv = central_diff(lambda s: F(u, s), v, h)
        Fuu = second_diff(lambda s: F(s, v), u, k)
        Fvv = second_diff(lambda s: F(u, s), v, k)
        Fuv = (F(u + k, v + k) - F(u + k, v - k) - F(u - k, v + k) + F(u - k, v - k)) / (4 * k * k)
        return Jet(F(u, v), Fu, Fv, Fuu, Fuv, Fvv)

    def with_fd_jets(self) -> "Immersion":
        return Immersion(self.F, self.tau, self.domain, None, self.fd_step, self.fd_step2)


@dataclass(frozen=True, eq=False)
class SurfaceFrame:
    """Adapted frame at one point; all vectors in ambient frame components."""

    p: np.ndarray
    Fu: np.ndarray
    Fv: np.ndarray
    N: np.ndarray
    eps: int
    nu: float
    T: np.ndarray
    JT: np.ndarray

    def J(self, x: np.ndarray) -> np.ndarray:
        """Rotation by a right angle in the tangent plane, X -> N ^ X."""
        return cross(self.N, x)

    @property
    def metric(self) -> np.ndarray:
        """Induced first fundamental form in the (u, v) basis."""
        return _gram(self.Fu, self.Fv)


@dataclass(frozen=True, eq=False)
class ShapeData:
    """Shape operator matrix in the basis {T, JT}.

    Column k holds the {T, JT} coordinates of A applied to the k-th basis
    vector, so A(T) = A[0,0] T + A[1,0] JT.
    """

    A: np.ndarray
    lam: float
    detA: float
    frame: SurfaceFrame
    A_T: np.ndarray
    A_JT: np.ndarray


def _gram(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.array([[inner(a, a), inner(a, b)], [inner(b, a), inner(b, b)]])


@dataclass(frozen=True, eq=False)
class _Local:
    """Frame plus its partial derivatives in u and v."""

    frame: SurfaceFrame
    tau: float
    G: np.ndarray
    dN: tuple[np.ndarray, np.ndarray]
    dnu: tuple[float, float]
    dT: tuple[np.ndarray, np.ndarray]
    dJT: tuple[np.ndarray, np.ndarray]

    def coefficients(self, x: np.ndarray) -> np.ndarray:
        """(alpha, beta) with x = alpha Fu + beta Fv for tangent x."""
        f = self.frame
        return np.linalg.solve(self.G, [inner(x, f.Fu), inner(x, f.Fv)])

    def directional(self, x: np.ndarray, partials) -> np.ndarray:
        a, b = self.coefficients(x)
        return a * np.asarray(partials[0]) + b * np.asarray(partials[1])

    def tangential(self, w: np.ndarray) -> np.ndarray:
        f = self.frame
        return w - f.eps * inner(w, f.N) * f.N

    def ambient_nabla(self, x: np.ndarray, y: np.ndarray, partials) -> np.ndarray:
        """Ambient derivative of a surface field y along tangent x."""
        return self.directional(x, partials) + connection_term(x, y, self.tau)

    def shape(self, x: np.ndarray) -> np.ndarray:
        """A(x) = -nabla_x N."""
        return -self.ambient_nabla(x, self.frame.N, self.dN)


def _frame_partials(imm: Immersion, u: float, v: float):
    """Frame components of Fu, Fv and their u- and v-derivatives."""
    tau = imm.tau
    j = imm.jet(u, v)
    p = np.asarray(j.p, dtype=float)
    Fu, Fv = np.asarray(j.Fu, dtype=float), np.asarray(j.Fv, dtype=float)
    fu, fv = to_frame(p, Fu, tau), to_frame(p, Fv, tau)
    fuu, fvv = to_frame(p, j.Fuu, tau), to_frame(p, j.Fvv, tau)
    fuv = to_frame(p, j.Fuv, tau)
    # d/dv of the frame components of Fu picks up the non-coordinate frame
    twist = tau * (Fv[0] * Fu[1] - Fv[1] * Fu[0])
    dfu = (fuu, fuv + np.array([0.0, 0.0, twist]))
    dfv = (fuv - np.array([0.0, 0.0, twist]), fvv)
    return p, fu, fv, dfu, dfv


def _local(imm: Immersion, u: float, v: float, orient: int = 1) -> _Local:
    if orient not in (1, -1):
        raise ValueError("orient must be +1 or -1")
    tau = imm.tau
    p, fu, fv, dfu, dfv = _frame_partials(imm, u, v)
    W = cross(fu, fv)
    ww = inner(W, W)
    scale = float(np.dot(fu, fu) * np.dot(fv, fv))
    if not np.isfinite(ww) or abs(ww) <= NULL_TOL * max(scale, 1e-300):
        raise NullNormal(f"lightlike or degenerate tangent plane at (u, v) = ({u}, {v})")
    eps = 1 if ww > 0 else -1
    s = np.sqrt(abs(ww))
    N = orient * W / s
    dN = []
    for k in range(2):
        dW = cross(dfu[k], fv) + cross(fu, dfv[k])
        dN.append(orient * (dW / s - W * inner(W, dW) / (eps * s**3)))
    nu = eps * inner(N, E3)
    dnu = tuple(eps * inner(d, E3) for d in dN)
    T = E3 - nu * N
    dT = tuple(-dnu[k] * N - nu * dN[k] for k in range(2))
    JT = cross(N, T)
    dJT = tuple(cross(dN[k], T) + cross(N, dT[k]) for k in range(2))
    frame = SurfaceFrame(p, fu, fv, N, eps, float(nu), T, JT)
    return _Local(frame, tau, _gram(fu, fv), tuple(dN), dnu, dT, dJT)


def surface_frame(imm: Immersion, u: float, v: float, orient: int = 1) -> SurfaceFrame:
    """Unit normal, causal sign, angle function and {T, JT} at (u, v).

    Raises:
        NullNormal: if Fu ^ Fv is null (lightlike tangent plane).
    """
    return _local(imm, u, v, orient).frame


def helix_orientation(imm: Immersion, u: float, v: float) -> int:
    """The orientation making the angle function nu non-negative."""
    return -1 if surface_frame(imm, u, v, 1).nu < 0 else 1


def causal_type(frame: SurfaceFrame) -> Causal:
    """Spacelike iff eps = -1; cross-checked against the induced metric."""
    from_normal = Causal.SPACELIKE if frame.eps == -1 else Causal.TIMELIKE
    g = frame.metric
    from_metric = Causal.SPACELIKE if (np.linalg.det(g) > 0 and g[0, 0] > 0) else Causal.TIMELIKE
    if from_normal is not from_metric:
        raise NullNormal("normal sign and induced metric disagree on causal type")
    return from_normal


def _basis_coords(frame: SurfaceFrame, w: np.ndarray) -> np.ndarray:
    B = _gram(frame.T, frame.JT)
    if abs(B[0, 0]) < BASIS_TOL:
        raise SingularBasis("<T, T> vanishes; {T, JT} is not a basis")
    return np.linalg.solve(B, [inner(w, frame.T), inner(w, frame.JT)])


def _shape_from_local(loc: _Local) -> ShapeData:
    f = loc.frame
    A_T, A_JT = loc.shape(f.T), loc.shape(f.JT)
    A = np.column_stack([_basis_coords(f, A_T), _basis_coords(f, A_JT)])
    return ShapeData(A, float(A[1, 1]), float(np.linalg.det(A)), f, A_T, A_JT)


def shape_operator(imm: Immersion, u: float, v: float, orient: int = 1, h: float | None = None) -> ShapeData:
    """Matrix of X -> -nabla_X N in the basis {T, JT}.

    ``h`` overrides the immersion's finite-difference step when it has no
    analytic jet.
    """
    return _shape_from_local(_local(_with_step(imm, h), u, v, orient))


def shape_vector(imm: Immersion, u: float, v: float, x: np.ndarray, orient: int = 1) -> np.ndarray:
    """A(x) for any tangent vector x at (u, v)."""
    return _local(imm, u, v, orient).shape(np.asarray(x, dtype=float))


def second_fundamental_form(shape: ShapeData, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """alpha(X, Y) = eps <A(X), Y> N for X, Y given in {T, JT} coordinates."""
    f = shape.frame
    basis = np.column_stack([f.T, f.JT])
    ax = basis @ (shape.A @ np.asarray(x, dtype=float))
    return f.eps * inner(ax, basis @ np.asarray(y, dtype=float)) * f.N


def gauss_curvature_extrinsic(detA: float, nu: float, eps: int, tau: "ambient.Tau | float") -> float:
    """Gauss equation: K = eps (det A - 4 tau^2 nu^2) - tau^2."""
    t2 = ambient.tau_value(tau) ** 2
    return eps * (detA - 4 * t2 * nu * nu) - t2


def induced_metric(imm: Immersion, u: float, v: float) -> np.ndarray:
    j = imm.jet(u, v)
    p = np.asarray(j.p, dtype=float)
    return _gram(to_frame(p, j.Fu, imm.tau), to_frame(p, j.Fv, imm.tau))


def _christoffel(g: np.ndarray, dg: np.ndarray) -> np.ndarray:
    """Gamma[k, i, j] from g and dg[l, i, j] = d_l g_ij."""
    det = np.linalg.det(g)
    if abs(det) < NULL_TOL * max(np.abs(g).max() ** 2, 1e-300):
        raise DegenerateMetric(f"det g = {det:g}")
    # lower[l, i, j] = (d_i g_jl + d_j g_il - d_l g_ij) / 2
    lower = 0.5 * (np.einsum("ijl->lij", dg) + np.einsum("jil->lij", dg) - dg)
    return np.einsum("kl,lij->kij", np.linalg.inv(g), lower)


def christoffel_from_metric(metric: Callable[[float, float], np.ndarray], u: float, v: float, h: float) -> np.ndarray:
    """Christoffel symbols of a 2x2 metric field, derivatives by central differences."""
    dg = np.stack([
        (metric(u + h, v) - metric(u - h, v)) / (2 * h),
        (metric(u, v + h) - metric(u, v - h)) / (2 * h),
    ])
    return _christoffel(metric(u, v), dg)


def christoffel_from_jet(imm: Immersion, u: float, v: float) -> np.ndarray:
    """Christoffel symbols of the induced metric with d g taken from the second jet of F.

    In frame components the ambient inner product is constant, so
    d_k <F_i, F_j> = <d_k f_i, f_j> + <f_i, d_k f_j>.
    """
    _, fu, fv, dfu, dfv = _frame_partials(imm, u, v)
    f = (fu, fv)
    df = (dfu, dfv)  # df[i][k] = d_k f_i
    g = _gram(fu, fv)
    dg = np.array([[[inner(df[i][k], f[j]) + inner(f[i], df[j][k]) for j in range(2)] for i in range(2)] for k in range(2)])
    return _christoffel(g, dg)


def _curvature_from_christoffel(g: np.ndarray, G0: np.ndarray, dG1: np.ndarray, dG2: np.ndarray) -> float:
    # <R(d1, d2) d2, d1> with R^a_212 = d1 G^a_22 - d2 G^a_12 + G^a_1e G^e_22 - G^a_2e G^e_12
    R = dG1[:, 1, 1] - dG2[:, 0, 1] + G0[:, 0, :] @ G0[:, 1, 1] - G0[:, 1, :] @ G0[:, 0, 1]
    return float(g[0] @ R / np.linalg.det(g))


def gauss_curvature_from_metric(metric: Callable[[float, float], np.ndarray], u: float, v: float, h: float = 1e-4) -> float:
    """K = <R(d1, d2) d2, d1> / det g for a 2x2 metric field of either signature.

    Nested second-order central differences: Christoffel symbols from the
    metric, then their derivatives.
    """
    G0 = christoffel_from_metric(metric, u, v, h)
    dG1 = (christoffel_from_metric(metric, u + h, v, h) - christoffel_from_metric(metric, u - h, v, h)) / (2 * h)
    dG2 = (christoffel_from_metric(metric, u, v + h, h) - christoffel_from_metric(metric, u, v - h, h)) / (2 * h)
    return _curvature_from_christoffel(metric(u, v), G0, dG1, dG2)


def _d5(f: Callable[[float], np.ndarray], x: float, h: float) -> np.ndarray:
    return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h)


def gauss_curvature_intrinsic(imm: Immersion, u: float, v: float, h: float | None = None, method: str = "jet") -> float:
    """Gauss curvature of the induced metric alone; never touches N or A.

    ``method="jet"`` takes metric derivatives from the second jet of F and
    differentiates the Christoffel symbols with a five-point stencil
    (default h = 1e-4).  ``method="fd"`` builds everything from metric
    values by nested central differences (default h = 1e-4); it loses
    accuracy where the chart is close to singular.

    Raises:
        DegenerateMetric: if det g is numerically zero on the stencil.
    """
    if method == "fd":
        return gauss_curvature_from_metric(lambda a, b: induced_metric(imm, a, b), u, v, 1e-4 if h is None else h)
    if method != "jet":
        raise ValueError(f"unknown method {method!r}")
    h = 1e-4 if h is None else h
    G0 = christoffel_from_jet(imm, u, v)
    dG1 = _d5(lambda a: christoffel_from_jet(imm, a, v), u, h)
    dG2 = _d5(lambda b: christoffel_from_jet(imm, u, b), v, h)
    return _curvature_from_christoffel(induced_metric(imm, u, v), G0, dG1, dG2)


def chart_conditioning(imm: Immersion, u: float, v: float) -> float:
    """Sine of the Euclidean angle between the frame components of Fu and Fv.

    Near zero the parameter lines are almost tangent and finite differences
    across the chart lose accuracy, even though the surface is regular.
    """
    _, fu, fv, _, _ = _frame_partials(imm, u, v)
    return float(np.linalg.norm(np.cross(fu, fv)) / (np.linalg.norm(fu) * np.linalg.norm(fv)))


def _with_step(imm: Immersion, h: float | None) -> Immersion:
    if h is None or imm.jets is not None:
        return imm
    return Immersion(imm.F, imm.tau, imm.domain, None, h, max(h, imm.fd_step2))


def structure_residuals(
    imm: Immersion, u: float, v: float, orient: int = 1, h: float | None = None, directions=None
) -> tuple[np.ndarray, float]:
    """Residuals of nabla_X T = nu (A X - tau J X) and X(nu) = -eps <A X - tau J X, T>.

    X ranges over ``directions`` (tangent frame vectors), by default
    {T, JT, Fu, Fv}; the vector residual with the largest norm and the
    largest scalar residual are returned.
    """
    loc = _local(_with_step(imm, h), u, v, orient)
    f = loc.frame
    if directions is None:
        directions = (f.T, f.JT, f.Fu, f.Fv)
    worst_vec, worst_val = np.zeros(3), 0.0
    for x in directions:
        x = np.asarray(x, dtype=float)
        if not np.any(x):
            continue
        ax_jx = loc.shape(x) - loc.tau * f.J(x)
        r1 = loc.tangential(loc.ambient_nabla(x, f.T, loc.dT)) - f.nu * ax_jx
        r2 = float(loc.directional(x, loc.dnu) + f.eps * inner(ax_jx, f.T))
        if np.linalg.norm(r1) > np.linalg.norm(worst_vec):
            worst_vec = r1
        worst_val = max(worst_val, abs(r2))
    return worst_vec, worst_val


def lie_bracket_T_JT(imm: Immersion, u: float, v: float, orient: int = 1) -> tuple[np.ndarray, np.ndarray]:
    """[T, JT] as a vector and in {T, JT} coordinates."""
    loc = _local(imm, u, v, orient)
    return _bracket(loc)


def _bracket(loc: _Local) -> tuple[np.ndarray, np.ndarray]:
    f = loc.frame
    br = loc.ambient_nabla(f.T, f.JT, loc.dJT) - loc.ambient_nabla(f.JT, f.T, loc.dT)
    return br, _basis_coords(f, br)


def induced_connection(imm: Immersion, u: float, v: float, orient: int = 1) -> dict[str, np.ndarray]:
    """nabla_T T, nabla_JT T, nabla_T JT, nabla_JT JT, each in {T, JT} coordinates."""
    loc = _local(imm, u, v, orient)
    f = loc.frame
    out = {}
    for xn, x in (("T", f.T), ("JT", f.JT)):
        for yn, y, dy in (("T", f.T, loc.dT), ("JT", f.JT, loc.dJT)):
            out[f"{xn},{yn}"] = _basis_coords(f, loc.tangential(loc.ambient_nabla(x, y, dy)))
    return out


def codazzi_residual(
    imm: Immersion, u: float, v: float, orient: int = 1, h: float = 1e-4
) -> np.ndarray:
    """nabla_T A(JT) - nabla_JT A(T) - A[T, JT] + 4 eps nu tau^2 (<JT,T> T - <T,T> JT).

    The fields A(T), A(JT) are differentiated along the parameter lines with
    a five-point stencil of step ``h``; the same orientation is used across
    the stencil.
    """
    loc = _local(imm, u, v, orient)
    f = loc.frame
    tau = loc.tau

    def fields(a: float, b: float) -> np.ndarray:
        other = _local(imm, a, b, orient)
        return np.stack([other.shape(other.frame.T), other.shape(other.frame.JT)])

    d_du = _d5(lambda a: fields(a, v), u, h)
    d_dv = _d5(lambda b: fields(u, b), v, h)
    A_T, A_JT = loc.shape(f.T), loc.shape(f.JT)
    nab_T_AJT = loc.tangential(loc.ambient_nabla(f.T, A_JT, (d_du[1], d_dv[1])))
    nab_JT_AT = loc.tangential(loc.ambient_nabla(f.JT, A_T, (d_du[0], d_dv[0])))
    br, _ = _bracket(loc)
    curvature = 4 * f.eps * f.nu * tau**2 * (inner(f.JT, f.T) * f.T - inner(f.T, f.T) * f.JT)
    return nab_T_AJT - nab_JT_AT - loc.shape(br) + curvature
