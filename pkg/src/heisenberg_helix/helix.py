"""Constant-angle (helix) surfaces in H3(tau).

A helix surface is fixed by its causal type, hyperbolic angle theta, tau and
a profile curve v -> (f1, f2, f3) with

    f1'^2 + f2'^2 = sinh^2(theta)   (spacelike)  or  cosh^2(theta)  (timelike),
    f3' = tau (f2 f1' - f1 f2').

The chart coordinate u of :func:`construct` is the rotation angle phi of the
unit normal, not the flow parameter of T; the two are related by
phi = -+ 2 tau (cosh^2 or sinh^2) theta * s + c and ``ClosedForms`` converts.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np
from scipy.interpolate import CubicSpline, CubicHermiteSpline

from . import ambient
from .errors import HopfCylinder, InvalidSpec, NonFiniteEta, SingularLambda
from .numerics import DEFAULT_TOLERANCES, SampledFunction, central_diff, five_point_derivative, rk4_integrate, steps_for
from .surface import Causal, Immersion, Jet

TWO_PI = 2.0 * math.pi
FIGURE_ANGLES = {"pi-3": math.pi / 3, "pi-4": math.pi / 4, "pi-6": math.pi / 6, "pi-8": math.pi / 8}
EXAMPLE_ETA = "example"


def _hyperbolic(causal: Causal, theta: float) -> tuple[float, float]:
    """(speed, angle-function value): (sinh, cosh) spacelike, (cosh, sinh) timelike."""
    if causal is Causal.SPACELIKE:
        return math.sinh(theta), math.cosh(theta)
    return math.cosh(theta), math.sinh(theta)


def check_angle(causal: "Causal | str", theta: float) -> Causal:
    causal = Causal.parse(causal)
    if not math.isfinite(theta):
        raise InvalidSpec(f"theta must be finite, got {theta!r}")
    if causal is Causal.SPACELIKE and not theta > 0:
        raise InvalidSpec(f"spacelike helix surfaces need theta > 0, got {theta}")
    if causal is Causal.TIMELIKE and theta == 0:
        raise HopfCylinder(
            "timelike theta = 0 means E3 is tangent everywhere: the surface is a Hopf cylinder, "
            "which is not a constant angle surface of the kind constructed here"
        )
    return causal


@dataclass(frozen=True, eq=False)
class ProfileCurve:
    """Profile v -> (f1, f2, f3) with first and second derivatives.

    ``eta`` is the phase function the profile was built from, if known.
    """

    f: Callable[[float], np.ndarray]
    df: Callable[[float], np.ndarray]
    ddf: Callable[[float], np.ndarray]
    v_range: tuple[float, float]
    source: str = "explicit"
    eta: Callable[[float], float] | None = None
    eta_shift: float = 0.0
    nodes: np.ndarray | None = None

    def sample_points(self, n: int = 201) -> np.ndarray:
        if self.nodes is not None:
            return self.nodes
        return np.linspace(*self.v_range, n)

    def table(self, v: np.ndarray | None = None) -> np.ndarray:
        """Rows (v, f1, f2, f3, f1', f2', f3')."""
        v = self.sample_points() if v is None else np.asarray(v, dtype=float)
        return np.array([np.concatenate([[x], self.f(x), self.df(x)]) for x in v])


def example_profile(
    causal: "Causal | str",
    theta: float,
    tau: "ambient.Tau | float",
    c: float = 0.0,
    v_range: tuple[float, float] = (0.0, TWO_PI),
) -> ProfileCurve:
    """Closed-form profile for the phase choice eta(v) = v + c (spacelike) or v - c (timelike)."""
    causal = check_angle(causal, theta)
    t = ambient.tau_value(tau)
    sh, ch = math.sinh(theta), math.cosh(theta)
    if causal is Causal.SPACELIKE:
        def f(v):
            return np.array([sh * np.cos(v), -sh * np.sin(v), t * v * sh * sh])

        def df(v):
            return np.array([-sh * np.sin(v), -sh * np.cos(v), t * sh * sh])

        def ddf(v):
            return np.array([-sh * np.cos(v), sh * np.sin(v), 0.0])

        eta = lambda v: v + c  # noqa: E731
    else:
        def f(v):
            return np.array([-ch * np.cos(v), -ch * np.sin(v), -t * v * ch * ch])

        def df(v):
            return np.array([ch * np.sin(v), -ch * np.cos(v), -t * ch * ch])

        def ddf(v):
            return np.array([ch * np.cos(v), ch * np.sin(v), 0.0])

        eta = lambda v: v - c  # noqa: E731
    return ProfileCurve(f, df, ddf, tuple(map(float, v_range)), "example", eta, _phase_shift(causal, c))


def _phase_shift(causal: Causal, c: float) -> float:
    # the profile only sees eta through eta - c (spacelike) or eta + c (timelike)
    return -c if causal is Causal.SPACELIKE else c


def _eta_function(causal: Causal, eta, c: float) -> Callable[[float], float]:
    if isinstance(eta, str):
        if eta != EXAMPLE_ETA:
            raise InvalidSpec(f"unknown eta preset {eta!r}")
        return (lambda v: v + c) if causal is Causal.SPACELIKE else (lambda v: v - c)
    return eta


def profile_from_eta(
    causal: "Causal | str",
    theta: float,
    tau: "ambient.Tau | float",
    eta: "Callable[[float], float] | str",
    c: float = 0.0,
    v_range: tuple[float, float] = (0.0, TWO_PI),
    n: int | None = None,
    initial=None,
    deta: Callable[[float], float] | None = None,
) -> ProfileCurve:
    """Integrate the profile ODE for a phase function ``eta`` with fixed-step RK4.

    Spacelike:  f1' = -sinh(theta) sin(eta - c),  f2' = -sinh(theta) cos(eta - c)
    Timelike:   f1' =  cosh(theta) sin(eta + c),  f2' = -cosh(theta) cos(eta + c)
    and f3' = tau (f2 f1' - f1 f2') in both cases.

    ``eta="example"`` selects the linear phase whose profile has closed form;
    its integration constants then default to that closed form at the start
    of ``v_range``.  Otherwise they default to zero.
    """
    causal = check_angle(causal, theta)
    t = ambient.tau_value(tau)
    v0, v1 = map(float, v_range)
    if n is None:
        n = steps_for((v0, v1), DEFAULT_TOLERANCES.ode_step)
    if n < 2:
        raise ValueError("n must be >= 2")
    eta_fn = _eta_function(causal, eta, c)
    shift = _phase_shift(causal, c)
    speed, _ = _hyperbolic(causal, theta)
    sign = -1.0 if causal is Causal.SPACELIKE else 1.0

    def phase(v):
        value = float(eta_fn(v))
        if not math.isfinite(value):
            raise NonFiniteEta(f"eta({v}) = {value}")
        return value + shift

    def horizontal(v):
        a = phase(v)
        return np.array([sign * speed * math.sin(a), -speed * math.cos(a)])

    def rhs(v, y):
        g1, g2 = horizontal(v)
        return np.array([g1, g2, t * (y[1] * g1 - y[0] * g2)])

    if initial is None:
        if isinstance(eta, str):
            initial = example_profile(causal, theta, t, c).f(v0)
        else:
            initial = np.zeros(3)
    sol = rk4_integrate(rhs, np.asarray(initial, dtype=float), (v0, v1), n)

    if deta is None and isinstance(eta, str):
        deta = lambda v: 1.0  # noqa: E731
    if deta is None:
        deta = lambda v: central_diff(eta_fn, v, 1e-5)  # noqa: E731

    def f(v):
        return np.asarray(sol(v), dtype=float)

    def df(v):
        y = f(v)
        return rhs(v, y)

    def ddf(v):
        y = f(v)
        a, da = phase(v), float(deta(v))
        g1, g2 = horizontal(v)
        h1 = sign * speed * math.cos(a) * da
        h2 = speed * math.sin(a) * da
        # the f1' f2' cross terms cancel in f3''
        return np.array([h1, h2, t * (y[1] * h1 - y[0] * h2)])

    return ProfileCurve(f, df, ddf, (v0, v1), "eta", eta_fn, shift, sol.x)


def profile_from_samples(table: np.ndarray, source: str = "samples") -> ProfileCurve:
    """Profile from rows (v, f1, f2, f3, f1', f2', f3') with increasing v."""
    table = np.asarray(table, dtype=float)
    if table.ndim != 2 or table.shape[1] != 7 or table.shape[0] < 4:
        raise InvalidSpec("profile table needs at least 4 rows of 7 columns")
    if not np.all(np.isfinite(table)):
        raise InvalidSpec("profile table contains non-finite values")
    v, vals, ders = table[:, 0], table[:, 1:4], table[:, 4:7]
    if np.any(np.diff(v) <= 0):
        raise InvalidSpec("profile v column must be strictly increasing")
    spline = CubicHermiteSpline(v, vals, ders, axis=0)
    dspline = CubicSpline(v, ders, axis=0)
    return ProfileCurve(
        lambda x: np.asarray(spline(x), dtype=float),
        lambda x: np.asarray(dspline(x), dtype=float),
        lambda x: np.asarray(dspline(x, 1), dtype=float),
        (float(v[0]), float(v[-1])),
        source,
        nodes=v,
    )


PROFILE_COLUMNS = ("v", "f1", "f2", "f3", "f1'", "f2'", "f3'")
_COLUMN_ALIASES = {"df1": "f1'", "df2": "f2'", "df3": "f3'", "f1′": "f1'", "f2′": "f2'", "f3′": "f3'"}


def load_profile_csv(path: "str | Path") -> ProfileCurve:
    """Read a profile CSV with header v,f1,f2,f3,f1',f2',f3'."""
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise InvalidSpec(f"{path}: empty profile file")
        names = {_COLUMN_ALIASES.get(n.strip(), n.strip()): n for n in reader.fieldnames}
        missing = [c for c in PROFILE_COLUMNS if c not in names]
        if missing:
            raise InvalidSpec(f"{path}: missing profile columns {missing}")
        try:
            rows = [[float(row[names[c]]) for c in PROFILE_COLUMNS] for row in reader]
        except (TypeError, ValueError) as exc:
            raise InvalidSpec(f"{path}: bad profile value ({exc})") from exc
    return profile_from_samples(np.array(rows), source=f"csv:{path}")


def save_profile_csv(profile: ProfileCurve, path: "str | Path", v: np.ndarray | None = None) -> None:
    table = profile.table(v)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(PROFILE_COLUMNS)
        for row in table:
            w.writerow([repr(float(x)) for x in row])


@dataclass(frozen=True)
class ProfileReport:
    speed_violation: float
    vertical_violation: float
    tolerance: float
    samples: int

    @property
    def max_violation(self) -> float:
        return max(self.speed_violation, self.vertical_violation)

    @property
    def passed(self) -> bool:
        return self.max_violation <= self.tolerance


def validate_profile(
    causal: "Causal | str",
    theta: float,
    tau: "ambient.Tau | float",
    profile: ProfileCurve,
    tol: float = 1e-8,
    n: int = 201,
) -> ProfileReport:
    """Worst pointwise violation of the two profile constraints."""
    causal = Causal.parse(causal)
    t = ambient.tau_value(tau)
    speed, _ = _hyperbolic(causal, theta)
    v = profile.sample_points(n)
    speed_err = vert_err = 0.0
    for x in v:
        f, d = profile.f(x), profile.df(x)
        speed_err = max(speed_err, abs(d[0] ** 2 + d[1] ** 2 - speed**2))
        vert_err = max(vert_err, abs(d[2] - t * (f[1] * d[0] - f[0] * d[1])))
    return ProfileReport(float(speed_err), float(vert_err), tol, len(v))


@dataclass(frozen=True, eq=False)
class HelixSpec:
    causal: Causal
    theta: float
    tau: float
    profile: ProfileCurve
    c: float = 0.0
    u_range: tuple[float, float] = (0.0, TWO_PI)
    v_range: tuple[float, float] | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "causal", check_angle(self.causal, float(self.theta)))
        object.__setattr__(self, "theta", float(self.theta))
        object.__setattr__(self, "tau", ambient.tau_value(self.tau))
        if self.v_range is None:
            object.__setattr__(self, "v_range", self.profile.v_range)

    @property
    def eps(self) -> int:
        return self.causal.eps

    @property
    def nu(self) -> float:
        """Expected angle function after choosing the orientation with nu > 0."""
        _, nu = _hyperbolic(self.causal, self.theta)
        return abs(nu)

    @property
    def gauss_curvature(self) -> float:
        if self.causal is Causal.SPACELIKE:
            return 4 * self.tau**2 * math.cosh(self.theta) ** 2
        return -4 * self.tau**2 * math.sinh(self.theta) ** 2

    @property
    def shape_form(self) -> tuple[float, float, float]:
        """Expected (A11, A12, A21) in the basis {T, JT}."""
        if self.causal is Causal.SPACELIKE:
            return 0.0, -self.tau, -self.tau
        return 0.0, self.tau, -self.tau

    @property
    def detA(self) -> float:
        return self.eps * self.tau**2


def _chart_constants(spec: HelixSpec) -> tuple[float, float, float]:
    """(sigma, k, drift): F = (sigma k sin u + f1, -sigma k cos u + f2, drift u + sigma tau k (...) + f3)."""
    th, t = spec.theta, spec.tau
    if spec.causal is Causal.SPACELIKE:
        k = math.tanh(th) / (2 * t)
        sigma = 1.0
    else:
        k = 1.0 / (math.tanh(th) * 2 * t)
        sigma = -1.0
    # the vertical drift is tau k^2 = tanh^2/(4 tau) or coth^2/(4 tau) per unit of normal rotation
    return sigma, k, t * k * k


def construct(spec: HelixSpec, validate: bool = True, tol: float = 1e-8) -> Immersion:
    """Helix immersion with analytic first and second jets.

    ``u`` is the rotation angle of the unit normal, ``v`` the profile parameter.
    """
    if validate:
        report = validate_profile(spec.causal, spec.theta, spec.tau, spec.profile, tol)
        if not report.passed:
            raise InvalidSpec(f"profile violates helix constraints (max violation {report.max_violation:.3g})")
    sigma, k, drift = _chart_constants(spec)
    t = spec.tau
    a = sigma * t * k
    prof = spec.profile

    def F(u, v):
        f = prof.f(v)
        cu, su = math.cos(u), math.sin(u)
        return np.array([
            sigma * k * su + f[0],
            -sigma * k * cu + f[1],
            drift * u + a * (f[0] * cu + f[1] * su) + f[2],
        ])

    def jets(u, v):
        f, d, dd = prof.f(v), prof.df(v), prof.ddf(v)
        cu, su = math.cos(u), math.sin(u)
        p = np.array([sigma * k * su + f[0], -sigma * k * cu + f[1], drift * u + a * (f[0] * cu + f[1] * su) + f[2]])
        Fu = np.array([sigma * k * cu, sigma * k * su, drift + a * (-f[0] * su + f[1] * cu)])
        Fv = np.array([d[0], d[1], a * (d[0] * cu + d[1] * su) + d[2]])
        Fuu = np.array([-sigma * k * su, sigma * k * cu, -a * (f[0] * cu + f[1] * su)])
        Fuv = np.array([0.0, 0.0, a * (-d[0] * su + d[1] * cu)])
        Fvv = np.array([dd[0], dd[1], a * (dd[0] * cu + dd[1] * su) + dd[2]])
        return Jet(p, Fu, Fv, Fuu, Fuv, Fvv)

    return Immersion(F, t, (tuple(spec.u_range), tuple(spec.v_range)), jets)


def example_family(
    causal: "Causal | str",
    theta: float,
    tau: "ambient.Tau | float" = 1.0,
    c: float = 0.0,
    u_range: tuple[float, float] = (0.0, TWO_PI),
    v_range: tuple[float, float] = (0.0, TWO_PI),
) -> Immersion:
    """Helix surface with the closed-form example profile, as used for the example meshes."""
    return construct(example_spec(causal, theta, tau, c, u_range, v_range))


def example_spec(causal, theta, tau=1.0, c=0.0, u_range=(0.0, TWO_PI), v_range=(0.0, TWO_PI)) -> HelixSpec:
    causal = check_angle(causal, theta)
    prof = example_profile(causal, theta, tau, c, v_range)
    return HelixSpec(causal, theta, tau, prof, c, tuple(u_range), tuple(v_range))


@dataclass(frozen=True, eq=False)
class ClosedForms:
    """Closed-form lambda, phi, a, b in the flow coordinates (s, v) with d/ds = T.

    ``chart_u(s) = phi(s)`` maps to the construction's u coordinate and
    ``flow_s`` inverts it.
    """

    causal: Causal
    theta: float
    tau: float
    c: float
    eta: Callable[[float], float]
    window: float = DEFAULT_TOLERANCES.singular_window
    rate: float = field(init=False)
    amplitude: float = field(init=False)

    def __post_init__(self) -> None:
        sh, ch = math.sinh(self.theta), math.cosh(self.theta)
        if self.causal is Causal.SPACELIKE:
            object.__setattr__(self, "rate", 2 * self.tau * ch * ch)
            object.__setattr__(self, "amplitude", ch)
        else:
            object.__setattr__(self, "rate", 2 * self.tau * sh * sh)
            object.__setattr__(self, "amplitude", sh)

    def argument(self, s: float, v: float) -> float:
        return float(self.eta(v)) - self.rate * s

    def phi(self, s: float) -> float:
        sign = -1.0 if self.causal is Causal.SPACELIKE else 1.0
        return sign * self.rate * s + self.c

    chart_u = phi

    def flow_s(self, u: float) -> float:
        sign = -1.0 if self.causal is Causal.SPACELIKE else 1.0
        return sign * (u - self.c) / self.rate

    def distance_to_pole(self, s: float, v: float) -> float:
        x = self.argument(s, v) - math.pi / 2
        return abs(x - math.pi * round(x / math.pi))

    def lam(self, s: float, v: float) -> float:
        if self.distance_to_pole(s, v) < self.window:
            raise SingularLambda(f"lambda has a pole within {self.window} of (s, v) = ({s}, {v})")
        return 2 * self.tau * self.amplitude * math.tan(self.argument(s, v))

    def lam_chart(self, u: float, v: float) -> float:
        return self.lam(self.flow_s(u), v)

    def a(self, s: float, v: float) -> float:
        sign = 1.0 if self.causal is Causal.SPACELIKE else -1.0
        return sign * math.sin(self.argument(s, v)) / self.amplitude

    def b(self, s: float, v: float) -> float:
        return math.cos(self.argument(s, v))


def closed_forms(spec: HelixSpec, eta: Callable[[float], float] | None = None, window: float | None = None) -> ClosedForms:
    """Closed-form lambda, phi, a, b for ``spec``; ``eta`` defaults to the profile's."""
    eta = eta if eta is not None else spec.profile.eta
    if eta is None:
        raise InvalidSpec("closed forms need the phase function eta; the profile does not carry one")
    w = DEFAULT_TOLERANCES.singular_window if window is None else window
    return ClosedForms(spec.causal, spec.theta, spec.tau, spec.c, eta, w)


def lambda_ode_residual(causal: "Causal | str", theta: float, tau: "ambient.Tau | float", s: np.ndarray, lam: np.ndarray) -> float:
    """Max residual of T(lambda) + lambda^2 k + 4 tau^2 k^3 with k = cosh or sinh theta.

    ``lam`` samples lambda at uniformly spaced flow parameters ``s`` along an
    integral curve of T; T(lambda) uses a five-point stencil.
    """
    causal = Causal.parse(causal)
    t = ambient.tau_value(tau)
    _, k = _hyperbolic(causal, theta)
    s, lam = np.asarray(s, dtype=float), np.asarray(lam, dtype=float)
    h = s[1] - s[0]
    if not np.allclose(np.diff(s), h, rtol=1e-9, atol=1e-15):
        raise ValueError("samples must be uniformly spaced")
    d = five_point_derivative(lam, h)
    mid = lam[2:-2]
    return float(np.max(np.abs(d + mid * mid * k + 4 * t * t * k**3)))
