"""Run every structural check on a constructed helix surface and collect a report."""

from __future__ import annotations

import math
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from . import ambient
from .config import RunConfig
from .errors import GeometryError, SingularLambda
from .helix import ClosedForms, HelixSpec, closed_forms, construct, lambda_ode_residual, validate_profile
from .surface import (
    Causal,
    Immersion,
    _local,
    _shape_from_local,
    _bracket,
    chart_conditioning,
    codazzi_residual,
    gauss_curvature_extrinsic,
    gauss_curvature_intrinsic,
    helix_orientation,
    structure_residuals,
)

SCHEMA_VERSION = 1


@dataclass
class Check:
    name: str
    residual: float
    tolerance: float
    detail: str = ""

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.residual) and self.residual <= self.tolerance)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["residual"] = float(self.residual) if np.isfinite(self.residual) else str(self.residual)
        d["passed"] = self.passed
        return d


@dataclass
class VerificationReport:
    checks: list[Check] = field(default_factory=list)
    grid: dict = field(default_factory=dict)
    spec: dict = field(default_factory=dict)
    elapsed: float = 0.0

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name: str, residual: float, tolerance: float, detail: str = "") -> Check:
        check = Check(name, float(residual), float(tolerance), detail)
        self.checks.append(check)
        return check

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "passed": self.passed,
            "checks": [c.to_dict() for c in self.checks],
            "grid": self.grid,
            "spec": self.spec,
            "elapsed_seconds": round(self.elapsed, 3),
        }

    def summary(self) -> str:
        lines = []
        for c in self.checks:
            flag = "PASS" if c.passed else "FAIL"
            lines.append(f"{flag}  {c.name:<28} residual={c.residual:.3e}  tol={c.tolerance:.1e}  {c.detail}".rstrip())
        lines.append(f"overall: {'PASS' if self.passed else 'FAIL'}")
        return "\n".join(lines)


def spec_echo(spec: HelixSpec) -> dict:
    return {
        "causal": spec.causal.value,
        "theta": spec.theta,
        "tau": spec.tau,
        "c": spec.c,
        "u_range": list(spec.u_range),
        "v_range": list(spec.v_range),
        "profile_source": spec.profile.source,
    }


def _lambda_sign(spec: HelixSpec) -> float:
    # orienting for nu > 0 reverses the normal when sinh(theta) < 0
    return -1.0 if spec.causal is Causal.TIMELIKE and spec.theta < 0 else 1.0


def _bracket_expected(spec: HelixSpec, lam: float) -> np.ndarray:
    """[T, JT] in {T, JT} coordinates for a helix surface."""
    t, nu = spec.tau, spec.nu
    if spec.causal is Causal.SPACELIKE:
        return nu * np.array([2 * t, -lam])
    return -nu * np.array([2 * t, lam])


def random_samples(imm: Immersion, count: int, seed: int, min_conditioning: float) -> np.ndarray:
    """Uniform points of the domain, skipping near-singular spots of the chart."""
    rng = np.random.default_rng(seed)
    (u0, u1), (v0, v1) = imm.domain
    out = []
    attempts = 0
    while len(out) < count:
        attempts += 1
        if attempts > 100 * count:
            raise GeometryError("could not find well-conditioned sample points")
        u, v = rng.uniform(u0, u1), rng.uniform(v0, v1)
        try:
            if chart_conditioning(imm, u, v) < min_conditioning:
                continue
        except GeometryError:
            continue
        out.append((u, v))
    return np.array(out)


def verify_spec(
    spec: HelixSpec,
    resolution: tuple[int, int] = (50, 50),
    samples: int = 100,
    seed: int = 0,
    min_conditioning: float = 0.05,
    exact_tol: float = 1e-12,
) -> VerificationReport:
    """Check every identity a helix surface must satisfy.

    Grid checks run on a closed ``resolution`` grid over the parameter ranges;
    the derivative-heavy residuals run on ``samples`` random points.
    """
    start = time.perf_counter()
    report = VerificationReport(spec=spec_echo(spec))
    t = spec.tau

    prof = validate_profile(spec.causal, spec.theta, spec.tau, spec.profile)
    report.add("profile_constraints", prof.max_violation, 1e-8, f"{prof.samples} samples")

    imm = construct(spec, validate=False)
    cf: ClosedForms | None = closed_forms(spec) if spec.profile.eta is not None else None
    lam_sign = _lambda_sign(spec)

    n, m = resolution
    us = np.linspace(*spec.u_range, n)
    vs = np.linspace(*spec.v_range, m)
    nus, k_int, k_ext = [], [], []
    worst = dict.fromkeys(
        ["frame", "causal", "A11", "A12", "A21", "detA", "lambda", "self_adjoint", "bracket", "killing"], 0.0
    )
    lam_points = 0
    A11, A12, A21 = spec.shape_form
    failures = 0
    for u in us:
        for v in vs:
            try:
                orient = helix_orientation(imm, u, v)
                loc = _local(imm, u, v, orient)
                sd = _shape_from_local(loc)
            except GeometryError:
                failures += 1
                continue
            f = sd.frame
            nus.append(f.nu)
            worst["causal"] = max(worst["causal"], abs(f.eps - spec.eps))
            tt = ambient.inner(f.T, f.T)
            frame_res = (
                abs(ambient.inner(f.N, f.Fu)) / max(1.0, np.linalg.norm(f.Fu)),
                abs(ambient.inner(f.N, f.Fv)) / max(1.0, np.linalg.norm(f.Fv)),
                abs(ambient.inner(f.N, f.N) - f.eps),
                abs(tt + 1 + f.eps * f.nu**2),
                abs(ambient.inner(f.JT, f.JT) + f.eps * tt),
                float(np.abs(f.J(f.JT) - f.eps * f.T).max()),
            )
            worst["frame"] = max(worst["frame"], *frame_res)
            A = sd.A
            worst["A11"] = max(worst["A11"], abs(A[0, 0] - A11))
            worst["A12"] = max(worst["A12"], abs(A[0, 1] - A12))
            worst["A21"] = max(worst["A21"], abs(A[1, 0] - A21))
            worst["detA"] = max(worst["detA"], abs(sd.detA - spec.detA))
            sa = ambient.inner(sd.A_T, f.JT) - ambient.inner(f.T, sd.A_JT)
            worst["self_adjoint"] = max(worst["self_adjoint"], abs(sa))
            _, br = _bracket(loc)
            worst["bracket"] = max(worst["bracket"], float(np.abs(br - _bracket_expected(spec, sd.lam)).max()))
            for x in (f.T, f.JT, f.N):
                worst["killing"] = max(worst["killing"], float(np.abs(ambient.killing_residual(x, f.p, t)).max()))
            if cf is not None:
                try:
                    expected = lam_sign * cf.lam_chart(u, v)
                except SingularLambda:
                    pass
                else:
                    worst["lambda"] = max(worst["lambda"], abs(sd.lam - expected))
                    lam_points += 1
            k_ext.append(gauss_curvature_extrinsic(sd.detA, f.nu, f.eps, t))
            k_int.append(gauss_curvature_intrinsic(imm, u, v))

    nus = np.array(nus)
    k_int, k_ext = np.array(k_int), np.array(k_ext)
    total = n * m
    report.add("grid_regular_points", failures, 0, f"{total - failures}/{total} points with a unit normal")
    if len(nus) == 0:
        report.elapsed = time.perf_counter() - start
        return report
    report.add("causal_type", worst["causal"], 0, spec.causal.value)
    report.add("frame_identities", worst["frame"], 1e-9)
    report.add("angle_stdev", float(np.std(nus)), 1e-9)
    report.add("angle_mean", abs(float(np.mean(nus)) - spec.nu), 1e-9, f"expected nu = {spec.nu:.12g}")
    report.add("gauss_intrinsic", float(np.abs(k_int - spec.gauss_curvature).max()), 1e-4,
               f"expected K = {spec.gauss_curvature:.12g}")
    report.add("gauss_intrinsic_stdev", float(np.std(k_int)), 1e-4)
    report.add("gauss_extrinsic", float(np.abs(k_ext - spec.gauss_curvature).max()), 1e-4)
    report.add("gauss_oracle_agreement", float(np.abs(k_ext - k_int).max()), 1e-4)
    report.add("shape_A11", worst["A11"], 1e-4)
    report.add("shape_A12", worst["A12"], 1e-4, f"expected {A12:g}")
    report.add("shape_A21", worst["A21"], 1e-4, f"expected {A21:g}")
    report.add("shape_detA", worst["detA"], 1e-4, f"expected {spec.detA:g}")
    report.add("shape_self_adjoint", worst["self_adjoint"], 1e-4)
    report.add("bracket_T_JT", worst["bracket"], 1e-4)
    report.add("killing_identity", worst["killing"], exact_tol)
    if cf is not None:
        report.add("lambda_closed_form", worst["lambda"], 1e-3, f"{lam_points} points outside pole windows")

    pts = random_samples(imm, samples, seed, min_conditioning)
    r1 = r2 = cod = 0.0
    for u, v in pts:
        orient = helix_orientation(imm, u, v)
        a, b = structure_residuals(imm, u, v, orient)
        r1 = max(r1, float(np.abs(a).max()))
        r2 = max(r2, b)
        cod = max(cod, float(np.abs(codazzi_residual(imm, u, v, orient)).max()))
    detail = f"{len(pts)} random points"
    report.add("structure_tangent", r1, 1e-4, detail)
    report.add("structure_normal", r2, 1e-4, detail)
    report.add("codazzi", cod, 1e-4, detail)

    if cf is not None:
        report.add("lambda_ode_closed_form", _lambda_ode_closed(spec, cf), 1e-6)
        report.add("lambda_ode_numeric", _lambda_ode_numeric(spec, imm, cf, pts[:5]), 1e-4)

    report.grid = {
        "resolution": [n, m],
        "u_range": list(spec.u_range),
        "v_range": list(spec.v_range),
        "random_samples": len(pts),
        "seed": seed,
        "min_conditioning": min_conditioning,
    }
    report.elapsed = time.perf_counter() - start
    return report


def _lambda_ode_closed(spec: HelixSpec, cf: ClosedForms, count: int = 2001) -> float:
    """Closed-form lambda along T-flow lines, kept away from the tan poles."""
    worst = 0.0
    for v in np.linspace(*spec.v_range, 7):
        eta = float(cf.eta(v))
        # argument = eta - rate * s runs over [-1.2, 1.2]
        s = (eta - np.linspace(-1.2, 1.2, count)) / cf.rate
        s = s[::-1] if s[0] > s[-1] else s
        lam = np.array([cf.lam(x, v) for x in s])
        worst = max(worst, lambda_ode_residual(spec.causal, spec.theta, spec.tau, s, lam))
    return worst


def _lambda_ode_numeric(spec: HelixSpec, imm: Immersion, cf: ClosedForms, starts: np.ndarray) -> float:
    """The same ODE with lambda read off the shape operator along a u-line (T is parallel to d/du)."""
    worst = 0.0
    k = 1e-3
    for u0, v in starts:
        us = u0 + k * np.arange(-20, 21)
        lam = []
        try:
            for u in us:
                if chart_conditioning(imm, u, v) < 0.05:
                    raise GeometryError("ill-conditioned")
                lam.append(_shape_from_local(_local(imm, u, v, helix_orientation(imm, u, v))).lam)
        except GeometryError:
            continue
        s = np.array([cf.flow_s(u) for u in us])
        lam = np.array(lam) * _lambda_sign(spec)
        if s[0] > s[-1]:
            s, lam = s[::-1], lam[::-1]
        worst = max(worst, lambda_ode_residual(spec.causal, spec.theta, spec.tau, s, lam))
    return worst


def verify_config(cfg: RunConfig) -> VerificationReport:
    return verify_spec(cfg.spec, cfg.resolution, cfg.samples, cfg.seed, cfg.min_conditioning, cfg.tolerances.exact_tol)
