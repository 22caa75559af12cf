"""Acceptance criteria, one test each, at their stated tolerances.

Each test records a one-line PASS/FAIL verdict; ``conftest.py`` prints them
in the terminal summary, and running this file directly prints them too.
"""

import math
import time

import numpy as np
import pytest

from heisenberg_helix.ambient import E1, E2, E3, killing_residual, riemann_formula, riemann_table
from heisenberg_helix.cli import FIGURE_PRESETS, main
from heisenberg_helix.helix import example_profile, example_spec, profile_from_eta
from heisenberg_helix.surface import Causal
from heisenberg_helix.verify import verify_spec

VERDICTS: dict[int, str] = {}
THETAS = (0.5, 1.0, math.pi / 3, math.pi / 4, math.pi / 6, math.pi / 8)
TAUS = (1.0, 0.5)
_REPORTS: dict = {}


def record(n: int, ok: bool, text: str) -> None:
    VERDICTS[n] = f"criterion {n}: {'PASS' if ok else 'FAIL'}  {text}"
    print(VERDICTS[n])


def report_for(causal, theta, tau):
    key = (causal, theta, tau)
    if key not in _REPORTS:
        _REPORTS[key] = verify_spec(example_spec(causal, theta, tau), (50, 50), samples=100, seed=0)
    return _REPORTS[key]


def family(causal):
    return [(th, t, report_for(causal, th, t)) for th in THETAS for t in TAUS]


def test_criterion_1_killing_identity():
    rng = np.random.default_rng(11)
    t0 = time.perf_counter()
    worst = 0.0
    for tau in rng.choice([1.0, -1.0, 0.5, -0.5, 2.0], 1000):
        x, p = rng.uniform(-5, 5, 3), rng.uniform(-5, 5, 3)
        worst = max(worst, float(np.abs(killing_residual(x, p, tau)).max()))
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-12 and elapsed < 1.0
    record(1, ok, f"Killing identity max residual {worst:.2e} (tol 1e-12), {elapsed:.3f} s (limit 1 s)")
    assert ok


def test_criterion_2_curvature_cross_check():
    rng = np.random.default_rng(12)
    worst = 0.0
    for _ in range(1000):
        tau = rng.choice([1.0, -1.0, 0.5, -0.5, 2.0])
        x, y, z = rng.uniform(-1, 1, (3, 3))
        worst = max(worst, float(np.abs(riemann_table(x, y, z, tau) - riemann_formula(x, y, z, tau)).max()))
    t = 1.7
    listed = [
        ((E1, E2, E1), -3 * E2), ((E1, E3, E1), E3), ((E1, E2, E2), 3 * E1),
        ((E2, E3, E2), E3), ((E2, E3, E3), E2), ((E1, E3, E3), E1),
    ]
    exact = all(np.array_equal(riemann_table(*a, t), t * t * val) for a, val in listed)
    ok = worst <= 1e-12 and exact
    record(2, ok, f"table vs closed formula max diff {worst:.2e} (tol 1e-12); component table exact: {exact}")
    assert ok


def _angle_and_curvature(causal, n):
    rows, ok = [], True
    slowest = 0.0
    for th, t, r in family(causal):
        checks = [r["angle_stdev"], r["angle_mean"], r["gauss_intrinsic"]]
        ok &= all(c.passed for c in checks) and r.elapsed < 10.0
        slowest = max(slowest, r.elapsed)
        rows.append(tuple(c.residual for c in checks))
    worst = np.max(rows, axis=0)
    text = (
        f"{len(rows)} {causal.value} surfaces on 50x50: max stdev(nu) {worst[0]:.1e}, max |mean(nu)-expected| "
        f"{worst[1]:.1e} (tol 1e-9); max |K-expected| {worst[2]:.1e} (tol 1e-4); slowest {slowest:.1f} s (limit 10 s)"
    )
    record(n, ok, text)
    return ok


def test_criterion_3_spacelike_helix():
    assert _angle_and_curvature(Causal.SPACELIKE, 3)


def test_criterion_4_timelike_helix():
    assert _angle_and_curvature(Causal.TIMELIKE, 4)


def test_criterion_5_shape_operator_form():
    names = ("shape_A11", "shape_A12", "shape_A21", "shape_detA", "lambda_closed_form")
    worst = dict.fromkeys(names, 0.0)
    ok = True
    for causal in Causal:
        for _, _, r in family(causal):
            for name in names:
                ok &= r[name].passed
                worst[name] = max(worst[name], r[name].residual)
    text = ", ".join(f"{k.replace('shape_', '')} {v:.1e}" for k, v in worst.items())
    record(5, ok, f"max deviations: {text} (tol 1e-4; lambda 1e-3)")
    assert ok


def test_criterion_6_structure_codazzi_lambda_ode():
    names = ("structure_tangent", "structure_normal", "codazzi", "lambda_ode_closed_form")
    worst = dict.fromkeys(names, 0.0)
    ok = True
    for causal in Causal:
        for _, _, r in family(causal):
            for name in names:
                ok &= r[name].passed
                worst[name] = max(worst[name], r[name].residual)
    text = ", ".join(f"{k} {v:.1e}" for k, v in worst.items())
    record(6, ok, f"100 random points per surface: {text} (tol 1e-4; lambda ODE 1e-6)")
    assert ok


def test_criterion_7_profile_quadrature():
    worst, ratios = 0.0, []
    for causal in Causal:
        for th in (0.5, 1.0, math.pi / 3):
            for c in (0.0, 0.4):
                shift = c if causal is Causal.SPACELIKE else -c
                eta = lambda v, s=shift: v + s  # noqa: E731
                exact = example_profile(causal, th, 1.0, c)
                prof = profile_from_eta(causal, th, 1.0, eta, c, (0.0, 2 * math.pi), initial=exact.f(0.0), deta=lambda v: 1.0)
                worst = max(worst, max(np.abs(prof.f(v) - exact.f(v)).max() for v in prof.nodes))

                def err(n):
                    p = profile_from_eta(causal, th, 1.0, eta, c, (0.0, 2 * math.pi), n, exact.f(0.0), lambda v: 1.0)
                    return max(np.abs(p.f(v) - exact.f(v)).max() for v in p.nodes)

                ratios.append(err(64) / err(128))
    ok = worst <= 1e-8 and all(13 < q < 19 for q in ratios)
    record(7, ok, f"max |f - closed form| {worst:.1e} (tol 1e-8); step-halving error ratios {min(ratios):.1f}..{max(ratios):.1f} (expect ~16)")
    assert ok


def test_criterion_8_cli_end_to_end(tmp_path):
    t0 = time.perf_counter()
    out = tmp_path / "figures"
    code_f = main(["figures", "--out", str(out)])
    args = ["verify", "-q", "--json", str(tmp_path / "report.json")]
    for name in FIGURE_PRESETS:
        args += ["--config", str(out / f"{name}.json")]
    code_v = main(args)
    elapsed = time.perf_counter() - t0
    present = all((out / f"{n}.obj").exists() for n in FIGURE_PRESETS)
    ok = code_f == 0 and code_v == 0 and present and elapsed < 60.0
    record(8, ok, f"figures exit {code_f}, verify exit {code_v} on {len(FIGURE_PRESETS)} presets, {elapsed:.1f} s (limit 60 s)")
    assert ok


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
