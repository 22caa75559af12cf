"""Step-size study for the finite-difference paths.

Prints, for a spacelike and a timelike surface, the error of the intrinsic
Gauss curvature (both methods), the Codazzi residual and the profile
quadrature as the step shrinks.  The worst-conditioned grid point of a
50x50 grid is included, since chart singularities dominate the error.

Usage:
    python scripts/convergence_study.py
"""

import math

import numpy as np

from heisenberg_helix.helix import example_family, example_profile, example_spec, profile_from_eta
from heisenberg_helix.surface import (
    Causal,
    chart_conditioning,
    codazzi_residual,
    gauss_curvature_intrinsic,
    helix_orientation,
)

STEPS = (1e-2, 3e-3, 1e-3, 3e-4, 1e-4, 3e-5)


def worst_grid_point(imm, n=50):
    g = np.linspace(0, 2 * math.pi, n)
    return min(((u, v) for u in g for v in g), key=lambda p: chart_conditioning(imm, *p))


def surface_study(causal, theta=1.0, tau=1.0):
    spec = example_spec(causal, theta, tau)
    imm = example_family(causal, theta, tau)
    points = {"regular": (0.7, 1.9), "worst": worst_grid_point(imm)}
    print(f"\n{causal.value} theta={theta} tau={tau}  K={spec.gauss_curvature:.6f}")
    for label, (u, v) in points.items():
        cond = chart_conditioning(imm, u, v)
        orient = helix_orientation(imm, u, v)
        print(f"  {label} point (u, v) = ({u:.3f}, {v:.3f}), conditioning {cond:.3f}")
        print(f"  {'h':>8} {'K jet':>10} {'K fd':>10} {'codazzi':>10}")
        for h in STEPS:
            kj = abs(gauss_curvature_intrinsic(imm, u, v, h) - spec.gauss_curvature)
            kf = abs(gauss_curvature_intrinsic(imm, u, v, h, method="fd") - spec.gauss_curvature)
            cz = float(np.abs(codazzi_residual(imm, u, v, orient, h)).max())
            print(f"  {h:>8.0e} {kj:>10.2e} {kf:>10.2e} {cz:>10.2e}")


def quadrature_study(theta=1.0, tau=1.0):
    print("\nprofile quadrature (spacelike example phase)")
    exact = example_profile(Causal.SPACELIKE, theta, tau)
    prev = None
    for n in (32, 64, 128, 256, 512):
        p = profile_from_eta(Causal.SPACELIKE, theta, tau, lambda v: v, 0.0, (0, 2 * math.pi), n, exact.f(0.0), lambda v: 1.0)
        err = max(np.abs(p.f(v) - exact.f(v)).max() for v in p.nodes)
        ratio = "" if prev is None else f"  ratio {prev / err:.2f}"
        print(f"  n={n:>4}  max error {err:.3e}{ratio}")
        prev = err


if __name__ == "__main__":
    for causal in Causal:
        surface_study(causal)
    quadrature_study()
