"""Write the eight example meshes, verify each one and print a summary table.

Usage:
    python scripts/reproduce_figures.py --out figures --tau 1
"""

import argparse
import json
from pathlib import Path

from heisenberg_helix.cli import FIGURE_PRESETS, main as cli_main
from heisenberg_helix.config import load_config
from heisenberg_helix.verify import verify_config


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="figures")
    ap.add_argument("--tau", type=float, default=1.0)
    ap.add_argument("--resolution", default="50x50")
    args = ap.parse_args()

    code = cli_main(["figures", "--out", args.out, "--tau", str(args.tau), "--resolution", args.resolution])
    if code:
        return code
    out = Path(args.out)
    print(f"{'preset':<8} {'nu':>10} {'K':>12} {'max|K err|':>11} {'codazzi':>9}  time")
    summary = {}
    for name in FIGURE_PRESETS:
        cfg = load_config(out / f"{name}.json")
        r = verify_config(cfg)
        summary[name] = r.to_dict()
        print(
            f"{name:<8} {cfg.spec.nu:>10.6f} {cfg.spec.gauss_curvature:>12.6f} "
            f"{r['gauss_intrinsic'].residual:>11.2e} {r['codazzi'].residual:>9.2e}  {r.elapsed:.1f} s"
            + ("" if r.passed else "  FAILED")
        )
    (out / "summary.json").write_text(json.dumps(summary, indent=2) + "\n")
    return 0 if all(s["passed"] for s in summary.values()) else 1


if __name__ == "__main__":
    raise SystemExit(main())
