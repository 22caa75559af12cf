"""Command-line front end: ``construct``, ``verify`` and ``figures``.

Exit codes: 0 success, 1 a verification check failed, 2 invalid spec or
config, 3 file I/O failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import ambient
from .config import RunConfig, config_from_mapping, parse_resolution, preset_mapping, read_mapping
from .errors import GeometryError, InvalidSpec
from .helix import construct
from .mesh import write_mesh
from .verify import SCHEMA_VERSION, verify_config

EXIT_OK, EXIT_FAIL, EXIT_SPEC, EXIT_IO = 0, 1, 2, 3
FIGURE_PRESETS = tuple(f"pi-{n}-{k}" for k in "ST" for n in (3, 4, 6, 8))


class _SpecError(Exception):
    """Wraps a config-time failure so it maps to exit code 2."""


def _load(path: str | None, preset: str | None, tau: float | None, resolution: str | None) -> RunConfig:
    try:
        if preset is not None:
            data = preset_mapping(preset, 1.0 if tau is None else tau)
        else:
            data = read_mapping(path)
            if tau is not None:
                data = {**data, "tau": tau}
        if resolution is not None:
            data = {**data, "resolution": resolution}
        base = Path(path).parent if path is not None else None
        return config_from_mapping(data, base)
    except (InvalidSpec, GeometryError) as exc:
        raise _SpecError(str(exc)) from exc


def _mesh_format(fmt: str | None, out: Path) -> str:
    if fmt is not None:
        return fmt
    return "csv" if out.suffix.lower() == ".csv" else "obj"


def cmd_construct(args: argparse.Namespace) -> int:
    cfg = _load(args.config, args.preset, args.tau, args.resolution)
    out = Path(args.out)
    try:
        imm = construct(cfg.spec)
    except InvalidSpec as exc:
        raise _SpecError(str(exc)) from exc
    write_mesh(imm, out, cfg.resolution, _mesh_format(args.format, out))
    print(f"wrote {out} ({cfg.resolution[0]}x{cfg.resolution[1]} grid)")
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    sources = [(c, None) for c in (args.config or [])] + [(None, p) for p in (args.preset or [])]
    if not sources:
        raise _SpecError("verify needs at least one --config or --preset")
    reports = {}
    for path, preset in sources:
        cfg = _load(path, preset, args.tau, args.resolution)
        label = preset or path
        try:
            report = verify_config(cfg)
        except GeometryError as exc:
            print(f"{label}: verification aborted: {exc}", file=sys.stderr)
            reports[label] = {"schema": SCHEMA_VERSION, "passed": False, "error": str(exc)}
            continue
        if not args.quiet:
            print(f"== {label}")
            print(report.summary())
        else:
            print(f"{'PASS' if report.passed else 'FAIL'}  {label}  ({report.elapsed:.2f} s)")
        reports[label] = report.to_dict()
    passed = all(r["passed"] for r in reports.values())
    if args.json:
        doc = next(iter(reports.values())) if len(reports) == 1 else {
            "schema": SCHEMA_VERSION, "passed": passed, "reports": reports,
        }
        Path(args.json).write_text(json.dumps(doc, indent=2) + "\n")
    return EXIT_OK if passed else EXIT_FAIL


def cmd_figures(args: argparse.Namespace) -> int:
    try:
        tau = ambient.tau_value(args.tau)
        resolution = parse_resolution(args.resolution)
    except InvalidSpec as exc:
        raise _SpecError(str(exc)) from exc
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    res_text = f"{resolution[0]}x{resolution[1]}"
    for name in FIGURE_PRESETS:
        data = preset_mapping(name, tau, res_text)
        cfg = config_from_mapping(data)
        mesh = out / f"{name}.{args.format}"
        write_mesh(construct(cfg.spec), mesh, cfg.resolution, args.format)
        (out / f"{name}.json").write_text(json.dumps(data, indent=2) + "\n")
        print(f"wrote {mesh}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="heisenberg-helix", description="Constant angle surfaces in the Lorentzian Heisenberg group."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--tau", type=float, help="override tau")
        p.add_argument("--resolution", help="grid size <n>x<m>")

    p = sub.add_parser("construct", help="sample a helix surface and write a mesh")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--config", help="TOML or JSON config")
    src.add_argument("--preset", choices=FIGURE_PRESETS)
    p.add_argument("--out", required=True, help="mesh path")
    p.add_argument("--format", choices=("obj", "csv"), help="default: from the --out suffix, else obj")
    common(p)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("verify", help="run the invariant suite on one or more configs")
    p.add_argument("--config", action="append", help="TOML or JSON config (repeatable)")
    p.add_argument("--preset", action="append", choices=FIGURE_PRESETS, help="figure preset (repeatable)")
    p.add_argument("--json", help="write the JSON report here")
    p.add_argument("-q", "--quiet", action="store_true", help="one line per config")
    common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("figures", help="write the eight example meshes and their configs")
    p.add_argument("--out", default="figures", help="output directory")
    p.add_argument("--tau", type=float, default=1.0)
    p.add_argument("--resolution", default="50x50")
    p.add_argument("--format", choices=("obj", "csv"), default="obj")
    p.set_defaults(func=cmd_figures)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _SpecError as exc:
        print(f"invalid spec: {exc}", file=sys.stderr)
        return EXIT_SPEC
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
