"""Run configuration: a helix spec plus grid and tolerance settings, from TOML or JSON."""

from __future__ import annotations

import ast
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Mapping

import numpy as np
import tomli

from .errors import InvalidSpec
from .helix import EXAMPLE_ETA, TWO_PI, HelixSpec, example_profile, load_profile_csv, profile_from_eta
from .numerics import ToleranceConfig, steps_for
from .surface import Causal

_FUNCS = {
    name: getattr(np, name)
    for name in ("sin", "cos", "tan", "exp", "log", "sqrt", "sinh", "cosh", "tanh", "arctan", "arcsin", "arccos", "abs")
}
_CONSTS = {"pi": math.pi, "e": math.e}
_ALLOWED = (
    ast.Expression, ast.BinOp, ast.UnaryOp, ast.Call, ast.Name, ast.Load, ast.Constant,
    ast.Add, ast.Sub, ast.Mult, ast.Div, ast.Pow, ast.USub, ast.UAdd, ast.Mod,
)


def compile_expression(text: str, variables: tuple[str, ...] = ()) -> Callable[..., float]:
    """Compile an arithmetic expression over ``variables``, pi, e and numpy functions."""
    try:
        tree = ast.parse(text, mode="eval")
    except SyntaxError as exc:
        raise InvalidSpec(f"cannot parse expression {text!r}") from exc
    for node in ast.walk(tree):
        if not isinstance(node, _ALLOWED):
            raise InvalidSpec(f"disallowed syntax {type(node).__name__} in {text!r}")
        if isinstance(node, ast.Name) and node.id not in _FUNCS and node.id not in _CONSTS and node.id not in variables:
            raise InvalidSpec(f"unknown name {node.id!r} in {text!r}")
        if isinstance(node, ast.Call) and not (isinstance(node.func, ast.Name) and node.func.id in _FUNCS):
            raise InvalidSpec(f"only numpy math functions may be called in {text!r}")
    code = compile(tree, "<expr>", "eval")
    env = {"__builtins__": {}, **_FUNCS, **_CONSTS}

    def fn(*args):
        return float(eval(code, env, dict(zip(variables, args))))

    return fn


def parse_real(value: Any, what: str) -> float:
    if isinstance(value, bool):
        raise InvalidSpec(f"{what} must be a real number")
    if isinstance(value, (int, float)):
        return float(value)
    if isinstance(value, str):
        return compile_expression(value)()
    raise InvalidSpec(f"{what} must be a number or expression, got {value!r}")


def parse_resolution(value: Any) -> tuple[int, int]:
    if isinstance(value, str):
        parts = value.lower().replace(" ", "").split("x")
    elif isinstance(value, (list, tuple)):
        parts = list(value)
    elif isinstance(value, int):
        parts = [value, value]
    else:
        raise InvalidSpec(f"bad resolution {value!r}")
    try:
        n, m = (int(p) for p in parts)
    except (TypeError, ValueError) as exc:
        raise InvalidSpec(f"bad resolution {value!r}; expected <n>x<m>") from exc
    if n < 2 or m < 2:
        raise InvalidSpec("resolution needs at least 2 samples per direction")
    return n, m


def _parse_range(value: Any, what: str) -> tuple[float, float]:
    if not isinstance(value, (list, tuple)) or len(value) != 2:
        raise InvalidSpec(f"{what} must be a pair [start, stop]")
    a, b = (parse_real(x, what) for x in value)
    if not b > a:
        raise InvalidSpec(f"{what} must be increasing")
    return a, b


KNOWN_KEYS = {
    "causal", "theta", "tau", "c", "eta", "profile", "initial", "u_range", "v_range",
    "resolution", "profile_steps", "samples", "seed", "tolerances", "name", "min_conditioning",
}


@dataclass(frozen=True, eq=False)
class RunConfig:
    spec: HelixSpec
    resolution: tuple[int, int] = (50, 50)
    samples: int = 100
    seed: int = 0
    min_conditioning: float = 0.05
    tolerances: ToleranceConfig = field(default_factory=ToleranceConfig)
    name: str = "helix"
    source: dict = field(default_factory=dict)


def config_from_mapping(data: Mapping[str, Any], base_dir: "Path | None" = None) -> RunConfig:
    unknown = set(data) - KNOWN_KEYS
    if unknown:
        raise InvalidSpec(f"unknown config keys: {sorted(unknown)}")
    for key in ("causal", "theta", "tau"):
        if key not in data:
            raise InvalidSpec(f"config is missing {key!r}")
    try:
        causal = Causal.parse(data["causal"])
    except ValueError as exc:
        raise InvalidSpec(f"causal must be spacelike or timelike, got {data['causal']!r}") from exc
    theta = parse_real(data["theta"], "theta")
    tau = parse_real(data["tau"], "tau")
    c = parse_real(data.get("c", 0.0), "c")
    u_range = _parse_range(data.get("u_range", [0.0, TWO_PI]), "u_range")
    v_range = _parse_range(data.get("v_range", [0.0, TWO_PI]), "v_range")
    tolerances = ToleranceConfig.from_mapping(data.get("tolerances"))

    if "profile" in data and "eta" in data:
        raise InvalidSpec("give either eta or profile, not both")
    if "profile" in data:
        path = Path(data["profile"])
        if base_dir is not None and not path.is_absolute():
            path = base_dir / path
        profile = load_profile_csv(path)
        if "v_range" not in data:
            v_range = profile.v_range
    else:
        eta = data.get("eta", EXAMPLE_ETA)
        if eta == EXAMPLE_ETA and "profile_steps" not in data and "initial" not in data:
            profile = example_profile(causal, theta, tau, c, v_range)
        else:
            n = int(data.get("profile_steps", steps_for(v_range, tolerances.ode_step)))
            eta_fn = eta if eta == EXAMPLE_ETA else compile_expression(str(eta), ("v",))
            initial = data.get("initial")
            if initial is not None:
                initial = [parse_real(x, "initial") for x in initial]
            profile = profile_from_eta(causal, theta, tau, eta_fn, c, v_range, n, initial)
    spec = HelixSpec(causal, theta, tau, profile, c, u_range, v_range)
    return RunConfig(
        spec,
        parse_resolution(data.get("resolution", "50x50")),
        int(data.get("samples", 100)),
        int(data.get("seed", 0)),
        float(data.get("min_conditioning", 0.05)),
        tolerances,
        str(data.get("name", "helix")),
        dict(data),
    )


def read_mapping(path: "str | Path") -> dict:
    path = Path(path)
    raw = path.read_bytes()
    if path.suffix.lower() == ".json":
        try:
            return json.loads(raw)
        except json.JSONDecodeError as exc:
            raise InvalidSpec(f"{path}: invalid JSON ({exc})") from exc
    try:
        return tomli.loads(raw.decode())
    except tomli.TOMLDecodeError as exc:
        if path.suffix.lower() == ".toml":
            raise InvalidSpec(f"{path}: invalid TOML ({exc})") from exc
        try:
            return json.loads(raw)
        except json.JSONDecodeError:
            raise InvalidSpec(f"{path}: neither TOML nor JSON") from exc


def load_config(path: "str | Path") -> RunConfig:
    path = Path(path)
    return config_from_mapping(read_mapping(path), path.parent)


def preset_mapping(name: str, tau: float = 1.0, resolution: str = "50x50") -> dict:
    """Config for a figure preset such as ``pi-3-S`` or ``pi-8-T``."""
    try:
        angle, kind = name.rsplit("-", 1)
        denom = int(angle.split("-")[1])
        causal = {"S": "spacelike", "T": "timelike"}[kind]
    except (ValueError, KeyError, IndexError) as exc:
        raise InvalidSpec(f"unknown preset {name!r}; expected pi-<n>-S or pi-<n>-T") from exc
    return {
        "name": name,
        "causal": causal,
        "theta": f"pi/{denom}",
        "tau": tau,
        "c": 0.0,
        "eta": EXAMPLE_ETA,
        "u_range": [0.0, TWO_PI],
        "v_range": [0.0, TWO_PI],
        "resolution": resolution,
    }
