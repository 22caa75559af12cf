"""Grid sampling of immersions and OBJ / CSV mesh export."""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .surface import Immersion


def sample_grid(imm: Immersion, resolution: tuple[int, int]) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Sample F on a closed n x m grid over the immersion's domain.

    Returns ``(u, v, points)`` with ``points[i, j] = F(u[i], v[j])``.
    """
    n, m = resolution
    (u0, u1), (v0, v1) = imm.domain
    u = np.linspace(u0, u1, n)
    v = np.linspace(v0, v1, m)
    points = np.array([[imm(a, b) for b in v] for a in u])
    return u, v, points


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def obj_text(points: np.ndarray) -> str:
    """ASCII OBJ: vertices row-major (u outer, v inner), then quad faces."""
    n, m, _ = points.shape
    lines = [f"v {_fmt(x)} {_fmt(y)} {_fmt(z)}" for x, y, z in points.reshape(-1, 3)]
    for i in range(n - 1):
        for j in range(m - 1):
            a = i * m + j + 1
            lines.append(f"f {a} {a + m} {a + m + 1} {a + 1}")
    return "\n".join(lines) + "\n"


def csv_text(u: np.ndarray, v: np.ndarray, points: np.ndarray) -> str:
    lines = ["u,v,x,y,z"]
    for i, a in enumerate(u):
        for j, b in enumerate(v):
            x, y, z = points[i, j]
            lines.append(",".join(_fmt(t) for t in (a, b, x, y, z)))
    return "\n".join(lines) + "\n"


def write_mesh(imm: Immersion, path: "str | Path", resolution: tuple[int, int], fmt: str = "obj") -> Path:
    u, v, points = sample_grid(imm, resolution)
    if fmt == "obj":
        text = obj_text(points)
    elif fmt == "csv":
        text = csv_text(u, v, points)
    else:
        raise ValueError(f"unknown mesh format {fmt!r}")
    path = Path(path)
    with open(path, "w", newline="\n") as fh:
        fh.write(text)
    return path


def read_obj(path: "str | Path") -> tuple[np.ndarray, np.ndarray]:
    """Vertices and (0-based) faces of an OBJ written by :func:`obj_text`."""
    verts, faces = [], []
    for line in Path(path).read_text().splitlines():
        if line.startswith("v "):
            verts.append([float(t) for t in line.split()[1:4]])
        elif line.startswith("f "):
            faces.append([int(t) - 1 for t in line.split()[1:]])
    return np.array(verts), np.array(faces, dtype=int)
