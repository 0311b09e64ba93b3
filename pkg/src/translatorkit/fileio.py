"""Plot-ready file formats: CSV profiles, OBJ-subset meshes, JSON reports.

Profiles are CSV with header ``r,u,branch`` and one sample per line.  Meshes
are an OBJ subset whose mandatory first line is ``# grid nu nv``, followed by
``v x y z`` lines in grid row-major order and ``f`` quad lines (1-indexed);
wrapped meshes are recognized on read by their seam quads.  Numbers are
written with 17 significant digits so doubles round-trip exactly, and key
order is fixed, so identical inputs produce byte-identical files.
"""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np

from .errors import FileFormatError
from .families import ProfileCurve, SurfaceMesh

__all__ = [
    "format_float",
    "dumps_json",
    "write_json",
    "write_profiles",
    "read_profiles",
    "write_mesh",
    "read_mesh",
]


def format_float(x: float) -> str:
    """Decimal form with 17 significant digits (exact double round-trip)."""
    x = float(x)
    if not math.isfinite(x):
        raise FileFormatError(f"cannot serialize non-finite value {x!r}")
    return format(x, ".17g")


def _json_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format_float(float(v))
    if isinstance(v, str):
        out = v.replace("\\", "\\\\").replace('"', '\\"')
        return f'"{out}"'
    if isinstance(v, dict):
        items = ", ".join(f'{_json_value(str(k))}: {_json_value(val)}' for k, val in v.items())
        return "{" + items + "}"
    if isinstance(v, (list, tuple, np.ndarray)):
        return "[" + ", ".join(_json_value(x) for x in v) + "]"
    raise FileFormatError(f"cannot serialize value of type {type(v).__name__}")


def dumps_json(obj: dict) -> str:
    """Serialize a report dict deterministically (insertion key order)."""
    return _json_value(obj) + "\n"


def write_json(path, obj: dict) -> None:
    Path(path).write_text(dumps_json(obj), encoding="ascii")


# ---------------------------------------------------------------------------
# profiles
# ---------------------------------------------------------------------------

def write_profiles(path, profiles) -> None:
    """Write one or more profile branches as CSV lines ``r,u,branch``."""
    if isinstance(profiles, ProfileCurve):
        profiles = [profiles]
    lines = ["r,u,branch"]
    for prof in profiles:
        for r, u in zip(prof.r, prof.u):
            lines.append(f"{format_float(r)},{format_float(u)},{prof.branch}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="ascii")


def read_profiles(path) -> list[ProfileCurve]:
    """Read profile branches back from CSV, preserving branch grouping."""
    text = Path(path).read_text(encoding="ascii")
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0].strip() != "r,u,branch":
        raise FileFormatError("profile file must start with header 'r,u,branch'")
    groups: dict[str, list[tuple[float, float]]] = {}
    order: list[str] = []
    for ln in lines[1:]:
        parts = ln.split(",")
        if len(parts) != 3:
            raise FileFormatError(f"malformed profile line: {ln!r}")
        try:
            r, u = float(parts[0]), float(parts[1])
        except ValueError as exc:
            raise FileFormatError(f"malformed profile numbers: {ln!r}") from exc
        tag = parts[2].strip()
        if tag not in groups:
            groups[tag] = []
            order.append(tag)
        groups[tag].append((r, u))
    out = []
    for tag in order:
        rows = np.array(groups[tag])
        out.append(ProfileCurve(rows[:, 0], rows[:, 1], tag))
    return out


# ---------------------------------------------------------------------------
# meshes
# ---------------------------------------------------------------------------

def write_mesh(path, mesh: SurfaceMesh) -> None:
    """Write a structured mesh as the OBJ subset with the grid header comment."""
    lines = [f"# grid {mesh.nu} {mesh.nv}"]
    for v in mesh.vertices:
        lines.append(f"v {format_float(v[0])} {format_float(v[1])} {format_float(v[2])}")
    for quad in mesh.quad_indices():
        a, b, c, d = (int(k) + 1 for k in quad)
        lines.append(f"f {a} {b} {c} {d}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="ascii")


def read_mesh(path) -> SurfaceMesh:
    """Read a structured mesh, inferring wrap-around from seam quads."""
    text = Path(path).read_text(encoding="ascii")
    lines = text.splitlines()
    if not lines:
        raise FileFormatError("empty mesh file")
    head = lines[0].split()
    if len(head) != 4 or head[0] != "#" or head[1] != "grid":
        raise FileFormatError("mesh file must start with '# grid nu nv'")
    try:
        nu, nv = int(head[2]), int(head[3])
    except ValueError as exc:
        raise FileFormatError("malformed grid dimensions in mesh header") from exc
    verts = []
    n_faces = 0
    wrap = False
    for ln in lines[1:]:
        parts = ln.split()
        if not parts or parts[0].startswith("#"):
            continue
        if parts[0] == "v":
            if len(parts) != 4:
                raise FileFormatError(f"malformed vertex line: {ln!r}")
            try:
                verts.append([float(parts[1]), float(parts[2]), float(parts[3])])
            except ValueError as exc:
                raise FileFormatError(f"malformed vertex numbers: {ln!r}") from exc
        elif parts[0] == "f":
            if len(parts) != 5:
                raise FileFormatError(f"malformed face line: {ln!r}")
            try:
                idx = [int(p) - 1 for p in parts[1:]]
            except ValueError as exc:
                raise FileFormatError(f"malformed face indices: {ln!r}") from exc
            n_faces += 1
            cols = [k % nv for k in idx]
            if nv > 2 and {cols[0], cols[3]} == {nv - 1, 0}:
                wrap = True
        else:
            raise FileFormatError(f"unsupported mesh line: {ln!r}")
    verts = np.asarray(verts, dtype=float)
    if verts.shape[0] != nu * nv:
        raise FileFormatError(f"vertex count {verts.shape[0]} does not match grid {nu}x{nv}")
    mesh = SurfaceMesh(verts, nu=nu, nv=nv, wrap=wrap)
    expected = mesh.quad_indices().shape[0]
    if n_faces != expected:
        raise FileFormatError(f"face count {n_faces} does not match structured grid ({expected} expected)")
    return mesh
