"""Comparison experiments: first-contact sweeps and moving-plane reflections.

First-contact detection is the numerical surrogate for tangency arguments: a
one-parameter family of surfaces (or a sliding copy of one surface) moves
toward a target, the clearance min_gap is tracked, and bisection pins down
the first parameter at which the gap drops below tolerance.

The moving-plane machinery sweeps vertical planes <x, n> = t from the far
side of a mesh down to t = 0, reflects the far half across each plane, and
measures how far the reflection penetrates the near half.  Zero defect down
to t = 0 is the discrete shadow of reflection symmetry across the t = 0
plane.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import LinearNDInterpolator
from scipy.spatial import QhullError, cKDTree

from .errors import DomainError, NoContactError, NotAGraphError
from .families import SurfaceMesh

__all__ = [
    "min_gap",
    "ContactResult",
    "first_touch_family",
    "first_touch_slide",
    "GraphHalf",
    "reflect_half",
    "reflection_defect",
    "SweepReport",
    "alexandrov_sweep",
]

_VERTICAL = np.array([0.0, 0.0, 1.0])


# ---------------------------------------------------------------------------
# minimum gap between meshes
# ---------------------------------------------------------------------------

def _point_triangle_distance(p, a, b, c):
    """Euclidean distance from point p to triangle (a, b, c)."""
    ab = b - a
    ac = c - a
    ap = p - a
    d1 = ab @ ap
    d2 = ac @ ap
    if d1 <= 0.0 and d2 <= 0.0:
        return float(np.linalg.norm(ap))
    bp = p - b
    d3 = ab @ bp
    d4 = ac @ bp
    if d3 >= 0.0 and d4 <= d3:
        return float(np.linalg.norm(bp))
    vc = d1 * d4 - d3 * d2
    if vc <= 0.0 and d1 >= 0.0 and d3 <= 0.0:
        v = d1 / (d1 - d3)
        return float(np.linalg.norm(ap - v * ab))
    cp = p - c
    d5 = ab @ cp
    d6 = ac @ cp
    if d6 >= 0.0 and d5 <= d6:
        return float(np.linalg.norm(cp))
    vb = d5 * d2 - d1 * d6
    if vb <= 0.0 and d2 >= 0.0 and d6 <= 0.0:
        w = d2 / (d2 - d6)
        return float(np.linalg.norm(ap - w * ac))
    va = d3 * d6 - d5 * d4
    if va <= 0.0 and (d4 - d3) >= 0.0 and (d5 - d6) >= 0.0:
        w = (d4 - d3) / ((d4 - d3) + (d5 - d6))
        return float(np.linalg.norm(p - (b + w * (c - b))))
    denom = 1.0 / (va + vb + vc)
    v = vb * denom
    w = vc * denom
    return float(np.linalg.norm(p - (a + ab * v + ac * w)))


def _vertex_quads(mesh: SurfaceMesh, flat_index: int) -> np.ndarray:
    """Quads of the structured grid incident to a vertex, as (m, 4) indices."""
    nu, nv = mesh.nu, mesh.nv
    i, j = divmod(int(flat_index), nv)
    quads = []
    j_range = range(j - 1, j + 1)
    for ii in (i - 1, i):
        if ii < 0 or ii + 1 >= nu:
            continue
        for jj in j_range:
            if mesh.wrap and nv > 2:
                j0 = jj % nv
                j1 = (jj + 1) % nv
            else:
                if jj < 0 or jj + 1 >= nv:
                    continue
                j0, j1 = jj, jj + 1
            quads.append((ii * nv + j0, (ii + 1) * nv + j0, (ii + 1) * nv + j1, ii * nv + j1))
    return np.array(quads, dtype=int).reshape(-1, 4)


def _refine_one_direction(points_a, mesh_b, tree_b, candidates):
    best = math.inf
    best_pair = None
    dists, idx = tree_b.query(points_a[candidates])
    for k, ai in enumerate(candidates):
        p = points_a[ai]
        d_here = dists[k]
        quads = _vertex_quads(mesh_b, idx[k])
        for quad in quads:
            va, vb, vc, vd = mesh_b.vertices[quad]
            d_here = min(
                d_here,
                _point_triangle_distance(p, va, vb, vc),
                _point_triangle_distance(p, va, vc, vd),
            )
        if d_here < best:
            best = d_here
            best_pair = (p, mesh_b.vertices[idx[k]])
    return best, best_pair


def _closest_approach(a: SurfaceMesh, b: SurfaceMesh):
    """(gap, witness): minimum distance and the witness midpoint.

    Vertex-to-vertex distances from a KD-tree are refined by projecting the
    closest vertices onto the incident quads of the other mesh.
    """
    if a.vertices.size == 0 or b.vertices.size == 0:
        raise DomainError("mesh", "meshes must be non-empty")
    tree_a = cKDTree(a.vertices)
    tree_b = cKDTree(b.vertices)
    d_ab, idx_ab = tree_b.query(a.vertices)
    margin = max(a.resolution, b.resolution)
    d_best = float(d_ab.min())
    cand_a = np.flatnonzero(d_ab <= d_best + margin)
    gap1, pair1 = _refine_one_direction(a.vertices, b, tree_b, cand_a)
    d_ba, _ = tree_a.query(b.vertices)
    cand_b = np.flatnonzero(d_ba <= float(d_ba.min()) + margin)
    gap2, pair2 = _refine_one_direction(b.vertices, a, tree_a, cand_b)
    if gap1 <= gap2:
        gap, pair = gap1, pair1
    else:
        gap, pair = gap2, pair2
    witness = 0.5 * (pair[0] + pair[1])
    return float(gap), witness


def min_gap(a: SurfaceMesh, b: SurfaceMesh) -> float:
    """Minimum Euclidean distance between two meshes."""
    gap, _ = _closest_approach(a, b)
    return gap


# ---------------------------------------------------------------------------
# first contact
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ContactResult:
    """First-contact parameter, witness point, and the clearance samples."""

    parameter: float
    witness: np.ndarray
    clearance_curve: list
    tolerance: float

    def to_dict(self) -> dict:
        return {
            "parameter": self.parameter,
            "witness": [float(c) for c in self.witness],
            "clearance_curve": [[float(p), float(g)] for p, g in self.clearance_curve],
            "tolerance": self.tolerance,
        }


def _refine_minimum(gap_of, a: float, b: float, tol: float) -> tuple[float, float]:
    """Golden-section refinement of a bracketed clearance minimum."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    x1 = b - invphi * (b - a)
    x2 = a + invphi * (b - a)
    f1, _ = gap_of(x1)
    f2, _ = gap_of(x2)
    while abs(b - a) > tol:
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - invphi * (b - a)
            f1, _ = gap_of(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + invphi * (b - a)
            f2, _ = gap_of(x2)
    mid = 0.5 * (a + b)
    g, _ = gap_of(mid)
    return mid, g


def _first_touch(gap_of, params: np.ndarray, tol: float) -> ContactResult:
    """Scan-then-bisect driver shared by the family and slide sweeps.

    The scan brackets the first parameter with clearance below tolerance; if
    the sweep steps over the contact (the clearance dips between samples and
    rises again), the first local clearance minimum is refined by
    golden-section before bisecting for the crossing.
    """
    gaps = []
    hit = None
    for k, p in enumerate(params):
        g, _ = gap_of(p)
        gaps.append((float(p), g))
        if k == 0 and g <= tol:
            raise DomainError("range", "surfaces are already within tolerance at the sweep start")
        if g <= tol:
            hit = k
            break
    touch = None
    if hit is not None:
        lo, hi = params[hit - 1], params[hit]
        touch = float(hi)
    else:
        values = [g for _, g in gaps]
        for k in range(1, len(values) - 1):
            if values[k] <= values[k - 1] and values[k] <= values[k + 1]:
                p_min, g_min = _refine_minimum(gap_of, float(params[k - 1]), float(params[k + 1]), tol)
                if g_min <= tol:
                    lo, touch = float(params[k - 1]), p_min
                break
    if touch is None:
        raise NoContactError(f"no contact: clearance stayed above tol={tol!r} over the sweep range")
    lo, hi = float(lo), float(touch)
    while abs(hi - lo) > tol:
        mid = 0.5 * (lo + hi)
        g, _ = gap_of(mid)
        if g <= tol:
            hi = mid
        else:
            lo = mid
    g, witness = gap_of(hi)
    return ContactResult(parameter=float(hi), witness=witness, clearance_curve=gaps, tolerance=float(tol))


def first_touch_family(
    target: SurfaceMesh,
    family,
    param_range: tuple[float, float],
    direction: str = "increasing",
    tol: float | None = None,
    n_scan: int = 33,
) -> ContactResult:
    """First member of a mesh family to touch a target, located by bisection.

    ``family`` maps a parameter to a SurfaceMesh.  The parameter runs over
    param_range in the given direction; the clearance must be positive at the
    start.  Default tolerance is twice the coarser sampling resolution.
    """
    lo, hi = float(param_range[0]), float(param_range[1])
    if direction == "increasing":
        params = np.linspace(lo, hi, n_scan)
    elif direction == "decreasing":
        params = np.linspace(hi, lo, n_scan)
    else:
        raise DomainError("direction", f"direction must be increasing or decreasing, got {direction!r}")
    if tol is None:
        tol = 2.0 * max(target.resolution, family(params[0]).resolution)

    def gap_of(p):
        return _closest_approach(target, family(p))

    return _first_touch(gap_of, params, float(tol))


def first_touch_slide(
    obstacle: SurfaceMesh,
    slider: SurfaceMesh,
    direction,
    offset_range: tuple[float, float],
    tol: float | None = None,
    n_scan: int = 33,
) -> ContactResult:
    """Slide a mesh along a direction until it first touches an obstacle.

    The sweep parameter is the multiplier of ``direction``; offsets run from
    offset_range[0] (clearance must be positive there) to offset_range[1].
    """
    vec = np.asarray(direction, dtype=float).reshape(3)
    if not np.all(np.isfinite(vec)) or np.linalg.norm(vec) == 0.0:
        raise DomainError("direction", "slide direction must be a non-zero vector")
    params = np.linspace(float(offset_range[0]), float(offset_range[1]), n_scan)
    if tol is None:
        tol = 2.0 * max(obstacle.resolution, slider.resolution)

    def gap_of(t):
        return _closest_approach(obstacle, slider.translated(t * vec))

    return _first_touch(gap_of, params, float(tol))


# ---------------------------------------------------------------------------
# moving planes
# ---------------------------------------------------------------------------

def _plane_frame(normal) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Orthonormal frame (n, b, w) with n the plane normal and (b, w) spanning it."""
    n = np.asarray(normal, dtype=float).reshape(3)
    nn = np.linalg.norm(n)
    if not np.all(np.isfinite(n)) or nn == 0.0:
        raise DomainError("plane_normal", "plane normal must be a non-zero vector")
    n = n / nn
    b = np.cross(_VERTICAL, n)
    bn = np.linalg.norm(b)
    if bn < 1e-12:
        raise DomainError("plane_normal", "plane normal must not be parallel to the translation direction")
    b = b / bn
    w = np.cross(n, b)
    return n, b, w


def _plane_coords(mesh: SurfaceMesh, normal):
    n, b, w = _plane_frame(normal)
    v = mesh.vertices
    return v @ n, v @ b, v @ w


def _graph_check(mesh: SurfaceMesh, alpha, beta, zeta, t: float) -> None:
    """Raise NotAGraphError if the half alpha >= t is multivalued over the plane.

    Quads fully inside the half are projected onto the plane; two quads whose
    projected bounding boxes overlap but whose alpha intervals are separated
    by more than their combined alpha extents plus twice the mesh resolution
    witness two sheets.  The per-quad alpha extent grows with the local slope,
    so steep single-sheet regions (silhouettes of revolved caps, the walls of
    a grim reaper graph) are tolerated; sheets closer together than roughly
    two resolutions go undetected.  Conservative and resolution-dependent.
    """
    quads = mesh.quad_indices()
    if quads.size == 0:
        return
    inside = np.all(alpha[quads] >= t, axis=1)
    quads = quads[inside]
    n = quads.shape[0]
    if n < 2:
        return
    res = mesh.resolution
    if res <= 0.0:
        return
    qb = beta[quads]
    qz = zeta[quads]
    qa = alpha[quads]
    bmin, bmax = qb.min(axis=1), qb.max(axis=1)
    zmin, zmax = qz.min(axis=1), qz.max(axis=1)
    amin, amax = qa.min(axis=1), qa.max(axis=1)
    extent = amax - amin
    # bucket quads into cells of roughly one quad diameter for pair pruning
    cell = max(float((bmax - bmin).max()), float((zmax - zmin).max()), res)
    b0, z0 = bmin.min(), zmin.min()
    cb0 = np.floor((bmin - b0) / cell).astype(np.int64)
    cb1 = np.floor((bmax - b0) / cell).astype(np.int64)
    cz0 = np.floor((zmin - z0) / cell).astype(np.int64)
    cz1 = np.floor((zmax - z0) / cell).astype(np.int64)
    ncols = int(cb1.max()) + 1
    cell_chunks = []
    quad_chunks = []
    all_q = np.arange(n)
    for db in range(int((cb1 - cb0).max()) + 1):
        sel_b = (cb1 - cb0) >= db
        for dz in range(int((cz1 - cz0).max()) + 1):
            sel = sel_b & ((cz1 - cz0) >= dz)
            if not np.any(sel):
                continue
            cell_chunks.append((cz0[sel] + dz) * ncols + (cb0[sel] + db))
            quad_chunks.append(all_q[sel])
    cell_ids = np.concatenate(cell_chunks)
    q_ids = np.concatenate(quad_chunks)
    order = np.argsort(cell_ids, kind="stable")
    cell_sorted = cell_ids[order]
    q_sorted = q_ids[order]
    starts = np.flatnonzero(np.r_[True, cell_sorted[1:] != cell_sorted[:-1]])
    ends = np.r_[starts[1:], cell_sorted.size]
    for s, e in zip(starts, ends):
        members = q_sorted[s:e]
        k = members.size
        if k < 2:
            continue
        ii, jj = np.triu_indices(k, 1)
        a, b = members[ii], members[jj]
        overlap = (
            (bmin[a] <= bmax[b]) & (bmin[b] <= bmax[a]) & (zmin[a] <= zmax[b]) & (zmin[b] <= zmax[a])
        )
        if not np.any(overlap):
            continue
        a, b = a[overlap], b[overlap]
        gap = np.maximum(amin[a] - amax[b], amin[b] - amax[a])
        allow = extent[a] + extent[b] + 2.0 * res
        bad = gap > allow
        if np.any(bad):
            kbad = int(np.flatnonzero(bad)[0])
            qa_bad = a[kbad]
            center = (
                0.5 * float(bmin[qa_bad] + bmax[qa_bad]),
                0.5 * float(zmin[qa_bad] + zmax[qa_bad]),
            )
            raise NotAGraphError(
                f"mesh half is not a graph over the sweep plane near projection cell {center}",
                cell=center,
            )


@dataclass(frozen=True)
class GraphHalf:
    """One half of a mesh, reflected across the plane <x, n> = t.

    ``nodes`` are in-plane coordinates (beta, zeta) of the half's vertices and
    ``values`` the reflected normal coordinate 2t - alpha.
    """

    normal: np.ndarray
    t: float
    nodes: np.ndarray
    values: np.ndarray
    source_alpha: np.ndarray

    def points(self) -> np.ndarray:
        """Reflected vertices embedded back in R^3."""
        n, b, w = _plane_frame(self.normal)
        return self.values[:, None] * n + self.nodes[:, 0:1] * b + self.nodes[:, 1:2] * w


def reflect_half(mesh: SurfaceMesh, t: float, normal=(1.0, 0.0, 0.0)) -> GraphHalf:
    """Reflect the half <x, n> >= t of a mesh across the plane <x, n> = t.

    The half must be a graph in the normal direction over the plane (checked
    conservatively on the projected quads); the reflected graph is
    alpha = 2t - g over the same projection domain.
    """
    alpha, beta, zeta = _plane_coords(mesh, normal)
    _graph_check(mesh, alpha, beta, zeta, t)
    mask = alpha >= t
    if not np.any(mask):
        raise DomainError("t", "no vertices on the far side of the plane")
    n = np.asarray(normal, dtype=float).reshape(3)
    return GraphHalf(
        normal=n / np.linalg.norm(n),
        t=float(t),
        nodes=np.stack([beta[mask], zeta[mask]], axis=1),
        values=2.0 * t - alpha[mask],
        source_alpha=alpha[mask],
    )


def _half_interpolator(nodes: np.ndarray, values: np.ndarray):
    """Piecewise-linear interpolant over scattered projected nodes, or None.

    Exact duplicate projections (e.g. the pole ring of a revolved mesh)
    collapse to the node with the largest value, the conservative choice for
    the reflected far sheet; degenerate point sets yield None (zero-area
    domain, nothing to compare against).
    """
    if nodes.shape[0] < 3:
        return None
    uniq, inverse = np.unique(np.round(nodes, 12), axis=0, return_inverse=True)
    if uniq.shape[0] < 3:
        return None
    vals = np.full(uniq.shape[0], -np.inf)
    np.maximum.at(vals, inverse, values)
    try:
        return LinearNDInterpolator(uniq, vals)
    except QhullError:
        return None


def reflection_defect(mesh: SurfaceMesh, t: float, normal=(1.0, 0.0, 0.0), _checked: bool = False) -> float:
    """Penetration depth of the reflected far half into the near half.

    The far half <x, n> >= t is reflected across the plane and interpolated
    linearly over its projected vertices; the defect is
    max(0, max over near-half vertices of (alpha - reflected graph)), with
    vertices outside the common projection domain skipped.  Zero means the
    reflection stays on the far side of the near half everywhere it is
    defined; for a mesh symmetric across the t = 0 plane the defect vanishes
    to rounding for every t >= 0.
    """
    alpha, beta, zeta = _plane_coords(mesh, normal)
    if not _checked:
        _graph_check(mesh, alpha, beta, zeta, t)
    plus = alpha >= t
    minus = alpha <= t
    if not (np.any(plus) and np.any(minus)):
        return 0.0
    interp = _half_interpolator(
        np.stack([beta[plus], zeta[plus]], axis=1), alpha[plus]
    )
    if interp is None:
        return 0.0
    g_plus = interp(beta[minus], zeta[minus])
    valid = np.isfinite(g_plus)
    if not np.any(valid):
        return 0.0
    gap = alpha[minus][valid] - (2.0 * t - g_plus[valid])
    return float(max(0.0, gap.max()))


@dataclass(frozen=True)
class SweepReport:
    """Per-plane reflection defects of a moving-plane sweep."""

    t_samples: np.ndarray
    defects: np.ndarray
    t0: float
    symmetric: bool
    tolerance: float

    def __post_init__(self):
        t = np.asarray(self.t_samples, dtype=float)
        d = np.asarray(self.defects, dtype=float)
        object.__setattr__(self, "t_samples", t)
        object.__setattr__(self, "defects", d)
        if t.shape != d.shape:
            raise DomainError("sweep", "t_samples and defects must have matching shapes")
        if not (np.all(np.isfinite(d)) and np.all(d >= 0.0)):
            raise DomainError("sweep", "defects must be finite and non-negative")

    def to_dict(self) -> dict:
        return {
            "t0": self.t0,
            "n_steps": int(self.t_samples.size),
            "defects": [float(v) for v in self.defects],
            "symmetric": bool(self.symmetric),
            "tolerance": self.tolerance,
        }


def alexandrov_sweep(
    mesh: SurfaceMesh,
    plane_normal=(1.0, 0.0, 0.0),
    n_steps: int = 256,
    tolerance: float = 1e-9,
) -> SweepReport:
    """Reflection sweep of planes <x, n> = t from the mesh extent down to 0.

    t0 is the largest plane position meeting the mesh; defects are evaluated
    on a uniform t-grid (reported in increasing order) and the mesh is flagged
    symmetric when every defect stays within tolerance down to t = 0.
    Not-a-graph failures are re-raised with the offending plane position.
    """
    if n_steps < 2:
        raise DomainError("steps", "need at least 2 sweep steps")
    alpha, beta, zeta = _plane_coords(mesh, plane_normal)
    t0 = float(alpha.max())
    if t0 <= 0.0:
        raise DomainError("mesh", "mesh extent does not reach past the t = 0 plane")
    ts = np.linspace(0.0, t0, n_steps)
    # every half alpha >= t (t >= 0) is a subset of the t = 0 half, and a
    # subset of a graph is a graph, so one check at t = 0 covers the sweep;
    # if it fails, walk down from t0 to attribute the first offending plane
    try:
        _graph_check(mesh, alpha, beta, zeta, 0.0)
    except NotAGraphError:
        for k in range(n_steps - 1, -1, -1):
            try:
                _graph_check(mesh, alpha, beta, zeta, float(ts[k]))
            except NotAGraphError as err:
                err.t = float(ts[k])
                raise
    defects = np.empty(n_steps)
    for k in range(n_steps):
        defects[k] = reflection_defect(mesh, float(ts[k]), plane_normal, _checked=True)
    symmetric = bool(np.all(defects <= tolerance))
    return SweepReport(t_samples=ts, defects=defects, t0=t0, symmetric=symmetric, tolerance=float(tolerance))
