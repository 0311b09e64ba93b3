"""Numerical verification of the translator equations on sampled geometry.

Two equivalent characterizations are discretized with the same centered
second-order stencils so that their agreement is a meaningful cross-check:

* graph form: div(grad u / W) = 1/W with W = sqrt(1 + |grad u|^2), checked
  as a residual on scalar fields over uniform grids;
* height identity: Delta_M u + |grad_M u|^2 = 1 for the height function u on
  the graph, with the intrinsic Laplacian assembled in divergence form from
  the induced metric g = I + grad u grad u^T (sqrt(det g) = W).

Node-valued fluxes are differenced again for the outer divergence, so
residuals are reported on nodes at least two cells from the boundary;
one-sided stencils are never used.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .families import ProfileCurve, SurfaceMesh

__all__ = [
    "ResidualReport",
    "graph_translator_residual",
    "height_identity_residual",
    "mesh_mean_curvature",
    "mesh_unit_normals",
    "mesh_translator_residual",
    "profile_equation_residual",
    "ExpansionModel",
    "LINEAR_LOG_MODEL",
    "QUADRATIC_LOG_MODEL",
    "AsymptoticDefectReport",
    "asymptotic_defect",
    "fit_expansion",
]


@dataclass(frozen=True)
class ResidualReport:
    """Residual magnitudes of an identity over the interior sample set."""

    h: float
    max_residual: float
    l2_residual: float
    n_interior: int

    def __post_init__(self):
        if not (math.isfinite(self.max_residual) and self.max_residual >= 0.0):
            raise DomainError("residual", "max residual must be finite and non-negative")
        if not (math.isfinite(self.l2_residual) and self.l2_residual >= 0.0):
            raise DomainError("residual", "l2 residual must be finite and non-negative")

    def to_dict(self, kind: str) -> dict:
        return {
            "kind": kind,
            "h": self.h,
            "max_residual": self.max_residual,
            "l2_residual": self.l2_residual,
            "n_interior": self.n_interior,
        }


def _report(res: np.ndarray, h: float) -> ResidualReport:
    flat = np.abs(np.asarray(res, dtype=float)).ravel()
    return ResidualReport(
        h=float(h),
        max_residual=float(flat.max()),
        l2_residual=float(np.sqrt(np.sum(flat**2))),
        n_interior=int(flat.size),
    )


def _check_field(u, h: float) -> np.ndarray:
    u = np.asarray(u, dtype=float)
    if u.ndim != 2 or u.shape[0] < 5 or u.shape[1] < 5:
        raise DomainError("u", "field grid must be at least 5x5 for the two-ring interior stencil")
    if not np.all(np.isfinite(u)):
        raise DomainError("u", "field values must be finite")
    if not (math.isfinite(h) and h > 0.0):
        raise DomainError("h", f"grid spacing must be positive, got {h!r}")
    return u


def _dx(a, h):
    return (a[2:, 1:-1] - a[:-2, 1:-1]) / (2.0 * h)


def _dy(a, h):
    return (a[1:-1, 2:] - a[1:-1, :-2]) / (2.0 * h)


def graph_translator_residual(u, h: float) -> ResidualReport:
    """Residual of div(grad u / W) - 1/W on the grid interior.

    Fluxes grad u / W are formed at nodes from centered first derivatives and
    differenced again for the divergence, so the residual lives on nodes two
    cells from the boundary and converges at O(h^2) on smooth solutions.
    """
    u = _check_field(u, h)
    p = (u[2:, :] - u[:-2, :]) / (2.0 * h)
    q = (u[:, 2:] - u[:, :-2]) / (2.0 * h)
    p_full = np.full_like(u, np.nan)
    q_full = np.full_like(u, np.nan)
    p_full[1:-1, :] = p
    q_full[:, 1:-1] = q
    w = np.sqrt(1.0 + p_full**2 + q_full**2)
    fx = p_full / w
    fy = q_full / w
    div = _dx(fx, h) + _dy(fy, h)
    res = div - 1.0 / w[1:-1, 1:-1]
    return _report(res[1:-1, 1:-1], h)


def height_identity_residual(u, h: float) -> ResidualReport:
    """Residual of Delta_M u + |grad_M u|^2 - 1 for the graph height function.

    The intrinsic Laplacian is assembled in divergence form from the induced
    metric: Delta_M u = (1/W) d_i(W g^{ij} d_j u) with g^{ij} the inverse of
    I + grad u grad u^T and W = sqrt(det g); the tangential gradient satisfies
    |grad_M u|^2 = |grad u|^2 / W^2.  Discretization matches
    graph_translator_residual stencil for stencil.
    """
    u = _check_field(u, h)
    p = np.full_like(u, np.nan)
    q = np.full_like(u, np.nan)
    p[1:-1, :] = (u[2:, :] - u[:-2, :]) / (2.0 * h)
    q[:, 1:-1] = (u[:, 2:] - u[:, :-2]) / (2.0 * h)
    w2 = 1.0 + p**2 + q**2
    w = np.sqrt(w2)
    # W * g^{ij} d_j u, with g^{ij} = delta_ij - u_i u_j / W^2
    s2 = p**2 + q**2
    fx = w * (p - p * s2 / w2)
    fy = w * (q - q * s2 / w2)
    lap = (_dx(fx, h) + _dy(fy, h)) / w[1:-1, 1:-1]
    grad2 = (s2 / w2)[1:-1, 1:-1]
    res = lap + grad2 - 1.0
    return _report(res[1:-1, 1:-1], h)


# ---------------------------------------------------------------------------
# mesh curvature
# ---------------------------------------------------------------------------

def _grid_derivatives(mesh: SurfaceMesh):
    """Centered first/second parameter derivatives of the vertex grid.

    Returns arrays over the index-space interior (all columns for wrapped
    meshes, inner columns otherwise; always inner rows).
    """
    if mesh.nu < 3 or (mesh.nv < 3):
        raise DomainError("mesh", "mesh needs full 4-neighborhoods at interior vertices")
    g = mesh.grid()
    if mesh.wrap:
        jp = np.roll(g, -1, axis=1)
        jm = np.roll(g, +1, axis=1)
    else:
        jp = np.empty_like(g)
        jm = np.empty_like(g)
        jp[:, :-1] = g[:, 1:]
        jm[:, 1:] = g[:, :-1]
        jp[:, -1] = np.nan
        jm[:, 0] = np.nan
    ip = g[2:, :]
    im = g[:-2, :]
    c = g[1:-1, :]
    xu = 0.5 * (ip - im)
    xv = 0.5 * (jp - jm)[1:-1, :]
    xuu = ip - 2.0 * c + im
    xvv = (jp + jm)[1:-1, :] - 2.0 * c
    if mesh.wrap:
        xuv = 0.25 * (np.roll(ip, -1, axis=1) - np.roll(ip, +1, axis=1) - np.roll(im, -1, axis=1) + np.roll(im, +1, axis=1))
    else:
        xuv = np.full_like(c, np.nan)
        xuv[:, 1:-1] = 0.25 * (ip[:, 2:] - ip[:, :-2] - im[:, 2:] + im[:, :-2])
    return xu, xv, xuu, xuv, xvv


def mesh_mean_curvature(mesh: SurfaceMesh) -> np.ndarray:
    """Per-vertex mean curvature (sum of principal curvatures) of a structured mesh.

    Computed from the first and second fundamental forms with centered
    differences in grid-index space; entries without a full 4-neighborhood are
    NaN.  The normal is the grid parametrization normal X_u x X_v, which the
    generators in :mod:`translatorkit.families` orient upward, and the sign is
    such that H - <normal, e_z> vanishes on translators (trace convention: a
    sphere of radius R has |H| = 2/R).
    """
    H, _ = _curvature_and_normal(mesh)
    return H


def mesh_unit_normals(mesh: SurfaceMesh) -> np.ndarray:
    """Unit parametrization normals X_u x X_v / |..|, NaN where undefined."""
    _, nrm = _curvature_and_normal(mesh)
    return nrm


def _curvature_and_normal(mesh: SurfaceMesh):
    xu, xv, xuu, xuv, xvv = _grid_derivatives(mesh)
    E = np.einsum("ijk,ijk->ij", xu, xu)
    F = np.einsum("ijk,ijk->ij", xu, xv)
    G = np.einsum("ijk,ijk->ij", xv, xv)
    n = np.cross(xu, xv)
    nlen = np.linalg.norm(n, axis=2)
    with np.errstate(invalid="ignore", divide="ignore"):
        nu_hat = n / nlen[..., None]
        e = np.einsum("ijk,ijk->ij", xuu, nu_hat)
        f = np.einsum("ijk,ijk->ij", xuv, nu_hat)
        gg = np.einsum("ijk,ijk->ij", xvv, nu_hat)
        H_in = (e * G - 2.0 * f * F + gg * E) / (E * G - F**2)
    H = np.full((mesh.nu, mesh.nv), np.nan)
    N = np.full((mesh.nu, mesh.nv, 3), np.nan)
    H[1:-1, :] = H_in
    N[1:-1, :] = nu_hat
    return H, N


def mesh_translator_residual(mesh: SurfaceMesh) -> ResidualReport:
    """Residual H - <normal, e_z> over the mesh interior (h = mesh resolution)."""
    H, N = _curvature_and_normal(mesh)
    res = H - N[:, :, 2]
    vals = res[np.isfinite(res)]
    if vals.size == 0:
        raise DomainError("mesh", "mesh has no interior vertices")
    return _report(vals, mesh.resolution)


# ---------------------------------------------------------------------------
# profile residual and asymptotics
# ---------------------------------------------------------------------------

def profile_equation_residual(profile: ProfileCurve, slope_cap: float | None = None) -> ResidualReport:
    """Residual of u''/(1 + u'^2) + u'/r - 1 on a profile's interior samples.

    Derivatives come from three-point divided differences, which keep second
    order on the smoothly graded grids the integrators produce (and provide
    an independent check of the integration).  Samples with |u'| above
    slope_cap are skipped, which masks the vertical tangent at a wing neck.
    """
    r, u = profile.r, profile.u
    if r.size < 3:
        raise DomainError("profile", "need at least 3 samples for a residual")
    h1 = r[1:-1] - r[:-2]
    h2 = r[2:] - r[1:-1]
    u0, u1, u2 = u[:-2], u[1:-1], u[2:]
    du = (-h2 / (h1 * (h1 + h2))) * u0 + ((h2 - h1) / (h1 * h2)) * u1 + (h1 / (h2 * (h1 + h2))) * u2
    d2u = 2.0 * (u0 / (h1 * (h1 + h2)) - u1 / (h1 * h2) + u2 / (h2 * (h1 + h2)))
    rc = r[1:-1]
    mask = rc > 0.0
    if slope_cap is not None:
        mask &= np.abs(du) <= slope_cap
    if not np.any(mask):
        raise DomainError("profile", "no interior samples left after slope masking")
    res = d2u[mask] / (1.0 + du[mask] ** 2) + du[mask] / rc[mask] - 1.0
    return _report(res, float(np.max(np.diff(r))))


@dataclass(frozen=True)
class ExpansionModel:
    """Far-field ansatz a*r^2 + b*r + c*log(r) + e for a profile height."""

    coef_r2: float
    coef_r: float
    coef_log: float
    coef_const: float
    label: str

    def evaluate(self, r) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        return self.coef_r2 * r**2 + self.coef_r * r + self.coef_log * np.log(r) + self.coef_const


LINEAR_LOG_MODEL = ExpansionModel(0.0, 0.5, -0.5, 0.0, "r/2 - log(r)/2")
QUADRATIC_LOG_MODEL = ExpansionModel(0.25, 0.0, -0.5, 0.0, "r^2/4 - log(r)/2")


@dataclass(frozen=True)
class AsymptoticDefectReport:
    """Pointwise defect u(r) - model(r) of a profile against a far-field model."""

    samples: np.ndarray  # (n, 2) rows of (r, defect)
    model: str

    def to_dict(self) -> dict:
        return {"model": self.model, "samples": [[float(r), float(d)] for r, d in self.samples]}


def asymptotic_defect(profile: ProfileCurve, model: ExpansionModel) -> AsymptoticDefectReport:
    """Defect of a profile against a candidate expansion, at the profile's radii.

    The profile must extend to r >= 10 so the far field is actually probed;
    samples at r = 0 are skipped because of the log term.  The model is data,
    not a built-in: pass LINEAR_LOG_MODEL, QUADRATIC_LOG_MODEL, a fit from
    fit_expansion, or any custom ExpansionModel.
    """
    if profile.r_max < 10.0:
        raise DomainError("profile", f"profile must extend to r >= 10, got r_max = {profile.r_max!r}")
    mask = profile.r > 0.0
    r = profile.r[mask]
    defect = profile.u[mask] - model.evaluate(r)
    if not np.all(np.isfinite(defect)):
        raise DomainError("model", "model evaluation produced non-finite defects")
    return AsymptoticDefectReport(samples=np.stack([r, defect], axis=1), model=model.label)


def fit_expansion(profile: ProfileCurve, r_window: tuple[float, float] = (50.0, 100.0)) -> ExpansionModel:
    """Least-squares fit of a*r^2 + b*r + c*log(r) + e over a radius window."""
    mask = (profile.r >= r_window[0]) & (profile.r <= r_window[1]) & (profile.r > 0.0)
    if mask.sum() < 8:
        raise DomainError("profile", "too few samples in the fit window")
    r = profile.r[mask]
    A = np.stack([r**2, r, np.log(r), np.ones_like(r)], axis=1)
    coef, *_ = np.linalg.lstsq(A, profile.u[mask], rcond=None)
    a, b, c, e = (float(v) for v in coef)
    return ExpansionModel(a, b, c, e, f"fit: {a:.6g} r^2 + {b:.3g} r + {c:.6g} log(r) + {e:.6g}")
