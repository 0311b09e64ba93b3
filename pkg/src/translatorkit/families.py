"""Classic translator families and rotationally symmetric profile construction.

Conventions used throughout the toolkit: the translation direction is the +z
axis, angles are radians, logarithms are natural, and everything lives in R^3.
The grim reaper curve is t -> (t, -log cos t) on (-pi/2, pi/2); its product
with a line is the canonical grim reaper cylinder.  The rotationally symmetric
families (bowl and winglike surfaces) are built by integrating the radial
graph equation

    u''/(1 + u'^2) + u'/r = 1,

which expresses that the mean curvature of the surface of revolution of the
profile u(r) equals the vertical component of its unit normal.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, StepSizeError

__all__ = [
    "HALF_PI",
    "ProfileCurve",
    "SurfaceMesh",
    "TiltParams",
    "grim_reaper_point",
    "grim_reaper_cylinder_point",
    "rotation_about_x",
    "tilted_grim_reaper_point",
    "bowl_profile",
    "bowl_heights",
    "wing_profile",
    "wing_meridian",
    "revolve",
    "revolve_path",
    "graph_mesh",
    "grim_reaper_mesh",
    "tilted_grim_reaper_mesh",
    "vertical_plane_mesh",
    "bump_parameters",
    "apply_radial_bump",
]

HALF_PI = math.pi / 2.0

# Taylor coefficients of the bowl profile at the regular center,
# u(r) = r^2/4 + r^4/128 + r^6/4608 + O(r^8), forced by the radial equation.
_BOWL_SERIES = (0.25, 1.0 / 128.0, 1.0 / 4608.0)


# ---------------------------------------------------------------------------
# closed-form parametrizations
# ---------------------------------------------------------------------------

def _check_slab(x: float, param: str = "t") -> float:
    x = float(x)
    if not math.isfinite(x) or abs(x) >= HALF_PI:
        raise DomainError(param, f"{param} must lie in (-pi/2, pi/2), got {x!r}")
    return x


def grim_reaper_point(t: float) -> np.ndarray:
    """Point (t, -log cos t) of the grim reaper curve, for |t| < pi/2."""
    t = _check_slab(t)
    return np.array([t, -math.log(math.cos(t))])


def grim_reaper_cylinder_point(x: float, y: float) -> np.ndarray:
    """Point (x, y, -log cos x) of the canonical grim reaper cylinder."""
    x = _check_slab(x, "x")
    if not math.isfinite(y):
        raise DomainError("y", "y must be finite")
    return np.array([x, float(y), -math.log(math.cos(x))])


def rotation_about_x(alpha: float) -> np.ndarray:
    """Rotation matrix about the x-axis by angle alpha (rows are images of e_i)."""
    c, s = math.cos(alpha), math.sin(alpha)
    return np.array([[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]])


@dataclass(frozen=True)
class TiltParams:
    """Dilation factor and slab width of a tilted, dilated grim reaper cylinder.

    ``lam`` > 1 is the dilation factor and ``d`` > 0 the width of the cylinder
    (or slab) the surface is compared against; the slab of the dilated surface
    has width lam*pi, so lam*pi > d is required.  After dilation the surface
    translates with speed 1/lam, and a rotation about the x-axis by
    alpha = arccos(1/lam) restores a unit vertical velocity.  The dilation is
    conveniently parametrized as lam = (d/pi) * s with s > 1.
    """

    lam: float
    d: float

    def __post_init__(self):
        if not (math.isfinite(self.lam) and self.lam > 1.0):
            raise DomainError("lambda", f"dilation factor must exceed 1, got {self.lam!r}")
        if not (math.isfinite(self.d) and self.d > 0.0):
            raise DomainError("d", f"width must be positive, got {self.d!r}")
        if not self.lam * math.pi > self.d:
            raise DomainError("d", f"slab containment requires lambda*pi > d, got lambda={self.lam!r}, d={self.d!r}")

    @classmethod
    def from_s(cls, s: float, d: float) -> "TiltParams":
        """Build parameters from the normalized dilation s > 1, lam = (d/pi)*s."""
        if not (math.isfinite(s) and s > 1.0):
            raise DomainError("s", f"s must exceed 1, got {s!r}")
        return cls(lam=(d / math.pi) * s, d=d)

    @property
    def alpha(self) -> float:
        """Tilt angle arccos(1/lambda)."""
        return math.acos(1.0 / self.lam)

    @property
    def a0(self) -> float:
        """Horizontal component sqrt(1 - 1/lambda^2) of the tilted velocity."""
        return math.sqrt(1.0 - 1.0 / self.lam**2)

    @property
    def s(self) -> float:
        """Normalized dilation s = lambda * pi / d."""
        return self.lam * math.pi / self.d


def tilted_grim_reaper_point(x: float, y: float, params: TiltParams) -> np.ndarray:
    """Point of the dilated-and-tilted grim reaper cylinder.

    Returns (lam*x, y + sqrt(lam^2-1) log cos x, sqrt(lam^2-1) y - log cos x),
    which is rotation_about_x(alpha) applied to lam*(x, y/lam, -log cos x)
    rescaled so that y is the post-dilation ruling parameter.
    """
    x = _check_slab(x, "x")
    if not math.isfinite(y):
        raise DomainError("y", "y must be finite")
    lam = params.lam
    root = math.sqrt(lam**2 - 1.0)
    lc = math.log(math.cos(x))
    return np.array([lam * x, y + root * lc, root * y - lc])


# ---------------------------------------------------------------------------
# profiles
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ProfileCurve:
    """Sampled radial generating curve r -> u(r) of a surface of revolution.

    Radii are strictly increasing within a branch; winglike surfaces are
    represented as two branches tagged ``upper``/``lower`` that share the neck
    sample.  Consumers interpolate linearly between samples.
    """

    r: np.ndarray
    u: np.ndarray
    branch: str = "single"

    def __post_init__(self):
        r = np.asarray(self.r, dtype=float)
        u = np.asarray(self.u, dtype=float)
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "u", u)
        if r.ndim != 1 or u.shape != r.shape or r.size == 0:
            raise DomainError("profile", "profile needs matching 1-d r and u arrays")
        if not (np.all(np.isfinite(r)) and np.all(np.isfinite(u))):
            raise DomainError("profile", "profile samples must be finite")
        if r[0] < 0.0:
            raise DomainError("profile", "radii must be non-negative")
        if r.size > 1 and not np.all(np.diff(r) > 0.0):
            raise DomainError("profile", "radii must be strictly increasing within a branch")
        if self.branch not in ("single", "upper", "lower"):
            raise DomainError("branch", f"unknown branch tag {self.branch!r}")

    def __len__(self) -> int:
        return int(self.r.size)

    @property
    def r_max(self) -> float:
        return float(self.r[-1])

    def height_at(self, radii) -> np.ndarray:
        """Linear interpolation of u at the given radii (inside the sample range)."""
        radii = np.asarray(radii, dtype=float)
        if np.any(radii < self.r[0] - 1e-12) or np.any(radii > self.r[-1] + 1e-12):
            raise DomainError("r", "requested radius outside the sampled range")
        return np.interp(radii, self.r, self.u)

    def restricted(self, r_min: float = -np.inf, r_max: float = np.inf) -> "ProfileCurve":
        """Sub-profile with samples in [r_min, r_max]."""
        mask = (self.r >= r_min) & (self.r <= r_max)
        if not np.any(mask):
            raise DomainError("r", "restriction leaves no samples")
        return ProfileCurve(self.r[mask], self.u[mask], self.branch)


def _rk4(f, t, y, h):
    k1 = f(t, y)
    k2 = f(t + 0.5 * h, y + 0.5 * h * k1)
    k3 = f(t + 0.5 * h, y + 0.5 * h * k2)
    k4 = f(t + h, y + h * k3)
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def _bowl_series(r):
    a2, a4, a6 = _BOWL_SERIES
    u = a2 * r**2 + a4 * r**4 + a6 * r**6
    p = 2 * a2 * r + 4 * a4 * r**3 + 6 * a6 * r**5
    return u, p


def _bowl_rhs(r, y):
    p = y[1]
    return np.array([p, (1.0 + p * p) * (1.0 - p / r)])


def bowl_profile(r_max: float, h: float) -> ProfileCurve:
    """Solve the radial equation for the strictly convex entire translator.

    Starts from the regular center u(0) = 0, u'(0) = 0 with the series launch
    u = r^2/4 + O(r^4) on [0, 10h] (the u'/r term is a removable singularity
    at r = 0), then integrates with a classical fourth-order step of size h.
    """
    if not (math.isfinite(r_max) and r_max > 0.0):
        raise DomainError("rmax", f"r_max must be positive, got {r_max!r}")
    if not (math.isfinite(h) and h > 0.0 and r_max / h >= 10.0):
        raise DomainError("h", "step must be positive with r_max/h >= 10")
    n = int(round(r_max / h))
    rs = np.arange(n + 1) * h
    us = np.empty(n + 1)
    ps = np.empty(n + 1)
    k0 = 10
    us[: k0 + 1], ps[: k0 + 1] = _bowl_series(rs[: k0 + 1])
    y = np.array([us[k0], ps[k0]])
    for i in range(k0, n):
        y = _rk4(_bowl_rhs, rs[i], y, h)
        us[i + 1], ps[i + 1] = y
    if not (np.all(np.isfinite(us)) and np.all(np.isfinite(ps))):
        raise StepSizeError("bowl integration produced non-finite samples; reduce h")
    if not np.all(np.diff(ps) > 0.0):
        raise StepSizeError("bowl slope samples are not strictly increasing; reduce h")
    return ProfileCurve(rs, us, "single")


def bowl_heights(radii, step: float = 1e-3) -> np.ndarray:
    """Bowl profile heights at arbitrary radii, to integrator accuracy O(step^4).

    Marches the radial equation landing exactly on each requested radius, so
    the values carry no interpolation error.  Used where a smooth field is
    sampled off the profile grid (e.g. graph residual convergence studies).
    """
    radii = np.atleast_1d(np.asarray(radii, dtype=float))
    if radii.size == 0 or np.any(~np.isfinite(radii)) or np.any(radii < 0.0):
        raise DomainError("r", "radii must be finite and non-negative")
    order = np.argsort(radii)
    out = np.empty_like(radii)
    r_launch = min(10.0 * step, max(radii.max(), step))
    r_cur = r_launch
    u, p = _bowl_series(np.array([r_launch]))
    y = np.array([u[0], p[0]])
    for idx in order:
        target = radii[idx]
        if target <= r_launch:
            out[idx] = _bowl_series(np.array([target]))[0][0]
            continue
        while r_cur < target - 1e-15:
            hstep = min(step, target - r_cur)
            y = _rk4(_bowl_rhs, r_cur, y, hstep)
            r_cur += hstep
        out[idx] = y[0]
    return out


def _wing_rhs(s, y):
    # arclength state (r, u, psi); psi is the tangent angle of the meridian
    r, _, psi = y
    return np.array([math.cos(psi), math.sin(psi), math.cos(psi) - math.sin(psi) / r])


def _wing_branch(R, r_max, h, psi0, tag):
    y = np.array([R, 0.0, psi0])
    rs = [R]
    us = [0.0]
    s = 0.0
    max_steps = int(20.0 * (r_max + 1.0) / h) + 1000
    for _ in range(max_steps):
        y = _rk4(_wing_rhs, s, y, h)
        s += h
        if not np.all(np.isfinite(y)):
            raise StepSizeError("wing integration produced non-finite state; reduce h")
        rs.append(y[0])
        us.append(y[1])
        if y[0] >= r_max:
            break
    else:
        raise StepSizeError("wing integration did not reach r_max; reduce h or r_max")
    rs = np.array(rs)
    us = np.array(us)
    if not np.all(np.diff(rs) > 0.0):
        raise StepSizeError("wing branch radii are not strictly increasing; reduce h")
    return ProfileCurve(rs, us, tag)


def wing_profile(R: float, r_max: float, h: float) -> tuple[ProfileCurve, ProfileCurve]:
    """Solve for the winglike (translating catenoid) profile with neck radius R.

    The meridian has a vertical tangent at the neck, so the branch emanating
    from (r, u) = (R, 0) is integrated in arclength with the tangent angle as
    state: r' = cos(psi), u' = sin(psi), psi' = cos(psi) - sin(psi)/r.  The
    two branches start at psi = +pi/2 (upper) and psi = -pi/2 (lower); h is
    the arclength step, so the returned radii are non-uniform.
    """
    if not (math.isfinite(R) and R > 0.0):
        raise DomainError("R", f"neck radius must be positive, got {R!r}")
    if not (math.isfinite(r_max) and r_max > R):
        raise DomainError("rmax", "r_max must exceed the neck radius")
    if not (math.isfinite(h) and 0.0 < h <= (r_max - R)):
        raise DomainError("h", "arclength step must be positive and below r_max - R")
    upper = _wing_branch(R, r_max, h, +HALF_PI, "upper")
    lower = _wing_branch(R, r_max, h, -HALF_PI, "lower")
    return upper, lower


def wing_meridian(upper: ProfileCurve, lower: ProfileCurve) -> tuple[np.ndarray, np.ndarray]:
    """Full meridian polyline of a winglike surface: lower branch reversed, then upper."""
    r = np.concatenate([lower.r[::-1], upper.r[1:]])
    u = np.concatenate([lower.u[::-1], upper.u[1:]])
    return r, u


# ---------------------------------------------------------------------------
# meshes
# ---------------------------------------------------------------------------

@dataclass
class SurfaceMesh:
    """Structured quad mesh: nu*nv vertices in row-major order.

    Vertex (i, j) sits at index i*nv + j.  ``wrap`` marks meshes that close up
    in the second index (surfaces of revolution); their quads connect the last
    column back to the first and only the first/last rows are boundary.
    """

    vertices: np.ndarray
    nu: int
    nv: int
    wrap: bool = False

    def __post_init__(self):
        v = np.asarray(self.vertices, dtype=float)
        object.__setattr__(self, "vertices", v)
        if v.ndim != 2 or v.shape[1] != 3:
            raise DomainError("vertices", "vertices must be an (n, 3) array")
        if self.nu < 1 or self.nv < 1 or v.shape[0] != self.nu * self.nv:
            raise DomainError("grid_dims", f"vertex count {v.shape[0]} != nu*nv = {self.nu * self.nv}")
        if not np.all(np.isfinite(v)):
            raise DomainError("vertices", "vertices must be finite")

    def grid(self) -> np.ndarray:
        """Vertices reshaped to (nu, nv, 3)."""
        return self.vertices.reshape(self.nu, self.nv, 3)

    @property
    def boundary_flags(self) -> np.ndarray:
        """Per-vertex flag, true exactly on the grid boundary."""
        flags = np.zeros((self.nu, self.nv), dtype=bool)
        flags[0, :] = True
        flags[-1, :] = True
        if not self.wrap:
            flags[:, 0] = True
            flags[:, -1] = True
        return flags.reshape(-1)

    @property
    def resolution(self) -> float:
        """Maximum grid edge length (the sampling resolution of the mesh)."""
        g = self.grid()
        lengths = [0.0]
        if self.nu > 1:
            lengths.append(np.linalg.norm(g[1:] - g[:-1], axis=2).max())
        if self.nv > 1:
            lengths.append(np.linalg.norm(g[:, 1:] - g[:, :-1], axis=2).max())
        if self.wrap and self.nv > 2:
            lengths.append(np.linalg.norm(g[:, 0] - g[:, -1], axis=1).max())
        return float(max(lengths))

    def quad_indices(self) -> np.ndarray:
        """(m, 4) vertex indices of the structured quads, row-major."""
        nu, nv = self.nu, self.nv
        if nu < 2 or nv < 2:
            return np.empty((0, 4), dtype=int)
        i = np.arange(nu - 1)
        j_count = nv if (self.wrap and nv > 2) else nv - 1
        j = np.arange(j_count)
        jj, ii = np.meshgrid(j, i)
        jn = (jj + 1) % nv
        q = np.stack(
            [ii * nv + jj, (ii + 1) * nv + jj, (ii + 1) * nv + jn, ii * nv + jn],
            axis=2,
        )
        return q.reshape(-1, 4)

    def translated(self, offset) -> "SurfaceMesh":
        """Copy of the mesh translated by the given 3-vector."""
        off = np.asarray(offset, dtype=float).reshape(3)
        return SurfaceMesh(self.vertices + off, self.nu, self.nv, self.wrap)


def revolve_path(r: np.ndarray, u: np.ndarray, n_theta: int) -> SurfaceMesh:
    """Revolve an (r, u) meridian polyline about the z-axis."""
    r = np.asarray(r, dtype=float)
    u = np.asarray(u, dtype=float)
    if r.size == 0 or r.shape != u.shape:
        raise DomainError("profile", "meridian needs matching non-empty r and u arrays")
    if n_theta < 3:
        raise DomainError("ntheta", f"n_theta must be at least 3, got {n_theta!r}")
    theta = 2.0 * math.pi * np.arange(n_theta) / n_theta
    x = np.outer(r, np.cos(theta))
    y = np.outer(r, np.sin(theta))
    z = np.repeat(u[:, None], n_theta, axis=1)
    verts = np.stack([x, y, z], axis=2).reshape(-1, 3)
    return SurfaceMesh(verts, nu=r.size, nv=n_theta, wrap=True)


def revolve(profile: ProfileCurve, n_theta: int) -> SurfaceMesh:
    """Surface of revolution of a profile branch, sampled at n_theta azimuths."""
    return revolve_path(profile.r, profile.u, n_theta)


def graph_mesh(x: np.ndarray, y: np.ndarray, f) -> SurfaceMesh:
    """Mesh of the graph z = f(x, y) over the rectangular grid x cross y.

    ``f`` is either an (nx, ny) array of samples or a callable evaluated on
    the mesh grid.  Rows of the mesh run along x, columns along y.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.ndim != 1 or y.ndim != 1 or x.size == 0 or y.size == 0:
        raise DomainError("grid", "x and y must be non-empty 1-d arrays")
    if callable(f):
        xx, yy = np.meshgrid(x, y, indexing="ij")
        z = np.asarray(f(xx, yy), dtype=float)
    else:
        z = np.asarray(f, dtype=float)
    if z.shape != (x.size, y.size):
        raise DomainError("f", f"field shape {z.shape} does not match grid ({x.size}, {y.size})")
    if not np.all(np.isfinite(z)):
        raise DomainError("f", "field values must be finite")
    xx, yy = np.meshgrid(x, y, indexing="ij")
    verts = np.stack([xx, yy, z], axis=2).reshape(-1, 3)
    return SurfaceMesh(verts, nu=x.size, nv=y.size, wrap=False)


def grim_reaper_mesh(h: float, x_half: float = 1.5, y_extent: tuple[float, float] = (0.0, 1.0)) -> SurfaceMesh:
    """Graph mesh of the grim reaper cylinder z = -log cos x on a rectangle."""
    if not 0.0 < x_half < HALF_PI:
        raise DomainError("x_half", "x_half must lie in (0, pi/2)")
    nx = 2 * int(round(x_half / h)) + 1
    ny = int(round((y_extent[1] - y_extent[0]) / h)) + 1
    x = np.linspace(-x_half, x_half, nx)
    y = np.linspace(y_extent[0], y_extent[1], max(ny, 2))
    return graph_mesh(x, y, lambda xx, yy: -np.log(np.cos(xx)))


def tilted_grim_reaper_mesh(
    params: TiltParams,
    h: float,
    x_half: float = 1.3,
    y_extent: tuple[float, float] = (-1.0, 1.0),
) -> SurfaceMesh:
    """Parametric mesh of the tilted, dilated grim reaper cylinder."""
    if not 0.0 < x_half < HALF_PI:
        raise DomainError("x_half", "x_half must lie in (0, pi/2)")
    nx = 2 * int(round(x_half / h)) + 1
    ny = max(int(round((y_extent[1] - y_extent[0]) / h)) + 1, 2)
    xs = np.linspace(-x_half, x_half, nx)
    ys = np.linspace(y_extent[0], y_extent[1], ny)
    lam = params.lam
    root = math.sqrt(lam**2 - 1.0)
    lc = np.log(np.cos(xs))
    xx = np.repeat(lam * xs[:, None], ny, axis=1)
    yy = ys[None, :] + root * lc[:, None]
    zz = root * ys[None, :] - lc[:, None]
    verts = np.stack([xx, yy, zz], axis=2).reshape(-1, 3)
    return SurfaceMesh(verts, nu=nx, nv=ny, wrap=False)


def vertical_plane_mesh(half_extent: float, h: float, y: float = 0.0) -> SurfaceMesh:
    """Mesh of a vertical plane (containing the translation direction) at offset y."""
    if not (math.isfinite(half_extent) and half_extent > 0.0):
        raise DomainError("rmax", "half_extent must be positive")
    n = max(2 * int(round(half_extent / h)) + 1, 2)
    xs = np.linspace(-half_extent, half_extent, n)
    zs = np.linspace(-half_extent, half_extent, n)
    xx, zz = np.meshgrid(xs, zs, indexing="ij")
    verts = np.stack([xx, np.full_like(xx, float(y)), zz], axis=2).reshape(-1, 3)
    return SurfaceMesh(verts, nu=n, nv=n, wrap=False)


# ---------------------------------------------------------------------------
# seeded fixture perturbation
# ---------------------------------------------------------------------------

def bump_parameters(seed: int) -> tuple[float, float]:
    """Deterministic bump azimuth and angular width derived from a seed.

    Hash-to-unit-interval scheme: sha256 of the decimal seed string; bytes
    0:8 map to the azimuth in [0, 2*pi), bytes 8:16 to the width in
    [0.4, 0.8] radians.  No random-number generator is involved, so fixtures
    are reproducible from the seed alone.
    """
    digest = hashlib.sha256(str(int(seed)).encode("ascii")).digest()
    u0 = int.from_bytes(digest[0:8], "big") / 2.0**64
    u1 = int.from_bytes(digest[8:16], "big") / 2.0**64
    return 2.0 * math.pi * u0, 0.4 + 0.4 * u1


def apply_radial_bump(mesh: SurfaceMesh, seed: int, amplitude: float = 0.1) -> SurfaceMesh:
    """Push mesh vertices radially outward in a Gaussian azimuthal bump.

    The displacement at radius r and azimuth theta is
    amplitude * exp(-((theta - theta0)/width)^2) * r / r_ref, with r_ref the
    largest radius in the mesh, so the bump reaches full amplitude at the rim
    and vanishes on the axis.  theta0 and width come from bump_parameters.
    """
    theta0, width = bump_parameters(seed)
    v = mesh.vertices
    r = np.hypot(v[:, 0], v[:, 1])
    r_ref = r.max()
    if r_ref <= 0.0:
        raise DomainError("mesh", "mesh has no radial extent to perturb")
    theta = np.arctan2(v[:, 1], v[:, 0])
    dtheta = np.angle(np.exp(1j * (theta - theta0)))
    factor = 1.0 + (amplitude / r_ref) * np.exp(-((dtheta / width) ** 2))
    out = v.copy()
    out[:, 0] = v[:, 0] * factor
    out[:, 1] = v[:, 1] * factor
    return SurfaceMesh(out, mesh.nu, mesh.nv, mesh.wrap)
