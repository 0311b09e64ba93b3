"""Height bound for compact translators over a plane boundary of width d.

For d < pi the canonical grim reaper cylinder caps the height at
-log cos(d/2).  For d >= pi the comparison surface is a dilated and tilted
grim reaper cylinder; the bound is the minimum over s in (1, s0] of

    C(s) = -((d/pi) s)^2 log cos((pi/2)/s) + (d/2) sqrt(((d/pi) s)^2 - 1),

the height spread of the intersection of that surface with the cylinder of
diameter d.  C blows up at both ends of (1, inf) and is increasing beyond
s0 = (pi/2)/arctan((4 - sqrt(2))/2) ~ 1.722, so the search interval (1, s0]
suffices.  The minimum has no closed form and is located numerically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError
from .families import TiltParams, tilted_grim_reaper_point

__all__ = [
    "S_DOMAIN_EPS",
    "s0",
    "c_of_s",
    "c_prime",
    "minimize_c",
    "HeightBoundReport",
    "height_bound",
    "GammaPoint",
    "gamma_pm",
    "gamma_curve",
    "gamma_height_extrema",
]

# Domain clamp at the s = 1 singularity of C(s).
S_DOMAIN_EPS = 1e-9


def s0() -> float:
    """The dilation parameter (pi/2) / arctan((4 - sqrt(2))/2) ~ 1.722."""
    return (math.pi / 2.0) / math.atan((4.0 - math.sqrt(2.0)) / 2.0)


def _check_sd(s: float, d: float) -> tuple[float, float]:
    s = float(s)
    d = float(d)
    if not (math.isfinite(d) and d > 0.0):
        raise DomainError("d", f"width must be positive, got {d!r}")
    if not (math.isfinite(s) and s > 1.0 + S_DOMAIN_EPS):
        raise DomainError("s", f"s must exceed 1 + {S_DOMAIN_EPS:g}, got {s!r}")
    return s, d


def _c_values(s, d: float):
    """Vectorized C(s); assumes s > 1 elementwise."""
    s = np.asarray(s, dtype=float)
    lam = (d / math.pi) * s
    return -(lam**2) * np.log(np.cos((math.pi / 2.0) / s)) + (d / 2.0) * np.sqrt(lam**2 - 1.0)


def c_of_s(s: float, d: float) -> float:
    """Height spread C(s) of the tilted comparison surface inside the d-cylinder."""
    s, d = _check_sd(s, d)
    return float(_c_values(s, d))


def c_prime(s: float, d: float) -> float:
    """Closed-form derivative of C(s) in s.

    C'(s) = -2 (d^2/pi^2) s log cos((pi/2)/s) - (d^2/(2 pi)) tan((pi/2)/s)
            + (d^3/(2 pi^2)) s / sqrt(((d/pi) s)^2 - 1).
    """
    s, d = _check_sd(s, d)
    q = (math.pi / 2.0) / s
    return (
        -2.0 * (d**2 / math.pi**2) * s * math.log(math.cos(q))
        - (d**2 / (2.0 * math.pi)) * math.tan(q)
        + (d**3 / (2.0 * math.pi**2)) * s / math.sqrt(((d / math.pi) * s) ** 2 - 1.0)
    )


def minimize_c(d: float, tol: float) -> tuple[float, float]:
    """Minimize C(s) over (1, s0] for a width d >= pi.

    A 1000-point scan brackets the minimum, then golden-section refines the
    bracket to width tol.  Returns (s_star, C(s_star)).
    """
    if not (math.isfinite(d) and d >= math.pi):
        raise DomainError("d", f"the wide regime needs d >= pi, got {d!r}")
    if not (1e-14 < tol < 1e-2):
        raise DomainError("tol", f"tol must lie in (1e-14, 1e-2), got {tol!r}")
    s_hi = s0()
    grid = np.linspace(1.0 + 1e-6, s_hi, 1000)
    vals = _c_values(grid, d)
    k = int(np.argmin(vals))
    lo = grid[max(k - 1, 0)]
    hi = grid[min(k + 1, grid.size - 1)]

    # golden-section on the bracket
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    x1 = b - invphi * (b - a)
    x2 = a + invphi * (b - a)
    f1 = float(_c_values(x1, d))
    f2 = float(_c_values(x2, d))
    while b - a > tol:
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - invphi * (b - a)
            f1 = float(_c_values(x1, d))
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + invphi * (b - a)
            f2 = float(_c_values(x2, d))
    s_star = 0.5 * (a + b)
    return s_star, float(_c_values(s_star, d))


@dataclass(frozen=True)
class HeightBoundReport:
    """Height bound for boundary width d, with C(s) samples in the wide regime."""

    d: float
    regime: str
    bound: float
    s_star: float | None = None
    c_samples: list = field(default_factory=list)

    def __post_init__(self):
        if self.regime not in ("narrow", "wide"):
            raise DomainError("regime", f"unknown regime {self.regime!r}")
        if not (math.isfinite(self.bound) and self.bound > 0.0):
            raise DomainError("bound", "bound must be positive and finite")

    def to_dict(self) -> dict:
        out: dict = {"d": self.d, "regime": self.regime, "bound": self.bound}
        if self.s_star is not None:
            out["s_star"] = self.s_star
        out["c_samples"] = [[s, c] for s, c in self.c_samples]
        return out


def height_bound(d: float, n_samples: int = 256) -> HeightBoundReport:
    """Upper bound on the height a compact translator of boundary width d reaches.

    Narrow regime (0 < d < pi): -log cos(d/2).  Wide regime (d >= pi): the
    minimum of C(s) over (1, s0], found to tolerance 1e-9.  The switch at
    d = pi is discontinuous; the narrow-regime formula diverges as d -> pi-.
    """
    if not (math.isfinite(d) and d > 0.0):
        raise DomainError("d", f"width must be positive, got {d!r}")
    if d < math.pi:
        return HeightBoundReport(d=d, regime="narrow", bound=-math.log(math.cos(d / 2.0)))
    s_star, bound = minimize_c(d, 1e-9)
    grid = np.linspace(1.0 + 1e-6, s0(), n_samples)
    samples = [(float(s), float(c)) for s, c in zip(grid, _c_values(grid, d))]
    return HeightBoundReport(d=d, regime="wide", bound=bound, s_star=s_star, c_samples=samples)


# ---------------------------------------------------------------------------
# intersection curve with the cylinder of diameter d
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GammaPoint:
    """Point of the intersection curve of the tilted surface and the cylinder."""

    x: float
    sign: int
    position: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "position", np.asarray(self.position, dtype=float))


def _norm_sign(sign) -> int:
    if sign in (1, +1, "+", "plus"):
        return 1
    if sign in (-1, "-", "minus"):
        return -1
    raise DomainError("sign", f"sign must be +1 or -1, got {sign!r}")


def gamma_pm(x: float, sign, params: TiltParams) -> GammaPoint:
    """Point gamma_+-(x) of the intersection with the cylinder x^2 + y^2 = (d/2)^2.

    gamma_+-(x) = (lam x, +-Q, -lam^2 log cos x +- sqrt(lam^2 - 1) Q) with
    Q = sqrt((d/2)^2 - (lam x)^2), for |x| <= (d/2)/lam.
    """
    sgn = _norm_sign(sign)
    lam, d = params.lam, params.d
    x = float(x)
    x_max = (d / 2.0) / lam
    if not (math.isfinite(x) and abs(x) <= x_max * (1.0 + 1e-15)):
        raise DomainError("x", f"|x| must not exceed (d/2)/lambda = {x_max!r}")
    q2 = (d / 2.0) ** 2 - (lam * x) ** 2
    q = math.sqrt(max(q2, 0.0))
    z = -(lam**2) * math.log(math.cos(x)) + sgn * math.sqrt(lam**2 - 1.0) * q
    pos = np.array([lam * x, sgn * q, z])
    radial = math.hypot(pos[0], pos[1])
    if abs(radial - d / 2.0) > 1e-12 * max(1.0, d):
        raise DomainError("x", "intersection point left the cylinder (numerical domain issue)")
    return GammaPoint(x=x, sign=sgn, position=pos)


def gamma_curve(params: TiltParams, n: int, sign) -> np.ndarray:
    """(n, 3) array of intersection-curve positions over the full parameter range."""
    sgn = _norm_sign(sign)
    lam, d = params.lam, params.d
    x_max = (d / 2.0) / lam
    xs = np.linspace(-x_max, x_max, n)
    q = np.sqrt(np.maximum((d / 2.0) ** 2 - (lam * xs) ** 2, 0.0))
    z = -(lam**2) * np.log(np.cos(xs)) + sgn * math.sqrt(lam**2 - 1.0) * q
    return np.stack([lam * xs, sgn * q, z], axis=1)


def gamma_height_extrema(params: TiltParams) -> tuple[float, float]:
    """Closed-form height extrema attributed to the intersection curve.

    Returns (min_z, max_z) = (-(d/2) sqrt(lam^2 - 1), -lam^2 log cos((d/2)/lam)).
    The minimum is attained at the center of the minus branch; the maximum is
    the value at the shared endpoints x = +-(d/2)/lam.  Their difference
    equals C(s) at s = lam*pi/d.  Note that the sampled curve overshoots the
    endpoint value on an interior arc (see gamma_curve), so max_z is the
    endpoint height, not the sampled maximum.
    """
    lam, d = params.lam, params.d
    x_max = (d / 2.0) / lam
    if x_max >= math.pi / 2.0:
        raise DomainError("d", "(d/2)/lambda must stay below pi/2")
    min_z = -(d / 2.0) * math.sqrt(lam**2 - 1.0)
    max_z = -(lam**2) * math.log(math.cos(x_max))
    return min_z, max_z
