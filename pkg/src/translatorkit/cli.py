"""Command-line orchestration: generate geometry, bounds, verifications, sweeps.

One command per invocation, deterministic outputs for a fixed flag set (and
seed), machine-readable JSON errors on stderr.  Exit codes: 0 success,
2 invalid configuration, 3 domain error from a module, 4 I/O error.
"""

from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from . import comparison, families, fileio, verify
from .height_bound import c_of_s, gamma_curve, gamma_height_extrema
from .height_bound import height_bound as compute_height_bound
from .errors import (
    DomainError,
    FileFormatError,
    NoContactError,
    NotAGraphError,
    StepSizeError,
    TranslatorKitError,
)

__all__ = ["main", "entry"]


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would sys.exit with plain text
        raise _UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="translatorkit", description=__doc__, add_help=True)
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate a profile (.csv) or mesh (.obj)")
    gen.add_argument("--family", required=True, choices=("plane", "grim", "tilted", "bowl", "wing"))
    gen.add_argument("--lambda", dest="lam", type=float, default=2.0, help="dilation factor for tilted")
    gen.add_argument("--R", type=float, default=1.0, help="neck radius for wing")
    gen.add_argument("--rmax", type=float, default=2.0, help="radial / lateral extent")
    gen.add_argument("--h", type=float, default=0.02, help="step size")
    gen.add_argument("--ntheta", type=int, default=64, help="azimuth count for revolved meshes")
    gen.add_argument("--seed", type=int, default=None, help="seeded bump perturbation for revolved meshes")
    gen.add_argument("--out", required=True)

    bound = sub.add_parser("bound", help="height bound report for width d")
    bound.add_argument("--d", type=float, required=True)
    bound.add_argument("--out", required=True)

    intersect = sub.add_parser("intersect", help="intersection curve of the tilted surface with the d-cylinder")
    intersect.add_argument("--d", type=float, required=True)
    intersect.add_argument("--lambda", dest="lam", type=float, required=True)
    intersect.add_argument("--steps", type=int, default=256)
    intersect.add_argument("--out", required=True)

    ver = sub.add_parser("verify", help="residual report for a mesh or profile file")
    ver.add_argument("--kind", required=True, choices=("pde", "identity", "meanCurvature", "asymptotic"))
    ver.add_argument("--in", dest="infile", required=True)
    ver.add_argument("--out", required=True)

    sweep = sub.add_parser("sweep", help="moving-plane reflection sweep of a mesh")
    sweep.add_argument("--in", dest="infile", required=True)
    sweep.add_argument("--plane-normal", default="1,0,0")
    sweep.add_argument("--steps", type=int, default=256)
    sweep.add_argument("--tol", type=float, default=1e-9)
    sweep.add_argument("--out", required=True)

    touch = sub.add_parser("touch", help="slide a family surface down onto a mesh until first contact")
    touch.add_argument("--in", dest="infile", required=True)
    touch.add_argument("--family", default="grim", choices=("plane", "grim", "tilted", "bowl", "wing"))
    touch.add_argument("--lambda", dest="lam", type=float, default=2.0)
    touch.add_argument("--R", type=float, default=1.0)
    touch.add_argument("--rmax", type=float, default=2.0)
    touch.add_argument("--h", type=float, default=0.05)
    touch.add_argument("--ntheta", type=int, default=64)
    touch.add_argument("--tol", type=float, default=None)
    touch.add_argument("--out", required=True)
    return parser


def _gen_mesh(args) -> families.SurfaceMesh:
    if args.family == "plane":
        return families.vertical_plane_mesh(args.rmax, args.h)
    if args.family == "grim":
        return families.grim_reaper_mesh(args.h)
    if args.family == "tilted":
        params = families.TiltParams(lam=args.lam, d=args.lam * math.pi / 2.0)
        return families.tilted_grim_reaper_mesh(params, args.h)
    if args.family == "bowl":
        profile = families.bowl_profile(args.rmax, args.h)
        return families.revolve(profile, args.ntheta)
    upper, lower = families.wing_profile(args.R, args.rmax, args.h)
    r, u = families.wing_meridian(upper, lower)
    return families.revolve_path(r, u, args.ntheta)


def _cmd_gen(args) -> None:
    out = str(args.out)
    if out.endswith(".csv"):
        if args.family == "bowl":
            fileio.write_profiles(out, families.bowl_profile(args.rmax, args.h))
        elif args.family == "wing":
            fileio.write_profiles(out, families.wing_profile(args.R, args.rmax, args.h))
        else:
            raise _UsageError("CSV output is only defined for the bowl and wing profiles")
        return
    if not out.endswith(".obj"):
        raise _UsageError("gen output must end in .csv (profile) or .obj (mesh)")
    mesh = _gen_mesh(args)
    if args.seed is not None:
        mesh = families.apply_radial_bump(mesh, args.seed)
    fileio.write_mesh(out, mesh)


def _cmd_bound(args) -> None:
    report = compute_height_bound(args.d)
    fileio.write_json(args.out, report.to_dict())


def _cmd_intersect(args) -> None:
    params = families.TiltParams(lam=args.lam, d=args.d)
    if args.steps < 2:
        raise _UsageError("--steps must be at least 2")
    plus = gamma_curve(params, args.steps, +1)
    minus = gamma_curve(params, args.steps, -1)
    min_z, max_z = gamma_height_extrema(params)
    report = {
        "d": args.d,
        "lambda": args.lam,
        "s": params.s,
        "min_z": min_z,
        "max_z": max_z,
        "difference": max_z - min_z,
        "c_of_s": c_of_s(params.s, args.d),
        "gamma_plus": plus,
        "gamma_minus": minus,
    }
    fileio.write_json(args.out, report)


def _grid_from_graph_mesh(mesh: families.SurfaceMesh):
    """Recover (u field, spacing) from a mesh that samples a graph z = u(x, y)."""
    g = mesh.grid()
    x = g[:, 0, 0]
    y = g[0, :, 1]
    if not (np.allclose(g[:, :, 0], x[:, None], atol=1e-12) and np.allclose(g[:, :, 1], y[None, :], atol=1e-12)):
        raise DomainError("in", "mesh is not a rectangular graph grid")
    hx = np.diff(x)
    hy = np.diff(y)
    if hx.size == 0 or hy.size == 0:
        raise DomainError("in", "graph grid is degenerate")
    h = float(hx[0])
    if not (np.allclose(hx, h, rtol=1e-8) and np.allclose(hy, h, rtol=1e-8)):
        raise DomainError("in", "graph grid spacing must be uniform and equal in x and y")
    return g[:, :, 2], h


def _cmd_verify(args) -> None:
    kind = args.kind
    if kind == "asymptotic":
        profiles = fileio.read_profiles(args.infile)
        profile = profiles[0]
        report = verify.asymptotic_defect(profile, verify.QUADRATIC_LOG_MODEL)
        defects = report.samples[:, 1]
        out = {
            "kind": "asymptotic",
            "h": float(np.max(np.diff(profile.r))),
            "max_residual": float(np.max(np.abs(defects))),
            "l2_residual": float(np.sqrt(np.sum(defects**2))),
            "n_interior": int(defects.size),
            "samples": [[float(r), float(v)] for r, v in report.samples],
        }
        fileio.write_json(args.out, out)
        return
    mesh = fileio.read_mesh(args.infile)
    if kind == "meanCurvature":
        rep = verify.mesh_translator_residual(mesh)
    else:
        u, h = _grid_from_graph_mesh(mesh)
        if kind == "pde":
            rep = verify.graph_translator_residual(u, h)
        else:
            rep = verify.height_identity_residual(u, h)
    fileio.write_json(args.out, rep.to_dict(kind))


def _parse_vector(text: str) -> np.ndarray:
    try:
        parts = [float(p) for p in text.split(",")]
    except ValueError as exc:
        raise _UsageError(f"malformed vector {text!r}") from exc
    if len(parts) != 3:
        raise _UsageError(f"vector must have three components, got {text!r}")
    return np.array(parts)


def _cmd_sweep(args) -> None:
    mesh = fileio.read_mesh(args.infile)
    normal = _parse_vector(getattr(args, "plane_normal"))
    report = comparison.alexandrov_sweep(mesh, normal, n_steps=args.steps, tolerance=args.tol)
    fileio.write_json(args.out, report.to_dict())


def _cmd_touch(args) -> None:
    target = fileio.read_mesh(args.infile)
    slider = _gen_mesh(args)
    top = float(target.vertices[:, 2].max())
    bottom = float(slider.vertices[:, 2].min())
    start_lift = top - bottom + 1.0
    slider = slider.translated((0.0, 0.0, start_lift))
    span = float(slider.vertices[:, 2].max() - target.vertices[:, 2].min()) + 1.0
    result = comparison.first_touch_slide(
        target, slider, (0.0, 0.0, -1.0), (0.0, span), tol=args.tol
    )
    fileio.write_json(args.out, result.to_dict())


_COMMANDS = {
    "gen": _cmd_gen,
    "bound": _cmd_bound,
    "intersect": _cmd_intersect,
    "verify": _cmd_verify,
    "sweep": _cmd_sweep,
    "touch": _cmd_touch,
}


def _emit_error(payload: dict) -> None:
    sys.stderr.write(fileio.dumps_json(payload))


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        _COMMANDS[args.command](args)
    except _UsageError as err:
        _emit_error({"error": "invalid", "message": str(err)})
        return 2
    except DomainError as err:
        _emit_error({"error": "domain", "param": err.param})
        return 3
    except (NotAGraphError, NoContactError, StepSizeError) as err:
        _emit_error({"error": "domain", "param": type(err).__name__})
        return 3
    except FileFormatError as err:
        _emit_error({"error": "io", "message": str(err)})
        return 4
    except OSError as err:
        _emit_error({"error": "io", "message": str(err)})
        return 4
    except TranslatorKitError as err:
        _emit_error({"error": "domain", "param": str(err)})
        return 3
    return 0


def entry() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entry()
