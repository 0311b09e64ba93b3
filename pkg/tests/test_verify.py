import math

import numpy as np
import pytest

import translatorkit as tk
from translatorkit.errors import DomainError

PI = math.pi


def bowl_graph_field(h, lo=0.5, hi=1.5):
    """Bowl height sampled smoothly on a uniform Cartesian grid away from r = 0."""
    n = int(round((hi - lo) / h)) + 1
    x = np.linspace(lo, hi, n)
    xx, yy = np.meshgrid(x, x, indexing="ij")
    rr = np.hypot(xx, yy)
    return tk.bowl_heights(rr.ravel(), 1e-3).reshape(rr.shape)


class TestGraphTranslatorResidual:
    def test_constant_field_misses_by_one(self):
        u = np.full((8, 8), 3.7)
        rep = tk.graph_translator_residual(u, 0.1)
        assert rep.max_residual == pytest.approx(1.0, abs=1e-15)
        assert rep.n_interior == 16

    def test_grim_reaper_second_order(self, grim_field):
        maxes = []
        for h in (0.02, 0.01, 0.005):
            rep = tk.graph_translator_residual(grim_field(h), h)
            maxes.append(rep.max_residual)
        assert maxes[0] / maxes[1] >= 3.0
        assert maxes[1] / maxes[2] >= 3.0

    def test_bowl_graph_small_residual(self):
        rep = tk.graph_translator_residual(bowl_graph_field(0.01), 0.01)
        assert rep.max_residual < 1e-5

    def test_l2_consistency(self, grim_field):
        rep = tk.graph_translator_residual(grim_field(0.02), 0.02)
        assert rep.l2_residual <= rep.max_residual * math.sqrt(rep.n_interior)

    def test_grid_too_small(self):
        with pytest.raises(DomainError):
            tk.graph_translator_residual(np.zeros((4, 4)), 0.1)


class TestHeightIdentityResidual:
    def test_constant_field_misses_by_one(self):
        rep = tk.height_identity_residual(np.zeros((6, 6)), 0.2)
        assert rep.max_residual == pytest.approx(1.0, abs=1e-15)

    def test_grim_reaper_second_order(self, grim_field):
        maxes = []
        for h in (0.02, 0.01, 0.005):
            rep = tk.height_identity_residual(grim_field(h), h)
            maxes.append(rep.max_residual)
        assert maxes[0] / maxes[1] >= 3.0
        assert maxes[1] / maxes[2] >= 3.0

    def test_bowl_graph_small_residual(self):
        rep = tk.height_identity_residual(bowl_graph_field(0.01), 0.01)
        assert rep.max_residual < 1e-5

    def test_agrees_with_graph_form_on_exact_solution(self, grim_field):
        h = 0.01
        pde = tk.graph_translator_residual(grim_field(h), h)
        ident = tk.height_identity_residual(grim_field(h), h)
        assert pde.max_residual < 4e-4 and ident.max_residual < 4e-4


class TestMeshMeanCurvature:
    def test_flat_grid_zero(self):
        mesh = tk.graph_mesh(np.linspace(0, 1, 7), np.linspace(0, 1, 7), lambda x, y: 0.0 * x)
        H = tk.mesh_mean_curvature(mesh)
        assert np.nanmax(np.abs(H)) == 0.0

    def test_sphere_trace_convention(self, sphere_band):
        # sum-of-principal-curvatures convention: |H| = 2/R
        for R in (1.0, 2.5):
            H = tk.mesh_mean_curvature(sphere_band(R))
            vals = H[np.isfinite(H)]
            assert np.abs(np.abs(vals) - 2.0 / R).max() < 0.05 * (2.0 / R)

    def test_revolved_bowl_matches_axisymmetric_formula(self, bowl_fine, cap_mesh):
        H = tk.mesh_mean_curvature(cap_mesh)
        g = cap_mesh.grid()
        radii = np.hypot(g[:, 0, 0], g[:, 0, 1])
        r, u = bowl_fine.r, bowl_fine.u
        h = r[1] - r[0]
        du = np.interp(radii, r[1:-1], (u[2:] - u[:-2]) / (2 * h))
        d2u = np.interp(radii, r[1:-1], (u[2:] - 2 * u[1:-1] + u[:-2]) / h**2)
        w = np.sqrt(1.0 + du**2)
        H_exact = d2u / w**3 + du / (radii * w)
        err = np.abs(H[1:-1, :] - H_exact[1:-1, None])
        assert np.nanmax(err) < 5e-3

    def test_rotational_invariance_of_residual(self, cap_mesh):
        H, N = (tk.mesh_mean_curvature(cap_mesh), tk.mesh_unit_normals(cap_mesh))
        res = H - N[:, :, 2]
        interior = res[1:-1, :]
        spread = np.abs(interior - interior[:, :1]).max()
        assert spread <= 1e-10 * max(1.0, np.abs(interior).max())

    def test_boundary_only_mesh_rejected(self):
        mesh = tk.graph_mesh(np.linspace(0, 1, 2), np.linspace(0, 1, 5), lambda x, y: 0.0 * x)
        with pytest.raises(DomainError):
            tk.mesh_translator_residual(mesh)


class TestMeshTranslatorResidual:
    def test_vertical_plane_is_exact(self):
        rep = tk.mesh_translator_residual(tk.vertical_plane_mesh(1.0, 0.1))
        assert rep.max_residual == 0.0

    def test_tilted_cylinder_is_translator(self):
        params = tk.TiltParams(lam=2.0, d=PI)
        rep = tk.mesh_translator_residual(tk.tilted_grim_reaper_mesh(params, 0.02))
        assert rep.max_residual < 5e-4

    def test_revolved_bowl_within_budget(self):
        h = 0.02
        profile = tk.bowl_profile(2.0, h)
        mesh = tk.revolve(profile.restricted(5 * h, 2.0), 256)
        rep = tk.mesh_translator_residual(mesh)
        assert rep.max_residual < 10.0 * h**2


class TestProfileResidual:
    def test_reports_spacing(self, bowl_fine):
        rep = tk.profile_equation_residual(bowl_fine)
        assert rep.h == pytest.approx(0.01, rel=1e-9)

    def test_slope_cap_required_for_wing_neck(self):
        upper, _ = tk.wing_profile(1.0, 2.0, 0.01)
        capped = tk.profile_equation_residual(upper, slope_cap=2.0)
        uncapped = tk.profile_equation_residual(upper)
        assert capped.max_residual < 1e-3
        assert uncapped.max_residual > capped.max_residual


class _ProfileAsModel:
    """Adapter: evaluate a stored profile as a comparison model."""

    label = "profile itself"

    def __init__(self, profile):
        self._profile = profile

    def evaluate(self, r):
        return self._profile.height_at(r)


class TestAsymptoticDefect:
    def test_profile_against_itself_vanishes(self, bowl_far):
        rep = tk.asymptotic_defect(bowl_far, _ProfileAsModel(bowl_far))
        assert np.abs(rep.samples[:, 1]).max() == 0.0

    def test_short_profile_rejected(self, bowl_fine):
        with pytest.raises(DomainError):
            tk.asymptotic_defect(bowl_fine, tk.QUADRATIC_LOG_MODEL)

    def test_candidate_models_grow_unbounded(self, bowl_far):
        # both published-style candidates miss the measured far field; the
        # scaled defect r*(u - model) grows across [10, 100] for each
        for model in (tk.LINEAR_LOG_MODEL, tk.QUADRATIC_LOG_MODEL):
            rep = tk.asymptotic_defect(bowl_far, model)
            r, defect = rep.samples[:, 0], rep.samples[:, 1]
            scaled = np.abs(r * defect)
            lo = scaled[(r >= 10) & (r <= 20)].max()
            hi = scaled[(r >= 50) & (r <= 100)].max()
            assert hi > 10.0 * lo

    def test_fitted_expansion_is_bounded(self, bowl_far):
        model = tk.fit_expansion(bowl_far)
        assert model.coef_r2 == pytest.approx(0.5, abs=1e-4)
        assert model.coef_log == pytest.approx(-1.0, abs=2e-2)
        rep = tk.asymptotic_defect(bowl_far, model)
        r, defect = rep.samples[:, 0], rep.samples[:, 1]
        mask = (r >= 10) & (r <= 100)
        scaled = np.abs(r[mask] * defect[mask])
        lo = scaled[(r[mask] <= 20)].max()
        hi = scaled[(r[mask] >= 50)].max()
        assert hi <= 3.0 * max(lo, 1e-6)
