"""Shared fixtures: solved profiles are expensive, so they are session-scoped."""

import math

import numpy as np
import pytest

import translatorkit as tk


@pytest.fixture(scope="session")
def bowl_fine():
    """Bowl profile out to r = 2 at step 0.01."""
    return tk.bowl_profile(2.0, 0.01)


@pytest.fixture(scope="session")
def bowl_far():
    """Bowl profile out to r = 100, for far-field studies."""
    return tk.bowl_profile(100.0, 0.01)


@pytest.fixture(scope="session")
def cap_mesh(bowl_fine):
    """Revolved bowl cap (pole row dropped) with azimuth count 32."""
    return tk.revolve(bowl_fine.restricted(0.05, 1.75), 32)


@pytest.fixture
def sphere_band():
    """Factory for a latitude band of a sphere, wrapped in azimuth."""

    def make(radius, nu=17, nv=32, phi_margin=0.2):
        phi = np.linspace(phi_margin, math.pi - phi_margin, nu)
        theta = 2.0 * math.pi * np.arange(nv) / nv
        pp, tt = np.meshgrid(phi, theta, indexing="ij")
        verts = np.stack(
            [
                radius * np.sin(pp) * np.cos(tt),
                radius * np.sin(pp) * np.sin(tt),
                radius * np.cos(pp),
            ],
            axis=2,
        ).reshape(-1, 3)
        return tk.SurfaceMesh(verts, nu, nv, wrap=True)

    return make


@pytest.fixture
def grim_field():
    """Factory for the grim reaper cylinder field -log cos x on a uniform grid."""

    def make(h, x_half=1.5, y_len=1.0):
        nx = 2 * int(round(x_half / h)) + 1
        ny = int(round(y_len / h)) + 1
        x = np.linspace(-x_half, x_half, nx)
        u = np.repeat((-np.log(np.cos(x)))[:, None], ny, axis=1)
        return u

    return make
