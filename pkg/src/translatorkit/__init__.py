"""Numerical toolkit for translating solitons of the mean curvature flow.

Builds the classic translator families (grim reaper cylinders, the bowl, and
winglike surfaces), verifies their defining equations on sampled geometry,
evaluates the height bound for compact translators over a plane boundary, and
runs first-contact and moving-plane reflection experiments at desk scale.
"""

from .comparison import (
    ContactResult,
    GraphHalf,
    SweepReport,
    alexandrov_sweep,
    first_touch_family,
    first_touch_slide,
    min_gap,
    reflect_half,
    reflection_defect,
)
from .errors import (
    DomainError,
    FileFormatError,
    NoContactError,
    NotAGraphError,
    StepSizeError,
    TranslatorKitError,
)
from .families import (
    ProfileCurve,
    SurfaceMesh,
    TiltParams,
    apply_radial_bump,
    bowl_heights,
    bowl_profile,
    bump_parameters,
    graph_mesh,
    grim_reaper_cylinder_point,
    grim_reaper_mesh,
    grim_reaper_point,
    revolve,
    revolve_path,
    rotation_about_x,
    tilted_grim_reaper_mesh,
    tilted_grim_reaper_point,
    vertical_plane_mesh,
    wing_meridian,
    wing_profile,
)
from .height_bound import (
    GammaPoint,
    HeightBoundReport,
    c_of_s,
    c_prime,
    gamma_curve,
    gamma_height_extrema,
    gamma_pm,
    height_bound,
    minimize_c,
    s0,
)
from .verify import (
    AsymptoticDefectReport,
    ExpansionModel,
    LINEAR_LOG_MODEL,
    QUADRATIC_LOG_MODEL,
    ResidualReport,
    asymptotic_defect,
    fit_expansion,
    graph_translator_residual,
    height_identity_residual,
    mesh_mean_curvature,
    mesh_translator_residual,
    mesh_unit_normals,
    profile_equation_residual,
)

__version__ = "0.1.0"
