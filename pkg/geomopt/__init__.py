"""Effective-metric optics: metrics to media, media to metrics, and rays through both."""

from __future__ import annotations

from .constitutive import (
    IsotropicMedium,
    LambdaTensor,
    MaterialTensors,
    MediumVelocity,
    apply_constitutive_3d,
    apply_isotropic_factored,
    apply_lambda,
    four_velocity,
    invert_isotropic_factored,
    isotropic_lambda_factored,
    lambda_from_eps_mu,
    minkowski_moving_3d,
    tamm_moving_anisotropic_3d,
)
from .exceptions import GeomOptError
from .geometrize import (
    GeometrizationResult,
    MetricField,
    coordinate_metric,
    fourdim_constitutive,
    geometrized_constitutive,
    index_metric_field,
    isotropic_metric_from_index,
    leonhardt_velocity,
    metric_identity_residual,
    plebanski_cartesian,
    plebanski_curvilinear,
    reconstruct_E,
    reconstruct_H,
)
from .raytrace import (
    MediumCatalogEntry,
    RayState,
    Trajectory,
    catalog,
    hamiltonian,
    launch_covector,
    trace_fan,
    trace_ray,
)
from .tensor_core import (
    FieldKind,
    FieldTensor,
    Metric4,
    Variance,
    alternating_tensor,
    build_F_lower,
    build_G_upper,
    dual_F,
    dual_G,
    extract_DH,
    extract_EB,
    hodge_dual,
    lower_F,
    lower_G,
    metric_inverse,
    raise_F,
    raise_G,
)
from .verify import (
    Connection,
    FieldGrid,
    GridSpec,
    bianchi_residual_grid,
    convergence_order,
    cyclic_covariant_sum,
    cyclic_partial_sum,
    divergence_residual,
    minkowski_projection_residual,
)

__all__ = [
    "Connection",
    "FieldGrid",
    "FieldKind",
    "FieldTensor",
    "GeomOptError",
    "GeometrizationResult",
    "GridSpec",
    "IsotropicMedium",
    "LambdaTensor",
    "MaterialTensors",
    "MediumCatalogEntry",
    "MediumVelocity",
    "Metric4",
    "MetricField",
    "RayState",
    "Trajectory",
    "Variance",
    "alternating_tensor",
    "apply_constitutive_3d",
    "apply_isotropic_factored",
    "apply_lambda",
    "bianchi_residual_grid",
    "build_F_lower",
    "build_G_upper",
    "catalog",
    "convergence_order",
    "coordinate_metric",
    "cyclic_covariant_sum",
    "cyclic_partial_sum",
    "divergence_residual",
    "dual_F",
    "dual_G",
    "extract_DH",
    "extract_EB",
    "four_velocity",
    "fourdim_constitutive",
    "geometrized_constitutive",
    "hamiltonian",
    "hodge_dual",
    "index_metric_field",
    "invert_isotropic_factored",
    "isotropic_lambda_factored",
    "isotropic_metric_from_index",
    "lambda_from_eps_mu",
    "launch_covector",
    "leonhardt_velocity",
    "lower_F",
    "lower_G",
    "metric_identity_residual",
    "metric_inverse",
    "minkowski_moving_3d",
    "minkowski_projection_residual",
    "plebanski_cartesian",
    "plebanski_curvilinear",
    "raise_F",
    "raise_G",
    "reconstruct_E",
    "reconstruct_H",
    "tamm_moving_anisotropic_3d",
    "trace_fan",
    "trace_ray",
]
