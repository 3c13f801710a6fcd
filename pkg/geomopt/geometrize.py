"""Maps between effective metrics and impedance-matched media.

The forward map takes a static metric g (and, in curvilinear coordinates, the
background metric gamma of the coordinate system) to eps^{ij} = mu^{ij} and the
coupling covector w_i. The inverse map lifts an isotropic index n onto a metric.
"""

from __future__ import annotations

from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
import logging

import numpy as np
from numpy.typing import ArrayLike

from .const import (
    COORDINATE_SYSTEMS,
    DEFAULT_C,
    FLAG_NEGATIVE_G00,
    UNIT_INDEX_TOLERANCE,
)
from .constitutive import MaterialTensors
from .exceptions import NonPositiveIndexError, UnitIndexSingularityError
from .tensor_core import (
    FieldKind,
    FieldTensor,
    Metric4,
    Variance,
    levi_civita_3,
    vector3,
)

_LOGGER = logging.getLogger(__name__)

IndexProfile = Callable[[float], float]


@dataclass(frozen=True)
class GeometrizationResult:
    """Medium produced by the forward map, with the densities it used."""

    material: MaterialTensors
    sqrt_minus_g: float
    sqrt_minus_gamma: float
    g00: float
    warnings: tuple[str, ...] = ()


@dataclass(frozen=True)
class MetricField:
    """Static metric over space.

    interfaces lists radii where the metric is continuous but not smooth;
    bounds is the radius of the domain, None for all of space.
    """

    evaluator: Callable[[np.ndarray], Metric4]
    name: str | None = None
    index: IndexProfile | None = None
    interfaces: tuple[float, ...] = ()
    bounds: float | None = None
    inverse_evaluator: Callable[[np.ndarray], np.ndarray] | None = field(
        default=None, repr=False
    )

    def metric(self, position: ArrayLike) -> Metric4:
        """Metric at a spatial position."""
        return self.evaluator(np.asarray(position, dtype=float))

    def inverse(self, position: ArrayLike) -> np.ndarray:
        """Inverse metric components g^{ab} at a spatial position."""
        point = np.asarray(position, dtype=float)
        if self.inverse_evaluator is not None:
            return self.inverse_evaluator(point)
        return self.evaluator(point).inverse

    def contains(self, position: ArrayLike) -> bool:
        """Whether the position lies inside the domain."""
        if self.bounds is None:
            return True
        return bool(np.linalg.norm(position) <= self.bounds)


def _geometrize(g: Metric4, sqrt_minus_gamma: float) -> GeometrizationResult:
    g00 = g.require_g00()
    root = g.sqrt_minus_det
    eps = -(root / sqrt_minus_gamma) / g00 * g.inverse[1:, 1:]
    w = g.components[1:, 0] / g00
    warnings: tuple[str, ...] = ()
    if g00 < 0:
        _LOGGER.warning("g_00 = %s is negative, eps may be indefinite", g00)
        warnings = (FLAG_NEGATIVE_G00,)
    material = MaterialTensors(eps, eps.copy(), w)
    return GeometrizationResult(material, root, sqrt_minus_gamma, g00, warnings)


def plebanski_cartesian(g: Metric4) -> GeometrizationResult:
    """eps^{ij} = mu^{ij} = -(sqrt(-g) / g_00) g^{ij}, w_i = g_{i0} / g_00.

    g^{ij} is the spatial block of the full inverse metric.
    """
    return _geometrize(g, 1.0)


def plebanski_curvilinear(g: Metric4, gamma: Metric4) -> GeometrizationResult:
    """Forward map relative to the coordinate metric gamma.

    With gamma = eta the result equals plebanski_cartesian(g) bit for bit.
    """
    return _geometrize(g, gamma.sqrt_minus_det)


def geometrized_constitutive(
    res: GeometrizationResult, E: ArrayLike, H: ArrayLike
) -> tuple[np.ndarray, np.ndarray]:
    """D^i = eps^{ij} E_j + e^{ijk} w_j H_k and B^i = mu^{ij} H_j - e^{ijk} w_j E_k."""
    m = res.material
    e, h = vector3(E), vector3(H)
    d = m.eps @ e + np.cross(m.w, h)
    b = m.mu @ h - np.cross(m.w, e)
    return vector3(d), vector3(b)


def fourdim_constitutive(
    g: Metric4, gamma: Metric4 | None, F: FieldTensor
) -> FieldTensor:
    """G^{ab} = (sqrt(-g) / sqrt(-gamma)) g^{ac} g^{bd} F_{cd}; gamma None means eta."""
    F.require(Variance.COVARIANT, FieldKind.F)
    density = g.sqrt_minus_det / (1.0 if gamma is None else gamma.sqrt_minus_det)
    g_inv = g.inverse
    components = density * np.einsum("ac,bd,cd->ab", g_inv, g_inv, F.components)
    return FieldTensor(components, Variance.CONTRAVARIANT, FieldKind.G)


def _reduced_spatial(g: Metric4) -> np.ndarray:
    """A_{ij} = g_{ij} - g_{0i} g_{0j} / g_00."""
    gc = g.components
    return gc[1:, 1:] - np.outer(gc[0, 1:], gc[0, 1:]) / g.require_g00()


def _reconstruct(
    g: Metric4, gamma: Metric4 | None, induction: ArrayLike, other: ArrayLike, sign: float
) -> np.ndarray:
    gc = g.components
    density = (1.0 if gamma is None else gamma.sqrt_minus_det) / g.sqrt_minus_det
    coupling = np.einsum("j,ik,jkl,l->i", gc[0, 1:], gc[1:, 1:], levi_civita_3(), vector3(other))
    return vector3(
        density * (-g.g00 * (_reduced_spatial(g) @ vector3(induction)) + sign * coupling)
    )


def reconstruct_E(
    g: Metric4, D: ArrayLike, H: ArrayLike, gamma: Metric4 | None = None
) -> np.ndarray:
    """E_i = (sqrt(-gamma)/sqrt(-g)) (-g_00 A_ij D^j - g_{0j} g_{ik} e^{jkl} H_l)."""
    return _reconstruct(g, gamma, D, H, -1.0)


def reconstruct_H(
    g: Metric4, B: ArrayLike, E: ArrayLike, gamma: Metric4 | None = None
) -> np.ndarray:
    """H_i = (sqrt(-gamma)/sqrt(-g)) (-g_00 A_ij B^j + g_{0j} g_{ik} e^{jkl} E_l)."""
    return _reconstruct(g, gamma, B, E, 1.0)


def _check_index(n: float) -> float:
    if not (np.isfinite(n) and n > 0):
        raise NonPositiveIndexError(f"refractive index must be positive, got {n!r}")
    return float(n)


def isotropic_metric_from_index(n: float, gamma: Metric4 | None = None) -> Metric4:
    """Metric whose forward map is the isotropic medium eps = mu = n.

    Without gamma this is diag(1, -n^2, -n^2, -n^2). With gamma the spatial
    block of gamma is scaled by n^2 and g_00 = gamma_00.
    """
    n = _check_index(n)
    n2 = n * n
    if gamma is None:
        return Metric4.diagonal(1.0, -n2, -n2, -n2)
    components = np.array(gamma.components)
    components[1:, 1:] *= n2
    return Metric4(components)


def index_metric_field(
    profile: IndexProfile,
    name: str | None = None,
    *,
    interfaces: Sequence[float] = (),
    bounds: float | None = None,
) -> MetricField:
    """Lift a radial index profile n(r) to a Cartesian MetricField."""

    def evaluate(position: np.ndarray) -> Metric4:
        return isotropic_metric_from_index(profile(float(np.linalg.norm(position))))

    def evaluate_inverse(position: np.ndarray) -> np.ndarray:
        n = _check_index(profile(float(np.linalg.norm(position))))
        inv = -1.0 / (n * n)
        return np.diag([1.0, inv, inv, inv])

    return MetricField(
        evaluate,
        name=name,
        index=profile,
        interfaces=tuple(float(r) for r in interfaces),
        bounds=bounds,
        inverse_evaluator=evaluate_inverse,
    )


def constant_metric_field(g: Metric4, name: str | None = None) -> MetricField:
    """MetricField that returns the same metric everywhere."""
    g_inv = g.inverse
    return MetricField(lambda _: g, name=name, inverse_evaluator=lambda _: g_inv)


def coordinate_metric(system: str, point: ArrayLike) -> Metric4:
    """Vacuum metric of a coordinate system at a point.

    spherical points are (r, theta, phi), cylindrical points are (rho, phi, z).
    """
    p = vector3(point)
    if system == "cartesian":
        return Metric4.minkowski()
    if system == "spherical":
        r, theta = p[0], p[1]
        return Metric4.diagonal(1.0, -1.0, -(r**2), -((r * np.sin(theta)) ** 2))
    if system == "cylindrical":
        return Metric4.diagonal(1.0, -1.0, -(p[0] ** 2), -1.0)
    raise ValueError(f"unknown coordinate system {system!r}, expected one of {COORDINATE_SYSTEMS}")


def leonhardt_velocity(
    g: Metric4,
    n: float,
    *,
    c: float = DEFAULT_C,
    tol: float = UNIT_INDEX_TOLERANCE,
) -> np.ndarray:
    """Frame velocity u_i = (g_{i0} / g_00) c sqrt|det g_{ij}| / (n^2 - 1)."""
    n = _check_index(n)
    denominator = n * n - 1.0
    if abs(denominator) <= tol:
        raise UnitIndexSingularityError(f"n = {n!r} is too close to 1")
    w = g.components[1:, 0] / g.require_g00()
    spatial_det = abs(float(np.linalg.det(g.spatial)))
    return vector3(w * c * np.sqrt(spatial_det) / denominator)


def metric_identity_residual(g: Metric4) -> float:
    """max |(g_{ik} - g_{0i} g_{0k} / g_00) g^{kj} - delta_i^j|."""
    product = _reduced_spatial(g) @ g.inverse[1:, 1:]
    return float(np.max(np.abs(product - np.eye(3))))
