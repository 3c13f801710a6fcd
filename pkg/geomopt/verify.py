"""Numerical checks of the field equations and their covariant forms."""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass
import logging

import numpy as np
from numpy.typing import ArrayLike

from .const import DEFAULT_C, DEFAULT_TOLERANCE, VELOCITY_NORM_TOLERANCE
from .constitutive import IsotropicMedium
from .exceptions import (
    AsymmetricConnectionError,
    GridTooSmallError,
    UnnormalizedVelocityError,
)
from .tensor_core import (
    FieldKind,
    FieldTensor,
    Metric4,
    Variance,
    _readonly,
    _scale,
    dual_F,
    dual_G,
    raise_F,
    raise_indices,
)

_LOGGER = logging.getLogger(__name__)

Evaluator = Callable[[np.ndarray], ArrayLike]


@dataclass(frozen=True, eq=False)
class Connection:
    """Christoffel symbols stored as gamma[d, a, b] = Gamma^d_{ab}."""

    gamma: np.ndarray

    def __post_init__(self) -> None:
        """Freeze the components."""
        object.__setattr__(self, "gamma", _readonly(self.gamma, (4, 4, 4)))

    @classmethod
    def zero(cls) -> Connection:
        """Connection of flat Cartesian coordinates."""
        return cls(np.zeros((4, 4, 4)))

    @classmethod
    def from_metric(cls, g: Metric4, dg: ArrayLike) -> Connection:
        """Levi-Civita connection from g and dg[c, a, b] = d_c g_{ab}."""
        derivative = _readonly(dg, (4, 4, 4))
        g_inv = g.inverse
        gamma = 0.5 * (
            np.einsum("dm,amb->dab", g_inv, derivative)
            + np.einsum("dm,bma->dab", g_inv, derivative)
            - np.einsum("dm,mab->dab", g_inv, derivative)
        )
        return cls(gamma)

    @property
    def asymmetry(self) -> float:
        """max |Gamma^d_{ab} - Gamma^d_{ba}|."""
        return float(np.max(np.abs(self.gamma - self.gamma.transpose(0, 2, 1))))


@dataclass(frozen=True)
class GridSpec:
    """Uniform grid over (t, x, y, z); an axis with one point is not differentiated."""

    origin: tuple[float, float, float, float]
    spacing: tuple[float, float, float, float]
    shape: tuple[int, int, int, int]

    def __post_init__(self) -> None:
        """Validate lengths and spacing."""
        if not (len(self.origin) == len(self.spacing) == len(self.shape) == 4):
            raise ValueError("grid needs four origin, spacing and shape entries")
        if any(h <= 0 for h in self.spacing):
            raise ValueError(f"grid spacing must be positive, got {self.spacing}")
        if any(n < 1 for n in self.shape):
            raise ValueError(f"grid shape must be positive, got {self.shape}")

    def coordinates(self) -> tuple[np.ndarray, ...]:
        """The 1D coordinate arrays of the four axes."""
        return tuple(
            o + h * np.arange(n)
            for o, h, n in zip(self.origin, self.spacing, self.shape, strict=True)
        )

    def points(self) -> np.ndarray:
        """Array of shape (*shape, 4) holding every grid point."""
        return np.stack(np.meshgrid(*self.coordinates(), indexing="ij"), axis=-1)

    def interior(self, width: int) -> tuple[slice, ...]:
        """Slices that drop width points from each differentiated axis."""
        return tuple(
            slice(width, -width) if n > 1 else slice(None) for n in self.shape
        )

    def require_points(self, minimum: int) -> None:
        """Raise GridTooSmallError unless differentiated axes have minimum points."""
        short = [n for n in self.shape if 1 < n < minimum]
        if short:
            raise GridTooSmallError(
                f"differentiated axes need at least {minimum} points, got {self.shape}"
            )


@dataclass(frozen=True, eq=False)
class FieldGrid:
    """Samples of a rank-2 field tensor on a grid; values has shape (*shape, 4, 4)."""

    grid: GridSpec
    values: np.ndarray
    variance: Variance
    kind: FieldKind

    def __post_init__(self) -> None:
        """Check the sample shape and freeze."""
        values = _readonly(self.values, (*self.grid.shape, 4, 4))
        object.__setattr__(self, "values", values)

    @classmethod
    def sample(
        cls,
        grid: GridSpec,
        evaluator: Callable[[np.ndarray], FieldTensor],
    ) -> FieldGrid:
        """Evaluate a FieldTensor callback at every grid point."""
        points = grid.points().reshape(-1, 4)
        first = evaluator(points[0])
        values = np.array([first.components] + [evaluator(p).components for p in points[1:]])
        return cls(grid, values.reshape(*grid.shape, 4, 4), first.variance, first.kind)


def _sample(grid: GridSpec, evaluator: Evaluator) -> np.ndarray:
    points = grid.points().reshape(-1, 4)
    values = np.array([np.asarray(evaluator(p), dtype=float) for p in points])
    return values.reshape(*grid.shape, *values.shape[1:])


def _partials(values: np.ndarray, grid: GridSpec) -> np.ndarray:
    """Central differences along the four grid axes.

    Returns shape (*shape, 4, *component_shape) with the derivative index first
    among the component slots; axes with a single point get zero derivative.
    """
    derivatives = []
    for axis, (n, h) in enumerate(zip(grid.shape, grid.spacing, strict=True)):
        if n == 1:
            derivatives.append(np.zeros_like(values))
        else:
            derivatives.append(np.gradient(values, h, axis=axis))
    return np.stack(derivatives, axis=4)


def cyclic_partial_sum(dF: ArrayLike) -> np.ndarray:
    """S_{abc} = dF_{abc} + dF_{bca} + dF_{cab} with dF_{abc} = d_a F_{bc}."""
    d = np.asarray(dF, dtype=float)
    return d + np.einsum("...bca->...abc", d) + np.einsum("...cab->...abc", d)


def cyclic_covariant_sum(
    dF: ArrayLike,
    F: FieldTensor | ArrayLike,
    connection: Connection,
    *,
    strict: bool = True,
    tol: float = DEFAULT_TOLERANCE,
) -> np.ndarray:
    """Cyclic sum of nabla_a F_{bc} = d_a F_{bc} - Gamma^d_{ab} F_{dc} - Gamma^d_{ac} F_{bd}.

    With strict, a connection that is not symmetric in its lower indices is
    rejected. Passing strict=False and raw components is how the negative
    controls break the cancellation on purpose.
    """
    if strict and connection.asymmetry > tol * max(_scale(connection.gamma), 1.0):
        raise AsymmetricConnectionError(
            f"connection asymmetry {connection.asymmetry!r} exceeds tolerance"
        )
    if isinstance(F, FieldTensor):
        F.require(Variance.COVARIANT)
        f = F.components
    else:
        f = np.asarray(F, dtype=float)
    gamma = connection.gamma
    nabla = (
        np.asarray(dF, dtype=float)
        - np.einsum("dab,dc->abc", gamma, f)
        - np.einsum("dac,bd->abc", gamma, f)
    )
    return cyclic_partial_sum(nabla)


def bianchi_residual_grid(
    grid: GridSpec,
    potential: Evaluator | None = None,
    field: Evaluator | None = None,
) -> float:
    """Interior max-abs of the discrete cyclic sum of F.

    potential(point) returns A_a and F is formed by central differences, so the
    cyclic sum is taken with nested stencils. field(point) returns F_{ab}
    directly and shows the O(h^2) truncation error of a single stencil.
    """
    if (potential is None) == (field is None):
        raise ValueError("pass exactly one of potential and field")
    if potential is not None:
        grid.require_points(5)
        dA = _partials(_sample(grid, potential), grid)
        F = dA - np.swapaxes(dA, -1, -2)
        interior = grid.interior(2)
    else:
        grid.require_points(3)
        F = _sample(grid, field)
        interior = grid.interior(1)
    residual = cyclic_partial_sum(_partials(F, grid))[interior]
    _LOGGER.debug("Bianchi residual over %s interior points", residual.shape[:4])
    return float(np.max(np.abs(residual)))


def _density_grid(
    grid: GridSpec, gamma: Metric4 | Callable[[np.ndarray], Metric4] | None
) -> np.ndarray:
    if gamma is None:
        return np.ones(grid.shape)
    if isinstance(gamma, Metric4):
        return np.full(grid.shape, gamma.sqrt_minus_det)
    return _sample(grid, lambda p: gamma(p).sqrt_minus_det)


def divergence_residual_field(
    G: FieldGrid,
    gamma: Metric4 | Callable[[np.ndarray], Metric4] | None = None,
    current: ArrayLike | None = None,
    *,
    c: float = DEFAULT_C,
) -> np.ndarray:
    """Interior samples of (1/sqrt(-gamma)) d_a(sqrt(-gamma) G^{ab}) - (4 pi / c) j^b.

    current holds j^b with shape (*shape, 4); None means no sources.
    """
    if G.variance is not Variance.CONTRAVARIANT or G.kind is not FieldKind.G:
        raise ValueError(f"expected contravariant G samples, got {G.variance} {G.kind}")
    grid = G.grid
    grid.require_points(3)
    density = _density_grid(grid, gamma)
    dW = _partials(density[..., None, None] * G.values, grid)
    residual = np.einsum("...aab->...b", dW) / density[..., None]
    if current is not None:
        residual = residual - (4.0 * np.pi / c) * np.asarray(current, dtype=float)
    return residual[grid.interior(1)]


def divergence_residual(
    G: FieldGrid,
    gamma: Metric4 | Callable[[np.ndarray], Metric4] | None = None,
    current: ArrayLike | None = None,
    *,
    c: float = DEFAULT_C,
) -> float:
    """Max-abs of divergence_residual_field."""
    return float(np.max(np.abs(divergence_residual_field(G, gamma, current, c=c))))


def minkowski_projection_residual(
    F: FieldTensor,
    G: FieldTensor,
    m: IsotropicMedium,
    u4: ArrayLike,
    g: Metric4 | None = None,
    *,
    c: float = DEFAULT_C,
    tol: float = VELOCITY_NORM_TOLERANCE,
) -> tuple[float, float]:
    """Residuals of G^{ab} u_b = eps F^{ab} u_b and *F^{ab} u_b = mu *G^{ab} u_b.

    F is covariant, G contravariant; u4 must satisfy g_{ab} u^a u^b = c^2.
    """
    F.require(Variance.COVARIANT, FieldKind.F)
    G.require(Variance.CONTRAVARIANT, FieldKind.G)
    metric = Metric4.minkowski() if g is None else g
    u = _readonly(u4, (4,))
    norm = float(u @ metric.components @ u)
    if abs(norm - c * c) > tol * c * c:
        raise UnnormalizedVelocityError(f"g(u, u) = {norm!r}, expected {c * c!r}")
    u_lower = metric.components @ u

    electric = G.components @ u_lower - m.eps * (raise_F(F, metric).components @ u_lower)
    g_dual_upper = raise_indices(dual_G(G, metric), metric).components
    magnetic = dual_F(F, metric).components @ u_lower - m.mu * (g_dual_upper @ u_lower)
    return float(np.max(np.abs(electric))), float(np.max(np.abs(magnetic)))


def convergence_order(residual_coarse: float, residual_fine: float) -> float:
    """Observed order log2(coarse / fine) for a halved spacing."""
    if residual_coarse <= 0 or residual_fine <= 0:
        raise ValueError("residuals must be positive to measure an order")
    return float(np.log2(residual_coarse / residual_fine))
