"""Ray tracing through effective metrics.

Rays are null geodesics of H = 1/2 g^{ab} k_a k_b, integrated with a fixed-step
fourth order Runge-Kutta scheme. Metric gradients come from central differences
on the field's evaluator, so any static MetricField can be traced.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field
import logging

import numpy as np
from numpy.typing import ArrayLike

from .const import (
    DEFAULT_DOMAIN_SCALE,
    DEFAULT_STEP,
    DEFAULT_STEPS,
    GRADIENT_STEP,
    INTERFACE_ITERATIONS,
    NULL_LAUNCH_TOLERANCE,
)
from .exceptions import NonNullLaunchError
from .geometrize import IndexProfile, MetricField, index_metric_field
from .tensor_core import Metric4, _readonly, vector3

_LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class RayState:
    """Position x^a, wave covector k_a and affine parameter of one sample."""

    lam: float
    x: np.ndarray
    k: np.ndarray
    H: float


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Samples of one traced ray, stored as arrays."""

    lam: np.ndarray
    x: np.ndarray
    k: np.ndarray
    H: np.ndarray
    exited_domain: bool = False

    def __len__(self) -> int:
        return len(self.lam)

    def __getitem__(self, index: int) -> RayState:
        return RayState(float(self.lam[index]), self.x[index], self.k[index], float(self.H[index]))

    @property
    def max_null_drift(self) -> float:
        """Largest |H| along the trace."""
        return float(np.max(np.abs(self.H)))

    def rows(self) -> np.ndarray:
        """Columns lambda, t, x, y, z, kt, kx, ky, kz, H."""
        return np.column_stack((self.lam, self.x, self.k, self.H))


@dataclass(frozen=True)
class MediumCatalogEntry:
    """Named radial index profile with its domain of validity."""

    name: str
    index: IndexProfile
    bounds: float
    interfaces: tuple[float, ...] = ()
    parameters: dict[str, float] = field(default_factory=dict)

    def metric_field(self) -> MetricField:
        """Lift the profile to a MetricField."""
        return index_metric_field(
            self.index, self.name, interfaces=self.interfaces, bounds=self.bounds
        )


def maxwell_fisheye_index(r: float) -> float:
    """n(r) = 2 / (1 + r^2)."""
    return 2.0 / (1.0 + r * r)


def luneburg_index(r: float) -> float:
    """n(r) = sqrt(2 - r^2) inside the unit sphere, 1 outside."""
    return float(np.sqrt(2.0 - r * r)) if r <= 1.0 else 1.0


def homogeneous(n: float = 1.0) -> MediumCatalogEntry:
    """Constant index n everywhere."""
    return MediumCatalogEntry(
        "homogeneous", lambda _: n, bounds=10.0, parameters={"n": n}
    )


def catalog() -> list[MediumCatalogEntry]:
    """The gradient-index media available by name."""
    return [
        MediumCatalogEntry("maxwell_fisheye", maxwell_fisheye_index, bounds=10.0),
        MediumCatalogEntry("luneburg", luneburg_index, bounds=3.0, interfaces=(1.0,)),
        homogeneous(),
    ]


def catalog_entry(name: str, **parameters: float) -> MediumCatalogEntry:
    """Look up a catalog medium; homogeneous takes the index n."""
    if name == "homogeneous":
        return homogeneous(**parameters)
    for entry in catalog():
        if entry.name == name:
            return entry
    raise KeyError(name)


def hamiltonian(g_inv: Metric4 | ArrayLike, k: ArrayLike) -> float:
    """H = 1/2 g^{ab} k_a k_b."""
    inv = g_inv.components if isinstance(g_inv, Metric4) else np.asarray(g_inv, dtype=float)
    covector = _readonly(k, (4,))
    return float(0.5 * covector @ inv @ covector)


def launch_covector(
    metric_field: MetricField,
    position: ArrayLike,
    direction: ArrayLike,
    omega: float = 1.0,
) -> np.ndarray:
    """Null covector with frequency omega heading along a spatial direction.

    k = (omega, -n omega d) for index fields; otherwise the spatial scale is
    solved from g^{ab} k_a k_b = 0, taking the forward root.
    """
    point = vector3(position)
    d = vector3(direction)
    norm = np.linalg.norm(d)
    if norm == 0:
        raise ValueError("launch direction must be nonzero")
    d = d / norm
    if metric_field.index is not None:
        scale = metric_field.index(float(np.linalg.norm(point)))
    else:
        inv = metric_field.inverse(point)
        a = float(d @ inv[1:, 1:] @ d)
        b = -2.0 * float(inv[0, 1:] @ d)
        c = float(inv[0, 0])
        discriminant = b * b - 4.0 * a * c
        if a == 0 or discriminant < 0:
            raise NonNullLaunchError(f"no null covector along {d!r} at {point!r}")
        roots = ((-b + np.sqrt(discriminant)) / (2 * a), (-b - np.sqrt(discriminant)) / (2 * a))
        scale = max(roots)
        if scale <= 0:
            raise NonNullLaunchError(f"no forward null covector along {d!r} at {point!r}")
    return np.concatenate(([omega], -scale * omega * d))


def project_null(g_inv: ArrayLike, k: ArrayLike) -> np.ndarray:
    """Rescale the spatial part of k so that it becomes null, keeping k_0."""
    inv = np.asarray(g_inv, dtype=float)
    covector = _readonly(k, (4,))
    spatial = covector[1:]
    a = float(spatial @ inv[1:, 1:] @ spatial)
    b = 2.0 * covector[0] * float(inv[0, 1:] @ spatial)
    c = covector[0] ** 2 * inv[0, 0]
    discriminant = b * b - 4.0 * a * c
    if a == 0 or discriminant < 0:
        raise NonNullLaunchError(f"covector {covector!r} cannot be made null")
    root = np.sqrt(discriminant)
    roots = np.array([(-b + root) / (2 * a), (-b - root) / (2 * a)])
    scale = roots[np.argmin(np.abs(roots - 1.0))]
    return np.concatenate(([covector[0]], scale * spatial))


def launch_tolerance(
    g_inv: ArrayLike, k: ArrayLike, null_tol: float = NULL_LAUNCH_TOLERANCE
) -> float:
    """Bound on |H| at launch, relative to |k|^2 max|g^{ab}| and never below null_tol."""
    inv = np.asarray(g_inv, dtype=float)
    covector = np.asarray(k, dtype=float)
    return null_tol * max(1.0, float(covector @ covector) * float(np.max(np.abs(inv))))


class _RayIntegrator:
    """RK4 stepper for one MetricField, aware of its interfaces."""

    def __init__(self, metric_field: MetricField, delta: float) -> None:
        self._field = metric_field
        self._delta = delta
        self._radii = metric_field.interfaces

    def _stencil_center(self, point: np.ndarray, reference: np.ndarray | None) -> np.ndarray:
        """Move a point near an interface onto the reference's side of it."""
        if reference is None or not self._radii:
            return point
        r = float(np.linalg.norm(point))
        ref_r = float(np.linalg.norm(reference))
        margin = 2.0 * self._delta
        for radius in self._radii:
            if abs(r - radius) < margin and r > 0:
                side = 1.0 if ref_r >= radius else -1.0
                return point * ((radius + side * margin) / r)
        return point

    def _inverse_gradient(self, point: np.ndarray) -> np.ndarray:
        """grad[a, b, c] = d_a g^{bc}; the time derivative is zero."""
        grad = np.zeros((4, 4, 4))
        for i in range(3):
            offset = np.zeros(3)
            offset[i] = self._delta
            grad[i + 1] = (
                self._field.inverse(point + offset) - self._field.inverse(point - offset)
            ) / (2.0 * self._delta)
        return grad

    def rhs(self, y: np.ndarray, reference: np.ndarray | None) -> np.ndarray:
        point, k = y[1:4], y[4:]
        inv = self._field.inverse(point)
        grad = self._inverse_gradient(self._stencil_center(point, reference))
        dk = -0.5 * np.einsum("abc,b,c->a", grad, k, k)
        return np.concatenate((inv @ k, dk))

    def rk4(self, y: np.ndarray, h: float, reference: np.ndarray | None) -> np.ndarray:
        k1 = self.rhs(y, reference)
        k2 = self.rhs(y + 0.5 * h * k1, reference)
        k3 = self.rhs(y + 0.5 * h * k2, reference)
        k4 = self.rhs(y + h * k3, reference)
        return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)

    def _crossed(self, start: np.ndarray, end: np.ndarray) -> float | None:
        r0 = float(np.linalg.norm(start[1:4]))
        r1 = float(np.linalg.norm(end[1:4]))
        for radius in self._radii:
            if (r0 - radius) * (r1 - radius) < 0:
                return radius
        return None

    def step(self, y: np.ndarray, h: float) -> np.ndarray:
        """Advance by h, splitting the step where it crosses an interface."""
        tentative = self.rk4(y, h, y[1:4])
        radius = self._crossed(y, tentative)
        if radius is None:
            return tentative

        # Secant iterations on the fraction s of the step that lands on the interface.
        def miss(s: float) -> float:
            return float(np.linalg.norm(self.rk4(y, s * h, y[1:4])[1:4])) - radius

        s0, f0 = 0.0, float(np.linalg.norm(y[1:4])) - radius
        s1, f1 = 1.0, float(np.linalg.norm(tentative[1:4])) - radius
        for _ in range(INTERFACE_ITERATIONS):
            if f1 == f0:
                break
            s0, s1 = s1, float(np.clip(s1 - f1 * (s1 - s0) / (f1 - f0), 0.0, 1.0))
            f0, f1 = f1, miss(s1)
        _LOGGER.debug("Splitting step at interface r=%s, fraction %s", radius, s1)
        landed = self.rk4(y, s1 * h, y[1:4])
        return self.rk4(landed, (1.0 - s1) * h, tentative[1:4])


def trace_ray(
    metric_field: MetricField,
    x0: ArrayLike,
    k0: ArrayLike,
    step: float = DEFAULT_STEP,
    n_steps: int = DEFAULT_STEPS,
    *,
    delta: float | None = None,
    domain_scale: float = DEFAULT_DOMAIN_SCALE,
    null_tol: float = NULL_LAUNCH_TOLERANCE,
    project: bool = False,
) -> Trajectory:
    """Integrate dx^a/dlam = g^{ab} k_b, dk_a/dlam = -1/2 d_a g^{bc} k_b k_c.

    Raises NonNullLaunchError when H(x0, k0) exceeds launch_tolerance, unless project
    rescales k0 onto the null cone first. A ray leaving the field's bounds ends
    the trace with exited_domain set.
    """
    if step <= 0:
        raise ValueError(f"step must be positive, got {step!r}")
    if n_steps < 0:
        raise ValueError(f"n_steps must be non-negative, got {n_steps!r}")
    position = _readonly(x0, (4,))
    covector = _readonly(k0, (4,))
    inv0 = metric_field.inverse(position[1:])
    if project:
        covector = project_null(inv0, covector)
    h0 = hamiltonian(inv0, covector)
    bound = launch_tolerance(inv0, covector, null_tol)
    if abs(h0) > bound:
        raise NonNullLaunchError(f"|H| = {abs(h0)!r} at launch exceeds {bound!r}")

    integrator = _RayIntegrator(
        metric_field, GRADIENT_STEP * domain_scale if delta is None else delta
    )
    y = np.concatenate((position, covector))
    states = [y]
    exited = False
    for _ in range(n_steps):
        y = integrator.step(y, step)
        states.append(y)
        if not metric_field.contains(y[1:4]):
            exited = True
            _LOGGER.warning(
                "Ray left the domain of %s at %s", metric_field.name or "metric", y[1:4]
            )
            break

    ys = np.array(states)
    H = np.array([hamiltonian(metric_field.inverse(s[1:4]), s[4:]) for s in ys])
    lam = step * np.arange(len(ys))
    return Trajectory(lam, ys[:, :4], ys[:, 4:], H, exited)


def trace_fan(
    metric_field: MetricField,
    launches: Sequence[tuple[ArrayLike, ArrayLike]],
    step: float = DEFAULT_STEP,
    n_steps: int = DEFAULT_STEPS,
    **kwargs: float | bool | None,
) -> list[Trajectory]:
    """Trace several (x0, k0) launches in order."""
    return [trace_ray(metric_field, x, k, step, n_steps, **kwargs) for x, k in launches]


def parallel_launches(
    metric_field: MetricField,
    starts: Sequence[ArrayLike],
    direction: ArrayLike,
    omega: float = 1.0,
) -> list[tuple[np.ndarray, np.ndarray]]:
    """(x0, k0) pairs for rays leaving spatial start points along one direction."""
    return [
        (
            np.concatenate(([0.0], vector3(start))),
            launch_covector(metric_field, start, direction, omega),
        )
        for start in starts
    ]


def crossing_point(
    trajectory: Trajectory, radius: float, *, outward: bool = True
) -> np.ndarray | None:
    """Last spatial point where the ray crosses the sphere of the given radius.

    The crossing is interpolated linearly between the two samples around it.
    """
    r = np.linalg.norm(trajectory.x[:, 1:], axis=1) - radius
    if outward:
        hits = np.flatnonzero((r[:-1] < 0) & (r[1:] >= 0))
    else:
        hits = np.flatnonzero((r[:-1] > 0) & (r[1:] <= 0))
    if hits.size == 0:
        return None
    i = hits[-1]
    fraction = r[i] / (r[i] - r[i + 1])
    return trajectory.x[i, 1:] + fraction * (trajectory.x[i + 1, 1:] - trajectory.x[i, 1:])


def closure_distance(trajectory: Trajectory, point: ArrayLike, *, after: float) -> float:
    """Closest approach to a spatial point once the affine parameter exceeds after."""
    late = trajectory.lam > after
    if not np.any(late):
        raise ValueError(f"trajectory ends before lambda = {after!r}")
    return float(np.min(np.linalg.norm(trajectory.x[late, 1:] - vector3(point), axis=1)))


def circle_fit(points: ArrayLike) -> tuple[np.ndarray, float, float]:
    """Least-squares circle through planar points: (center, radius, max deviation)."""
    xy = np.asarray(points, dtype=float)[:, :2]
    system = np.column_stack((xy, np.ones(len(xy))))
    rhs = -np.sum(xy**2, axis=1)
    (d, e, f), *_ = np.linalg.lstsq(system, rhs, rcond=None)
    center = np.array([-d / 2.0, -e / 2.0])
    radius = float(np.sqrt(center @ center - f))
    deviation = float(np.max(np.abs(np.linalg.norm(xy - center, axis=1) - radius)))
    return center, radius, deviation
