"""Three- and four-dimensional constitutive relations."""

from __future__ import annotations

from dataclasses import dataclass
import logging
from typing import Literal

import numpy as np
from numpy.typing import ArrayLike

from .const import AXIS_ALIGNMENT_TOLERANCE, DEFAULT_C, DEFAULT_TOLERANCE
from .exceptions import (
    MisalignedVelocityError,
    NonPositiveMediumError,
    SingularMuError,
    SingularSystemError,
    SuperluminalVelocityError,
)
from .tensor_core import (
    FieldKind,
    FieldTensor,
    Variance,
    _readonly,
    _scale,
    levi_civita_3,
    vector3,
)

_LOGGER = logging.getLogger(__name__)

MovingForm = Literal["first_order", "exact"]


@dataclass(frozen=True, eq=False)
class MaterialTensors:
    """Permittivity eps^{ij}, permeability mu^{ij} and coupling covector w_i."""

    eps: np.ndarray
    mu: np.ndarray
    w: np.ndarray

    def __post_init__(self) -> None:
        """Freeze the components."""
        object.__setattr__(self, "eps", _readonly(self.eps, (3, 3)))
        object.__setattr__(self, "mu", _readonly(self.mu, (3, 3)))
        object.__setattr__(self, "w", vector3(self.w))

    @classmethod
    def vacuum(cls) -> MaterialTensors:
        """Return eps = mu = identity, w = 0."""
        return cls(np.eye(3), np.eye(3), np.zeros(3))


@dataclass(frozen=True, eq=False)
class LambdaTensor:
    """Constitutive tensor lambda^{ab}_{cd}, antisymmetric in each index pair."""

    components: np.ndarray
    tol: float = DEFAULT_TOLERANCE

    def __post_init__(self) -> None:
        """Check pair antisymmetry and freeze."""
        lam = _readonly(self.components, (4, 4, 4, 4))
        bound = self.tol * max(_scale(lam), 1.0)
        if np.max(np.abs(lam + lam.transpose(1, 0, 2, 3))) > bound or np.max(
            np.abs(lam + lam.transpose(0, 1, 3, 2))
        ) > bound:
            raise ValueError("lambda must be antisymmetric in both index pairs")
        object.__setattr__(self, "components", lam)


@dataclass(frozen=True)
class IsotropicMedium:
    """Scalar permittivity and permeability."""

    eps: float
    mu: float

    def __post_init__(self) -> None:
        """Reject non-positive values."""
        if not (self.eps > 0 and self.mu > 0):
            raise NonPositiveMediumError(
                f"eps={self.eps!r} and mu={self.mu!r} must be positive"
            )

    @property
    def index(self) -> float:
        """Refractive index sqrt(eps * mu)."""
        return float(np.sqrt(self.eps * self.mu))


@dataclass(frozen=True, eq=False)
class MediumVelocity:
    """Three-velocity of a medium in the same units as c."""

    u: np.ndarray
    c: float = DEFAULT_C

    def __post_init__(self) -> None:
        """Reject |u| >= c."""
        object.__setattr__(self, "u", vector3(self.u))
        if not self.c > 0:
            raise ValueError(f"c must be positive, got {self.c!r}")
        if np.linalg.norm(self.u) >= self.c:
            raise SuperluminalVelocityError(
                f"|u| = {np.linalg.norm(self.u)!r} is not below c = {self.c!r}"
            )

    @property
    def beta(self) -> np.ndarray:
        """The vector u / c."""
        return self.u / self.c


def _cross_matrix(v: np.ndarray) -> np.ndarray:
    """Matrix K with K @ a == v x a."""
    return np.einsum("ijk,j->ik", levi_civita_3(), v)


def apply_constitutive_3d(
    m: MaterialTensors, E: ArrayLike, H: ArrayLike
) -> tuple[np.ndarray, np.ndarray]:
    """Return D^i = eps^{ij} E_j and B^i = mu^{ij} H_j for a medium without coupling."""
    if np.any(m.w != 0):
        raise ValueError("coupled media need geometrize.geometrized_constitutive")
    return vector3(m.eps @ vector3(E)), vector3(m.mu @ vector3(H))


def invert_mu(mu: ArrayLike, *, tol: float = DEFAULT_TOLERANCE) -> np.ndarray:
    """Invert a permeability matrix, raising SingularMuError when it is singular."""
    matrix = _readonly(mu, (3, 3))
    if abs(np.linalg.det(matrix)) <= tol * _scale(matrix) ** 3:
        raise SingularMuError("permeability matrix is singular")
    try:
        return np.linalg.inv(matrix)
    except np.linalg.LinAlgError as err:
        raise SingularMuError("permeability matrix is singular") from err


def lambda_from_eps_mu(
    eps: ArrayLike,
    mu_inv: ArrayLike | None = None,
    *,
    mu: ArrayLike | None = None,
) -> LambdaTensor:
    """Build lambda^{ab}_{cd} from eps^i_j and (mu^-1)^l_k.

    lambda^{0i}_{0j} = eps^i_j / 2, the mixed time-space blocks vanish and
    lambda^{ij}_{mn} = e^{ijk} e_{lmn} (mu^-1)^l_k / 2. Pass either mu_inv or mu.
    """
    if (mu_inv is None) == (mu is None):
        raise ValueError("pass exactly one of mu_inv and mu")
    eps3 = _readonly(eps, (3, 3))
    inv = _readonly(mu_inv, (3, 3)) if mu_inv is not None else invert_mu(mu)

    lam = np.zeros((4, 4, 4, 4))
    half = 0.5 * eps3
    lam[0, 1:, 0, 1:] = half
    lam[1:, 0, 0, 1:] = -half
    lam[0, 1:, 1:, 0] = -half
    lam[1:, 0, 1:, 0] = half
    e3 = levi_civita_3()
    lam[1:, 1:, 1:, 1:] = 0.5 * np.einsum("ijk,lmn,lk->ijmn", e3, e3, inv)
    return LambdaTensor(lam)


def apply_lambda(lam: LambdaTensor, F: FieldTensor) -> FieldTensor:
    """Return G^{ab} = lambda^{ab}_{cd} F^{cd}."""
    F.require(Variance.CONTRAVARIANT, FieldKind.F)
    components = np.einsum("abcd,cd->ab", lam.components, F.components)
    return FieldTensor(components, Variance.CONTRAVARIANT, FieldKind.G)


def isotropic_lambda_factored(m: IsotropicMedium) -> tuple[np.ndarray, np.ndarray]:
    """Return the diagonal factors (lambda_{ab}, lambda^{ab}) of a medium at rest."""
    root_mu = np.sqrt(m.mu)
    lower = np.diag([1.0 / (m.eps * root_mu), -root_mu, -root_mu, -root_mu])
    upper = np.diag([m.eps * root_mu, -1.0 / root_mu, -1.0 / root_mu, -1.0 / root_mu])
    return lower, upper


def apply_isotropic_factored(m: IsotropicMedium, F: FieldTensor) -> FieldTensor:
    """G^{ab} = lambda^{ac} lambda^{bd} F_{cd} with the factored tensor."""
    F.require(Variance.COVARIANT, FieldKind.F)
    _, upper = isotropic_lambda_factored(m)
    components = np.einsum("ac,bd,cd->ab", upper, upper, F.components)
    return FieldTensor(components, Variance.CONTRAVARIANT, FieldKind.G)


def invert_isotropic_factored(m: IsotropicMedium, G: FieldTensor) -> FieldTensor:
    """F_{ab} = lambda_{ac} lambda_{bd} G^{cd}, the inverse of apply_isotropic_factored."""
    G.require(Variance.CONTRAVARIANT, FieldKind.G)
    lower, _ = isotropic_lambda_factored(m)
    components = np.einsum("ac,bd,cd->ab", lower, lower, G.components)
    return FieldTensor(components, Variance.COVARIANT, FieldKind.F)


def four_velocity(v: MediumVelocity) -> np.ndarray:
    """Return u^a = gamma (c, u) in a flat Cartesian frame."""
    gamma = 1.0 / np.sqrt(1.0 - float(v.beta @ v.beta))
    return gamma * np.concatenate(([v.c], v.u))


def minkowski_moving_3d(
    m: IsotropicMedium,
    v: MediumVelocity,
    E: ArrayLike,
    H: ArrayLike,
    *,
    form: MovingForm = "first_order",
) -> tuple[np.ndarray, np.ndarray]:
    """Inductions (D, B) of an isotropic medium moving with velocity u.

    first_order: D = eps E + (eps mu - 1) u/c x H, B = mu H - (eps mu - 1) u/c x E.
    exact: solves D = eps (E + u/c x B) - u/c x H, B = mu (H - u/c x D) + u/c x E
    by eliminating B.
    """
    e, h, beta = vector3(E), vector3(H), v.beta
    coupling = m.eps * m.mu - 1.0
    if form == "first_order":
        d = m.eps * e + coupling * np.cross(beta, h)
        b = m.mu * h - coupling * np.cross(beta, e)
        return vector3(d), vector3(b)
    if form != "exact":
        raise ValueError(f"unknown form {form!r}")

    k = _cross_matrix(beta)
    k2 = k @ k
    system = np.eye(3) + m.eps * m.mu * k2
    rhs = m.eps * e + coupling * (k @ h) + m.eps * (k2 @ e)
    if abs(1.0 - m.eps * m.mu * float(beta @ beta)) <= DEFAULT_TOLERANCE:
        raise SingularSystemError("medium moves at the phase velocity c/n")
    try:
        d = np.linalg.solve(system, rhs)
    except np.linalg.LinAlgError as err:
        raise SingularSystemError("medium moves at the phase velocity c/n") from err
    b = m.mu * h + k @ e - m.mu * (k @ d)
    return vector3(d), vector3(b)


def _is_diagonal(matrix: np.ndarray, tol: float) -> bool:
    """Whether off-diagonal entries vanish within tol relative to the matrix."""
    off = matrix - np.diag(np.diag(matrix))
    return bool(np.max(np.abs(off)) <= tol * max(_scale(matrix), 1.0))


def tamm_moving_anisotropic_3d(
    eps_mixed: ArrayLike,
    mu_mixed: ArrayLike,
    v: MediumVelocity,
    E: ArrayLike,
    H: ArrayLike,
    *,
    align_tol: float = AXIS_ALIGNMENT_TOLERANCE,
) -> tuple[np.ndarray, np.ndarray]:
    """Solve the anisotropic moving-media relations for (D, B).

    D = eps (E + u/c x B) - u/c x H and B = mu (H - u/c x D) + u/c x E, with
    diagonal eps, mu and u along a principal axis, as one 6x6 linear system.
    """
    eps3 = _readonly(eps_mixed, (3, 3))
    mu3 = _readonly(mu_mixed, (3, 3))
    if not (_is_diagonal(eps3, DEFAULT_TOLERANCE) and _is_diagonal(mu3, DEFAULT_TOLERANCE)):
        raise ValueError("eps and mu must be diagonal in the principal frame")
    beta = v.beta
    speed = float(np.linalg.norm(beta))
    if speed > 0 and np.count_nonzero(np.abs(beta) > align_tol * speed) > 1:
        raise MisalignedVelocityError(f"u/c = {beta!r} is not along a principal axis")

    e, h = vector3(E), vector3(H)
    k = _cross_matrix(beta)
    system = np.block([[np.eye(3), -eps3 @ k], [mu3 @ k, np.eye(3)]])
    rhs = np.concatenate((eps3 @ e - k @ h, mu3 @ h + k @ e))
    if np.linalg.cond(system) > 1.0 / np.finfo(float).eps:
        raise SingularSystemError("moving-media system is singular")
    try:
        solution = np.linalg.solve(system, rhs)
    except np.linalg.LinAlgError as err:
        raise SingularSystemError("moving-media system is singular") from err
    _LOGGER.debug("Tamm system solved for u/c=%s", beta)
    return vector3(solution[:3]), vector3(solution[3:])
