"""Dense small-tensor algebra for Lorentzian metrics and field tensors.

Conventions: signature (+,-,-,-), Greek indices 0..3, Latin indices 1..3 stored
at array positions 0..2. The Levi-Civita symbols are pure numbers; every metric
density factor is written out explicitly where it is used.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import cache, cached_property
from itertools import permutations
import logging

import numpy as np
from numpy.typing import ArrayLike

from .const import DEFAULT_TOLERANCE, LEVI_CIVITA_0123, SINGULAR_DET_TOLERANCE
from .exceptions import (
    AsymmetricFieldError,
    AsymmetricMetricError,
    NonLorentzianError,
    SingularMetricError,
    VarianceMismatchError,
    ZeroG00Error,
)

_LOGGER = logging.getLogger(__name__)

try:
    from enum import StrEnum
except ImportError:  # Python < 3.11

    class StrEnum(str, Enum):
        """Backport of enum.StrEnum: members are str and format as their value."""

        __str__ = str.__str__
        __format__ = str.__format__


class Variance(StrEnum):
    """Index position of a rank-2 field tensor."""

    COVARIANT = "covariant"
    CONTRAVARIANT = "contravariant"


class FieldKind(StrEnum):
    """Which physical tensor the components belong to."""

    F = "F"
    G = "G"
    F_DUAL = "Fdual"
    G_DUAL = "Gdual"


_DUAL_KIND = {
    FieldKind.F: FieldKind.F_DUAL,
    FieldKind.F_DUAL: FieldKind.F,
    FieldKind.G: FieldKind.G_DUAL,
    FieldKind.G_DUAL: FieldKind.G,
}


def _readonly(values: ArrayLike, shape: tuple[int, ...]) -> np.ndarray:
    """Return a float copy with the given shape that cannot be mutated."""
    array = np.array(values, dtype=float)
    if array.shape != shape:
        raise ValueError(f"expected shape {shape}, got {array.shape}")
    if not np.all(np.isfinite(array)):
        raise ValueError("components must be finite")
    array.flags.writeable = False
    return array


def vector3(values: ArrayLike) -> np.ndarray:
    """Return a read-only 3-component vector or covector."""
    return _readonly(values, (3,))


def _scale(array: np.ndarray) -> float:
    """Largest absolute entry, used to make tolerances relative."""
    return float(np.max(np.abs(array))) if array.size else 0.0


@cache
def levi_civita_3() -> np.ndarray:
    """Return the symbol e^{ijk} with e^{123} = +1."""
    symbol = np.zeros((3, 3, 3))
    for perm in permutations(range(3)):
        symbol[perm] = _parity(perm)
    symbol.flags.writeable = False
    return symbol


@cache
def levi_civita_4() -> np.ndarray:
    """Return the symbol with value LEVI_CIVITA_0123 at 0123.

    The same array serves as the lower and the upper symbol.
    """
    symbol = np.zeros((4, 4, 4, 4))
    for perm in permutations(range(4)):
        symbol[perm] = LEVI_CIVITA_0123 * _parity(perm)
    symbol.flags.writeable = False
    return symbol


def _parity(perm: tuple[int, ...]) -> int:
    """Sign of a permutation, by counting inversions."""
    inversions = sum(
        1
        for i in range(len(perm))
        for j in range(i + 1, len(perm))
        if perm[i] > perm[j]
    )
    return -1 if inversions % 2 else 1


@dataclass(frozen=True, eq=False)
class Metric4:
    """Symmetric 4x4 metric g_{ab}; stored exactly symmetric and read-only."""

    components: np.ndarray
    tol: float = DEFAULT_TOLERANCE

    def __post_init__(self) -> None:
        """Validate and freeze the components."""
        g = np.array(self.components, dtype=float)
        if g.shape != (4, 4):
            raise ValueError(f"metric must be 4x4, got {g.shape}")
        if not np.all(np.isfinite(g)):
            raise ValueError("metric components must be finite")
        if np.max(np.abs(g - g.T)) > self.tol * max(_scale(g), 1.0):
            raise AsymmetricMetricError("metric is not symmetric")
        object.__setattr__(self, "components", _readonly(0.5 * (g + g.T), (4, 4)))

    @classmethod
    def minkowski(cls) -> Metric4:
        """Return eta = diag(1, -1, -1, -1)."""
        return cls(np.diag([1.0, -1.0, -1.0, -1.0]))

    @classmethod
    def diagonal(cls, *entries: float) -> Metric4:
        """Return a diagonal metric."""
        return cls(np.diag(np.asarray(entries, dtype=float)))

    @property
    def g00(self) -> float:
        """Time-time component."""
        return float(self.components[0, 0])

    @property
    def spatial(self) -> np.ndarray:
        """Spatial block g_{ij}."""
        return self.components[1:, 1:]

    @cached_property
    def det(self) -> float:
        """Determinant of the full metric."""
        return float(np.linalg.det(self.components))

    @property
    def is_lorentzian(self) -> bool:
        """Whether det g < 0."""
        return self.det < 0.0

    @cached_property
    def sqrt_minus_det(self) -> float:
        """Return sqrt(-g); raises NonLorentzianError when det g >= 0."""
        if not self.is_lorentzian:
            raise NonLorentzianError(f"det g = {self.det!r} is not negative")
        return float(np.sqrt(-self.det))

    @cached_property
    def inverse(self) -> np.ndarray:
        """Components g^{ab} of the inverse metric."""
        return metric_inverse(self).components

    def require_g00(self) -> float:
        """Return g_00, raising ZeroG00Error when it vanishes."""
        if abs(self.g00) <= self.tol * _scale(self.components):
            raise ZeroG00Error("g_00 vanishes")
        return self.g00


def metric_inverse(g: Metric4, *, tol: float = SINGULAR_DET_TOLERANCE) -> Metric4:
    """Return the inverse metric g^{ab}."""
    scale = _scale(g.components)
    if abs(g.det) < tol * scale**4:
        _LOGGER.debug("Singular metric: det=%s, scale=%s", g.det, scale)
        raise SingularMetricError(f"|det g| = {abs(g.det)!r} below tolerance")
    try:
        inverse = np.linalg.inv(g.components)
    except np.linalg.LinAlgError as err:
        raise SingularMetricError("metric cannot be inverted") from err
    return Metric4(0.5 * (inverse + inverse.T), tol=g.tol)


@dataclass(frozen=True, eq=False)
class FieldTensor:
    """Antisymmetric rank-2 tensor tagged with variance and kind."""

    components: np.ndarray
    variance: Variance
    kind: FieldKind
    tol: float = DEFAULT_TOLERANCE

    def __post_init__(self) -> None:
        """Validate antisymmetry and freeze the components."""
        t = _readonly(self.components, (4, 4))
        if np.max(np.abs(t + t.T)) > self.tol * max(_scale(t), 1.0):
            raise AsymmetricFieldError("field tensor is not antisymmetric")
        object.__setattr__(self, "components", t)
        object.__setattr__(self, "variance", Variance(self.variance))
        object.__setattr__(self, "kind", FieldKind(self.kind))

    def require(self, variance: Variance, *kinds: FieldKind) -> None:
        """Raise VarianceMismatchError unless the tags match."""
        if self.variance is not variance or (kinds and self.kind not in kinds):
            raise VarianceMismatchError(
                f"expected {variance} {'/'.join(kinds) or 'tensor'}, "
                f"got {self.variance} {self.kind}"
            )


def _antisymmetric(upper: np.ndarray, spatial_pairs: np.ndarray) -> np.ndarray:
    """Assemble t with t[0, i] = upper[i] and the spatial pairs (12, 13, 23)."""
    t = np.zeros((4, 4))
    t[0, 1:] = upper
    t[1, 2], t[1, 3], t[2, 3] = spatial_pairs
    return t - t.T


def build_F_lower(E: ArrayLike, B: ArrayLike) -> FieldTensor:
    """Return F_{ab} with F_{0i} = E_i, F_{12} = -B^3, F_{13} = B^2, F_{23} = -B^1."""
    e, b = vector3(E), vector3(B)
    components = _antisymmetric(e, np.array([-b[2], b[1], -b[0]]))
    return FieldTensor(components, Variance.COVARIANT, FieldKind.F)


def build_G_upper(D: ArrayLike, H: ArrayLike) -> FieldTensor:
    """Return G^{ab} with G^{0i} = -D^i, G^{12} = -H_3, G^{13} = H_2, G^{23} = -H_1."""
    d, h = vector3(D), vector3(H)
    components = _antisymmetric(-d, np.array([-h[2], h[1], -h[0]]))
    return FieldTensor(components, Variance.CONTRAVARIANT, FieldKind.G)


def _read_pairs(t: np.ndarray) -> np.ndarray:
    """Inverse of the spatial-pair layout used by the builders."""
    return np.array([-t[2, 3], t[1, 3], -t[1, 2]])


def extract_EB(F: FieldTensor) -> tuple[np.ndarray, np.ndarray]:
    """Read (E_i, B^i) back from F_{ab}."""
    F.require(Variance.COVARIANT, FieldKind.F)
    t = F.components
    return vector3(t[0, 1:]), vector3(_read_pairs(t))


def extract_DH(G: FieldTensor) -> tuple[np.ndarray, np.ndarray]:
    """Read (D^i, H_i) back from G^{ab}."""
    G.require(Variance.CONTRAVARIANT, FieldKind.G)
    t = G.components
    return vector3(-t[0, 1:]), vector3(_read_pairs(t))


def raise_indices(t: FieldTensor, g: Metric4) -> FieldTensor:
    """T^{ab} = g^{ac} g^{bd} T_{cd}."""
    t.require(Variance.COVARIANT)
    g_inv = g.inverse
    components = np.einsum("ac,bd,cd->ab", g_inv, g_inv, t.components)
    return FieldTensor(components, Variance.CONTRAVARIANT, t.kind, tol=t.tol)


def lower_indices(t: FieldTensor, g: Metric4) -> FieldTensor:
    """T_{ab} = g_{ac} g_{bd} T^{cd}."""
    t.require(Variance.CONTRAVARIANT)
    gc = g.components
    components = np.einsum("ac,bd,cd->ab", gc, gc, t.components)
    return FieldTensor(components, Variance.COVARIANT, t.kind, tol=t.tol)


def raise_F(F: FieldTensor, g: Metric4) -> FieldTensor:
    """Raise both indices of F_{ab}."""
    F.require(Variance.COVARIANT, FieldKind.F)
    return raise_indices(F, g)


def lower_F(F: FieldTensor, g: Metric4) -> FieldTensor:
    """Lower both indices of F^{ab}."""
    F.require(Variance.CONTRAVARIANT, FieldKind.F)
    return lower_indices(F, g)


def raise_G(G: FieldTensor, g: Metric4) -> FieldTensor:
    """Raise both indices of G_{ab}."""
    G.require(Variance.COVARIANT, FieldKind.G)
    return raise_indices(G, g)


def lower_G(G: FieldTensor, g: Metric4) -> FieldTensor:
    """Lower both indices of G^{ab}."""
    G.require(Variance.CONTRAVARIANT, FieldKind.G)
    return lower_indices(G, g)


def alternating_tensor(g: Metric4, variance: Variance) -> np.ndarray:
    """Return e_{abcd} = sqrt(-g) eps_{abcd} or e^{abcd} = -eps^{abcd} / sqrt(-g)."""
    root = g.sqrt_minus_det
    symbol = levi_civita_4()
    if Variance(variance) is Variance.COVARIANT:
        tensor = root * symbol
    else:
        tensor = -symbol / root
    tensor.flags.writeable = False
    return tensor


def hodge_dual(t: FieldTensor, g: Metric4) -> FieldTensor:
    """Dualize with the alternating tensor of opposite variance.

    Covariant input gives 1/2 e^{abcd} T_{cd}, contravariant input gives
    1/2 e_{abcd} T^{cd}; the kind toggles between a tensor and its dual.
    """
    if t.variance is Variance.COVARIANT:
        e = alternating_tensor(g, Variance.CONTRAVARIANT)
        variance = Variance.CONTRAVARIANT
    else:
        e = alternating_tensor(g, Variance.COVARIANT)
        variance = Variance.COVARIANT
    components = 0.5 * np.einsum("abcd,cd->ab", e, t.components)
    return FieldTensor(components, variance, _DUAL_KIND[t.kind], tol=t.tol)


def dual_F(F: FieldTensor, g: Metric4) -> FieldTensor:
    """Return *F^{ab} = 1/2 e^{abcd} F_{cd}."""
    F.require(Variance.COVARIANT, FieldKind.F)
    return hodge_dual(F, g)


def dual_G(G: FieldTensor, g: Metric4) -> FieldTensor:
    """Return *G_{ab} = 1/2 e_{abcd} G^{cd}."""
    G.require(Variance.CONTRAVARIANT, FieldKind.G)
    return hodge_dual(G, g)
