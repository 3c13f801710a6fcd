"""Constants."""

from __future__ import annotations

from typing import Final

# Relative tolerance for symmetry, antisymmetry and inverse checks.
DEFAULT_TOLERANCE: Final = 1e-12
# |det g| below this times max|g|^4 counts as singular.
SINGULAR_DET_TOLERANCE: Final = 1e-12

DEFAULT_C: Final = 1.0
UNIT_INDEX_TOLERANCE: Final = 1e-9
AXIS_ALIGNMENT_TOLERANCE: Final = 1e-9
VELOCITY_NORM_TOLERANCE: Final = 1e-9
NULL_LAUNCH_TOLERANCE: Final = 1e-9

# Finite-difference step for metric gradients, relative to the domain scale.
GRADIENT_STEP: Final = 1e-5
DEFAULT_DOMAIN_SCALE: Final = 1.0
# Secant iterations used to land a substep on a metric interface.
INTERFACE_ITERATIONS: Final = 4

DEFAULT_SEED: Final = 20130101
DEFAULT_DRAWS: Final = 1000
DEFAULT_STEP: Final = 1e-3
DEFAULT_STEPS: Final = 5000

ENV_THREADS: Final = "GEOMOPT_THREADS"

# Value of the symbol at 0123, shared by the lower and upper symbol. With -1 the
# alternating tensor reproduces the dual layouts of *F^{ab} and *G_{ab}.
LEVI_CIVITA_0123: Final = -1

COORDINATE_SYSTEMS: Final = ("cartesian", "spherical", "cylindrical")
MODES: Final = ("geometrize", "inverse", "trace", "verify")

FLAG_OK: Final = "ok"
FLAG_NEGATIVE_G00: Final = "negative_g00"
FLAG_NON_LORENTZIAN: Final = "non_lorentzian"
FLAG_SINGULAR_METRIC: Final = "singular_metric"
FLAG_ZERO_G00: Final = "zero_g00"
FLAG_NON_POSITIVE_INDEX: Final = "non_positive_index"

MATERIAL_CSV_HEADER: Final = (
    ["x", "y", "z"]
    + [f"eps{i}{j}" for i in range(1, 4) for j in range(1, 4)]
    + [f"mu{i}{j}" for i in range(1, 4) for j in range(1, 4)]
    + ["w1", "w2", "w3", "flag"]
)
METRIC_CSV_HEADER: Final = (
    ["x", "y", "z"]
    + [f"g{a}{b}" for a in range(4) for b in range(a, 4)]
    + ["flag"]
)
RAY_CSV_HEADER: Final = ["lambda", "t", "x", "y", "z", "kt", "kx", "ky", "kz", "H"]

SVG_SIZE_PX: Final = 800
SVG_DPI: Final = 100
SVG_CONTOUR_LEVELS: Final = 8
