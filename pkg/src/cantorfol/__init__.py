"""Smooth foliations of the plane tangent to one C^r vector field, built on the middle-thirds Cantor set."""
from .cantor_core import (
    DEFAULT_CONFIG,
    EvalConfig,
    GapId,
    InCantor,
    InGap,
    OutsideLeft,
    OutsideRight,
    cantor_function,
    classify,
    count_gaps_left,
    gap_bounds,
)
from .errors import ConvergenceError, DepthLimitError, DomainError
from .foliation import (
    LeafSpec,
    PlanarVector,
    f_t,
    g_t,
    in_cantor_image,
    leaf_sample,
    pullback,
    pushforward,
    vector_field,
)
from .generator import ConstantsBundle, constants, g, g_inverse, h, h_deriv, phi, phi_integral
from .staircase import psi

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_CONFIG", "EvalConfig", "GapId", "InCantor", "InGap", "OutsideLeft", "OutsideRight",
    "cantor_function", "classify", "count_gaps_left", "gap_bounds",
    "ConvergenceError", "DepthLimitError", "DomainError",
    "LeafSpec", "PlanarVector", "f_t", "g_t", "in_cantor_image", "leaf_sample", "pullback",
    "pushforward", "vector_field",
    "ConstantsBundle", "constants", "g", "g_inverse", "h", "h_deriv", "phi", "phi_integral", "psi",
]
