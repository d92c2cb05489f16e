"""Cantor function of the image set ``g(C)`` inside ``[0, g(1)]``."""
from __future__ import annotations

import numpy as np

from .cantor_core import DEFAULT_CONFIG, EvalConfig, _check_finite, cantor_function
from .generator import check_order, g_inverse, total_rise


def psi(y, r: int = 1, cfg: EvalConfig = DEFAULT_CONFIG):
    """Staircase of ``g(C)``: the Cantor function composed with ``g^-1``.

    Normalised to 0 for ``y <= 0`` and 1 for ``y >= g(1)``.  On the image of
    a gap it is constant; near points of ``g(C)`` it varies much faster than
    float resolution in ``y`` can follow, so values there carry the
    conditioning of the inverse.
    """
    r = check_order(r)
    _check_finite(y)
    g1 = total_rise(r, cfg.depth)
    if np.ndim(y) == 0:
        y = float(y)
        if y <= 0.0:
            return 0.0
        if y >= g1:
            return 1.0
        return cantor_function(g_inverse(y, r, cfg), cfg)
    y = np.asarray(y, dtype=np.float64)
    out = np.zeros_like(y)
    out[y >= g1] = 1.0
    mid = (y > 0.0) & (y < g1)
    out[mid] = cantor_function(g_inverse(y[mid], r, cfg), cfg)
    return out
