"""The foliations ``F_t`` and the vector field they are all tangent to.

For ``t`` in ``[0, 1]`` the base leaf of ``F_t`` is the graph of ``g_t``,
the inverse of ``f_t(y) = g^-1(y) + t * psi(y)``; every other leaf is a
horizontal translate.  Writing ``y = g(u)`` turns ``f_t`` into
``u + t * c(u)`` with ``c`` the Cantor function, so ``g_t`` is inverted in
the ``u`` coordinate (:func:`pullback`) and mapped back through ``g``.  That
keeps a single monotone bisection per evaluation and avoids inverting ``g``
inside the loop.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .cantor_core import DEFAULT_CONFIG, EvalConfig, InCantor, _check_finite, cantor_function, classify
from .errors import DomainError
from .generator import (
    _stage_powers,
    bisect_array,
    bisect_scalar,
    check_order,
    g,
    g_inverse,
    h,
    phi_antiderivative,
    total_rise,
)


def check_t(t):
    if not np.all((np.asarray(t) >= 0.0) & (np.asarray(t) <= 1.0)):
        raise DomainError(f"foliation parameter must lie in [0, 1], got {t!r}")
    return t


@dataclass(frozen=True)
class LeafSpec:
    """The leaf ``y = g_t(x - c)``."""

    t: float
    c: float

    def __post_init__(self):
        check_t(self.t)
        _check_finite(self.c)


class PlanarVector(NamedTuple):
    dx: object
    dy: object


def pushforward(x, t, r: int = 1, cfg: EvalConfig = DEFAULT_CONFIG):
    """``f_t(g(x))`` evaluated directly as ``x + t * c(x)``.

    Going through the ordinate ``g(x)`` would lose ``x`` wherever ``g`` is
    flatter than float resolution; this form does not.
    """
    check_order(r)
    check_t(t)
    _check_finite(x)
    if np.ndim(x) == 0 and np.ndim(t) == 0:
        return float(x) + t * cantor_function(float(x), cfg)
    x = np.asarray(x, dtype=np.float64)
    return x + np.asarray(t) * cantor_function(x, cfg)


def pullback(z, t, r: int = 1, cfg: EvalConfig = DEFAULT_CONFIG):
    """The ``u`` with ``u + t * c(u) = z``, i.e. ``g^-1(g_t(z))``.

    Bisection on ``u`` in ``[0, 1]`` until the bracket is below
    ``cfg.tolerance`` both in ``u`` and in ``z``, or no float is left inside
    it (the staircase can climb faster than one ulp per ulp).
    """
    check_order(r)
    check_t(t)
    _check_finite(z)
    tol = cfg.tolerance
    if np.ndim(z) == 0 and np.ndim(t) == 0:
        z, t = float(z), float(t)
        if z <= 0.0 or t == 0.0:
            return z
        if z >= 1.0 + t:
            return z - t
        return bisect_scalar(lambda u: u + t * cantor_function(u, cfg), z, 0.0, 1.0,
                             0.0, 1.0 + t, tol, cfg.max_iter, ftol=tol)

    z, t = np.broadcast_arrays(np.asarray(z, dtype=np.float64), np.asarray(t, dtype=np.float64))
    out = np.array(z, dtype=np.float64)
    right = z >= 1.0 + t
    out[right] = z[right] - t[right]
    mid = (z > 0.0) & ~right & (t > 0.0)
    zm = z[mid]
    tm = t[mid]
    n = zm.size
    out[mid] = bisect_array(lambda u, i: u + tm[i] * cantor_function(u, cfg), zm,
                            np.zeros(n), np.ones(n), np.zeros(n), 1.0 + tm,
                            tol, cfg.max_iter, ftol=tol)
    return out


def f_t(y, t, r: int = 1, cfg: EvalConfig = DEFAULT_CONFIG):
    """``g^-1(y) + t * psi(y)``."""
    return pushforward(g_inverse(y, r, cfg), t, r, cfg)


def g_t(x, t, r: int = 1, cfg: EvalConfig = DEFAULT_CONFIG):
    """Inverse of :func:`f_t`; the base leaf of ``F_t`` is its graph."""
    return g(pullback(x, t, r, cfg), r, cfg)


def leaf_sample(leaf: LeafSpec, x_min: float, x_max: float, count: int,
                r: int = 1, cfg: EvalConfig = DEFAULT_CONFIG) -> np.ndarray:
    """``count`` points ``(x, g_t(x - c))`` on a uniform grid, shape ``(count, 2)``."""
    if not x_min < x_max:
        raise DomainError(f"need x_min < x_max, got [{x_min}, {x_max}]")
    if count < 2:
        raise DomainError(f"need at least 2 samples, got {count}")
    xs = np.linspace(x_min, x_max, count)
    ys = g_t(xs - leaf.c, leaf.t, r, cfg)
    return np.column_stack([xs, ys])


def vector_field(x, y, r: int = 1, cfg: EvalConfig = DEFAULT_CONFIG) -> PlanarVector:
    """``X = d/dx + h(g^-1(y)) d/dy``; it does not depend on ``x``."""
    _check_finite(x)
    dy = h(g_inverse(y, r, cfg), r, cfg)
    if np.ndim(dy) == 0:
        return PlanarVector(1.0, dy)
    return PlanarVector(np.ones_like(dy), dy)


def ordinate_resolution(r: int = 1, cfg: EvalConfig = DEFAULT_CONFIG) -> float:
    """Smallest ordinate distance to ``g(C)`` that floats can still tell apart."""
    return 4.0 * math.ulp(total_rise(r, cfg.depth))


def ordinate_gap_distance(u: float, r: int = 1, cfg: EvalConfig = DEFAULT_CONFIG) -> float:
    """Distance from ``g(u)`` to ``g(C)``, computed inside the gap holding ``u``."""
    cls = classify(u, cfg)
    if isinstance(cls, InCantor):
        return 0.0
    if not hasattr(cls, "gap"):
        raise DomainError(f"u must lie in [0, 1], got {u!r}")
    s = min(cls.local, 1.0 - cls.local)
    return _stage_powers(-3 * r)[cls.gap.stage] * phi_antiderivative(s, r)


def in_cantor_image(z: float, t: float, r: int = 1, cfg: EvalConfig = DEFAULT_CONFIG) -> bool:
    """Whether ``z`` lies in ``C_t = f_t(g(C))``.

    ``z`` is pulled back to ``u``.  It counts as a member when the leaf
    ordinate ``g(u)`` is within :func:`ordinate_resolution` of ``g(C)``.
    Membership cannot be decided more finely than that, because ordinates
    that round to the same float give the same ``z``.
    """
    r = check_order(r)
    check_t(t)
    z = float(z)
    _check_finite(z)
    if z < 0.0 or z > 1.0 + t:
        return False
    u = min(max(pullback(z, t, r, cfg), 0.0), 1.0)
    return ordinate_gap_distance(u, r, cfg) <= ordinate_resolution(r, cfg)
