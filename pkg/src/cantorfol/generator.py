"""The bump, the slope function, the leaf generator and its inverse.

The slope function vanishes on the Cantor set and equals a scaled copy of
the bump ``tau**(r+1) * (1-tau)**(r+1)`` on every complementary gap, the
scale shrinking like ``3**(-(3r-1) n)`` with the gap stage ``n``.  The leaf
generator is its primitive.  It is evaluated without quadrature as a
weighted count of the whole gaps to the left of ``x`` plus the primitive of
the bump on the gap that contains ``x``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .cantor_core import DEFAULT_CONFIG, MAX_STAGE, EvalConfig, _check_finite, digits, scan
from .errors import ConvergenceError, DomainError

MAX_ORDER = 6


def check_order(r) -> int:
    """Validate a smoothness order ``1 <= r <= 6``."""
    if isinstance(r, bool) or not isinstance(r, (int, np.integer)):
        raise DomainError(f"smoothness order must be an integer, got {r!r}")
    if not 1 <= r <= MAX_ORDER:
        raise DomainError(f"smoothness order must lie in [1, {MAX_ORDER}], got {r}")
    return int(r)


# ---------------------------------------------------------------------------
# the bump
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _phi_coeffs(r: int, j: int) -> tuple[int, ...]:
    # ascending powers of the j-th derivative; all integers
    a = r + 1
    c = [0] * (2 * a + 1)
    for i in range(a + 1):
        c[a + i] = (-1) ** i * math.comb(a, i)
    for _ in range(j):
        c = [k * c[k] for k in range(1, len(c))]
    return tuple(c)


def _ipow(x, k: int):
    """``x**k`` by repeated multiplication, so scalars and arrays round alike."""
    acc = 1.0 + 0.0 * x
    for _ in range(k):
        acc = acc * x
    return acc


@lru_cache(maxsize=None)
def _stage_powers(exponent: int) -> np.ndarray:
    """``3.0 ** (exponent * n)`` for every stage ``n``, indexed by ``n``."""
    return np.array([3.0 ** (exponent * n) for n in range(MAX_STAGE + 1)])


def _horner(coeffs, t):
    acc = 0.0 * t
    for c in reversed(coeffs):
        acc = acc * t + c
    return acc


def phi(tau, j: int = 0, r: int = 1):
    """``j``-th derivative of the bump ``tau**(r+1) * (1 - tau)**(r+1)``.

    Derivatives use the expanded integer polynomial evaluated on the half of
    ``[0, 1]`` nearer 0 and reflected, ``phi^(j)(1-t) = (-1)**j phi^(j)(t)``,
    which keeps the alternating sum short of cancellation.
    """
    r = check_order(r)
    if not 0 <= j <= r:
        raise DomainError(f"derivative order must lie in [0, {r}], got {j}")
    _check_finite(tau)
    if np.any(np.asarray(tau) < 0.0) or np.any(np.asarray(tau) > 1.0):
        raise DomainError("tau must lie in [0, 1]")
    return _phi(tau, j, r)


def _phi(tau, j, r):
    if j == 0:
        return _ipow(tau * (1.0 - tau), r + 1)
    coeffs = _phi_coeffs(r, j)
    if np.ndim(tau) == 0:
        if tau > 0.5:
            return (-1) ** j * _horner(coeffs, 1.0 - tau)
        return _horner(coeffs, tau)
    tau = np.asarray(tau, dtype=np.float64)
    flip = tau > 0.5
    t = np.where(flip, 1.0 - tau, tau)
    v = _horner(coeffs, t)
    if j % 2:
        v = np.where(flip, -v, v)
    return v


@lru_cache(maxsize=None)
def phi_integral_exact(r: int) -> Fraction:
    """``A = ((r+1)!)**2 / (2r+3)!`` as an exact fraction."""
    r = check_order(r)
    return Fraction(math.factorial(r + 1) ** 2, math.factorial(2 * r + 3))


def phi_integral(r: int = 1) -> float:
    """The integral of the bump over ``[0, 1]``."""
    return float(phi_integral_exact(r))


def phi_antiderivative(s, r: int = 1):
    """``int_0^s phi``, written as ``A`` times a binomial tail.

    ``A * sum_{j=r+2}^{2r+3} C(2r+3, j) s**j (1-s)**(2r+3-j)`` has only
    positive terms, so it stays accurate near both ends of the gap.
    """
    m = 2 * r + 3
    u = 1.0 - s
    acc = 0.0 * s
    for j in range(r + 2, m + 1):
        acc = acc + math.comb(m, j) * _ipow(s, j) * _ipow(u, m - j)
    return phi_integral(r) * acc


def _phi_antiderivative_exact(s: Fraction, r: int) -> Fraction:
    m = 2 * r + 3
    u = 1 - s
    acc = sum(math.comb(m, j) * s**j * u ** (m - j) for j in range(r + 2, m + 1))
    return phi_integral_exact(r) * acc


# ---------------------------------------------------------------------------
# slope function
# ---------------------------------------------------------------------------


def _prep(x):
    _check_finite(x)
    if np.ndim(x) == 0:
        return True, float(x)
    return False, np.asarray(x, dtype=np.float64)


# On a stage-n gap h = 3**(-e n) phi(3**n (x - a)) with e = 3r - 1, so the gap
# contributes exactly 3**(-3rn) A to g.  For r = 1 this is e = 2r.
_SLOPE_EXP = {r: 3 * r - 1 for r in range(1, MAX_ORDER + 1)}


def h(x, r: int = 1, cfg: EvalConfig = DEFAULT_CONFIG):
    """Slope of the generator leaf; outside ``[0, 1]`` the slope of its power-law extension."""
    r = check_order(r)
    return h_deriv(x, 0, r, cfg)


def h_deriv(x, j: int, r: int = 1, cfg: EvalConfig = DEFAULT_CONFIG):
    """``j``-th derivative of :func:`h`, ``0 <= j <= r`` (``j = 0`` is ``h`` itself)."""
    r = check_order(r)
    if not 0 <= j <= r:
        raise DomainError(f"derivative order must lie in [0, {r}], got {j}")
    is_scalar, x = _prep(x)
    # outside: d^j/dx^j of -2r x^(2r-1) (left) and 2r (x-1)^(2r-1) (right)
    fall = math.factorial(2 * r) // math.factorial(2 * r - 1 - j)
    if is_scalar:
        if x < 0.0:
            return -fall * _ipow(x, 2 * r - 1 - j)
        if x > 1.0:
            return fall * _ipow(x - 1.0, 2 * r - 1 - j)
        s = scan(x, cfg.depth)
        if s.stage == 0:
            return 0.0
        return _stage_powers(j - _SLOPE_EXP[r])[s.stage] * _phi(s.local, j, r)

    out = np.zeros_like(x)
    left = x < 0.0
    right = x > 1.0
    out[left] = -fall * _ipow(x[left], 2 * r - 1 - j)
    out[right] = fall * _ipow(x[right] - 1.0, 2 * r - 1 - j)
    mid = ~(left | right)
    s = scan(x[mid], cfg.depth)
    gap = s.stage > 0
    vals = np.zeros(s.stage.shape)
    vals[gap] = _stage_powers(j - _SLOPE_EXP[r])[s.stage[gap]] * _phi(s.local[gap], j, r)
    out[mid] = vals
    return out


# ---------------------------------------------------------------------------
# generator leaf
# ---------------------------------------------------------------------------


def _ratio(r):
    return 3.0 ** (-3 * r)


@lru_cache(maxsize=None)
def total_rise(r: int = 1, depth: int = DEFAULT_CONFIG.depth) -> float:
    """``g(1)``, the series summed to ``depth`` stages; it approaches ``A / (27**r - 2)``."""
    r = check_order(r)
    q = _ratio(r)
    return phi_integral(r) * float(scan(1.0, depth, q).gapsum)


def series_tail_bound(r: int = 1, depth: int = DEFAULT_CONFIG.depth) -> float:
    """Bound on the neglected stages, ``A * sum_{n>N} 2**(n-1) * 27**(-r n)``."""
    q = _ratio(check_order(r))
    return phi_integral(r) * 2.0 ** depth * q ** (depth + 1) / (2.0 * (1.0 - 2.0 * q))


def g(x, r: int = 1, cfg: EvalConfig = DEFAULT_CONFIG):
    """The generator leaf, ``int_0^x h`` on ``[0, 1]`` extended by ``-x**(2r)``
    on the left and ``g(1) + (x-1)**(2r)`` on the right."""
    r = check_order(r)
    is_scalar, x = _prep(x)
    q = _ratio(r)
    a = phi_integral(r)
    g1 = total_rise(r, cfg.depth)
    if is_scalar:
        if x < 0.0:
            return -_ipow(x, 2 * r)
        if x > 1.0:
            return g1 + _ipow(x - 1.0, 2 * r)
        if x == 1.0:
            return g1
        s = scan(x, cfg.depth, q)
        val = a * s.gapsum
        if s.stage:
            val += _stage_powers(-3 * r)[s.stage] * phi_antiderivative(s.local, r)
        return val

    out = np.empty_like(x)
    left = x < 0.0
    right = x > 1.0
    out[left] = -_ipow(x[left], 2 * r)
    out[right] = g1 + _ipow(x[right] - 1.0, 2 * r)
    mid = ~(left | right)
    s = scan(x[mid], cfg.depth, q)
    vals = a * s.gapsum
    gap = s.stage > 0
    vals[gap] += _stage_powers(-3 * r)[s.stage[gap]] * phi_antiderivative(s.local[gap], r)
    vals[x[mid] == 1.0] = g1
    out[mid] = vals
    return out


def g_exact(x: float, r: int = 1, cfg: EvalConfig = DEFAULT_CONFIG) -> Fraction:
    """The same truncated series as :func:`g`, in exact rational arithmetic."""
    r = check_order(r)
    x = float(x)
    _check_finite(x)
    q = Fraction(1, 27**r)
    a = phi_integral_exact(r)
    if x < 0.0:
        return -(Fraction(x) ** (2 * r))
    if x > 1.0:
        return g_exact(1.0, r, cfg) + (Fraction(x) - 1) ** (2 * r)
    ds, p, e = digits(x, cfg.depth)
    bits = 0
    total = Fraction(0)
    qn = Fraction(1)
    for n, d in enumerate(ds, 1):
        qn *= q
        total += qn * (bits + (d == 2))
        if d == 1:
            m = cfg.depth - n
            tail = (1 - (2 * q) ** m) / (1 - 2 * q)
            total += (2 * bits + 1) * qn * q * tail
            return a * total + qn * _phi_antiderivative_exact(Fraction(p, 1 << e), r)
        bits = 2 * bits + (d == 2)
    return a * total


def g_increment(x1: float, x2: float, r: int = 1, cfg: EvalConfig = DEFAULT_CONFIG) -> float:
    """``g(x2) - g(x1)`` without cancellation, for increments far below ``ulp(g)``."""
    return float(g_exact(x2, r, cfg) - g_exact(x1, r, cfg))


# ---------------------------------------------------------------------------
# monotone inversion
# ---------------------------------------------------------------------------


def bisect_scalar(f, target, lo, hi, flo, fhi, xtol, max_iter, ftol=None):
    """Bisect an increasing ``f`` on ``[lo, hi]`` with ``flo <= target <= fhi``.

    Stops once the bracket is narrower than ``xtol`` (and, when given, its
    image narrower than ``ftol``), on an exact hit, or when no float is left
    between the bracket ends.
    """
    for _ in range(max_iter):
        if hi - lo <= xtol and (ftol is None or fhi - flo <= ftol):
            return 0.5 * (lo + hi)
        mid = 0.5 * (lo + hi)
        if not lo < mid < hi:
            return lo if target - flo <= fhi - target else hi
        fm = f(mid)
        if fm == target:
            return mid
        if fm < target:
            lo, flo = mid, fm
        else:
            hi, fhi = mid, fm
    if hi - lo <= xtol and (ftol is None or fhi - flo <= ftol):
        return 0.5 * (lo + hi)
    raise ConvergenceError(f"bisection did not converge in {max_iter} iterations", lo, hi)


def bisect_array(f, target, lo, hi, flo, fhi, xtol, max_iter, ftol=None):
    """Elementwise :func:`bisect_scalar` over 1-d arrays."""
    lo, hi = lo.astype(np.float64), hi.astype(np.float64)
    flo, fhi = flo.astype(np.float64), fhi.astype(np.float64)
    out = np.empty_like(lo)
    live = np.arange(lo.size)
    for _ in range(max_iter + 1):
        done = hi[live] - lo[live] <= xtol
        if ftol is not None:
            done &= fhi[live] - flo[live] <= ftol
        fin = live[done]
        out[fin] = 0.5 * (lo[fin] + hi[fin])
        live = live[~done]
        if live.size == 0:
            return out
        if _ == max_iter:
            break
        l, u = lo[live], hi[live]
        mid = 0.5 * (l + u)
        stuck = ~((l < mid) & (mid < u))
        if stuck.any():
            sl = live[stuck]
            closer_lo = target[sl] - flo[sl] <= fhi[sl] - target[sl]
            out[sl] = np.where(closer_lo, lo[sl], hi[sl])
            live, mid = live[~stuck], mid[~stuck]
        fm = f(mid, live)
        hit = fm == target[live]
        out[live[hit]] = mid[hit]
        below = fm < target[live]
        go_lo = live[below & ~hit]
        go_hi = live[~below & ~hit]
        lo[go_lo], flo[go_lo] = mid[below & ~hit], fm[below & ~hit]
        hi[go_hi], fhi[go_hi] = mid[~below & ~hit], fm[~below & ~hit]
        live = live[~hit]
    raise ConvergenceError(
        f"bisection did not converge in {max_iter} iterations", lo[live].copy(), hi[live].copy())


def g_inverse(y, r: int = 1, cfg: EvalConfig = DEFAULT_CONFIG):
    """Inverse of :func:`g` on all of R.

    The power-law branches are inverted in closed form; on ``[0, g(1)]`` the
    preimage is bracketed by bisection on ``[0, 1]`` to ``cfg.tolerance``.
    """
    r = check_order(r)
    is_scalar, y = _prep(y)
    g1 = total_rise(r, cfg.depth)
    inv = 1.0 / (2 * r)
    if is_scalar:
        if y <= 0.0:
            return -((-y) ** inv) if y else 0.0
        if y >= g1:
            return 1.0 + (y - g1) ** inv
        return bisect_scalar(lambda u: g(u, r, cfg), y, 0.0, 1.0, 0.0, g1,
                             cfg.tolerance, cfg.max_iter)

    out = np.empty_like(y)
    left = y <= 0.0
    right = y >= g1
    out[left] = -((-y[left]) ** inv)
    out[y == 0.0] = 0.0
    out[right] = 1.0 + (y[right] - g1) ** inv
    mid = ~(left | right)
    ym = y[mid].reshape(-1)
    n = ym.size
    out[mid] = bisect_array(lambda u, _: g(u, r, cfg), ym, np.zeros(n), np.ones(n),
                            np.zeros(n), np.full(n, g1), cfg.tolerance, cfg.max_iter)
    return out


# ---------------------------------------------------------------------------
# constants
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConstantsBundle:
    """Derived constants for one smoothness order.

    ``K`` bounds the bump and its first ``r`` derivatives, ``D`` is a
    Lipschitz constant of ``h`` on ``[0, 1]`` and ``B`` the flatness constant
    in ``|g(x) - g(x0)| <= B |x - x0|**(r+1)`` for ``x0`` in the Cantor set.
    ``growth`` is the lower-growth constant in
    ``|g(x2) - g(x1)| >= growth * |x2 - x1|**beta`` and ``holder_constant``
    the resulting bound ``|X(y2) - X(y1)| <= holder_constant * |y2 - y1|**alpha``.
    """

    r: int
    A: float
    K: float
    D: float
    B: float
    beta: float
    alpha: float
    growth: float
    holder_constant: float


_GRID_POINTS = 100_001


@lru_cache(maxsize=None)
def constants(r: int = 1) -> ConstantsBundle:
    r = check_order(r)
    grid = np.linspace(0.0, 1.0, _GRID_POINTS)
    sups = [float(np.max(np.abs(_phi(grid, j, r)))) for j in range(r + 1)]
    a = phi_integral(r)
    k = 1.01 * max(sups)
    # sup over stages of 3**((j - 3r + 1) n) is reached at n = 1
    e = _SLOPE_EXP[r]
    d = 1.01 * 3.0 ** (1 - e) * sups[1]
    b = 1.01 * 3.0 ** (r - e) * sups[r] / math.factorial(r + 1)
    beta = 3.0 * r
    alpha = 1.0 / beta
    growth = a * 18.0 ** (-beta)
    return ConstantsBundle(r=r, A=a, K=k, D=d, B=b, beta=beta, alpha=alpha,
                           growth=growth, holder_constant=d * growth ** (-alpha))
