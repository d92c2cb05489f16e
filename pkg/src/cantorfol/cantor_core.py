"""Exact, depth-limited arithmetic on the middle-thirds Cantor set.

Ternary digits are read off the exact binary fraction behind a float:
``x = p / 2**E`` with integer ``p``, so ``3 * x`` never rounds and every
digit up to the configured depth is the true digit of ``x``.  Scalars go
through Python integers; arrays go through ``uint64`` lanes, which are exact
as long as ``E <= 62`` (every float >= 2**-9, and every float on the 2**-53
grid).  The few array elements with a longer fraction fall back to the
scalar path.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Union

import numpy as np

from .errors import DepthLimitError, DomainError

#: Largest stage whose denominator 3**n fits a signed 64-bit integer.
MAX_STAGE = 39

_MAX_LANE_BITS = 62


@dataclass(frozen=True)
class EvalConfig:
    """Truncation depth and bisection controls shared by all evaluators."""

    depth: int = 34
    tolerance: float = 1e-14
    max_iter: int = 200

    def __post_init__(self):
        if not isinstance(self.depth, (int, np.integer)) or not 1 <= self.depth <= MAX_STAGE:
            raise DomainError(f"depth must be an integer in [1, {MAX_STAGE}], got {self.depth!r}")
        if not (self.tolerance > 0 and math.isfinite(self.tolerance)):
            raise DomainError(f"tolerance must be positive and finite, got {self.tolerance!r}")
        if self.max_iter < 1:
            raise DomainError(f"max_iter must be >= 1, got {self.max_iter!r}")


DEFAULT_CONFIG = EvalConfig()


@dataclass(frozen=True)
class GapId:
    """The complementary interval ``(index / 3**stage, (index + 1) / 3**stage)``."""

    stage: int
    index: int

    def __post_init__(self):
        n, k = self.stage, self.index
        if n < 1:
            raise DomainError(f"gap stage must be >= 1, got {n}")
        if n > MAX_STAGE:
            raise DepthLimitError(f"gap stage {n} exceeds the depth limit {MAX_STAGE}")
        if not 0 <= k < 3**n:
            raise DomainError(f"gap index {k} out of range for stage {n}")
        if k % 3 != 1:
            raise DomainError(f"({k}, {n}) is not a gap: stage digit must be 1")
        k //= 3
        for _ in range(n - 1):
            if k % 3 == 1:
                raise DomainError(f"({self.index}, {n}) lies inside an earlier gap")
            k //= 3

    @property
    def left(self) -> Fraction:
        return Fraction(self.index, 3**self.stage)

    @property
    def right(self) -> Fraction:
        return Fraction(self.index + 1, 3**self.stage)

    @classmethod
    def from_prefix(cls, bits: int, stage: int) -> "GapId":
        """Gap whose first ``stage - 1`` digits are ``bits`` read in binary with 1 -> 2."""
        k = 0
        for i in range(stage - 2, -1, -1):
            k = 3 * k + 2 * ((bits >> i) & 1)
        return cls(stage, 3 * k + 1)


@dataclass(frozen=True)
class InCantor:
    depth: int


@dataclass(frozen=True)
class InGap:
    gap: GapId
    local: float


@dataclass(frozen=True)
class OutsideLeft:
    pass


@dataclass(frozen=True)
class OutsideRight:
    pass


PointClass = Union[InCantor, InGap, OutsideLeft, OutsideRight]


def _check_finite(x):
    if not np.all(np.isfinite(x)):
        raise DomainError("argument must be finite")


# ---------------------------------------------------------------------------
# digit scans
# ---------------------------------------------------------------------------


class Scan(NamedTuple):
    """Result of reading ternary digits of a point of ``[0, 1]``.

    ``stage`` is the position of the first digit 1 (0 when none was seen up to
    the depth), ``index`` the gap numerator, ``local`` the coordinate
    ``3**stage * (x - a)`` inside the gap, ``binary`` the Cantor function value
    and ``gapsum`` the weighted gap count ``sum_n q**n * #gaps_n(left of x)``
    (zero when no ratio was supplied).
    """

    stage: object
    index: object
    local: object
    binary: object
    gapsum: object


def _tail_factor(q, n, depth):
    # sum_{j=0}^{depth-n-1} (2q)^j
    if depth <= n:
        return 0.0
    return (1.0 - (2.0 * q) ** (depth - n)) / (1.0 - 2.0 * q)


def digits(x: float, depth: int) -> tuple[list[int], int, int]:
    """Ternary digits of ``x`` in ``[0, 1]`` up to the first 1 or ``depth`` digits.

    Returns ``(digits, p, E)`` where ``p / 2**E`` is the exact value of the
    digits not yet read.  ``x == 1`` reads as ``0.222...`` with tail value 1.
    """
    if x == 1.0:
        return [2] * depth, 1, 0
    num, den = float(x).as_integer_ratio()
    e = den.bit_length() - 1
    out = []
    p = num
    for _ in range(depth):
        p *= 3
        d = p >> e
        p -= d << e
        out.append(d)
        if d == 1:
            break
    return out, p, e


def _scan_scalar(x: float, depth: int, q: float | None) -> Scan:
    ds, p, e = digits(x, depth)
    bits = 0
    gapsum = 0.0
    binary = 0.0
    qn = 1.0
    half = 1.0
    index = 0
    for n, d in enumerate(ds, 1):
        half *= 0.5
        index = 3 * index + d
        if q is not None:
            qn *= q
            gapsum += qn * (bits + (d == 2))
        if d:
            binary += half
        if d == 1:
            if q is not None:
                gapsum += (2 * bits + 1) * qn * q * _tail_factor(q, n, depth)
            # int / int is correctly rounded
            return Scan(n, index, p / (1 << e), binary, gapsum)
        bits = 2 * bits + (d == 2)
    if x == 1.0:
        binary = 1.0
    return Scan(0, 0, 0.0, binary, gapsum)


def _lanes(x: np.ndarray):
    """Exact ``(p, E)`` uint64 lanes for ``x`` in ``[0, 1)``; also a mask of
    elements whose binary fraction is too long for a lane."""
    m, ex = np.frexp(x)
    p = np.ldexp(m, 53).astype(np.uint64)
    e = (53 - ex).astype(np.int64)
    nz = p != 0
    low = p & (~p + np.uint64(1))
    tz = np.zeros_like(e)
    tz[nz] = np.log2(low[nz].astype(np.float64)).astype(np.int64)
    shift = np.minimum(tz, e)
    p = p >> shift.astype(np.uint64)
    e = e - shift
    e[~nz] = 0
    slow = e > _MAX_LANE_BITS
    e[slow] = 0
    p[slow] = 0
    return p, e.astype(np.uint64), slow


def _scan_array(x: np.ndarray, depth: int, q: float | None) -> Scan:
    x = np.asarray(x, dtype=np.float64)
    size = x.size
    flat = x.reshape(-1)
    stage = np.zeros(size, dtype=np.int64)
    index = np.zeros(size, dtype=np.int64)
    local = np.zeros(size)
    binary = np.zeros(size)
    gapsum = np.zeros(size)

    one = flat == 1.0
    p, e, slow = _lanes(np.where(one, 0.0, flat))
    idx = np.flatnonzero(~one & ~slow)
    p = p[idx]
    e = e[idx]
    bits = np.zeros(idx.size)
    k = np.zeros(idx.size, dtype=np.int64)
    qn = 1.0
    half = 1.0
    for n in range(1, depth + 1):
        if idx.size == 0:
            break
        half *= 0.5
        p = p * np.uint64(3)
        d = p >> e
        p = p - (d << e)
        d = d.astype(np.int64)
        k = 3 * k + d
        two = d == 2
        if q is not None:
            qn *= q
            gapsum[idx] += qn * (bits + two)
        binary[idx] += half * (d != 0)
        hit = d == 1
        if hit.any():
            hi = idx[hit]
            stage[hi] = n
            index[hi] = k[hit]
            local[hi] = np.ldexp(p[hit].astype(np.float64), -e[hit].astype(np.int64))
            if q is not None:
                gapsum[hi] += (2.0 * bits[hit] + 1.0) * (qn * q * _tail_factor(q, n, depth))
            keep = ~hit
            idx, p, e, k, bits, two = idx[keep], p[keep], e[keep], k[keep], bits[keep], two[keep]
        bits = 2.0 * bits + two

    if one.any():
        binary[one] = 1.0
        if q is not None:
            gapsum[one] = q * _tail_factor(q, 0, depth)
    for i in np.flatnonzero(slow):
        s = _scan_scalar(float(flat[i]), depth, q)
        stage[i], index[i], local[i], binary[i], gapsum[i] = s

    shape = x.shape
    return Scan(stage.reshape(shape), index.reshape(shape), local.reshape(shape),
                binary.reshape(shape), gapsum.reshape(shape))


def scan(x, depth: int, q: float | None = None) -> Scan:
    """Digit scan of ``x`` (scalar or array, values in ``[0, 1]``)."""
    if np.ndim(x) == 0:
        return _scan_scalar(float(x), depth, q)
    return _scan_array(np.asarray(x, dtype=np.float64), depth, q)


# ---------------------------------------------------------------------------
# public operations
# ---------------------------------------------------------------------------


def classify(x: float, cfg: EvalConfig = DEFAULT_CONFIG) -> PointClass:
    """Locate ``x`` relative to the Cantor set.

    >>> classify(0.5)
    InGap(gap=GapId(stage=1, index=1), local=0.5)
    """
    x = float(x)
    _check_finite(x)
    if x < 0.0:
        return OutsideLeft()
    if x > 1.0:
        return OutsideRight()
    s = _scan_scalar(x, cfg.depth, None)
    # gap endpoints (remainder exactly 0 after the digit 1) belong to C
    if s.stage == 0 or s.local == 0.0:
        return InCantor(cfg.depth)
    return InGap(GapId(s.stage, s.index), s.local)


def gap_bounds(gap: GapId) -> tuple[float, float]:
    """Correctly rounded endpoints ``(k / 3**n, (k + 1) / 3**n)``."""
    if gap.stage > MAX_STAGE:
        raise DepthLimitError(f"stage {gap.stage} exceeds {MAX_STAGE}")
    d = 3**gap.stage
    return gap.index / d, (gap.index + 1) / d


def count_gaps_left(x: float, n: int, cfg: EvalConfig = DEFAULT_CONFIG) -> int:
    """Number of stage-``n`` gaps lying entirely to the left of ``x``."""
    x = float(x)
    _check_finite(x)
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"x must lie in [0, 1], got {x!r}")
    if n > MAX_STAGE:
        raise DepthLimitError(f"stage {n} exceeds {MAX_STAGE}")
    if not 1 <= n <= cfg.depth:
        raise DomainError(f"stage must lie in [1, {cfg.depth}], got {n}")
    ds, _, _ = digits(x, n)
    bits = 0
    for m, d in enumerate(ds, 1):
        if d == 1:
            if m == n:
                return bits
            return bits * 2 ** (n - m) + 2 ** (n - 1 - m)
        if m == n:
            return bits + (d == 2)
        bits = 2 * bits + (d == 2)
    raise AssertionError("unreachable")  # pragma: no cover


def cantor_function(x, cfg: EvalConfig = DEFAULT_CONFIG):
    """The Cantor staircase, clamped to 0 left of 0 and 1 right of 1.

    Truncation at ``cfg.depth`` digits costs at most ``2**-depth`` on points
    that are still undecided at that depth.
    """
    _check_finite(x)
    if np.ndim(x) == 0:
        x = float(x)
        if x <= 0.0:
            return 0.0
        if x >= 1.0:
            return 1.0
        return _scan_scalar(x, cfg.depth, None).binary
    x = np.asarray(x, dtype=np.float64)
    c = np.clip(x, 0.0, 1.0)
    out = _scan_array(c, cfg.depth, None).binary
    out[x <= 0.0] = 0.0
    out[x >= 1.0] = 1.0
    return out
