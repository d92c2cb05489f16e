from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.polynomial import Polynomial
from scipy import integrate

from cantorfol.cantor_core import GapId
from cantorfol.errors import ConvergenceError, DomainError
from cantorfol.generator import (
    bisect_scalar,
    check_order,
    constants,
    g,
    g_exact,
    g_increment,
    g_inverse,
    h,
    h_deriv,
    phi,
    phi_antiderivative,
    phi_integral,
    series_tail_bound,
    total_rise,
)

unit = st.floats(min_value=0.0, max_value=1.0, allow_nan=False)


def bump_poly(r):
    t = Polynomial([0, 1])
    return (t * (1 - t)) ** (r + 1)


def simpson_A(r, n=20_001):
    x = np.linspace(0.0, 1.0, n)
    return integrate.simpson(bump_poly(r)(x), x=x)


def g_quadrature(x, r=1, max_stage=12):
    """g(x) by adaptive quadrature of h over every gap of stage <= max_stage."""
    total = 0.0
    for n in range(1, max_stage + 1):
        for bits in range(2 ** (n - 1)):
            gap = GapId.from_prefix(bits, n)
            a, b = float(gap.left), float(gap.right)
            if a >= x:
                continue
            total += integrate.quad(lambda u: h(u, r), a, min(b, x), epsabs=1e-18, epsrel=1e-13)[0]
    return total


@pytest.mark.parametrize("r", [1, 2, 3])
def test_A_matches_simpson(r):
    assert abs(phi_integral(r) - simpson_A(r)) <= 1e-10


def test_A_closed_forms():
    assert phi_integral(1) == 1 / 30
    assert phi_integral(2) == 1 / 140


def test_phi_examples():
    assert phi(0.5) == 0.0625
    assert phi(0.0) == 0.0 and phi(1.0) == 0.0
    assert phi(0.5, j=1) == 0.0


@pytest.mark.parametrize("r", [1, 2, 4, 6])
def test_phi_derivatives_match_polynomial(r):
    tau = np.linspace(0.0, 1.0, 1001)
    p = bump_poly(r)
    for j in range(r + 1):
        # integer coefficients, evaluated exactly in rationals
        coef = [Fraction(int(c)) for c in p.deriv(j).coef]
        ref = [float(sum(c * Fraction(t) ** i for i, c in enumerate(coef))) for t in tau]
        np.testing.assert_allclose(phi(tau, j, r), ref, rtol=1e-11, atol=1e-12 * np.max(np.abs(ref)))


@pytest.mark.parametrize("r", [1, 3])
def test_antiderivative_matches_quadrature(r):
    for s in (0.0, 0.1, 0.35, 0.5, 0.9, 1.0):
        ref = integrate.quad(bump_poly(r), 0.0, s, epsabs=1e-17)[0]
        assert abs(phi_antiderivative(s, r) - ref) <= 1e-16


def test_h_examples():
    assert h(0.5) == pytest.approx(1 / 144, rel=1e-15)
    assert h(0.25) == 0.0
    assert h(-1.0) == 2.0
    assert h(2.0) == 2.0
    assert h_deriv(0.5, 1) == 0.0
    # phi'(0.35) = 2(0.35)(0.65)^2 - 2(0.35)^2(0.65) = 0.1365
    assert h_deriv(0.15, 1) == pytest.approx(0.1365 / 9, rel=1e-12)


def test_h_deriv_matches_finite_differences():
    x = np.random.default_rng(4).uniform(-0.5, 1.5, 500)
    d = 1e-7
    fd = (h(x + d) - h(x - d)) / (2 * d)
    # skip points whose stencil straddles a gap end
    same = (np.abs(h_deriv(x + d, 1) - h_deriv(x - d, 1)) < 1e-5)
    np.testing.assert_allclose(fd[same], h_deriv(x, 1)[same], atol=1e-6)


def test_h_deriv_domain():
    with pytest.raises(DomainError):
        h_deriv(0.5, 2, r=1)


def test_g_examples():
    assert g(1.0) == pytest.approx(1 / 750, rel=1e-15)
    assert g(0.5) == pytest.approx(1 / 1500, rel=1e-15)
    assert g(2 / 3) == pytest.approx(13 / 10125, rel=1e-14)
    assert g(0.0) == 0.0
    assert g(-2.0) == -4.0
    assert g(2.0) == pytest.approx(1 + 1 / 750, rel=1e-15)


@pytest.mark.parametrize("r", [1, 2])
def test_total_rise_geometric_series(r):
    assert abs(total_rise(r) - phi_integral(r) / (27**r - 2)) <= 1e-14
    assert series_tail_bound(r) < 1e-16 * total_rise(r)


@pytest.mark.parametrize("x", [0.1, 0.3, 0.5, 0.62, 0.8, 0.97])
def test_g_matches_gapwise_quadrature(x):
    assert abs(g(x) - g_quadrature(x)) <= 1e-14


def test_g_is_integral_of_h_for_higher_order():
    # derivative of the series equals h on gaps for every order
    x = np.array([0.15, 0.5, 0.72, 0.9])
    d = 1e-6
    for r in (2, 3):
        fd = (g(x + d, r) - g(x - d, r)) / (2 * d)
        np.testing.assert_allclose(fd, h(x, r), rtol=1e-6, atol=1e-16)


def test_g_exact_agrees_with_float():
    x = np.random.default_rng(8).random(200)
    for v in x:
        assert float(g_exact(v)) == pytest.approx(g(float(v)), rel=1e-14, abs=1e-20)
    assert g_exact(1.0) - Fraction(1, 750) < Fraction(1, 10**20)


def test_g_increment_resolves_tiny_steps():
    x0 = 0.25  # a Cantor point: g is flat to high order here
    inc = g_increment(x0, x0 + 1e-9)
    assert g(x0 + 1e-9) - g(x0) in (0.0, np.spacing(g(x0)))
    assert 0 < inc <= constants(1).B * 1e-18


@settings(max_examples=200, deadline=None)
@given(unit, unit)
def test_g_monotone_pairs(a, b):
    lo, hi = min(a, b), max(a, b)
    if hi - lo >= 1e-8:
        assert g_increment(lo, hi) > 0
        assert g(hi) >= g(lo)


@settings(max_examples=200, deadline=None)
@given(unit)
def test_g_symmetry(x):
    assert abs(g(x) + g(1 - x) - g(1.0)) <= 1e-14 * g(1.0)


def test_self_similarity():
    x = np.random.default_rng(9).random(10_000)
    for r in (1, 2):
        assert np.max(np.abs(h(x / 3, r) - 3.0 ** (1 - 3 * r) * h(x, r))) <= 1e-15
        assert np.max(np.abs(g(x / 3, r) - 3.0 ** (-3 * r) * g(x, r))) <= 1e-15 * g(1.0, r)


def test_inverse_round_trip():
    rng = np.random.default_rng(12)
    y = np.concatenate([rng.uniform(0, g(1.0), 10_000), rng.uniform(-3, 3, 1000)])
    assert np.max(np.abs(g(g_inverse(y)) - y)) <= 1e-12
    assert g_inverse(g(0.25)) == 0.25
    assert g_inverse(0.0) == 0.0 and not np.signbit(g_inverse(0.0))
    assert g_inverse(-4.0) == -2.0


def test_inverse_scalar_array_agree():
    y = np.random.default_rng(13).uniform(0, g(1.0), 300)
    np.testing.assert_array_equal(g_inverse(y), [g_inverse(float(v)) for v in y])


def test_bisection_reports_bracket():
    with pytest.raises(ConvergenceError) as info:
        bisect_scalar(lambda u: u, 0.3, 0.0, 1.0, 0.0, 1.0, 1e-15, 3)
    assert info.value.lo < 0.3 < info.value.hi


def test_constants_bundle():
    k = constants(1)
    assert k.A == 1 / 30
    assert k.beta == 3 and k.alpha * k.beta == 1
    assert k.growth == pytest.approx(k.A * 18.0**-3)
    assert k.holder_constant == pytest.approx(18 * k.D * k.A ** (-1 / 3))
    # sup|phi'| on [0,1] is attained at (3 - sqrt 3)/6
    t = (3 - np.sqrt(3)) / 6
    assert k.D == pytest.approx(1.01 * abs(2 * t * (1 - t) * (1 - 2 * t)) / 3, rel=1e-8)
    for r in range(1, 7):
        kr = constants(r)
        assert min(kr.A, kr.K, kr.D, kr.B, kr.growth, kr.holder_constant) > 0


@pytest.mark.parametrize("bad", [0, 7, 1.5, True, "1"])
def test_order_validation(bad):
    with pytest.raises(DomainError):
        check_order(bad)
