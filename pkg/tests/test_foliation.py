import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cantorfol.cantor_core import cantor_function
from cantorfol.errors import DomainError
from cantorfol.foliation import (
    LeafSpec,
    f_t,
    g_t,
    in_cantor_image,
    leaf_sample,
    ordinate_gap_distance,
    pullback,
    pushforward,
    vector_field,
)
from cantorfol.generator import g, g_inverse, h, total_rise
from cantorfol.staircase import psi

G1 = total_rise(1)
T_GRID = (0.0, 0.25, 0.5, 0.75, 1.0)


def test_f_t_examples():
    assert f_t(0.0, 0.5) == 0.0
    assert f_t(g(0.5), 0.5) == pytest.approx(0.75, abs=1e-14)
    assert f_t(G1, 1.0) == 2.0


def test_g_t_examples():
    assert g_t(0.0, 0.3) == 0.0
    assert g_t(2.0, 1.0) == G1
    assert g_t(2.0, 0.0) == pytest.approx(G1 + 1.0, rel=1e-15)
    assert g_t(0.75, 0.5) == pytest.approx(g(0.5), rel=1e-12)
    assert g_t(-1.0, 0.7) == -1.0


def test_t_validation():
    with pytest.raises(DomainError):
        g_t(0.5, 1.5)
    with pytest.raises(DomainError):
        LeafSpec(-0.1, 0.0)


@pytest.mark.parametrize("t", T_GRID)
def test_round_trip(t):
    rng = np.random.default_rng(int(t * 100))
    y = np.concatenate([rng.uniform(0, G1, 5000), rng.uniform(-1, G1 + 1, 5000)])
    assert np.max(np.abs(g_t(f_t(y, t), t) - y)) <= 2e-12


def test_t0_is_g():
    x = np.random.default_rng(3).uniform(-0.5, 1.5, 5000)
    assert np.max(np.abs(g_t(x, 0.0) - g(x))) <= 2e-14


def test_pullback_inverts_pushforward_on_gaps():
    rng = np.random.default_rng(4)
    x = rng.random(5000)
    t = rng.choice(T_GRID, 5000)
    u = pullback(pushforward(x, t), t)
    # inside gaps the staircase is flat, so u recovers x closely
    np.testing.assert_allclose(cantor_function(u), cantor_function(x), atol=1e-9)


def test_pullback_scalar_array_agree():
    z = np.random.default_rng(5).uniform(0, 1.5, 200)
    np.testing.assert_array_equal(pullback(z, 0.5), [pullback(float(v), 0.5) for v in z])


def test_contraction_and_transport():
    rng = np.random.default_rng(6)
    x, x0 = rng.random(10_000), rng.random(10_000)
    t = rng.choice(T_GRID, 10_000)
    z, z0 = pushforward(x, t), pushforward(x0, t)
    assert np.all(np.abs(x - x0) <= np.abs(z - z0) + 1e-12)
    lhs = np.abs(g_t(z, t) - g_t(z0, t))
    rhs = np.abs(g(x) - g(x0))
    assert np.max(np.abs(lhs - rhs)) <= 4e-14


def test_monotone_band():
    x = np.linspace(0.0, 3.0, 301)
    lo, hi = g_t(x, 1.0), g_t(x, 0.0)
    for t in np.linspace(0, 1, 11):
        v = g_t(x, t)
        assert np.all(lo <= v + 1e-16) and np.all(v <= hi + 1e-16)


def test_in_cantor_image_examples():
    assert in_cantor_image(0.0, 0.5)
    assert in_cantor_image(pushforward(0.25, 0.5), 0.5)
    assert not in_cantor_image(pushforward(0.5, 0.5), 0.5)
    assert not in_cantor_image(-0.1, 0.5)
    assert in_cantor_image(1.0 + 0.5, 0.5)


def test_ordinate_gap_distance():
    assert ordinate_gap_distance(0.25) == 0.0
    assert ordinate_gap_distance(0.5) == pytest.approx(G1 / 2 - g(1 / 3), rel=1e-12)


@settings(max_examples=100, deadline=None)
@given(st.floats(min_value=0.0, max_value=1.0), st.sampled_from(T_GRID))
def test_off_cantor_local_form(u, t):
    # near a point whose pullback sits inside a gap, g_t is g shifted by t * psi
    z = pushforward(u, t)
    if ordinate_gap_distance(pullback(z, t)) <= 1e-12 * G1:
        return
    c = t * psi(g_t(z, t))
    for eps in (-1e-9, 1e-9):
        assert abs(g_t(z + eps, t) - g(z + eps - c)) <= 2e-14


def test_leaf_sample_and_translates():
    pts = leaf_sample(LeafSpec(0.0, 0.0), 0.0, 1.0, 3)
    np.testing.assert_allclose(pts, [[0, 0], [0.5, G1 / 2], [1, G1]], rtol=1e-15)
    shifted = leaf_sample(LeafSpec(0.5, 0.25), 0.0, 2.0, 9)
    np.testing.assert_array_equal(shifted[:, 1], g_t(shifted[:, 0] - 0.25, 0.5))
    with pytest.raises(DomainError):
        leaf_sample(LeafSpec(0.0, 0.0), 1.0, 0.0, 5)


def test_vector_field_tangent_to_leaves():
    x = np.linspace(-0.5, 2.5, 200)
    d = 1e-7
    for t in T_GRID:
        slope = (g_t(x + d, t) - g_t(x - d, t)) / (2 * d)
        v = vector_field(x, g_t(x, t))
        assert np.all(v.dx == 1.0)
        assert np.max(np.abs(slope - v.dy)) <= 1e-4
    assert vector_field(3.0, 0.0) == (1.0, 0.0)
    assert vector_field(0.0, G1 / 2).dy == pytest.approx(h(g_inverse(G1 / 2)), rel=1e-12)
