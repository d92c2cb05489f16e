import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cantorfol.cantor_core import cantor_function
from cantorfol.generator import g, total_rise
from cantorfol.staircase import psi
from cantorfol.verifier import inner_bounds, random_gap

G1 = total_rise(1)


def test_normalisation():
    assert psi(0.0) == 0.0
    assert psi(-1.0) == 0.0
    assert psi(G1) == 1.0
    assert psi(5.0) == 1.0


def test_gap_image_values():
    # the first gap maps to ordinates around g(1/2) = g(1)/2
    assert psi(g(0.5)) == 0.5
    assert psi(g(0.4)) == psi(g(0.6)) == 0.5
    # 0.25 is a Cantor point hit exactly by the inversion
    assert psi(g(0.25)) == cantor_function(0.25)


def test_monotone():
    y = np.sort(np.random.default_rng(1).uniform(-0.1 * G1, 1.1 * G1, 10_000))
    assert np.all(np.diff(psi(y)) >= 0)


def test_constant_on_gap_images():
    rng = np.random.default_rng(2)
    for _ in range(300):
        a, b = inner_bounds(random_gap(rng, 8))
        ya, yb = g(a), g(b)
        y = ya + (yb - ya) * rng.uniform(0.01, 0.99, 3)
        vals = psi(y)
        assert vals[0] == vals[1] == vals[2] == cantor_function(0.5 * (a + b))


@settings(max_examples=100, deadline=None)
@given(st.floats(min_value=0.0, max_value=1.0))
def test_scalar_matches_array(u):
    y = u * G1
    assert psi(y) == psi(np.array([y]))[0]


def test_rejects_nan():
    with pytest.raises(ValueError):
        psi(float("nan"))
