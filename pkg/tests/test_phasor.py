import cmath
import math

import pytest
from hypothesis import given, strategies as st

from circuitquest.core import Phasor, wrap_angle


@given(st.floats(min_value=-1e6, max_value=1e6, allow_nan=False))
def test_wrap_angle_lands_in_half_open_interval(a):
    w = wrap_angle(a)
    assert -math.pi < w <= math.pi


@given(st.floats(min_value=-50.0, max_value=50.0))
def test_wrap_angle_preserves_direction(a):
    w = wrap_angle(a)
    assert cmath.exp(1j * w) == cmath.exp(1j * a) or abs(cmath.exp(1j * w) - cmath.exp(1j * a)) < 1e-9


def test_wrap_boundary():
    assert wrap_angle(math.pi) == math.pi
    assert wrap_angle(-math.pi) == math.pi
    assert wrap_angle(3 * math.pi) == math.pi


def test_negative_magnitude_normalizes():
    p = Phasor(-2.0, 0.0)
    assert p.magnitude == 2.0
    assert p.angle == math.pi


def test_zero_magnitude_has_zero_angle():
    assert Phasor(0.0, 1.2).angle == 0.0


@given(
    st.floats(min_value=1e-6, max_value=1e6),
    st.floats(min_value=-math.pi, max_value=math.pi),
)
def test_from_complex_round_trip(mag, ang):
    p = Phasor(mag, ang)
    q = Phasor.from_complex(p.complex)
    assert q.magnitude == pytest.approx(mag, rel=1e-12)
    assert cmath.isclose(q.complex, p.complex, rel_tol=1e-12)


def test_degrees():
    assert Phasor(1.0, math.pi / 2).degrees == pytest.approx(90.0)
