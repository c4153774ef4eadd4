import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from crdu import Distortion, DomainError, Utility

PWL = Distortion.piecewise_linear([(0, 0), (0.5, 0.25), (1, 1)])


class TestDistortionEval:
    def test_power(self):
        assert Distortion.power(2)(0.5) == pytest.approx(0.25)

    def test_identity(self):
        assert Distortion.identity()(0.7) == 0.7

    def test_pwl_interpolates(self):
        assert PWL(0.75) == pytest.approx(0.625)

    def test_vectorized(self):
        out = Distortion.power(2)(np.array([0.0, 0.5, 1.0]))
        assert np.allclose(out, [0.0, 0.25, 1.0])

    def test_domain_violation(self):
        with pytest.raises(DomainError):
            Distortion.power(2)(1.5)


class TestDistortionInverse:
    def test_power(self):
        assert Distortion.power(2).inverse(0.25) == pytest.approx(0.5)

    def test_identity(self):
        assert Distortion.identity().inverse(0.3) == 0.3

    def test_pwl(self):
        assert PWL.inverse(0.625) == pytest.approx(0.75)

    def test_flat_pwl_has_no_inverse(self):
        flat = Distortion.piecewise_linear([(0, 0), (0.5, 0.5), (0.6, 0.5), (1, 1)])
        assert not flat.strictly_increasing
        with pytest.raises(ValueError):
            flat.inverse(0.5)


class TestShape:
    def test_power_two_is_convex_only(self):
        g = Distortion.power(2)
        assert g.is_convex() and not g.is_concave()

    def test_identity_is_affine(self):
        g = Distortion.identity()
        assert g.is_convex() and g.is_concave()

    def test_pwl_slopes(self):
        assert PWL.is_convex() and not PWL.is_concave()

    def test_pwl_affine_iff_single_slope(self):
        two_slopes = PWL
        assert not (two_slopes.is_convex() and two_slopes.is_concave())
        one_slope = Distortion.piecewise_linear([(0, 0), (0.4, 0.4), (1, 1)])
        assert one_slope.is_convex() and one_slope.is_concave()

    def test_strict_concavity(self):
        assert Distortion.power(0.5).is_strictly_concave()
        assert not Distortion.identity().is_strictly_concave()


def test_distortion_validation():
    with pytest.raises(ValueError):
        Distortion.power(0.0)
    with pytest.raises(ValueError):
        Distortion.piecewise_linear([(0, 0), (1, 0.9)])
    with pytest.raises(ValueError):
        Distortion.piecewise_linear([(0, 0), (0.5, 0.8), (1, 0.6)])


class TestUtility:
    def test_power_eval_and_inverse(self):
        u = Utility.power(2.0, lo=0.0, hi=4.0)
        assert u(3.0) == pytest.approx(9.0)
        assert u.inverse(0.5) == pytest.approx(math.sqrt(0.5))

    def test_exponential_closed_form(self):
        u = Utility.exponential(2.0)
        assert u(1.0) == pytest.approx(-math.exp(-0.5))
        assert u.inverse(-math.exp(-0.5)) == pytest.approx(1.0)

    def test_pwl_domain_comes_from_knots(self):
        u = Utility.piecewise_linear([(-1, -1), (0, 0), (1, 2)])
        assert (u.lo, u.hi) == (-1.0, 1.0)
        with pytest.raises(DomainError):
            u(1.5)

    def test_rejects_out_of_domain_instead_of_extrapolating(self):
        u = Utility.power(2.0, lo=0.0, hi=1.0)
        with pytest.raises(DomainError):
            u(2.0)

    def test_normalized(self):
        u = Utility.exponential(1.0, lo=-2.0, hi=3.0).normalized()
        assert u(0.0) == pytest.approx(0.0, abs=1e-15)
        assert u(1.0) == pytest.approx(1.0)
        assert u.is_normalized

    def test_normalization_needs_unit_interval(self):
        u = Utility.piecewise_linear([(2, 0), (3, 1)])
        with pytest.raises(DomainError):
            u.normalized()

    def test_shapes(self):
        assert Utility.exponential(1.0).is_concave()
        assert not Utility.exponential(1.0).is_convex()
        assert Utility.power(0.5).is_concave()
        assert Utility.power(2.0).is_convex()
        assert Utility.identity().is_concave() and Utility.identity().is_convex()

    def test_strictly_increasing_required(self):
        with pytest.raises(ValueError):
            Utility.piecewise_linear([(0, 0), (1, 0)])
        with pytest.raises(ValueError):
            Utility("identity", lo=0, hi=1, scale=-1.0)


# --- property tests -------------------------------------------------------

_unit = st.floats(0.0, 1.0, allow_nan=False)


@settings(max_examples=200, deadline=None)
@given(x=_unit, gamma=st.floats(0.2, 5.0, allow_nan=False))
def test_power_round_trip(x, gamma):
    g = Distortion.power(gamma)
    assert g.inverse(g(x)) == pytest.approx(x, abs=1e-10)
    assert g(Distortion.power(1 / gamma)(x)) == pytest.approx(x, abs=1e-12)


@settings(max_examples=200, deadline=None)
@given(y=_unit)
def test_pwl_inverse_round_trip(y):
    assert PWL(PWL.inverse(y)) == pytest.approx(y, abs=1e-10)


@settings(max_examples=100, deadline=None)
@given(x=st.floats(-1.5, 2.5, allow_nan=False), beta=st.floats(0.5, 4.0, allow_nan=False))
def test_exponential_utility_round_trip(x, beta):
    u = Utility.exponential(beta, lo=-2.0, hi=3.0)
    assert u.inverse(u(x)) == pytest.approx(x, abs=1e-10)
