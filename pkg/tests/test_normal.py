import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from genrel.errors import OutOfRange
from genrel.normal import normal_quantile, upper_tail

mpmath.mp.dps = 40


def _mp_quantile(a):
    """Upper-tail quantile from mpmath's inverse error function."""
    return float(mpmath.sqrt(2) * mpmath.erfinv(1 - 2 * mpmath.mpf(a)))


class TestNormalQuantile:
    def test_median(self):
        assert normal_quantile(0.5) == 0.0

    def test_two_sided_95(self):
        assert abs(normal_quantile(0.025) - 1.95996398) <= 1e-6

    def test_one_sigma(self):
        assert abs(normal_quantile(0.15865525) - 1.0) <= 1e-6

    @pytest.mark.parametrize("bad", [0.0, 1.0, -0.1, 1.5])
    def test_out_of_range(self, bad):
        with pytest.raises(OutOfRange):
            normal_quantile(bad)

    @given(st.floats(1e-12, 1 - 1e-12))
    def test_against_mpmath(self, a):
        assert normal_quantile(a) == pytest.approx(_mp_quantile(a), rel=1e-12, abs=1e-12)

    # below -3 the upper tail is too close to 1 for a 1e-9 round trip
    @given(st.floats(-3, 8))
    def test_round_trip(self, z):
        assert normal_quantile(upper_tail(z)) == pytest.approx(z, abs=1e-9)
