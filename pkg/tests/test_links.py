import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from genrel.errors import NonFiniteInput
from genrel.links import IDENTITY, LOGIT, Link, link_deriv, link_eval


class TestLinkEval:
    def test_identity(self):
        assert link_eval(IDENTITY, 3.7) == 3.7

    def test_logit_half(self):
        assert link_eval(LOGIT, 0.5) == 0.0

    def test_logit_inverse(self):
        u = math.e / (1 + math.e)
        assert abs(link_eval(LOGIT, u) - 1.0) < 1e-6

    def test_arrays(self):
        u = np.array([0.2, 0.5, 0.8])
        np.testing.assert_allclose(link_eval(LOGIT, u), np.log(u / (1 - u)))

    def test_non_finite(self):
        with pytest.raises(NonFiniteInput):
            link_eval(LOGIT, np.nan)

    def test_parse(self):
        assert Link.parse(" Logit ") == LOGIT
        assert Link.parse(LOGIT) is LOGIT
        with pytest.raises(ValueError):
            Link.parse("probit")


class TestLinkDeriv:
    def test_identity(self):
        assert link_deriv(IDENTITY, -12.0) == 1.0

    def test_logit_half(self):
        assert link_deriv(LOGIT, 0.5) == 4.0

    def test_logit_clipped_at_zero(self):
        expected = 1.0 / (1e-6 * (1 - 1e-6))
        assert link_deriv(LOGIT, 0.0) == pytest.approx(expected, rel=1e-12)
        # 1 - 1e-6 is not exact in binary, hence the looser bound
        assert link_deriv(LOGIT, 1.0) == pytest.approx(expected, rel=1e-9)

    def test_finite_difference_grid(self):
        u = np.linspace(0.01, 0.99, 100)
        h = 1e-6
        fd = (link_eval(LOGIT, u + h) - link_eval(LOGIT, u - h)) / (2 * h)
        np.testing.assert_allclose(link_deriv(LOGIT, u), fd, rtol=1e-6)

    @given(st.floats(1e-4, 1 - 1e-4))
    def test_finite_difference_property(self, u):
        h = 1e-7 * min(u, 1 - u)
        fd = (link_eval(LOGIT, u + h) - link_eval(LOGIT, u - h)) / (2 * h)
        assert link_deriv(LOGIT, u) == pytest.approx(fd, rel=1e-6)

    @given(st.floats(-1e6, 2e6))
    def test_finite_on_clipped_domain(self, u):
        assert np.isfinite(link_eval(LOGIT, u)) and np.isfinite(link_deriv(LOGIT, u))
