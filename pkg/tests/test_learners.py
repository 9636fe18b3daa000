import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from genrel.errors import DegenerateResponse, DimensionMismatch, SingularSystem, TooFewRows
from genrel.learners import (
    LassoSettings,
    LearnerSpec,
    MlpSettings,
    fit,
    fit_lasso,
    fit_mlp,
    fit_ridge,
    predict,
)
from genrel.learners.lasso import lambda_max, objective_trace, standardize
from genrel.learners.mlp import init_params, loss_and_grad


def _soft(r, lam):
    return np.sign(r) * max(abs(r) - lam, 0.0)


def _standardized_column(rng, n):
    x = rng.standard_normal(n)
    x = (x - x.mean()) / x.std()
    return x[:, None]


class TestLasso:
    def test_ols_limit(self, rng):
        x = rng.standard_normal((50, 1))
        f = fit_lasso(x, 2 * x[:, 0], LassoSettings(lambda_min_ratio=1e-6, dev_ratio_stop=None))
        assert abs(f.params["coef"][0] - 2.0) < 1e-4

    def test_full_shrinkage(self, rng):
        x = rng.standard_normal((50, 3))
        y = 2 * x[:, 0] + rng.standard_normal(50)
        xs, _, _ = standardize(x)
        lam = 10 * lambda_max(xs, y)
        f = fit_lasso(x, y, LassoSettings(lambdas=(lam,)))
        np.testing.assert_array_equal(f.params["coef"], 0.0)
        assert f.params["intercept"] == pytest.approx(y.mean())

    @pytest.mark.parametrize("lam", [0.0, 0.05, 0.3, 0.9, 5.0])
    def test_soft_threshold_closed_form(self, rng, lam):
        x = _standardized_column(rng, 80)
        y = 0.7 * x[:, 0] + rng.standard_normal(80)
        rho = float(x[:, 0] @ (y - y.mean()) / 80)
        f = fit_lasso(x, y, LassoSettings(lambdas=(lam,)))
        assert abs(f.params["coef"][0] - _soft(rho, lam)) <= 1e-8

    @given(st.integers(0, 10_000), st.floats(0.01, 0.5))
    def test_objective_monotone(self, seed, frac):
        rng = np.random.default_rng(seed)
        x = rng.standard_normal((30, 12))
        x[:, 1] = x[:, 0] + 0.1 * rng.standard_normal(30)  # correlated columns slow descent
        y = x[:, 0] - x[:, 2] + rng.standard_normal(30)
        xs, _, _ = standardize(x)
        trace = objective_trace(x, y, frac * lambda_max(xs, y), sweeps=30)
        assert np.all(np.diff(trace) <= 1e-12 * np.abs(trace[:-1]))

    def test_cv_deterministic(self, rng):
        x = rng.standard_normal((60, 20))
        y = x[:, :3].sum(axis=1) + rng.standard_normal(60)
        a = fit_lasso(x, y, seed=7)
        b = fit_lasso(x, y, seed=7)
        assert a.info["lambda"] == b.info["lambda"]
        np.testing.assert_array_equal(a.params["coef"], b.params["coef"])

    def test_recovers_sparse_signal(self, rng):
        x = rng.standard_normal((200, 50))
        beta = np.zeros(50)
        beta[:3] = [1.5, -1.0, 0.8]
        y = x @ beta + 0.5 * rng.standard_normal(200)
        f = fit_lasso(x, y)
        np.testing.assert_allclose(f.params["coef"][:3], beta[:3], atol=0.15)
        assert np.abs(f.params["coef"][3:]).max() < 0.1

    def test_binomial_predictions_in_unit_interval(self, rng):
        x = rng.standard_normal((150, 10))
        y = (rng.random(150) < 1 / (1 + np.exp(-2 * x[:, 0]))).astype(float)
        f = fit_lasso(x, y, family="binomial")
        pr = predict(f, 5 * rng.standard_normal((40, 10)))
        assert np.all((pr >= 0) & (pr <= 1))
        assert f.params["coef"][0] > 0.5

    def test_binomial_rejects_non_binary(self, rng):
        with pytest.raises(DegenerateResponse):
            fit_lasso(rng.standard_normal((20, 2)), rng.standard_normal(20), family="binomial")

    def test_constant_response(self, rng):
        with pytest.raises(DegenerateResponse):
            fit_lasso(rng.standard_normal((20, 2)), np.ones(20))

    def test_too_few_rows_for_cv(self, rng):
        with pytest.raises(TooFewRows):
            fit_lasso(rng.standard_normal((8, 2)), rng.standard_normal(8))


class TestRidge:
    def test_zero_penalty_is_ols(self, rng):
        x = rng.standard_normal((40, 3))
        y = x @ [1.0, -2.0, 0.5] + 0.3 + rng.standard_normal(40)
        f = fit_ridge(x, y, 0.0)
        a = np.column_stack([np.ones(40), x])
        ols = np.linalg.lstsq(a, y, rcond=None)[0]
        assert f.params["intercept"] == pytest.approx(ols[0], abs=1e-10)
        np.testing.assert_allclose(f.params["coef"], ols[1:], atol=1e-10)

    def test_infinite_penalty(self, rng):
        x = rng.standard_normal((40, 3))
        y = x[:, 0] + rng.standard_normal(40)
        f = fit_ridge(x, y, 1e12)
        np.testing.assert_allclose(f.params["coef"], 0.0, atol=1e-10)
        assert f.params["intercept"] == pytest.approx(y.mean(), abs=1e-9)

    @pytest.mark.parametrize("lam", [0.0, 0.5, 3.0])
    def test_scalar_closed_form(self, rng, lam):
        x = _standardized_column(rng, 60)
        y = 1.3 * x[:, 0] + rng.standard_normal(60)
        rho = float(x[:, 0] @ (y - y.mean()) / 60)
        assert abs(fit_ridge(x, y, lam).params["coef"][0] - rho / (1 + lam)) <= 1e-10

    def test_stationarity(self, rng):
        n, lam = 50, 0.7
        x = rng.standard_normal((n, 4))
        y = x[:, 1] + rng.standard_normal(n)
        f = fit_ridge(x, y, lam)
        resid = y - predict(f, x)
        xc = x - x.mean(axis=0)
        np.testing.assert_allclose(xc.T @ resid, n * lam * f.params["coef"], atol=1e-8)

    def test_singular(self, rng):
        x = rng.standard_normal((5, 8))
        with pytest.raises(SingularSystem):
            fit_ridge(x, rng.standard_normal(5), 0.0)


class TestMlp:
    def test_gradient_check(self, rng):
        x = rng.standard_normal((5, 3))
        y = rng.standard_normal(5)
        w, b = init_params([3, 3, 1], rng)
        b = [bb + 0.1 * rng.standard_normal(bb.shape) for bb in b]
        for family, yy in (("gaussian", y), ("binomial", (y > 0).astype(float))):
            _, gw, gb = loss_and_grad(w, b, x, yy, family, alpha=0.3)
            h = 1e-6
            for params, grads in ((w, gw), (b, gb)):
                for k in range(len(params)):
                    it = np.nditer(params[k], flags=["multi_index"])
                    for _ in it:
                        idx = it.multi_index
                        old = params[k][idx]
                        params[k][idx] = old + h
                        lp = loss_and_grad(w, b, x, yy, family, 0.3)[0]
                        params[k][idx] = old - h
                        lm = loss_and_grad(w, b, x, yy, family, 0.3)[0]
                        params[k][idx] = old
                        fd = (lp - lm) / (2 * h)
                        assert abs(grads[k][idx] - fd) <= 1e-4 * max(abs(fd), 1e-3)

    def test_constant_target(self, rng):
        x = rng.standard_normal((60, 3))
        f = fit_mlp(x, np.ones(60))
        np.testing.assert_allclose(predict(f, x), 1.0, atol=0.05)

    def test_untrained_is_finite(self, rng):
        x = rng.standard_normal((10, 4))
        f = fit_mlp(x, rng.standard_normal(10), MlpSettings(hidden=(5, 5), max_iter=0))
        assert np.all(np.isfinite(predict(f, 100 * x)))
        assert f.info["epochs"] == 0

    def test_linear_target(self, rng):
        n, p = 500, 5
        x = rng.standard_normal((n, p))
        y = x @ np.array([1.0, -0.5, 0.3, 0.0, 2.0]) + rng.standard_normal(n)
        f = fit_mlp(x, y, MlpSettings(hidden=(32, 32), max_iter=200), seed=1)
        a = np.column_stack([np.ones(n), x])
        ols_mse = np.mean((y - a @ np.linalg.lstsq(a, y, rcond=None)[0]) ** 2)
        assert np.mean((y - predict(f, x)) ** 2) <= 1.5 * ols_mse

    def test_binomial_range(self, rng):
        x = rng.standard_normal((80, 2))
        y = (x[:, 0] > 0).astype(float)
        f = fit_mlp(x, y, MlpSettings(hidden=(8,), max_iter=50), family="binomial")
        pr = predict(f, 10 * rng.standard_normal((30, 2)))
        assert np.all((pr >= 0) & (pr <= 1))

    def test_seeded(self, rng):
        x = rng.standard_normal((40, 2))
        y = x[:, 0] ** 2
        s = MlpSettings(hidden=(6,), max_iter=20)
        np.testing.assert_array_equal(predict(fit_mlp(x, y, s, seed=3), x),
                                      predict(fit_mlp(x, y, s, seed=3), x))


class TestPredict:
    def test_constant_zero(self, rng):
        f = fit(LearnerSpec(kind="constant", constant=0.0), rng.standard_normal((5, 2)), np.ones(5))
        np.testing.assert_array_equal(predict(f, rng.standard_normal((7, 2))), np.zeros(7))

    def test_oracle_passthrough(self, rng):
        beta = np.array([0.5, -1.0])
        f = fit(LearnerSpec(kind="oracle", oracle=lambda x: x @ beta), None, None)
        x = rng.standard_normal((6, 2))
        np.testing.assert_array_equal(predict(f, x), x @ beta)
        assert f.provenance is None

    def test_dimension_mismatch(self, rng):
        f = fit_ridge(rng.standard_normal((10, 3)), rng.standard_normal(10))
        with pytest.raises(DimensionMismatch):
            predict(f, rng.standard_normal((4, 2)))

    def test_provenance_attached(self, rng):
        f = fit(LearnerSpec(kind="ridge"), rng.standard_normal((10, 2)), rng.standard_normal(10),
                provenance=("tok", np.arange(10)))
        assert f.provenance[0] == "tok"

    def test_spec_validation(self):
        with pytest.raises(ValueError):
            LearnerSpec(kind="forest")
        with pytest.raises(ValueError):
            LearnerSpec(kind="ridge", family="binomial")
        with pytest.raises(ValueError):
            LassoSettings(lambdas=(0.1, 0.2))
