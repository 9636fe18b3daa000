from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

from genrel.errors import DimensionMismatch

KINDS = ("lasso", "ridge", "mlp", "oracle", "constant")
FAMILIES = ("gaussian", "binomial")


@dataclass(frozen=True)
class LassoSettings:
    cv_folds: int = 10
    lambda_grid_size: int = 100
    lambda_min_ratio: float = 1e-4
    max_iter: int = 10_000
    tol: float = 1e-4  # max coefficient change, in sd(y) units on standardized predictors
    lambdas: tuple | None = None  # explicit decreasing grid; overrides the default path
    dev_ratio_stop: float | None = 0.999  # end the path early once this much deviance is explained; None runs it all

    def __post_init__(self):
        if self.cv_folds < 2:
            raise ValueError("cv_folds must be >= 2")
        if self.lambda_grid_size < 1:
            raise ValueError("lambda_grid_size must be >= 1")
        if self.dev_ratio_stop is not None and not 0.0 < self.dev_ratio_stop <= 1.0:
            raise ValueError("dev_ratio_stop must lie in (0, 1]")
        if self.lambdas is not None:
            lam = np.asarray(self.lambdas, dtype=float)
            if lam.ndim != 1 or lam.size == 0 or np.any(lam < 0) or np.any(np.diff(lam) >= 0):
                raise ValueError("lambdas must be a non-empty, strictly decreasing, nonnegative grid")


@dataclass(frozen=True)
class RidgeSettings:
    lam: float = 1.0

    def __post_init__(self):
        if self.lam < 0:
            raise ValueError("ridge lambda must be >= 0")


@dataclass(frozen=True)
class MlpSettings:
    hidden: tuple = (100, 100)
    max_iter: int = 5000
    learning_rate: str = "adaptive"
    learning_rate_init: float = 1e-3
    batch_size: int = 32
    patience: int = 20
    tol: float = 1e-4
    min_learning_rate: float = 1e-6
    alpha: float = 1e-4
    seed: int | None = None

    def __post_init__(self):
        if any(int(h) < 1 for h in self.hidden):
            raise ValueError("hidden widths must be >= 1")
        if self.learning_rate not in ("adaptive", "constant"):
            raise ValueError("learning_rate must be 'adaptive' or 'constant'")


@dataclass(frozen=True)
class LearnerSpec:
    """How to estimate one conditional mean.

    ``oracle`` wraps a known regression function and ``constant`` predicts a
    fixed value; both exist for testing the estimators and are not meant for
    real data.
    """

    kind: str = "lasso"
    family: str = "gaussian"
    lasso: LassoSettings = field(default_factory=LassoSettings)
    ridge: RidgeSettings = field(default_factory=RidgeSettings)
    mlp: MlpSettings = field(default_factory=MlpSettings)
    oracle: Callable[[np.ndarray], np.ndarray] | None = None
    constant: float = 0.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown learner kind {self.kind!r}")
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        if self.kind == "oracle" and self.oracle is None:
            raise ValueError("oracle learner needs a regression function")
        if self.kind == "ridge" and self.family != "gaussian":
            raise ValueError("ridge supports the gaussian family only")

    @property
    def production(self):
        return self.kind not in ("oracle", "constant")

    def describe(self):
        """Plain-data description used in reports."""
        out = {"kind": self.kind, "family": self.family}
        if self.kind == "lasso":
            s = self.lasso
            out["lasso"] = {"cv_folds": s.cv_folds, "lambda_grid_size": s.lambda_grid_size,
                            "lambda_min_ratio": s.lambda_min_ratio, "max_iter": s.max_iter,
                            "tol": s.tol, "dev_ratio_stop": s.dev_ratio_stop,
                            "lambdas": None if s.lambdas is None else list(map(float, s.lambdas))}
        elif self.kind == "ridge":
            out["ridge"] = {"lambda": self.ridge.lam}
        elif self.kind == "mlp":
            s = self.mlp
            out["mlp"] = {"hidden": list(s.hidden), "max_iter": s.max_iter,
                          "learning_rate": s.learning_rate,
                          "learning_rate_init": s.learning_rate_init,
                          "batch_size": s.batch_size, "patience": s.patience, "tol": s.tol,
                          "alpha": s.alpha, "seed": s.seed}
        elif self.kind == "oracle":
            out["oracle"] = getattr(self.oracle, "__name__", repr(self.oracle))
        else:
            out["constant"] = self.constant
        return out


@dataclass(frozen=True, eq=False)
class RegressionFit:
    """A trained conditional-mean estimate.

    ``params`` holds kind-specific state (coefficients, network weights, ...);
    ``info`` holds diagnostics such as the selected lambda and the CV curve.
    ``provenance`` is ``(dataset token, row ids)`` of the training rows, or
    ``None`` when no data was used.
    """

    kind: str
    family: str
    p: int | None
    params: dict
    info: dict = field(default_factory=dict)
    provenance: tuple | None = None
    oracle: Any = None

    def predict(self, x):
        return predict(self, x)


def _sigmoid(t):
    out = np.empty_like(t)
    pos = t >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-t[pos]))
    e = np.exp(t[~pos])
    out[~pos] = e / (1.0 + e)
    return out


def predict(fit, x):
    """Conditional-mean predictions at the rows of ``x``.

    Binomial fits return probabilities in [0, 1].
    """
    x = np.asarray(x, dtype=float)
    if x.ndim == 1:
        x = x.reshape(1, -1)
    if fit.p is not None and x.shape[1] != fit.p:
        raise DimensionMismatch(f"expected {fit.p} predictors, got {x.shape[1]}")
    if fit.kind == "constant":
        return np.full(x.shape[0], fit.params["value"], dtype=float)
    if fit.kind == "oracle":
        return np.asarray(fit.oracle(x), dtype=float).reshape(-1)
    if fit.kind == "mlp":
        from genrel.learners.mlp import mlp_predict
        return mlp_predict(fit, x)
    eta = fit.params["intercept"] + x @ fit.params["coef"]
    if fit.family == "binomial":
        return _sigmoid(eta)
    return eta
