"""Nuisance regressions for the two genetic values m(X) = E(Y|X) and h(X) = E(Z|X)."""

from dataclasses import replace

import numpy as np

from genrel.learners.base import (
    LassoSettings,
    LearnerSpec,
    MlpSettings,
    RegressionFit,
    RidgeSettings,
    predict,
)
from genrel.learners.lasso import fit_lasso
from genrel.learners.mlp import fit_mlp
from genrel.learners.ridge import fit_ridge

__all__ = [
    "LassoSettings", "LearnerSpec", "MlpSettings", "RegressionFit", "RidgeSettings",
    "fit", "fit_lasso", "fit_mlp", "fit_ridge", "predict",
]


def fit(spec, x, y, seed=0, provenance=None):
    """Train the learner described by ``spec`` on ``(x, y)``.

    ``provenance`` is attached to the result so estimators can verify that a
    fit never saw the rows it is evaluated on.
    """
    x = np.asarray(x, dtype=float)
    if spec.kind == "lasso":
        out = fit_lasso(x, y, spec.lasso, spec.family, seed)
    elif spec.kind == "ridge":
        out = fit_ridge(x, y, spec.ridge.lam)
    elif spec.kind == "mlp":
        out = fit_mlp(x, y, spec.mlp, spec.family, seed)
    elif spec.kind == "oracle":
        return RegressionFit("oracle", spec.family, None, {}, oracle=spec.oracle)
    else:
        return RegressionFit("constant", spec.family, None, {"value": float(spec.constant)})
    return replace(out, provenance=provenance)
