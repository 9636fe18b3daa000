"""Efficient, model-free estimation of genetic covariance and genetic correlation.

The estimators combine efficient influence functions with two-fold
cross-fitting, so that any reasonably accurate regression learner (lasso,
neural network, ...) can be used for the genetic values while keeping valid
confidence intervals.
"""

__version__ = "0.1.0"

from genrel.data import Dataset, FoldPlan, SampleCounts, build_dataset, counts, make_fold_plan  # noqa: E402
from genrel.estimators import (  # noqa: E402
    EstimateReport,
    InfluencePieces,
    estimate_correlation,
    estimate_covariance,
    estimate_covariance_fullsample,
    estimate_covariance_naive,
    influence_pieces,
)
from genrel.learners import LassoSettings, LearnerSpec, MlpSettings, RidgeSettings  # noqa: E402
from genrel.links import IDENTITY, LOGIT, Link, link_deriv, link_eval  # noqa: E402
from genrel.normal import normal_quantile  # noqa: E402

__all__ = [
    "Dataset", "FoldPlan", "SampleCounts", "build_dataset", "counts", "make_fold_plan",
    "EstimateReport", "InfluencePieces", "estimate_correlation", "estimate_covariance",
    "estimate_covariance_fullsample", "estimate_covariance_naive", "influence_pieces",
    "LassoSettings", "LearnerSpec", "MlpSettings", "RidgeSettings",
    "IDENTITY", "LOGIT", "Link", "link_deriv", "link_eval", "normal_quantile",
]
