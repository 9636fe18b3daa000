"""Named simulation settings.

``*_desk`` presets shrink the published designs so a full run fits on a
laptop in minutes; ``*_full`` presets keep the published sizes.  Each entry
is ``(DgpSpec, EstimatorConfig, reps)``; ``expected`` documents the range a
desk run should land in.
"""

from __future__ import annotations

from dataclasses import replace

from genrel.errors import ConfigError
from genrel.learners import LearnerSpec, MlpSettings
from genrel.simulation.dgp import DgpSpec
from genrel.simulation.montecarlo import EstimatorConfig

LASSO = LearnerSpec(kind="lasso")
LOGISTIC_LASSO = LearnerSpec(kind="lasso", family="binomial")
DESK_MLP = LearnerSpec(kind="mlp", mlp=MlpSettings(hidden=(32, 32), max_iter=500))
FULL_MLP = LearnerSpec(kind="mlp")

_LASSO_CFG = EstimatorConfig(LASSO, LASSO)
_LOGIT_CFG = EstimatorConfig(LOGISTIC_LASSO, LOGISTIC_LASSO)
_MLP_CFG = EstimatorConfig(DESK_MLP, DESK_MLP, paired_naive=True)


def _ex1(n, p, s, overlap):
    return DgpSpec("ex1_linear_cov", n_y=n, n_z=n, p=p, s1=s, s2=s, overlap=overlap)


def _ex2(n, p, s1, s2, overlap):
    return DgpSpec("ex2_linear_corr", n_y=n, n_z=n, p=p, s1=s1, s2=s2, overlap=overlap)


def _ex4(n, p, s, overlap):
    return DgpSpec("ex4_logistic", n_y=n, n_z=n, p=p, s1=s, s2=s, overlap=overlap)


PRESETS = {
    "ex1_desk": (_ex1(200, 100, 10, "full"), _LASSO_CFG, 500),
    "ex1_desk_nonoverlap": (_ex1(200, 100, 10, "none"), _LASSO_CFG, 500),
    "ex2_desk": (_ex2(200, 100, 20, 5, "full"), _LASSO_CFG, 500),
    "ex2_desk_nonoverlap": (_ex2(200, 100, 20, 5, "none"), _LASSO_CFG, 500),
    "ex3_desk": (DgpSpec("ex3_nonlinear", n_y=400, n_z=400, p=50, overlap="full"), _MLP_CFG, 200),
    "ex4_desk": (_ex4(200, 100, 5, "full"), _LOGIT_CFG, 500),
    "ex4_desk_nonoverlap": (_ex4(200, 100, 5, "none"), _LOGIT_CFG, 500),
    "ex1_full": (_ex1(400, 400, 10, "full"), _LASSO_CFG, 500),
    "ex1_full_nonoverlap": (_ex1(400, 400, 10, "none"), _LASSO_CFG, 500),
    "ex2_full": (_ex2(400, 400, 20, 5, "full"), _LASSO_CFG, 500),
    "ex3_full": (DgpSpec("ex3_nonlinear", n_y=400, n_z=400, p=400, overlap="full"),
                 EstimatorConfig(FULL_MLP, FULL_MLP, paired_naive=True), 500),
    "ex4_full": (_ex4(400, 400, 5, "full"), _LOGIT_CFG, 500),
}

# CP band is the 3-sigma binomial band around 0.95 at the preset's reps.
expected = {
    "ex1_desk": {"cp": (0.91, 0.98), "max_rbias": 0.1},
    "ex1_desk_nonoverlap": {"cp": (0.91, 0.98), "max_rbias": 0.1},
    "ex2_desk": {"cp": (0.91, 0.98), "max_bias": 0.01},
    "ex3_desk": {"min_cp": 0.88, "naive_cp_lower": True},
    "ex4_desk": {"cp": (0.91, 0.98), "max_bias": 0.05},
    "ex1_full": {"cp": (0.894, 0.954), "len": (0.851 * 0.85, 0.851 * 1.15)},
    "ex1_full_nonoverlap": {"cp": (0.892, 0.952), "len": (0.741 * 0.85, 0.741 * 1.15)},
}


def get_preset(name, reps=None):
    """Return ``(DgpSpec, EstimatorConfig, reps)`` for a preset name."""
    try:
        dgp, cfg, default_reps = PRESETS[name]
    except KeyError:
        raise ConfigError(f"unknown preset {name!r}; choose from {', '.join(sorted(PRESETS))}") from None
    return replace(dgp), cfg, default_reps if reps is None else int(reps)
