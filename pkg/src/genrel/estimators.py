"""Cross-fitted efficient-influence-function estimators of genetic covariance and correlation.

For an evaluation fold with n_y, n_z and n = |fold| units, and nuisance fits
trained on the other fold, each unit i contributes

    delta_i = t_y,i g1'(m_i) (Y_i - m_i) (g2_i - c2) / n_y
            + t_z,i g2'(h_i) (Z_i - h_i) (g1_i - c1) / n_z
            + (g1_i - c1) (g2_i - c2) / n

where g1_i = g1(m_i), g2_i = g2(h_i).  The fold estimate is I_n = sum(delta_i).
The centres c1, c2 are the fold means of the observed traits for identity
links and the fold means of the linked predictions otherwise.  The genetic
variances B_y, B_z use the same kernel with both slots taken from one trait.
The two folds are then swapped and the results averaged.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from genrel import __version__
from genrel._rng import derive_seed
from genrel.data import counts, make_fold_plan
from genrel.errors import (
    DegenerateVariance,
    EmptyFold,
    FoldLeakage,
    NonPositiveGeneticVariance,
    TooFewObservations,
)
from genrel.learners import fit, predict
from genrel.links import IDENTITY
from genrel.normal import normal_quantile

VARIANCE_FORMS = ("proposition", "theorem")


@dataclass(frozen=True, eq=False)
class InfluencePieces:
    """Per-row influence contributions on one evaluation fold.

    ``term_y``, ``term_z`` and ``term_joint`` are the three addends of
    ``delta``.  ``s_yz``, ``s_yy`` and ``s_zz`` are the centred pieces entering
    the variance estimates.
    """

    row_ids: np.ndarray
    term_y: np.ndarray
    term_z: np.ndarray
    term_joint: np.ndarray
    delta: np.ndarray
    s_yz: np.ndarray
    s_yy: np.ndarray
    s_zz: np.ndarray
    i_n: float
    b_y: float
    b_z: float
    center_1: float
    center_2: float
    centering_1: str
    centering_2: str
    n_y: int
    n_z: int
    n: int

    @property
    def k(self):
        """Variance contribution for the covariance, sum of (delta_i - I_n/n)^2."""
        return float(np.sum(self.s_yz * self.s_yz))

    def rho(self):
        if self.b_y <= 0 or self.b_z <= 0:
            raise NonPositiveGeneticVariance(
                f"estimated genetic variances must be positive, got B_y={self.b_y:.6g}, "
                f"B_z={self.b_z:.6g}")
        return self.i_n / np.sqrt(self.b_y * self.b_z)

    def j(self):
        """Variance contribution for the correlation."""
        rho = self.rho()
        phi = (self.s_yz / np.sqrt(self.b_y * self.b_z)
               - rho * self.s_yy / (2.0 * self.b_y)
               - rho * self.s_zz / (2.0 * self.b_z))
        return float(np.sum(phi * phi))


def _addends(res_y, t_y, gp1, cen1, n_y, res_z, t_z, gp2, cen2, n_z, n):
    term_y = t_y * gp1 * res_y * cen2 / n_y
    term_z = t_z * gp2 * res_z * cen1 / n_z
    term_joint = cen1 * cen2 / n
    return term_y, term_z, term_joint


def _check_provenance(fit_, fold_eval):
    if fit_.provenance is None:
        return
    token, rows = fit_.provenance
    if token == fold_eval.token and np.intersect1d(rows, fold_eval.row_ids).size:
        raise FoldLeakage("a nuisance fit was trained on rows of the evaluation fold")


def influence_pieces(fold_eval, m_hat, h_hat, g1=IDENTITY, g2=IDENTITY,
                     variance_form="proposition"):
    """Influence contributions of the rows of ``fold_eval`` given out-of-fold fits.

    ``variance_form="theorem"`` multiplies the quadratic part of the
    genetic-variance pieces by g'(.), an alternative reading kept for
    sensitivity checks; it is identical to the default under identity links.
    """
    if variance_form not in VARIANCE_FORMS:
        raise ValueError(f"variance_form must be one of {VARIANCE_FORMS}")
    _check_provenance(m_hat, fold_eval)
    _check_provenance(h_hat, fold_eval)
    t_y = fold_eval.t_y.astype(float)
    t_z = fold_eval.t_z.astype(float)
    n_y, n_z = fold_eval.n_y, fold_eval.n_z
    if n_y == 0 or n_z == 0:
        raise EmptyFold(f"evaluation fold has n_y={n_y}, n_z={n_z}")
    n = fold_eval.n_rows

    m = predict(m_hat, fold_eval.x)
    h = predict(h_hat, fold_eval.x)
    gm, gh = g1(m), g2(h)
    gp1, gp2 = g1.deriv(m), g2.deriv(h)
    res_y = fold_eval.y - m
    res_z = fold_eval.z - h
    if g1.is_identity:
        c1, how1 = float(np.mean(fold_eval.y[fold_eval.t_y])), "trait_mean"
    else:
        c1, how1 = float(np.mean(gm)), "fold_mean"
    if g2.is_identity:
        c2, how2 = float(np.mean(fold_eval.z[fold_eval.t_z])), "trait_mean"
    else:
        c2, how2 = float(np.mean(gh)), "fold_mean"
    cen1 = gm - c1
    cen2 = gh - c2

    term_y, term_z, term_joint = _addends(res_y, t_y, gp1, cen1, n_y, res_z, t_z, gp2, cen2, n_z, n)
    delta = term_y + term_z + term_joint
    i_n = float(np.sum(delta))

    yy = _addends(res_y, t_y, gp1, cen1, n_y, res_y, t_y, gp1, cen1, n_y, n)
    zz = _addends(res_z, t_z, gp2, cen2, n_z, res_z, t_z, gp2, cen2, n_z, n)
    b_y = float(np.sum(yy[0] + yy[1] + yy[2]))
    b_z = float(np.sum(zz[0] + zz[1] + zz[2]))

    s_yz = delta - i_n / n
    if variance_form == "proposition":
        s_yy = yy[0] + yy[1] + yy[2] - b_y / n
        s_zz = zz[0] + zz[1] + zz[2] - b_z / n
    else:
        s_yy = yy[0] + yy[1] + gp1 * (cen1 * cen1 - b_y) / n
        s_zz = zz[0] + zz[1] + gp2 * (cen2 * cen2 - b_z) / n

    return InfluencePieces(
        row_ids=fold_eval.row_ids, term_y=term_y, term_z=term_z, term_joint=term_joint,
        delta=delta, s_yz=s_yz, s_yy=s_yy, s_zz=s_zz, i_n=i_n, b_y=b_y, b_z=b_z,
        center_1=c1, center_2=c2, centering_1=how1, centering_2=how2,
        n_y=n_y, n_z=n_z, n=n,
    )


@dataclass(frozen=True, eq=False)
class EstimateReport:
    target: str
    point: float
    se: float
    ci: tuple
    alpha: float
    folds: list
    counts: dict
    metadata: dict = field(default_factory=dict)
    seed: int = 0
    flags: dict = field(default_factory=dict)

    @property
    def z(self):
        return normal_quantile(self.alpha / 2.0)

    def summary(self):
        return f"{self.point:.6g} ± {self.z:.4g}·{self.se:.6g} [{self.ci[0]:.6g}, {self.ci[1]:.6g}]"

    def as_dict(self):
        return {
            "target": self.target,
            "point": self.point,
            "se": self.se,
            "ci": list(self.ci),
            "alpha": self.alpha,
            "seed": self.seed,
            "counts": self.counts,
            "folds": self.folds,
            "flags": self.flags,
            "metadata": self.metadata,
        }


def _fit_on_fold(d, rows, learner_m, learner_h, seed):
    train = d.subset(rows)
    ym = train.t_y
    zm = train.t_z
    m_hat = fit(learner_m, train.x[ym], train.y[ym], seed=seed,
                provenance=(d.token, train.row_ids[ym]))
    h_hat = fit(learner_h, train.x[zm], train.z[zm], seed=seed,
                provenance=(d.token, train.row_ids[zm]))
    return m_hat, h_hat


def _rmse(d, fit_, trait):
    t = d.t_y if trait == "y" else d.t_z
    v = d.y if trait == "y" else d.z
    if not t.any():
        return None
    return float(np.sqrt(np.mean((v[t] - predict(fit_, d.x[t])) ** 2)))


def cross_fit(d, learner_m, learner_h, g1=IDENTITY, g2=IDENTITY, seed=0,
              variance_form="proposition"):
    """Both fold passes: fit on one fold, evaluate influence pieces on the other.

    Returns ``(plan, [pieces for eval fold 2, pieces for eval fold 1], diagnostics)``.
    """
    if d.n_y < 4 or d.n_z < 4:
        raise TooFewObservations(f"need N_y >= 4 and N_z >= 4, got {d.n_y} and {d.n_z}")
    plan = make_fold_plan(d, seed)
    pieces, diags = [], []
    for k, (train_fold, eval_fold) in enumerate(((1, 2), (2, 1))):
        fit_seed = derive_seed(seed, 1, k)
        m_hat, h_hat = _fit_on_fold(d, plan.rows(train_fold), learner_m, learner_h, fit_seed)
        ev = d.subset(plan.rows(eval_fold))
        pc = influence_pieces(ev, m_hat, h_hat, g1, g2, variance_form)
        pieces.append(pc)
        diags.append({
            "train_fold": train_fold,
            "eval_fold": eval_fold,
            "learner_seed": fit_seed,
            "rmse_m": _rmse(ev, m_hat, "y"),
            "rmse_h": _rmse(ev, h_hat, "z"),
            "lambda_m": m_hat.info.get("lambda"),
            "lambda_h": h_hat.info.get("lambda"),
        })
    return plan, pieces, diags


def _metadata(learner_m, learner_h, g1, g2, variance_form, pieces):
    return {
        "software": f"genrel {__version__}",
        "learner_m": learner_m.describe(),
        "learner_h": learner_h.describe(),
        "link_1": {"kind": g1.kind, "clip_eps": g1.clip_eps},
        "link_2": {"kind": g2.kind, "clip_eps": g2.clip_eps},
        "centering": [pieces[0].centering_1, pieces[0].centering_2],
        "variance_form": variance_form,
        "production_learners": learner_m.production and learner_h.production,
    }


def _interval(point, se, alpha):
    z = normal_quantile(alpha / 2.0)
    return (point - z * se, point + z * se)


def estimate_covariance(d, learner_m, learner_h, g1=IDENTITY, g2=IDENTITY, alpha=0.05, seed=0,
                        variance_form="proposition"):
    """Cross-fitted genetic covariance with an efficient confidence interval.

    The point estimate averages the two fold estimates; the standard error is
    sqrt((K_1 + K_2) / 4), with K_k the sum of squared centred influence
    contributions of evaluation fold k.
    """
    plan, pieces, diags = cross_fit(d, learner_m, learner_h, g1, g2, seed, variance_form)
    i1, i2 = pieces[0].i_n, pieces[1].i_n
    k1, k2 = pieces[0].k, pieces[1].k
    if k1 + k2 == 0:
        raise DegenerateVariance("all influence contributions are identical; the variance is 0")
    point = (i1 + i2) / 2.0
    se = float(np.sqrt((k1 + k2) / 4.0))
    folds = [dict(dg, i_n=pc.i_n, k=pc.k, b_y=pc.b_y, b_z=pc.b_z,
                  n_y=pc.n_y, n_z=pc.n_z, n=pc.n)
             for dg, pc in zip(diags, pieces)]
    sc = counts(d, plan)
    return EstimateReport(
        target="covariance", point=point, se=se, ci=_interval(point, se, alpha), alpha=alpha,
        folds=folds, counts=sc.as_dict(), seed=int(seed),
        metadata=_metadata(learner_m, learner_h, g1, g2, variance_form, pieces),
        flags={"folds_balanced": sc.balanced},
    )


def estimate_correlation(d, learner_m, learner_h, g1=IDENTITY, g2=IDENTITY, alpha=0.05, seed=0,
                         variance_form="proposition"):
    """Cross-fitted genetic correlation; reported unclamped, flagged when outside [-1, 1]."""
    plan, pieces, diags = cross_fit(d, learner_m, learner_h, g1, g2, seed, variance_form)
    rhos = [pc.rho() for pc in pieces]
    js = [pc.j() for pc in pieces]
    point = float((rhos[0] + rhos[1]) / 2.0)
    se = float(np.sqrt((js[0] + js[1]) / 4.0))
    folds = [dict(dg, i_n=pc.i_n, rho_n=float(r), j=jv, b_y=pc.b_y, b_z=pc.b_z,
                  n_y=pc.n_y, n_z=pc.n_z, n=pc.n)
             for dg, pc, r, jv in zip(diags, pieces, rhos, js)]
    sc = counts(d, plan)
    return EstimateReport(
        target="correlation", point=point, se=se, ci=_interval(point, se, alpha), alpha=alpha,
        folds=folds, counts=sc.as_dict(), seed=int(seed),
        metadata=_metadata(learner_m, learner_h, g1, g2, variance_form, pieces),
        flags={"folds_balanced": sc.balanced, "out_of_range": not -1.0 <= point <= 1.0},
    )


def _full_fits(d, learner_m, learner_h, seed):
    if d.n_y < 2 or d.n_z < 2:
        raise TooFewObservations(f"need N_y >= 2 and N_z >= 2, got {d.n_y} and {d.n_z}")
    fs = derive_seed(seed, 2)
    m_hat = fit(learner_m, d.x[d.t_y], d.y[d.t_y], seed=fs)
    h_hat = fit(learner_h, d.x[d.t_z], d.z[d.t_z], seed=fs)
    return predict(m_hat, d.x), predict(h_hat, d.x)


def estimate_covariance_fullsample(d, learner_m, learner_h, seed=0):
    """No-split estimate from the influence function (identity links, point estimate only).

    Consistent when either nuisance is consistent, but carries no valid
    standard error; use :func:`estimate_covariance` for inference.
    """
    m, h = _full_fits(d, learner_m, learner_h, seed)
    ybar = float(np.mean(d.y[d.t_y]))
    zbar = float(np.mean(d.z[d.t_z]))
    t_y = d.t_y.astype(float)
    t_z = d.t_z.astype(float)
    term_y, term_z, term_joint = _addends(d.y - m, t_y, 1.0, m - ybar, d.n_y,
                                          d.z - h, t_z, 1.0, h - zbar, d.n_z, d.n_rows)
    return float(np.sum(term_y) + np.sum(term_z) + np.sum(term_joint))


def estimate_covariance_naive(d, learner_m, learner_h, seed=0):
    """Plug-in N^-1 sum m_hat h_hat - Ybar Zbar.  Biased with flexible learners; for comparison only."""
    m, h = _full_fits(d, learner_m, learner_h, seed)
    ybar = float(np.mean(d.y[d.t_y]))
    zbar = float(np.mean(d.z[d.t_z]))
    return float(np.mean(m * h) - ybar * zbar)
