"""Replicated estimation over a DGP and the CP / BIAS / LEN / SE summaries."""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from genrel._rng import derive_seed
from genrel.errors import AllReplicationsFailed, BadSpec, GenrelError
from genrel.estimators import (
    estimate_correlation,
    estimate_covariance,
    estimate_covariance_fullsample,
    estimate_covariance_naive,
)
from genrel.learners import LearnerSpec
from genrel.links import Link
from genrel.normal import normal_quantile
from genrel.simulation.dgp import closed_form_truth, generate, oracle_learners
from genrel.simulation.oracle import cached_truth

METHODS = ("crossfit", "fullsample", "naive")
ORACLE = "oracle"  # placeholder learner resolved against each DGP's true functions


@dataclass(frozen=True)
class EstimatorConfig:
    """What to run on each simulated dataset.

    ``learner_m`` / ``learner_h`` may be the string ``"oracle"``, which is
    replaced by the DGP's true regression function.  ``links`` of ``None``
    takes the DGP's natural links (logit for ex4, identity otherwise).
    ``target`` of ``None`` takes the DGP's target.
    """

    learner_m: LearnerSpec | str = field(default_factory=LearnerSpec)
    learner_h: LearnerSpec | str = field(default_factory=LearnerSpec)
    links: tuple | None = None
    target: str | None = None
    method: str = "crossfit"
    variance_form: str = "proposition"
    paired_naive: bool = False

    def __post_init__(self):
        if self.method not in METHODS:
            raise BadSpec(f"method must be one of {METHODS}")
        if self.target not in (None, "covariance", "correlation"):
            raise BadSpec("target must be 'covariance' or 'correlation'")
        if self.paired_naive and self.method != "crossfit":
            raise BadSpec("paired_naive needs the crossfit method")

    def resolve(self, dgp):
        """Return (learner_m, learner_h, g1, g2, target) for ``dgp``."""
        om, oh = oracle_learners(dgp)
        lm = om if self.learner_m == ORACLE else self.learner_m
        lh = oh if self.learner_h == ORACLE else self.learner_h
        g1, g2 = self.links if self.links is not None else dgp.links
        return lm, lh, Link.parse(g1), Link.parse(g2), self.target or dgp.target

    def describe(self):
        def learner(x):
            return x if isinstance(x, str) else x.describe()
        return {
            "learner_m": learner(self.learner_m),
            "learner_h": learner(self.learner_h),
            "links": None if self.links is None else [Link.parse(g).kind for g in self.links],
            "target": self.target,
            "method": self.method,
            "variance_form": self.variance_form,
            "paired_naive": self.paired_naive,
        }


@dataclass(frozen=True, eq=False)
class MonteCarloTable:
    """Aggregates over replications.

    ``cp``, ``bias``, ``len`` and ``se`` use successful replications only;
    ``failures`` maps error names to counts.  Estimators without a standard
    error (fullsample, naive without pairing) leave ``cp``, ``len`` and
    ``se`` as ``None``.
    """

    dgp: dict
    config: dict
    alpha: float
    base_seed: int
    reps: int
    n_success: int
    failures: dict
    truth: float
    truth_source: str
    truth_mc_se: float | None
    cp: float | None
    bias: float
    rbias: float | None
    len: float | None
    se: float | None
    mc_sd: float
    points: np.ndarray
    ses: np.ndarray
    lowers: np.ndarray
    uppers: np.ndarray
    naive_cp: float | None = None
    naive_bias: float | None = None
    naive_points: np.ndarray | None = None

    def row(self):
        """One table row as an ordered dict of scalars."""
        return {
            "example": self.dgp["example"], "overlap": self.dgp["overlap"],
            "n_y": self.dgp["n_y"], "n_z": self.dgp["n_z"], "p": self.dgp["p"],
            "s1": self.dgp["s1"], "s2": self.dgp["s2"],
            "reps": self.reps, "n_success": self.n_success,
            "truth": self.truth, "CP": self.cp, "BIAS": self.bias, "rBIAS": self.rbias,
            "LEN": self.len, "SE": self.se, "MC_SD": self.mc_sd,
            "naive_CP": self.naive_cp, "naive_BIAS": self.naive_bias,
        }

    def as_dict(self):
        return {
            "kind": "monte_carlo_table",
            "dgp": self.dgp,
            "config": self.config,
            "alpha": self.alpha,
            "base_seed": self.base_seed,
            "reps": self.reps,
            "n_success": self.n_success,
            "failures": dict(sorted(self.failures.items())),
            "truth": self.truth,
            "truth_source": self.truth_source,
            "truth_mc_se": self.truth_mc_se,
            "summary": self.row(),
        }

    def to_text(self, sep=","):
        """Header line plus one delimited row."""
        r = self.row()

        def fmt(v):
            if v is None:
                return "NA"
            if isinstance(v, float):
                return f"{v:.6g}"
            return str(v)
        return sep.join(r) + "\n" + sep.join(fmt(v) for v in r.values()) + "\n"


def _dgp_dict(dgp):
    return {"example": dgp.example, "n_y": dgp.n_y, "n_z": dgp.n_z, "p": dgp.p,
            "s1": dgp.s1, "s2": dgp.s2_, "overlap": dgp.overlap, "seed": dgp.seed,
            "ar": dgp.ar, "noise_scale": dgp.noise_scale}


def truth_for(dgp, oracle_draws=4_000_000):
    """Return (truth, source, mc_se) for ``dgp``."""
    truth = closed_form_truth(dgp)
    if truth is not None:
        return float(truth), "closed_form", None
    value, se = cached_truth(dgp, oracle_draws)
    return value, f"monte_carlo_oracle({oracle_draws})", se


def _one_rep(dgp, config, alpha, base_seed, r):
    """Run replication ``r``.  Returns (point, se, naive_point) or the error name."""
    seed = derive_seed(base_seed, r)
    spec = replace(dgp, seed=derive_seed(seed, 0))
    est_seed = derive_seed(seed, 1)
    try:
        d, _ = generate(spec)
        if callable(config):
            point, se = config(d, spec, est_seed)
            return float(point), float(se), None
        lm, lh, g1, g2, target = config.resolve(spec)
        if config.method == "fullsample":
            return estimate_covariance_fullsample(d, lm, lh, est_seed), None, None
        if config.method == "naive":
            return estimate_covariance_naive(d, lm, lh, est_seed), None, None
        fn = estimate_correlation if target == "correlation" else estimate_covariance
        rep = fn(d, lm, lh, g1, g2, alpha, est_seed, config.variance_form)
        naive = estimate_covariance_naive(d, lm, lh, est_seed) if config.paired_naive else None
        return rep.point, rep.se, naive
    except GenrelError as exc:
        return exc.name


def _workers(workers):
    if workers is None:
        workers = int(os.environ.get("GENREL_THREADS", "1") or 1)
    if workers <= 0:
        workers = os.cpu_count() or 1
    return workers


def run_monte_carlo(dgp, config, reps, alpha=0.05, base_seed=0, workers=None,
                    truth=None, oracle_draws=4_000_000):
    """Replicate ``config`` on fresh draws of ``dgp``.

    Parameters
    ----------
    dgp : DgpSpec
        ``dgp.seed`` is ignored; replication ``r`` draws from
        ``derive_seed(base_seed, r)``.
    config : EstimatorConfig or callable
        A callable ``f(dataset, dgp_spec, seed) -> (point, se)`` replaces the
        built-in estimators (useful for stubs).
    workers : int, optional
        Process count; defaults to ``GENREL_THREADS`` (0 means all cores).
        Results do not depend on it.
    truth : float, optional
        Overrides the DGP's truth.
    """
    dgp.validate()
    if reps < 1:
        raise BadSpec("reps must be >= 1")
    if not 0.0 < alpha < 1.0:
        raise BadSpec("alpha must lie in (0, 1)")
    if truth is None:
        truth, source, truth_se = truth_for(dgp, oracle_draws)
    else:
        truth, source, truth_se = float(truth), "given", None

    n_workers = min(_workers(workers), reps)
    args = [(dgp, config, alpha, base_seed, r) for r in range(reps)]
    if n_workers > 1:
        with ProcessPoolExecutor(n_workers) as pool:
            results = list(pool.map(_one_rep, *zip(*args), chunksize=max(1, reps // (4 * n_workers))))
    else:
        results = [_one_rep(*a) for a in args]

    failures = {}
    ok = []
    for res in results:
        if isinstance(res, str):
            failures[res] = failures.get(res, 0) + 1
        else:
            ok.append(res)
    if not ok:
        raise AllReplicationsFailed(f"all {reps} replications failed: {failures}")

    points = np.array([o[0] for o in ok])
    has_se = ok[0][1] is not None
    z = normal_quantile(alpha / 2.0)
    bias = float(abs(points.mean() - truth))
    mc_sd = float(points.std(ddof=1)) if points.size > 1 else 0.0
    cp = len_ = se_mean = None
    ses = lowers = uppers = np.array([])
    naive_cp = naive_bias = naive_points = None
    if has_se:
        ses = np.array([o[1] for o in ok])
        lowers = points - z * ses
        uppers = points + z * ses
        cp = float(np.mean((lowers <= truth) & (truth <= uppers)))
        se_mean = float(ses.mean())
        len_ = float(np.mean(uppers - lowers))
        if ok[0][2] is not None:
            # naive point with the EIF standard error from the same draw
            naive_points = np.array([o[2] for o in ok])
            naive_cp = float(np.mean(np.abs(naive_points - truth) <= z * ses))
            naive_bias = float(abs(naive_points.mean() - truth))

    return MonteCarloTable(
        dgp=_dgp_dict(dgp),
        config={"callable": getattr(config, "__name__", repr(config))} if callable(config)
        else config.describe(),
        alpha=alpha, base_seed=int(base_seed), reps=reps, n_success=len(ok),
        failures=failures, truth=truth, truth_source=source, truth_mc_se=truth_se,
        cp=cp, bias=bias, rbias=bias / abs(truth) if truth != 0 else None,
        len=len_, se=se_mean, mc_sd=mc_sd,
        points=points, ses=ses, lowers=lowers, uppers=uppers,
        naive_cp=naive_cp, naive_bias=naive_bias, naive_points=naive_points,
    )
