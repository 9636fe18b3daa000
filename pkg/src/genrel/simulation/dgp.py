"""Data-generating processes for the four simulation designs.

All designs draw predictors from N(0, Sigma) with Sigma_ij = ar^|i-j|
(ar = 0.6 by default; ar = 0 gives the identity).

* ``ex1_linear_cov``  linear traits; target is the covariance beta' Sigma gamma.
* ``ex2_linear_corr`` linear traits on disjoint supports; target is the correlation.
* ``ex3_nonlinear``   nonlinear traits; the covariance has no closed form.
* ``ex4_logistic``    binary traits from logistic models; target is the
                      covariance of the logits, beta' Sigma gamma.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache, partial

import numpy as np

from genrel.data import Dataset
from genrel.errors import BadSpec
from genrel.learners import LearnerSpec
from genrel.links import IDENTITY, LOGIT

EXAMPLES = ("ex1_linear_cov", "ex2_linear_corr", "ex3_nonlinear", "ex4_logistic")
OVERLAPS = ("full", "none")


@dataclass(frozen=True)
class DgpSpec:
    example: str = "ex1_linear_cov"
    n_y: int = 400
    n_z: int = 400
    p: int = 400
    s1: int = 10
    s2: int | None = None  # defaults to s1
    overlap: str = "full"
    seed: int = 0
    ar: float = 0.6
    noise_scale: float = 1.0

    @property
    def s2_(self):
        return self.s1 if self.s2 is None else self.s2

    @property
    def target(self):
        return "correlation" if self.example == "ex2_linear_corr" else "covariance"

    @property
    def links(self):
        return (LOGIT, LOGIT) if self.example == "ex4_logistic" else (IDENTITY, IDENTITY)

    @property
    def family(self):
        return "binomial" if self.example == "ex4_logistic" else "gaussian"

    def validate(self):
        if self.example not in EXAMPLES:
            raise BadSpec(f"unknown example {self.example!r}")
        if self.overlap not in OVERLAPS:
            raise BadSpec(f"overlap must be one of {OVERLAPS}")
        if self.n_y < 1 or self.n_z < 1 or self.p < 1:
            raise BadSpec("n_y, n_z and p must be positive")
        if self.overlap == "full" and self.n_y != self.n_z:
            raise BadSpec("full overlap needs n_y == n_z")
        if not -1.0 < self.ar < 1.0:
            raise BadSpec("ar must lie in (-1, 1)")
        s1, s2 = self.s1, self.s2_
        if s1 < 0 or s2 < 0:
            raise BadSpec("sparsity levels must be >= 0")
        if self.example == "ex2_linear_corr":
            if s1 < 1 or s2 < 1 or s1 + s2 > self.p:
                raise BadSpec("ex2 needs s1, s2 >= 1 and s1 + s2 <= p")
        elif self.example == "ex3_nonlinear":
            if self.p < 6:
                raise BadSpec("ex3 needs p >= 6")
        elif max(s1, s2) > self.p:
            raise BadSpec("sparsity exceeds p")
        return self


def ar_covariance(p, ar=0.6):
    idx = np.arange(p)
    return ar ** np.abs(idx[:, None] - idx[None, :])


@lru_cache(maxsize=32)
def _ar_cholesky(p, ar):
    out = np.linalg.cholesky(ar_covariance(p, ar))
    out.setflags(write=False)
    return out


def draw_predictors(rng, n, p, ar=0.6):
    return rng.standard_normal((n, p)) @ _ar_cholesky(p, ar).T


def coefficients(spec):
    """Return (beta, gamma) for the linear-index designs."""
    spec.validate()
    p, s1, s2 = spec.p, spec.s1, spec.s2_
    beta = np.zeros(p)
    gamma = np.zeros(p)
    j1 = np.arange(1, s1 + 1)
    j2 = np.arange(1, s2 + 1)
    if spec.example == "ex1_linear_cov":
        beta[:s1] = 0.4 * (1 + j1 / (2 * s1)) if s1 else 0
        gamma[:s2] = 0.3 * (1 - j2 / (2 * s2)) if s2 else 0
    elif spec.example == "ex2_linear_corr":
        beta[:s1] = 1 + j1 / (2 * s1)
        # gamma is indexed from the start of its own block
        gamma[s1:s1 + s2] = 2 * (1 - j2 / (2 * s2))
    elif spec.example == "ex4_logistic":
        beta[:s1] = 0.2 * (1 + j1 / (2 * s1)) if s1 else 0
        gamma[:s2] = 0.3 * (1 - j2 / (2 * s2)) if s2 else 0
    else:
        raise BadSpec("ex3 has no coefficient vectors")
    return beta, gamma


def _quad(a, b, ar):
    """a' Sigma b using only the rows/columns where either vector is non-zero."""
    support = np.flatnonzero((a != 0) | (b != 0))
    if support.size == 0:
        return 0.0
    sub = ar ** np.abs(support[:, None] - support[None, :])
    return float(a[support] @ sub @ b[support])


def closed_form_truth(spec):
    """Exact target for ex1, ex2 and ex4; ``None`` for ex3."""
    if spec.example == "ex3_nonlinear":
        return None
    beta, gamma = coefficients(spec)
    cov = _quad(beta, gamma, spec.ar)
    if spec.example == "ex2_linear_corr":
        return cov / np.sqrt(_quad(beta, beta, spec.ar) * _quad(gamma, gamma, spec.ar))
    return cov


# True genetic values.  Module-level functions (wrapped in partial) keep
# oracle learners picklable for process pools.
def _linear(x, coef):
    return x @ coef


def _logistic(x, coef):
    return 1.0 / (1.0 + np.exp(-(x @ coef)))


def ex3_m(x):
    return (-5 + 2 * np.sin(np.pi * x[:, 0] * x[:, 1]) + 4 * (x[:, 2] - 0.5) ** 2
            + 2 * x[:, 4] + x[:, 5])


def ex3_h(x):
    return 3 * np.sin(x[:, 0]) + x[:, 2] ** 3 + np.exp(x[:, 3])


def true_functions(spec):
    """Return the true (m, h) as picklable callables of the predictor matrix."""
    spec.validate()
    if spec.example == "ex3_nonlinear":
        return ex3_m, ex3_h
    beta, gamma = coefficients(spec)
    f = _logistic if spec.example == "ex4_logistic" else _linear
    m = partial(f, coef=beta)
    h = partial(f, coef=gamma)
    m.__name__ = f"true_m_{spec.example}"
    h.__name__ = f"true_h_{spec.example}"
    return m, h


def oracle_learners(spec):
    m, h = true_functions(spec)
    return (LearnerSpec(kind="oracle", family=spec.family, oracle=m),
            LearnerSpec(kind="oracle", family=spec.family, oracle=h))


def _responses(spec, rng, x, f):
    mean = f(x)
    if spec.example == "ex4_logistic":
        return (rng.random(x.shape[0]) < mean).astype(float)
    return mean + spec.noise_scale * rng.standard_normal(x.shape[0])


def generate(spec):
    """Draw one dataset; returns ``(Dataset, truth)`` with ``truth`` None for ex3."""
    spec.validate()
    m, h = true_functions(spec)
    rng = np.random.default_rng(np.random.SeedSequence(int(spec.seed)))
    if spec.overlap == "full":
        x = draw_predictors(rng, spec.n_y, spec.p, spec.ar)
        y = _responses(spec, rng, x, m)
        z = _responses(spec, rng, x, h)
        d = Dataset.from_arrays(x, y, z)
    else:
        xy = draw_predictors(rng, spec.n_y, spec.p, spec.ar)
        y = _responses(spec, rng, xy, m)
        xz = draw_predictors(rng, spec.n_z, spec.p, spec.ar)
        z = _responses(spec, rng, xz, h)
        nan_z = np.full(spec.n_y, np.nan)
        nan_y = np.full(spec.n_z, np.nan)
        d = Dataset.from_arrays(np.vstack([xy, xz]), np.concatenate([y, nan_y]),
                                np.concatenate([nan_z, z]))
    return d, closed_form_truth(spec)


def _check(spec, example):
    if spec.example != example:
        raise BadSpec(f"expected a {example} spec, got {spec.example}")


def gen_example1(spec):
    _check(spec, "ex1_linear_cov")
    return generate(spec)


def gen_example2(spec):
    _check(spec, "ex2_linear_corr")
    return generate(spec)


def gen_example3(spec, truth_draws=4_000_000):
    """Nonlinear design; the truth comes from a cached Monte Carlo oracle."""
    _check(spec, "ex3_nonlinear")
    from genrel.simulation.oracle import cached_truth
    d, _ = generate(spec)
    return d, cached_truth(spec, truth_draws)[0]


def gen_example4(spec):
    _check(spec, "ex4_logistic")
    return generate(spec)
