"""l1-penalized least squares and logistic regression by cyclic coordinate descent.

Objectives, with standardized predictors ``xs`` (mean 0, variance 1):

    gaussian:  (1/2n) ||y - b0 - xs @ beta||^2 + lam * ||beta||_1
    binomial:  -(1/n) loglik(b0 + xs @ beta) + lam * ||beta||_1

The binomial case runs proximal Newton (IRLS) outer steps, each solved by
weighted coordinate descent.  Lambda is chosen by K-fold CV on a glmnet-style
log-spaced path, and the returned coefficients are on the original scale.
"""

from __future__ import annotations

import numpy as np
from numba import njit

from genrel._rng import generator
from genrel.errors import DegenerateResponse, TooFewRows
from genrel.learners.base import LassoSettings, RegressionFit

_W_FLOOR = 1e-5
_MAX_OUTER = 50


@njit(cache=True, fastmath=True)
def _sweep(xs, r, w, beta, lam, xwsq, cols):
    n = xs.shape[0]
    maxd = 0.0
    for k in range(cols.shape[0]):
        j = cols[k]
        if xwsq[j] == 0.0:
            continue
        bj = beta[j]
        g = 0.0
        for i in range(n):
            g += w[i] * xs[i, j] * r[i]
        g = g / n + xwsq[j] * bj
        if g > lam:
            nb = (g - lam) / xwsq[j]
        elif g < -lam:
            nb = (g + lam) / xwsq[j]
        else:
            nb = 0.0
        d = nb - bj
        if d != 0.0:
            for i in range(n):
                r[i] -= d * xs[i, j]
            beta[j] = nb
            if abs(d) > maxd:
                maxd = abs(d)
    return maxd


@njit(cache=True)
def _intercept_step(r, w):
    sw = 0.0
    swr = 0.0
    for i in range(r.shape[0]):
        sw += w[i]
        swr += w[i] * r[i]
    d = swr / sw
    for i in range(r.shape[0]):
        r[i] -= d
    return d


@njit(cache=True)
def _solve(xs, r, w, beta, lam, xwsq, max_iter, tol, fit_intercept):
    """Coordinate descent at one lambda, full sweeps alternating with active-set sweeps.

    Returns (sweeps, intercept shift).
    """
    p = xs.shape[1]
    all_cols = np.arange(p)
    sweeps = 0
    shift = 0.0
    while sweeps < max_iter:
        d = _sweep(xs, r, w, beta, lam, xwsq, all_cols)
        if fit_intercept:
            di = _intercept_step(r, w)
            shift += di
            d = max(d, abs(di))
        sweeps += 1
        if d < tol:
            break
        active = np.flatnonzero(beta != 0.0)
        while sweeps < max_iter:
            d = _sweep(xs, r, w, beta, lam, xwsq, active)
            if fit_intercept:
                di = _intercept_step(r, w)
                shift += di
                d = max(d, abs(di))
            sweeps += 1
            if d < tol:
                break
    return sweeps, shift


@njit(cache=True)
def _gaussian_path(xs, yc, lambdas, max_iter, tol, dev_stop):
    n, p = xs.shape
    w = np.ones(n)
    xwsq = np.zeros(p)
    for j in range(p):
        s = 0.0
        for i in range(n):
            s += xs[i, j] * xs[i, j]
        xwsq[j] = s / n
    beta = np.zeros(p)
    r = yc.copy()
    tss = (yc * yc).sum()
    L = lambdas.shape[0]
    coefs = np.zeros((L, p))
    sweeps = np.zeros(L, dtype=np.int64)
    stopped = L
    for l in range(L):
        s, _ = _solve(xs, r, w, beta, lambdas[l], xwsq, max_iter, tol, False)
        sweeps[l] = s
        coefs[l] = beta
        if tss > 0 and 1.0 - (r * r).sum() / tss > dev_stop:
            stopped = l + 1
            break
    for l in range(stopped, L):
        coefs[l] = coefs[stopped - 1]
    return coefs, sweeps


@njit(cache=True)
def _linpred(xs, b0, beta):
    n, p = xs.shape
    eta = np.full(n, b0)
    for j in range(p):
        bj = beta[j]
        if bj != 0.0:
            for i in range(n):
                eta[i] += bj * xs[i, j]
    return eta


@njit(cache=True)
def _nll(y, eta):
    # mean negative log-likelihood, stable in eta
    s = 0.0
    for i in range(y.shape[0]):
        e = eta[i]
        if e > 0:
            s += e + np.log1p(np.exp(-e)) - y[i] * e
        else:
            s += np.log1p(np.exp(e)) - y[i] * e
    return s / y.shape[0]


@njit(cache=True)
def _binomial_path(xs, y, lambdas, max_iter, tol, dev_stop):
    n, p = xs.shape
    ybar = y.mean()
    b0 = np.log(ybar / (1.0 - ybar))
    beta = np.zeros(p)
    null_dev = _nll(y, np.full(n, b0))
    L = lambdas.shape[0]
    coefs = np.zeros((L, p))
    intercepts = np.zeros(L)
    sweeps = np.zeros(L, dtype=np.int64)
    w = np.empty(n)
    r = np.empty(n)
    xwsq = np.empty(p)
    stopped = L
    for l in range(L):
        lam = lambdas[l]
        total = 0
        for outer in range(_MAX_OUTER):
            eta = _linpred(xs, b0, beta)
            for i in range(n):
                pi = 1.0 / (1.0 + np.exp(-eta[i]))
                wi = pi * (1.0 - pi)
                if wi < _W_FLOOR:
                    wi = _W_FLOOR
                w[i] = wi
                r[i] = (y[i] - pi) / wi
            for j in range(p):
                s = 0.0
                for i in range(n):
                    s += w[i] * xs[i, j] * xs[i, j]
                xwsq[j] = s / n
            old_beta = beta.copy()
            old_b0 = b0
            old_obj = _nll(y, eta) + lam * np.abs(beta).sum()
            s_, shift = _solve(xs, r, w, beta, lam, xwsq, max_iter, tol, True)
            total += s_
            b0 = old_b0 + shift
            # step halving keeps the penalized likelihood from increasing
            obj = _nll(y, _linpred(xs, b0, beta)) + lam * np.abs(beta).sum()
            step = 1.0
            new_beta = beta.copy()
            new_b0 = b0
            halvings = 0
            while obj > old_obj + 1e-12 and halvings < 30:
                step *= 0.5
                beta = old_beta + step * (new_beta - old_beta)
                b0 = old_b0 + step * (new_b0 - old_b0)
                obj = _nll(y, _linpred(xs, b0, beta)) + lam * np.abs(beta).sum()
                halvings += 1
            change = abs(b0 - old_b0)
            for j in range(p):
                d = abs(beta[j] - old_beta[j])
                if d > change:
                    change = d
            if change < 10.0 * tol:
                break
        coefs[l] = beta
        intercepts[l] = b0
        sweeps[l] = total
        dev = _nll(y, _linpred(xs, b0, beta))
        if null_dev > 0 and 1.0 - dev / null_dev > dev_stop:
            stopped = l + 1
            break
    for l in range(stopped, L):
        coefs[l] = coefs[stopped - 1]
        intercepts[l] = intercepts[stopped - 1]
    return coefs, intercepts, sweeps, stopped


def standardize(x):
    """Column means and (1/n) standard deviations; constant columns get scale 0."""
    mean = x.mean(axis=0)
    xc = x - mean
    scale = np.sqrt((xc * xc).mean(axis=0))
    safe = np.where(scale > 0, scale, 1.0)
    xs = np.asfortranarray(np.where(scale > 0, xc / safe, 0.0))
    return xs, mean, scale


def lambda_max(xs, y):
    n = xs.shape[0]
    return float(np.max(np.abs(xs.T @ (y - y.mean()))) / n)


def lambda_grid(lam_max, size, min_ratio):
    if size == 1:
        return np.array([lam_max])
    return lam_max * np.logspace(0.0, np.log10(min_ratio), size)


def _check_response(y, family):
    if family == "gaussian":
        if np.ptp(y) == 0:
            raise DegenerateResponse("gaussian response has zero variance")
    else:
        if np.any((y != 0) & (y != 1)):
            raise DegenerateResponse("binomial response must be coded 0/1")
        if y.min() == y.max():
            raise DegenerateResponse("binomial response has a single class")


def lasso_path(x, y, lambdas, family="gaussian", max_iter=10_000, tol=1e-7, dev_ratio_stop=None):
    """Fit the whole path on ``x``; returns original-scale (intercepts, coefs) and sweep counts.

    Once the fraction of deviance explained exceeds ``dev_ratio_stop`` the
    remaining (smaller) lambdas reuse the last solution.
    """
    xs, mean, scale = standardize(np.asarray(x, dtype=float))
    y = np.asarray(y, dtype=float)
    lambdas = np.ascontiguousarray(lambdas, dtype=float)
    dev_stop = 2.0 if dev_ratio_stop is None else float(dev_ratio_stop)
    if family == "gaussian":
        ybar = y.mean()
        # convergence is judged on the scale of the response
        ysd = float(np.sqrt(np.mean((y - ybar) ** 2))) or 1.0
        coefs, sweeps = _gaussian_path(xs, y - ybar, lambdas, max_iter, tol * ysd, dev_stop)
        b0_std = np.full(lambdas.shape[0], ybar)
    else:
        coefs, b0_std, sweeps, _ = _binomial_path(xs, y, lambdas, max_iter, tol, dev_stop)
    safe = np.where(scale > 0, scale, 1.0)
    coef_orig = np.where(scale > 0, coefs / safe, 0.0)
    intercepts = b0_std - coef_orig @ mean
    return intercepts, coef_orig, coefs, sweeps


def _cv_loss(y, eta, family):
    if family == "gaussian":
        return (y[:, None] - eta) ** 2
    # per-row negative log-likelihood, stable
    return np.logaddexp(0.0, eta) - y[:, None] * eta


def fit_lasso(x, y, settings=None, family="gaussian", seed=0):
    """Cross-validated lasso.

    The lambda minimizing mean held-out loss (squared error or negative
    log-likelihood) is selected, ties going to the larger lambda, and the
    path is refit on all rows.
    """
    s = settings or LassoSettings()
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float).reshape(-1)
    n = x.shape[0]
    _check_response(y, family)

    xs, _, _ = standardize(x)
    if s.lambdas is not None:
        lambdas = np.asarray(s.lambdas, dtype=float)
    else:
        lambdas = lambda_grid(lambda_max(xs, y), s.lambda_grid_size, s.lambda_min_ratio)

    b0, coef, coef_std, sweeps = lasso_path(x, y, lambdas, family, s.max_iter, s.tol, s.dev_ratio_stop)

    info = {"lambdas": lambdas, "sweeps": sweeps}
    if lambdas.size == 1:
        best = 0
    else:
        if n < s.cv_folds:
            raise TooFewRows(f"{n} rows cannot support {s.cv_folds}-fold cross-validation")
        folds = generator(seed).permutation(np.arange(n) % s.cv_folds)
        loss = np.zeros(lambdas.size)
        for k in range(s.cv_folds):
            hold = folds == k
            ytr = y[~hold]
            if np.ptp(ytr) == 0:
                # a training fold without response variation predicts its constant
                eta = np.full((hold.sum(), lambdas.size), ytr[0] if family == "gaussian"
                              else (30.0 if ytr[0] == 1 else -30.0))
            else:
                b0k, coefk, _, _ = lasso_path(x[~hold], ytr, lambdas, family, s.max_iter, s.tol,
                                             s.dev_ratio_stop)
                eta = b0k[None, :] + x[hold] @ coefk.T
            loss += _cv_loss(y[hold], eta, family).sum(axis=0)
        cv_curve = loss / n
        best = int(np.argmin(cv_curve))
        info["cv_curve"] = cv_curve
    info["lambda"] = float(lambdas[best])
    info["n_nonzero"] = int(np.count_nonzero(coef[best]))
    return RegressionFit(
        kind="lasso",
        family=family,
        p=x.shape[1],
        params={"intercept": float(b0[best]), "coef": coef[best].copy(),
                "coef_std": coef_std[best].copy()},
        info=info,
    )


def penalized_objective(xs, y, b0, beta, lam, family="gaussian"):
    eta = b0 + xs @ beta
    if family == "gaussian":
        loss = 0.5 * np.mean((y - eta) ** 2)
    else:
        loss = float(np.mean(np.logaddexp(0.0, eta) - y * eta))
    return loss + lam * np.abs(beta).sum()


def objective_trace(x, y, lam, sweeps=50):
    """Gaussian objective after each full coordinate sweep at fixed ``lam``.

    Element 0 is the objective at beta = 0.  Used to check monotone descent.
    """
    xs, _, _ = standardize(np.asarray(x, dtype=float))
    y = np.asarray(y, dtype=float)
    ybar = y.mean()
    n, p = xs.shape
    w = np.ones(n)
    xwsq = (xs * xs).mean(axis=0)
    beta = np.zeros(p)
    r = y - ybar
    cols = np.arange(p)
    trace = [penalized_objective(xs, y, ybar, beta, lam)]
    for _ in range(sweeps):
        _sweep(xs, r, w, beta, lam, xwsq, cols)
        trace.append(penalized_objective(xs, y, ybar, beta, lam))
    return np.array(trace)
