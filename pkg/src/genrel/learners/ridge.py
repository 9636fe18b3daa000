import numpy as np

from genrel.errors import SingularSystem, TooFewRows
from genrel.learners.base import RegressionFit


def fit_ridge(x, y, lam=1.0):
    """Minimize (1/2n)||y - b0 - x beta||^2 + (lam/2)||beta||^2, intercept unpenalized.

    The solution satisfies ``x_c.T @ (y - yhat) = n * lam * beta``.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float).reshape(-1)
    n, p = x.shape
    if n < 1:
        raise TooFewRows("ridge needs at least one row")
    if lam < 0:
        raise ValueError("lambda must be >= 0")
    mean = x.mean(axis=0)
    ybar = y.mean()
    xc = x - mean
    gram = xc.T @ xc / n
    if lam == 0 and np.linalg.matrix_rank(gram) < p:
        raise SingularSystem("gram matrix is rank-deficient and lambda = 0")
    coef = np.linalg.solve(gram + lam * np.eye(p), xc.T @ (y - ybar) / n)
    return RegressionFit(
        kind="ridge",
        family="gaussian",
        p=p,
        params={"intercept": float(ybar - mean @ coef), "coef": coef},
        info={"lambda": float(lam)},
    )
