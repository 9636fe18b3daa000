"""Estimate the genetic covariance and correlation of two simulated traits.

Draws one dataset from the sparse linear design, fits lasso genetic values
with two-fold cross-fitting and prints the estimates next to the known truth.

    python3 demos/covariance_and_correlation.py
"""

from genrel import LearnerSpec, estimate_correlation, estimate_covariance
from genrel.simulation import DgpSpec, closed_form_truth, generate

lasso = LearnerSpec(kind="lasso")

# covariance: both traits depend on the first 10 of 100 AR(1) predictors
spec = DgpSpec("ex1_linear_cov", n_y=300, n_z=300, p=100, s1=10, overlap="full", seed=1)
d, _ = generate(spec)
rep = estimate_covariance(d, lasso, lasso, seed=1)
print(f"covariance   truth {closed_form_truth(spec):.4f}")
print(f"             estimate {rep.summary()}")
print(f"             fold estimates {[round(f['i_n'], 4) for f in rep.folds]}")

# correlation: partially shared causal predictors, disjoint samples
spec = DgpSpec("ex2_linear_corr", n_y=300, n_z=300, p=100, s1=20, s2=5, overlap="none", seed=2)
d, _ = generate(spec)
rep = estimate_correlation(d, lasso, lasso, seed=2)
print(f"correlation  truth {closed_form_truth(spec):.4f}")
print(f"             estimate {rep.summary()}")
print(f"             rows with y only / z only / both: {d.n_y - d.n_0} / {d.n_z - d.n_0} / {d.n_0}")
