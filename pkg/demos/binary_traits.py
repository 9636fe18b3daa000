"""Genetic covariance on the logit scale for two binary traits.

Both traits are 0/1 with logistic conditional means.  The genetic values
are fitted by L1-penalized logistic regression and compared through the
logit link, which puts the covariance on the log-odds scale.

    python3 demos/binary_traits.py
"""

from genrel import LOGIT, LearnerSpec, estimate_covariance, estimate_covariance_naive
from genrel.simulation import DgpSpec, closed_form_truth, generate

spec = DgpSpec("ex4_logistic", n_y=400, n_z=400, p=100, s1=5, overlap="full", seed=3)
d, _ = generate(spec)
print(f"prevalence y {d.y.mean():.2f}, z {d.z.mean():.2f}")

logistic = LearnerSpec(kind="lasso", family="binomial")
rep = estimate_covariance(d, logistic, logistic, LOGIT, LOGIT, seed=3)
print(f"truth    {closed_form_truth(spec):.4f}")
print(f"estimate {rep.summary()}")
print(f"fold estimates {[round(f['i_n'], 4) for f in rep.folds]}")

# the identity link on the same data targets cov of the probabilities instead
prob = estimate_covariance(d, logistic, logistic, seed=3)
print(f"probability scale {prob.summary()}")
