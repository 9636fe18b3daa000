"""Only one of the two genetic-value fits needs to be right.

With the true m and a useless h (constant zero) the influence-function
estimator still centres on the covariance, while the plug-in average of
m * h collapses.

    python3 demos/one_sided_robustness.py
"""

import numpy as np

from genrel import LearnerSpec
from genrel.simulation import ORACLE, DgpSpec, EstimatorConfig, closed_form_truth, run_monte_carlo

spec = DgpSpec("ex1_linear_cov", n_y=1000, n_z=1000, p=10, s1=2, overlap="full")
zero = LearnerSpec(kind="constant", constant=0.0)
print(f"truth {closed_form_truth(spec):.4f}")
for method in ("fullsample", "naive"):
    t = run_monte_carlo(spec, EstimatorConfig(ORACLE, zero, method=method), reps=50, base_seed=7)
    half = 2 * t.mc_sd / np.sqrt(t.reps)
    print(f"{method:>10}: mean {t.points.mean():.4f} ± {half:.4f} over {t.reps} draws")
