"""A small coverage study: cross-fitted intervals against the plug-in.

Runs a short Monte Carlo on the sparse linear design (lasso) and on the
nonlinear design (small neural network), then reports coverage of the
nominal 95% intervals.
Takes a few minutes; raise ``REPS`` (and set GENREL_THREADS) for tighter
numbers.

    python3 demos/coverage_study.py
"""

from genrel.simulation import get_preset, run_monte_carlo

REPS = 20

for name in ("ex1_desk", "ex3_desk"):
    dgp, cfg, _ = get_preset(name)
    t = run_monte_carlo(dgp, cfg, REPS, base_seed=11)
    print(f"{name}: truth {t.truth:.3f} ({t.truth_source})")
    print(f"  cross-fit  CP {t.cp:.2f}  bias {t.bias:.3f}  mean se {t.se:.3f}  MC sd {t.mc_sd:.3f}")
    if t.naive_cp is not None:
        print(f"  plug-in    CP {t.naive_cp:.2f}  bias {t.naive_bias:.3f}")
