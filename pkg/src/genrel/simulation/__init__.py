"""Simulation designs, truth oracles and the Monte Carlo harness."""

from genrel.simulation.dgp import (
    EXAMPLES,
    DgpSpec,
    ar_covariance,
    closed_form_truth,
    coefficients,
    draw_predictors,
    gen_example1,
    gen_example2,
    gen_example3,
    gen_example4,
    generate,
    oracle_learners,
    true_functions,
)
from genrel.simulation.montecarlo import (
    ORACLE,
    EstimatorConfig,
    MonteCarloTable,
    run_monte_carlo,
    truth_for,
)
from genrel.simulation.oracle import cached_truth, true_value_oracle
from genrel.simulation.presets import PRESETS, expected, get_preset

__all__ = [
    "EXAMPLES", "ORACLE", "PRESETS", "DgpSpec", "EstimatorConfig", "MonteCarloTable",
    "ar_covariance", "cached_truth", "closed_form_truth", "coefficients", "draw_predictors",
    "expected", "gen_example1", "gen_example2", "gen_example3", "gen_example4", "generate",
    "get_preset", "oracle_learners", "run_monte_carlo", "true_functions", "true_value_oracle",
    "truth_for",
]
