"""Experiment configuration, Monte-Carlo runners, CSV output and CLI."""

from .config import REFERENCE_LARGE_SCALE, ExperimentConfig, ScenarioConfig, load_config, parse_config
from .experiments import (
    PairValidation,
    SaturationRow,
    TrialEnsemble,
    draw_users,
    estimate_cdf,
    monte_carlo_interference,
    run_cdf_experiment,
    run_gram_experiment,
    run_saturation_sweep,
    run_scaling_experiment,
    run_term_validation,
)
