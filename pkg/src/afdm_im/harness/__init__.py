"""Experiment configs, figure recipes, self-checks and the command line."""

from .config import ExperimentConfig, load_config, parse_config
from .experiments import RECIPES, make_simulator, run_experiment, run_recipe, theory_records

__all__ = [
    "ExperimentConfig",
    "load_config",
    "parse_config",
    "RECIPES",
    "make_simulator",
    "run_experiment",
    "run_recipe",
    "theory_records",
]
