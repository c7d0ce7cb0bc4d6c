"""User-facing drivers: configuration, batch runs, oracle suite, CLI."""
from .config import ConfigError, ExperimentConfig
from .runs import run_green, run_recurrence, run_sweep
from .validate import run_validate

__all__ = ["ConfigError", "ExperimentConfig", "run_green", "run_recurrence",
           "run_sweep", "run_validate"]
