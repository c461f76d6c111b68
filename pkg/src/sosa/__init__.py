"""Sensitivity-guided stochastic RBF surrogate optimization for box-constrained black boxes."""

from .bench import ExperimentConfig, emit_outputs, q_metric, run_experiment, summarize
from .candidates import PerturbationPolicy, generate, reflect_into_cube, select_coordinates
from .doe import initial_design_size, latin_hypercube
from .domain import EvaluatedPoint, Hypercube, Objective, denormalize, normalize
from .exceptions import (
    ConfigurationError,
    DataError,
    DesignError,
    DomainError,
    NumericError,
    SosaError,
    SurrogateRankError,
)
from .optimizer import OptimizerConfig, SurrogateOptimizer, TrialRecord, run, select_next
from .rbf import CubicRBFInterpolant
from .sensitivity import SensitivityProfile, sensitivity_profile
from .testfunctions import make_test_function, parse_problem

__version__ = "0.1.0"

__all__ = [
    "ConfigurationError", "CubicRBFInterpolant", "DataError", "DesignError", "DomainError",
    "EvaluatedPoint", "ExperimentConfig", "Hypercube", "NumericError", "Objective",
    "OptimizerConfig", "PerturbationPolicy", "SensitivityProfile", "SosaError",
    "SurrogateOptimizer", "SurrogateRankError", "TrialRecord", "denormalize", "emit_outputs",
    "generate", "initial_design_size", "latin_hypercube", "make_test_function", "normalize",
    "parse_problem", "q_metric", "reflect_into_cube", "run", "run_experiment",
    "select_coordinates", "select_next", "sensitivity_profile", "summarize",
]
