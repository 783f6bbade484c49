"""Collatz conjecture verification for huge integers via condensed affine maps."""

from .affine import (
    AffineStep,
    BaseTable,
    affine_compose,
    affine_eval,
    base_table_init,
    poly_direct,
    poly_fast,
)
from .sieve import (
    SieveLevel,
    SurvivorState,
    brute_force_residues,
    sieve_counts,
    sieve_level,
    survives,
)
from .stats import (
    ExperimentSummary,
    SampleSet,
    expected_steps_model,
    ks_normal,
    summary_stats,
)
from .trajectory import (
    BudgetExceededError,
    TrajectoryRecord,
    exact_stopping_time,
    hyperstep_verify,
    step_policy,
    t_step,
)

__version__ = "0.1.0"

__all__ = [
    "AffineStep",
    "BaseTable",
    "BudgetExceededError",
    "ExperimentSummary",
    "SampleSet",
    "SieveLevel",
    "SurvivorState",
    "TrajectoryRecord",
    "affine_compose",
    "affine_eval",
    "base_table_init",
    "brute_force_residues",
    "exact_stopping_time",
    "expected_steps_model",
    "hyperstep_verify",
    "ks_normal",
    "poly_direct",
    "poly_fast",
    "sieve_counts",
    "sieve_level",
    "step_policy",
    "summary_stats",
    "survives",
    "t_step",
]
