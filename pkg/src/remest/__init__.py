"""Worst-case optimal transmission scheduling for budgeted remote estimation."""

from .model import (
    EPS,
    ProblemSpec,
    Schedule,
    SpecError,
    channel,
    energy_step,
    source_step,
    validate_spec,
)
from .range_dp import (
    SolveResult,
    ValueTable,
    homogeneous_cost,
    min_budget,
    radius_at,
    solve,
    uniform_schedule,
)
from .rangeprop import adversarial_noise, estimator_step, evaluate_schedule, simulate

__version__ = "0.1.0"

__all__ = [
    "EPS", "ProblemSpec", "Schedule", "SpecError", "channel", "energy_step", "source_step",
    "validate_spec", "SolveResult", "ValueTable", "homogeneous_cost", "min_budget", "radius_at",
    "solve", "uniform_schedule", "adversarial_noise", "estimator_step", "evaluate_schedule",
    "simulate",
]
