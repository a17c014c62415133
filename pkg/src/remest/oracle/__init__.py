"""Independent brute-force checks for the reduced dynamic program."""

from .centralized import (
    CentralizedSolution,
    FiniteMinimaxProblem,
    InfoState,
    coordinator_problem,
    deterministic_problem,
    reachable_states,
    solve_centralized,
)
from .errors import CapExceeded, InstanceTooLarge, NonTotalMap
from .game_tree import closed_loop_strategy_costs, game_tree_minimax
from .schedules import enumerate_schedules, feasible_schedules

__all__ = [
    "CentralizedSolution", "FiniteMinimaxProblem", "InfoState", "coordinator_problem",
    "deterministic_problem", "reachable_states", "solve_centralized", "CapExceeded",
    "InstanceTooLarge", "NonTotalMap", "closed_loop_strategy_costs", "game_tree_minimax",
    "enumerate_schedules", "feasible_schedules",
]
