"""Brute-force search over every open-loop schedule."""

from __future__ import annotations

from itertools import combinations

import numpy as np

from ..model import ProblemSpec, Schedule, close, validate_spec
from ..rangeprop import evaluate_schedules
from .errors import InstanceTooLarge

MAX_ENUMERATION_HORIZON = 20


def feasible_schedules(T: int, K: int) -> np.ndarray:
    """All 0/1 rows of length ``T`` with at most ``K`` ones, as a bool array."""
    rows = []
    for k in range(min(K, T) + 1):
        for times in combinations(range(T), k):
            row = np.zeros(T, dtype=bool)
            row[list(times)] = True
            rows.append(row)
    return np.array(rows, dtype=bool).reshape(-1, T)


def enumerate_schedules(spec: ProblemSpec,
                        max_horizon: int = MAX_ENUMERATION_HORIZON) -> tuple[float, list[Schedule]]:
    """Minimum worst-case cost over all feasible schedules, and every schedule
    attaining it (ties within the package tolerance)."""
    validate_spec(spec)
    if spec.horizon > max_horizon:
        raise InstanceTooLarge(f"T = {spec.horizon} exceeds enumeration guard {max_horizon}")
    table = feasible_schedules(spec.horizon, spec.budget)
    costs = evaluate_schedules(table, spec)
    best = float(costs.min())
    argmin = [Schedule(tuple(int(u) for u in row))
              for row, c in zip(table, costs) if close(c, best)]
    return best, argmin
