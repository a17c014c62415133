"""Deterministic dynamic program over (worst-case radius, energy).

The worst-case radius of the estimator's uncertainty ball only ever takes the
values ``radius_at(t, tau)``, where ``tau`` is the last transmission epoch
(``0`` for "never"). Indexing the value function by ``(t, tau, e)`` instead of
the continuous radius makes the table finite and exact, ``O(T^2 K)`` entries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import ProblemSpec, Schedule, validate_spec


@dataclass(frozen=True, eq=False)
class ValueTable:
    """``values[t, tau, e]`` and ``argmin[t, tau, e]`` for ``0 <= tau < t <= T``.

    Entries with ``tau >= t`` are unused (``nan`` / ``-1``). The energy axis
    is truncated at ``min(K, T)``: energy beyond ``T`` can never be spent.
    """

    values: np.ndarray
    argmin: np.ndarray
    radii: np.ndarray

    @property
    def horizon(self) -> int:
        return self.values.shape[0] - 1

    @property
    def max_energy(self) -> int:
        return self.values.shape[2] - 1

    def value(self, t: int, tau: int, e: int) -> float:
        self._check(t, tau)
        return float(self.values[t, tau, min(e, self.max_energy)])

    def decision(self, t: int, tau: int, e: int) -> int:
        self._check(t, tau)
        return int(self.argmin[t, tau, min(e, self.max_energy)])

    def _check(self, t, tau):
        if not 0 <= tau < t <= self.horizon:
            raise IndexError(f"need 0 <= tau < t <= {self.horizon}, got t={t}, tau={tau}")


@dataclass(frozen=True, eq=False)
class SolveResult:
    optimal_cost: float
    schedule: Schedule
    table: ValueTable


def radius_at(t: int, tau: int, spec: ProblemSpec) -> float:
    """Worst-case error radius at ``t`` when the last transmission was at ``tau``.

    Equals ``sum_{j=tau+1}^{t} |lam|^(t-j) a_j``.
    """
    if not (isinstance(t, (int, np.integer)) and isinstance(tau, (int, np.integer))):
        raise TypeError("t and tau must be integers")
    if not 0 <= tau < t <= spec.horizon:
        raise IndexError(f"need 0 <= tau < t <= {spec.horizon}, got t={t}, tau={tau}")
    r = 0.0
    for j in range(tau + 1, t + 1):
        r = spec.abs_lam * r + spec.radius(j)
    return r


def _radius_matrix(spec: ProblemSpec) -> np.ndarray:
    T = spec.horizon
    R = np.full((T + 1, T), np.nan)
    for tau in range(T):
        r = 0.0
        for t in range(tau + 1, T + 1):
            r = spec.abs_lam * r + spec.radius(t)
            R[t, tau] = r
    return R


def solve(spec: ProblemSpec) -> SolveResult:
    """Backward induction for the optimal open-loop schedule.

    On ties the silent branch (``u = 0``) wins, both in ``table.argmin`` and in
    the extracted schedule. The extraction compares branches by the overall
    worst case (cost already incurred included), so no transmission is spent
    that does not lower the final cost.
    """
    validate_spec(spec)
    T = spec.horizon
    E = min(spec.budget, T)
    R = _radius_matrix(spec)
    W = np.full((T + 1, T, E + 1), np.nan)
    U = np.full((T + 1, T, E + 1), -1, dtype=np.int8)

    for tau in range(T):
        r = R[T, tau]
        W[T, tau, :] = 0.0
        W[T, tau, 0] = r
        U[T, tau, :] = 1
        U[T, tau, 0] = 0
        if r <= 0.0:
            U[T, tau, :] = 0  # silence already costs nothing

    for t in range(T - 1, 0, -1):
        for tau in range(t):
            r = R[t, tau]
            for e in range(E + 1):
                stay = max(r, W[t + 1, tau, e])
                if e > 0:
                    send = W[t + 1, t, e - 1]
                    if send < stay:
                        W[t, tau, e], U[t, tau, e] = send, 1
                        continue
                W[t, tau, e], U[t, tau, e] = stay, 0

    table = ValueTable(W, U, R)
    return SolveResult(float(W[1, 0, E]), _extract(W, R, T, E), table)


def _extract(W, R, T, E) -> Schedule:
    # Forward pass carrying the cost already incurred: a transmission is only
    # used if it lowers the overall worst case, not just the local value.
    decisions = []
    tau, e, incurred = 0, E, 0.0
    for t in range(1, T + 1):
        r = R[t, tau]
        stay = r if t == T else max(r, W[t + 1, tau, e])
        u = 0
        if e > 0:
            send = 0.0 if t == T else W[t + 1, t, e - 1]
            u = int(max(incurred, send) < max(incurred, stay))
        decisions.append(u)
        if u:
            tau, e = t, e - 1
        else:
            incurred = max(incurred, r)
    return Schedule(tuple(decisions))


def uniform_spacing(T: int, K: int) -> int:
    """``ceil((T + 1) / (K + 1))``, in exact integer arithmetic."""
    return -(-(T + 1) // (K + 1))


def homogeneous_cost(T: int, K: int, a: float, lam: float) -> float:
    """Optimal worst-case error when every noise radius equals ``a``."""
    delta = uniform_spacing(T, K)
    m = abs(lam)
    if m == 1.0:
        return (delta - 1) * a
    return (m ** (delta - 1) - 1.0) / (m - 1.0) * a


def uniform_schedule(T: int, K: int) -> Schedule:
    """Transmit at ``delta, 2*delta, ..., K*delta`` (those within ``1..T``)."""
    delta = uniform_spacing(T, K)
    return Schedule.from_times(T, [m * delta for m in range(1, K + 1) if m * delta <= T])


def min_budget(T: int, a: float, lam: float, epsilon: float) -> int | None:
    """Smallest budget ``K >= 1`` whose homogeneous optimal cost is at most
    ``epsilon``; ``None`` if no ``K < T`` achieves it.

    For ``T = 1`` the single candidate ``K = 1`` is tried.
    """
    if epsilon < 0 or math.isnan(epsilon):
        raise ValueError(f"epsilon must be nonnegative, got {epsilon}")
    for K in range(1, max(T - 1, 1) + 1):
        if homogeneous_cost(T, K, a, lam) <= epsilon:
            return K
    return None


def max_gap(schedule: Schedule) -> int:
    """Largest gap between consecutive transmissions, with sentinels at 0 and T+1."""
    times = (0, *schedule.transmit_times, schedule.horizon + 1)
    return max(b - a for a, b in zip(times, times[1:]))
