"""Exact closed-loop minimax for scalar sources with two-point noise.

The noise at time ``t`` is ``-a_t`` or ``+a_t``. A sensor strategy is a table
mapping each reachable ``(x_t, y_1..y_{t-1})`` to a transmit bit (energy is
implied by the received history). For a fixed sensor strategy the best
estimator, at every received history, is the midpoint of the states
consistent with it; the estimate never feeds back into the dynamics, so this
choice is optimal separately for each ``(t, y_1..y_t)``.

All sensor tables are searched with branch and bound. Arithmetic is exact
(:class:`fractions.Fraction`), so states that coincide are recognised as the
same table key.
"""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import product
from typing import Iterator

from ..model import EPS, ProblemSpec, validate_spec
from .errors import InstanceTooLarge

MAX_HORIZON = 4
MAX_BUDGET = 2


def exact(v: float) -> Fraction:
    return Fraction(v)


def two_point_support(a: Fraction) -> tuple[Fraction, ...]:
    return (a,) if a == 0 else (-a, a)


def _check(spec: ProblemSpec, max_horizon: int, max_budget: int):
    validate_spec(spec)
    if spec.dim != 1:
        raise InstanceTooLarge(f"game tree needs a scalar source, dim = {spec.dim}")
    if spec.horizon > max_horizon or spec.budget > max_budget:
        raise InstanceTooLarge(
            f"T = {spec.horizon}, K = {spec.budget} beyond guard T <= {max_horizon}, K <= {max_budget}")


class _Tree:
    def __init__(self, spec: ProblemSpec):
        # A = [[+-1]] in one dimension, folded into lam
        self.lam = exact(spec.lam) * exact(float(spec.rotation[0, 0]))
        self.noise = [two_point_support(exact(a)) for a in spec.noise_radii]
        self.T = spec.horizon
        self.K = spec.budget

    def initial(self):
        return frozenset((n, (), self.K) for n in self.noise[0])

    @staticmethod
    def keys(paths):
        return sorted({(x, yh) for x, yh, e in paths if e > 0}, key=_sort_key)

    @staticmethod
    def apply(paths, table):
        """Apply a sensor table; return post-transmission paths and the stage cost."""
        nxt = set()
        ranges: dict[tuple, list[Fraction]] = {}
        for x, yh, e in paths:
            u = table.get((x, yh), 0)
            y = x if u else EPS
            h = yh + (y,)
            nxt.add((x, h, e - u))
            ranges.setdefault(h, []).append(x)
        cost = max((max(xs) - min(xs)) / 2 for xs in ranges.values())
        return nxt, cost

    def advance(self, paths, t):
        """Source step from ``t`` to ``t+1`` for every path and noise value."""
        return frozenset((self.lam * x + n, yh, e) for x, yh, e in paths for n in self.noise[t])


def _sort_key(key):
    x, yh = key
    return (x, tuple((0, Fraction(0)) if y is EPS else (1, y) for y in yh))


def game_tree_minimax(spec: ProblemSpec, max_horizon: int = MAX_HORIZON,
                      max_budget: int = MAX_BUDGET) -> float:
    """Optimal worst-case ``max_t |x_t - xhat_t|`` over all closed-loop sensor
    strategies and estimators, for noise in ``{-a_t, +a_t}``."""
    _check(spec, max_horizon, max_budget)
    tree = _Tree(spec)

    def search(t, paths, floor, bound):
        # Exact minimum if it is < bound; otherwise some value >= bound.
        best = bound
        keys = tree.keys(paths)
        for bits in product((0, 1), repeat=len(keys)):
            post, stage = tree.apply(paths, dict(zip(keys, bits)))
            c = max(floor, stage)
            if c >= best:
                continue
            v = c if t == tree.T else search(t + 1, tree.advance(post, t), c, best)
            if v < best:
                best = v
                if best <= floor:
                    break
        return best

    return float(search(1, tree.initial(), Fraction(0), math.inf))


def closed_loop_strategy_costs(spec: ProblemSpec, max_horizon: int = 3,
                               max_budget: int = MAX_BUDGET) -> Iterator[tuple[dict, float]]:
    """Every sensor table (as ``{(t, x, y_hist): u}``) with its worst-case cost.

    No pruning; intended for the smallest instances only.
    """
    _check(spec, max_horizon, max_budget)
    tree = _Tree(spec)

    def walk(t, paths, floor, table):
        keys = tree.keys(paths)
        for bits in product((0, 1), repeat=len(keys)):
            stage_table = dict(zip(keys, bits))
            post, stage = tree.apply(paths, stage_table)
            c = max(floor, stage)
            full = {**table, **{(t, *k): u for k, u in stage_table.items()}}
            if t == tree.T:
                yield full, float(c)
            else:
                yield from walk(t + 1, tree.advance(post, t), c, full)

    yield from walk(1, tree.initial(), Fraction(0), {})
