"""Finite-space centralized minimax DP on conditional ranges.

A controller sees an observable state ``s_o`` and observations, but not the
hidden state ``s_h``. Its information state is the set ``pi`` of hidden states
consistent with what it has seen. The value recursion is

    V_T(pi, s_o) = min_a max_{s_h in pi} cost_T(s, a)
    V_t(pi, s_o) = min_a max_{s_h in pi, n} max(cost_t(s, a), V_{t+1}(pi', s_o'))

where ``pi'`` collects the successor hidden states that produce the same
observation and observable successor. Only reachable information states are
visited.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import chain, combinations
from typing import Any, Callable, Hashable, Sequence

from ..model import EPS, ProblemSpec, validate_spec
from .errors import CapExceeded, InstanceTooLarge, NonTotalMap
from .game_tree import exact, two_point_support

DEFAULT_CAP = 200_000


@dataclass(frozen=True)
class InfoState:
    pi: tuple          # canonical: sorted, no duplicates
    s_o: Hashable

    def __post_init__(self):
        if not self.pi:
            raise ValueError("conditional range must be nonempty")


@dataclass
class FiniteMinimaxProblem:
    """Stages are numbered ``1..horizon``.

    ``actions(t, s_o)`` lists the admissible actions; ``noise[t-1]`` is the
    finite range of the noise driving the step ``t -> t+1``;
    ``transition(t, s_h, s_o, a, n)`` returns ``(s_h', s_o')``;
    ``observe(t, s_h, s_o, a, n)`` returns the observation revealed after
    the step; ``cost(t, s_h, s_o, a)`` is the stage cost. ``hidden_states`` and
    ``observable_states`` are the declared spaces (``None`` skips the
    membership check).
    """

    horizon: int
    actions: Callable[[int, Any], Sequence]
    noise: Sequence[Sequence]
    transition: Callable
    observe: Callable
    cost: Callable
    initial_range: Sequence
    initial_observable: Hashable
    hidden_states: frozenset | None = None
    observable_states: frozenset | None = None
    name: str = field(default="", compare=False)

    def __post_init__(self):
        if len(self.noise) < self.horizon - 1:
            raise ValueError(f"need {self.horizon - 1} noise ranges, got {len(self.noise)}")
        if any(len(n) == 0 for n in self.noise):
            raise ValueError("noise ranges must be nonempty")
        if self.hidden_states is not None:
            self.hidden_states = frozenset(self.hidden_states)
        if self.observable_states is not None:
            self.observable_states = frozenset(self.observable_states)


def canonical(states) -> tuple:
    uniq = set(states)
    try:
        return tuple(sorted(uniq))
    except TypeError:
        return tuple(sorted(uniq, key=repr))


@dataclass
class CentralizedSolution:
    value: float
    policy: dict          # (t, InfoState) -> minimizing action
    n_info_states: int


def solve_centralized(problem: FiniteMinimaxProblem, cap: int = DEFAULT_CAP) -> CentralizedSolution:
    """Backward induction over reachable information states (memoised)."""
    memo: dict[tuple[int, InfoState], float] = {}
    policy: dict = {}
    entered: set = set()
    p = problem

    def call(fn, what, t, *args):
        try:
            return fn(t, *args)
        except (KeyError, IndexError, TypeError, ValueError) as exc:
            raise NonTotalMap(f"{what} undefined at stage {t} for {args!r}: {exc}") from exc

    def check_hidden(s_h, t):
        if p.hidden_states is not None and s_h not in p.hidden_states:
            raise NonTotalMap(f"transition left the hidden space at stage {t}: {s_h!r}")

    def check_obs(s_o, t):
        if p.observable_states is not None and s_o not in p.observable_states:
            raise NonTotalMap(f"transition left the observable space at stage {t}: {s_o!r}")

    def value(t: int, info: InfoState) -> float:
        key = (t, info)
        if key in memo:
            return memo[key]
        entered.add(key)
        if len(entered) > cap:
            raise CapExceeded(f"more than {cap} information states")
        acts = list(call(p.actions, "actions", t, info.s_o))
        if not acts:
            raise NonTotalMap(f"no admissible action at stage {t} for s_o={info.s_o!r}")
        best, best_a = math.inf, None
        for a in acts:
            worst = max(call(p.cost, "cost", t, s_h, info.s_o, a) for s_h in info.pi)
            if t < p.horizon and worst < best:
                successors: dict[tuple, list] = {}
                for s_h in info.pi:
                    for n in p.noise[t - 1]:
                        nh, no = call(p.transition, "transition", t, s_h, info.s_o, a, n)
                        obs = call(p.observe, "observe", t, s_h, info.s_o, a, n)
                        check_hidden(nh, t + 1)
                        check_obs(no, t + 1)
                        successors.setdefault((_obs_key(obs), no), []).append(nh)
                for (_, no), hs in successors.items():
                    worst = max(worst, value(t + 1, InfoState(canonical(hs), no)))
                    if worst >= best:
                        break
            if worst < best:
                best, best_a = worst, a
        memo[key] = best
        policy[key] = best_a
        return best

    for s_h in p.initial_range:
        check_hidden(s_h, 1)
    check_obs(p.initial_observable, 1)
    v = value(1, InfoState(canonical(p.initial_range), p.initial_observable))
    return CentralizedSolution(float(v), policy, len(memo))


def _obs_key(obs):
    # numpy arrays and other unhashables observed as tuples
    try:
        hash(obs)
        return obs
    except TypeError:
        return tuple(obs)


# -- encodings of the remote estimation problem ----------------------------


def reachable_states(spec: ProblemSpec) -> list[tuple[Fraction, ...]]:
    """Exact reachable scalar source values at each time under two-point noise."""
    lam = exact(spec.lam) * exact(float(spec.rotation[0, 0]))
    supports = [two_point_support(exact(a)) for a in spec.noise_radii]
    levels = [canonical(supports[0])]
    for t in range(1, spec.horizon):
        levels.append(canonical(lam * x + n for x in levels[-1] for n in supports[t]))
    return levels


def _all_subsets(values):
    return [frozenset(c) for c in chain.from_iterable(
        combinations(values, k) for k in range(len(values) + 1))]


def coordinator_problem(spec: ProblemSpec, prescriptions: str = "all",
                        max_horizon: int = 4, max_states: int = 10) -> FiniteMinimaxProblem:
    """The estimator-as-coordinator problem with ``2T`` decision points.

    Odd stage ``2t-1``: the estimator picks a prescription, the set of source
    values for which the sensor transmits. Even stage ``2t``: after seeing
    ``y_t`` it picks an estimate with cost ``|x_t - xhat|``. Estimates range over
    midpoints of pairs of reachable values, which contains the minimax centre
    of every finite conditional range.

    ``prescriptions="binary"`` keeps only always-transmit and never-transmit.
    """
    validate_spec(spec)
    if spec.dim != 1:
        raise InstanceTooLarge("coordinator encoding needs a scalar source")
    if spec.horizon > max_horizon:
        raise InstanceTooLarge(f"T = {spec.horizon} exceeds guard {max_horizon}")
    if prescriptions not in ("all", "binary"):
        raise ValueError(f"prescriptions must be 'all' or 'binary', got {prescriptions!r}")
    levels = reachable_states(spec)
    if max(len(v) for v in levels) > max_states:
        raise InstanceTooLarge(f"more than {max_states} reachable source values")
    lam = exact(spec.lam) * exact(float(spec.rotation[0, 0]))
    supports = [two_point_support(exact(a)) for a in spec.noise_radii]
    T = spec.horizon

    if prescriptions == "all":
        gammas = [_all_subsets(v) for v in levels]
    else:
        gammas = [[frozenset(), frozenset(v)] for v in levels]
    estimates = [canonical((x + z) / 2 for x in v for z in v) for v in levels]

    def actions(stage, e):
        t = (stage + 1) // 2
        if stage % 2:
            return gammas[t - 1] if e > 0 else [frozenset()]
        return estimates[t - 1]

    def transition(stage, x, e, a, n):
        if stage % 2:
            return x, e - (x in a)
        return lam * x + n, e

    def observe(stage, x, e, a, n):
        if stage % 2:
            return x if x in a else EPS
        return None

    def cost(stage, x, e, a):
        return 0 if stage % 2 else abs(x - a)

    noise = []
    for stage in range(1, 2 * T):
        noise.append((None,) if stage % 2 else supports[stage // 2])

    return FiniteMinimaxProblem(
        horizon=2 * T, actions=actions, noise=noise, transition=transition,
        observe=observe, cost=cost, initial_range=levels[0],
        initial_observable=spec.budget,
        hidden_states=frozenset(chain.from_iterable(levels)),
        observable_states=frozenset(range(spec.budget + 1)),
        name=f"coordinator[{prescriptions}]",
    )


def deterministic_problem(spec: ProblemSpec) -> FiniteMinimaxProblem:
    """Radius/energy control problem with a single dummy hidden state.

    The observable state is ``(radius, energy)``; staying silent costs the
    current radius, transmitting costs nothing and resets the next radius to
    the next noise radius.
    """
    validate_spec(spec)
    m = spec.abs_lam
    a = spec.noise_radii

    def actions(t, s):
        return (0, 1) if s[1] > 0 else (0,)

    def transition(t, h, s, u, n):
        r, e = s
        return h, ((a[t] if u else m * r + a[t]), max(e - u, 0))

    def cost(t, h, s, u):
        return 0.0 if u else s[0]

    return FiniteMinimaxProblem(
        horizon=spec.horizon, actions=actions, noise=[(None,)] * (spec.horizon - 1),
        transition=transition, observe=lambda *args: None, cost=cost,
        initial_range=(None,), initial_observable=(a[0], min(spec.budget, spec.horizon)),
        hidden_states=frozenset({None}), name="deterministic",
    )
