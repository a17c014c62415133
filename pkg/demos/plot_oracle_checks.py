r"""
Checking the solver against brute force
=======================================

The solver only searches open-loop schedules. On tiny scalar instances with
noise in ``{-a_t, +a_t}`` we can search every closed-loop sensor strategy
instead, and also solve the estimator-as-coordinator problem directly.
"""
from remest import ProblemSpec, solve
from remest.oracle import (closed_loop_strategy_costs, coordinator_problem,
                           enumerate_schedules, game_tree_minimax, solve_centralized)

for lam in (0.0, 0.5, 1.0, -1.0, 2.0):
    spec = ProblemSpec((3), 1, (1.0, 2.0, 0.5), lam)
    print(lam,
          solve(spec).optimal_cost,
          enumerate_schedules(spec)[0],
          game_tree_minimax(spec),
          solve_centralized(coordinator_problem(spec)).value)

#%%
# Signalling through silence does not help. Every one of the closed-loop
# strategies is at least as bad as the best schedule.
spec = ProblemSpec.homogeneous(3, 1, 1.0, 1.0)
costs = sorted(c for _, c in closed_loop_strategy_costs(spec))
print(len(costs), "strategies; best", costs[0], "open loop", solve(spec).optimal_cost)

#%%
# Letting the coordinator choose any subset of states to transmit, rather than
# all-or-nothing, gives the same value.
full = solve_centralized(coordinator_problem(spec, "all"))
binary = solve_centralized(coordinator_problem(spec, "binary"))
print(full.value, binary.value, full.n_info_states, binary.n_info_states)
