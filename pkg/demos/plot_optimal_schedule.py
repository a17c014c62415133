r"""
Optimal transmission schedules
==============================

A sensor watches a scalar source ``x_{t+1} = lam * x_t + n_{t+1}`` with
``|n_t| <= a_t`` and may transmit at most ``K`` times in ``T`` slots. The
estimator wants to keep the worst-case error small at every time step.
"""
import numpy as np

from remest import ProblemSpec, solve
from remest.range_dp import homogeneous_cost, uniform_schedule
from remest.rangeprop import evaluate_schedule

spec = ProblemSpec.homogeneous(5, 3, 1.0, 1.0)
res = solve(spec)
print("cost", res.optimal_cost, "schedule", res.schedule)

#%%
# Three transmissions are available but only two get used. Sending at t=2 and
# t=4 already caps every radius at ``a``; a third message could not reduce the
# radius at the silent steps 1, 3 and 5.
print(evaluate_schedule(res.schedule, spec).radii)

#%%
# With equal radii the optimum has a closed form: spread transmissions
# ``Delta = ceil((T+1)/(K+1))`` apart.
for lam in (0.5, 1.0, 2.0):
    spec = ProblemSpec.homogeneous(12, 3, 1.0, lam)
    print(lam, solve(spec).optimal_cost, homogeneous_cost(12, 3, 1.0, lam),
          uniform_schedule(12, 3))

#%%
# Heterogeneous radii break the uniform pattern. The solver transmits in the
# slots where the large noise bursts land.
a = np.array([0.1, 0.1, 2.0, 0.1, 0.1, 0.1, 2.0, 0.1])
spec = ProblemSpec(len(a), 2, a, 1.2)
res = solve(spec)
print(res.schedule, res.optimal_cost)
print(evaluate_schedule(res.schedule, spec).radii.round(3))

#%%
# The value table keeps every subproblem: ``value(t, tau, e)`` is the optimal
# cost to go from time ``t`` when the last transmission was at ``tau`` and
# ``e`` transmissions remain.
print(res.table.value(1, 0, 2), res.table.value(1, 0, 0))
