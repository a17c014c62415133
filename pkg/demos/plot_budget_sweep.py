r"""
How many transmissions are enough
=================================

Cost against budget for equal noise radii, and the smallest budget meeting a
target error.
"""
from remest.range_dp import homogeneous_cost, min_budget, uniform_spacing

T = 20
for lam in (0.8, 1.0, 1.1):
    print(lam, [round(homogeneous_cost(T, K, 1.0, lam), 3) for K in range(1, 8)])

#%%
# The cost only drops when ``Delta`` does, so some budget increments buy nothing.
print([uniform_spacing(T, K) for K in range(1, 12)])

#%%
for eps in (0.5, 1.0, 2.0, 5.0):
    print(eps, min_budget(T, 1.0, 1.1, eps))

#%%
# The same table is available from the command line::
#
#     remest sweep --config sweep.json
#
# with ``sweep.json`` holding ``{"T": 20, "K": 1, "lambda": 1.1, "a": 1,
# "sweep": {"K": {"start": 1, "stop": 7}}, "epsilon": 2}``.
