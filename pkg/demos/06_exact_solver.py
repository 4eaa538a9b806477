"""Brute-force optimal allocations, and the one-large-good-per-agent property."""
from fractions import Fraction

from alloclab.allocation import random_family2_instance, random_instance
from alloclab.solvers import check_single_large_good_property, large_good_counts, solve_exact

# %%
inst = random_instance(3, 5, rng_seed=2)
for obj in ("nash", "budgeted", "usw_gap"):
    res = solve_exact(inst, obj)
    print(obj, res.best_value, res.best_allocation.assignment, res.explored)

# %%
# In the equal-group family with 1/eps large, no optimum doubles up large goods.
for eps in (Fraction(1, 10), Fraction(1, 2)):
    holds = [check_single_large_good_property(random_family2_instance(eps, s)) for s in range(5)]
    print(eps, holds)

# %%
fam = random_family2_instance(Fraction(1, 10), 0)
best = solve_exact(fam, "nash")
print(best.best_value, large_good_counts(fam, best.best_allocation))
