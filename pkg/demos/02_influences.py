"""Efron-Stein components and influences of functions on {0, 1, 2}^R."""
from fractions import Fraction

from alloclab.functions import dictator, efron_stein, influence_profile, random_mean_function

# %%
# A dictator only looks at one coordinate, so all of its variance sits on {i}.
f = dictator(3, 2, 2)
print("mean", f.mean())
print(influence_profile(f, d=1))

# %%
# A random 0/1 function with mean 2/3 spreads its weight thinly.
g = random_mean_function(4, 2, Fraction(2, 3), rng_seed=0)
es = efron_stein(g)
by_size = {}
for S in es.subsets:
    by_size[len(S)] = by_size.get(len(S), 0) + es.weight(S)
for k in sorted(by_size):
    print(k, by_size[k], float(by_size[k]))

# %%
prof = influence_profile(g, d=2)
print([float(v) for v in prof.low_degree])
print("coordinates at or above 1/8:", prof.count_at_least(Fraction(1, 8)), "(at most 16 allowed)")
