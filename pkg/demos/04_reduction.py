"""From a planted unique-games instance to an equal-group allocation instance and back."""
from fractions import Fraction

from alloclab.allocation import validate_family2
from alloclab.functions import dictator, random_mean_function
from alloclab.reduction import build_meta_instance, no_case_bound, no_case_bound_collapsed, yes_allocation, yes_floor
from alloclab.unique_games import decode_labeling, planted_instance, satisfaction

eps = Fraction(1, 10)

# %%
ug, labeling = planted_instance(2, 2, 2, R=2, seed=4)
print(len(ug.edges), "edges; planted satisfaction", satisfaction(ug, labeling))

# %%
meta = build_meta_instance(ug, eps)
print(meta.n_agents, "agents,", meta.good_count(), "goods,", meta.small_good_count, "of them small")
print("small mass", meta.small_mass(), "| family check", bool(validate_family2(meta, eps)))

# %%
# YES side: the labeling tells each group which coordinate to follow.
yes = yes_allocation(meta, labeling)
print("worst non-large agent", yes.min_nonlarge(), ">=", yes_floor(meta))

# %%
# NO side: for any choice of large-good holders the non-large agents share
# at most this much. Two independent routes give the same number.
fs = [random_mean_function(2, 2, Fraction(2, 3), s) for s in range(2)]
print(no_case_bound(meta, fs), no_case_bound_collapsed(meta, fs))

# %%
# The decoder reads the planted labels back off dictator functions.
fs = [dictator(2, labeling.labels_a[a], 2) for a in range(ug.n_a)]
decoded = decode_labeling(ug, fs, d=2, tau=Fraction(1, 10), seed=0)
print(decoded, satisfaction(ug, decoded))
