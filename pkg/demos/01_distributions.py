"""Tuple distributions over {0, 1, 2}: the (a, b, a+b, a+2b) family and its noisy mix."""
from fractions import Fraction

from alloclab.distributions import analyze, make_eta, noisy_eta

# %%
# Four points a, a+b, a+2b... drawn from a random line mod 3. Each pair of
# coordinates is uniform, yet every tuple contains a zero.
eta = make_eta(2)
rows, weights = eta.support()
print(len(rows), "tuples in the support, each with probability", Fraction(int(weights[0]), eta.denominator))
print(rows[:5])
print(analyze(eta))

# %%
# Mixing in a little uniform noise keeps the marginals intact, makes every
# tuple possible, and costs exactly 16/81 of the noise in zero mass.
for eps in (Fraction(1, 10), Fraction(1, 100)):
    rep = analyze(noisy_eta(2, eps))
    print(eps, rep.min_probability, rep.prob_some_zero, rep.prob_some_zero == 1 - 16 * eps / 81)

# %%
# The same construction works whenever q + 1 is prime.
for q in (1, 2, 4, 6):
    rep = analyze(make_eta(q))
    print(q, rep.balanced, rep.pairwise_independent, rep.prob_some_zero)
