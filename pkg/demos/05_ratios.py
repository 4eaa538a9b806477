"""Hardness ratios for Nash welfare, budgeted allocation and GAP, exactly."""
from fractions import Fraction

import numpy as np

from alloclab.reduction import limit_ratios, quartic_gap, quartic_grid_minimum, theorem_ratios

# %%
for eps in (Fraction(1, 100), Fraction(1, 10**4), Fraction(1, 10**6)):
    rep = theorem_ratios(eps)
    print(eps, {k: round(v, 5) for k, v in rep.decimals.items()}, rep.all_pass())

# %%
# The GAP scale 32/27 places the minimum of x^4 - c x at x = 2/3.
print(quartic_grid_minimum())
xs = np.linspace(0, 1, 7)
print([float(quartic_gap(Fraction(x).limit_denominator(1000))) for x in xs])

# %%
# Other alphabets: q = 1 gives the older binary constants, q = 2 is the best.
for q in (1, 2, 4, 6):
    L = limit_ratios(q)
    print(q, L.soundness, round(L.nash, 5), round(float(L.budget), 5), round(float(L.gap), 5))
