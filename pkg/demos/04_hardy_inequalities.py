"""
Window averages and the explicit difference bound
=================================================
"""

import numpy as np

from wienercert.field import SampledField, sample
from wienercert.hardy import PiecewiseConstantSource, empirical_constant, hardy_check, lemma_star_check

# indicator of [0, 1], q = Q = 2, h = 1: lhs^2 = 5/3
ind = SampledField((0.0,), (1e-3,), np.ones(1001))
rep = hardy_check(ind, 2, 2, 1.0)
print(rep.lhs, np.sqrt(5 / 3), rep.ratio)

# %%
# Ratios stay bounded over a dyadic sweep of widths
bump = sample(lambda x: np.exp(-x[..., 0] ** 2), [-6], [6], [1201])
for k in range(-5, 6):
    print(f"h=2^{k:<3d} ratio={hardy_check(bump, 2, 4, 2.0**k).ratio:.4f}")

# %%
# Empirical constant over random piecewise-constant fields (seeded)
print("C ~", empirical_constant(PiecewiseConstantSource(), 2, 4, h_list=[2.0**k for k in range(-5, 6)], trials=50, seed=1))

# %%
# The difference bound has an explicit constant, so the ratio must stay below 1
hat = sample(lambda x: np.maximum(0, 1 - np.abs(x[..., 0])), [-1], [1], [2001])
print(lemma_star_check(hat, 2, 0.5).to_dict())
