"""
Sampled fields, differences and norms
=====================================

A SampledField is the multilinear interpolant of grid values, extended by
zero. Differences act on that function exactly.
"""

import numpy as np

from wienercert.field import DifferenceSpec, grid_derivative, lp_norm, mixed_difference, sample

f = sample(lambda x: np.exp(-(x**2).sum(-1)), [-4, -4], [4, 4], [161, 161])
print("counts", f.counts, "spacing", f.spacing)

# L_p norms by the trapezoidal rule; the exact L_2 norm is sqrt(pi/2)
for p in (1, 2, "inf"):
    print(p, lp_norm(f, p))
print("exact L2", np.sqrt(np.pi / 2))

# %%
# Mixed first difference with steps (u1, u2) versus 4 u1 u2 times the mixed derivative
u = 0.05
x = np.array([0.4, -0.3])
delta = mixed_difference(f, DifferenceSpec((1, 1), 1, (u, u)), x)
exact = 4 * x[0] * x[1] * np.exp(-(x**2).sum())
print(delta / (4 * u * u), exact)

d11 = grid_derivative(f, (1, 1))
print("||D^(1,1) f||_2 =", lp_norm(d11, 2))
