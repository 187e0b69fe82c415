"""
Dyadic difference sums
======================

Convergence of sum 2^{nu/2} ||f(.+h) - f(.-h)||_2 with h = pi 2^-nu is a
sufficient condition. The report keeps every term and the tail fit.
"""

import numpy as np

from wienercert.bernstein import ScaleRange, bernstein_sum_1d, bernstein_sum_nd
from wienercert.field import sample

g = sample(lambda x: np.exp(-x[..., 0] ** 2), [-8], [8], [2**14])
rep = bernstein_sum_1d(g, ScaleRange(-10, 8))
for (nu,), term in rep.terms.items():
    print(f"{nu:4d} {term:.6f}")
print(rep.verdict, "tail ratio", round(rep.tail_ratio, 4), "sum", rep.partial_sum)

# %%
# A rough lacunary series: terms grow at the fine end
def rough(x):
    t = x[..., 0]
    return np.exp(-t * t) * sum(2.0 ** (-k / 4) * np.cos(1.37 * 2.0**k * t) for k in range(18))

r = bernstein_sum_1d(sample(rough, [-6], [6], [2**17 + 1]), ScaleRange(-2, 12))
print(r.verdict, [round(r.terms[(nu,)], 3) for nu in range(8, 13)])

# %%
# In two dimensions the mixed difference of a product factorizes
g2 = sample(lambda x: np.exp(-(x**2).sum(-1)), [-8, -8], [8, 8], [513, 513])
print(bernstein_sum_nd(g2, [ScaleRange(-4, 6)] * 2).verdict)
