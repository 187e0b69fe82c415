"""
The oscillating model m_{alpha,beta}
====================================

theta(|x|) e^{i|x|^alpha} / |x|^beta belongs to the algebra exactly when
beta/alpha > d/2 (with the alpha = d = 1 exception).
"""

from fractions import Fraction as F

import numpy as np

from wienercert.gallery import (
    ModelParams,
    classify_m,
    construct_counterexample_params,
    counterexample_checks,
    evaluate_m,
    gallery,
    m_hypothesis_exponents,
)

for alpha, beta, d in [(2, F(5, 2), 2), (2, 2, 2), (2, F(4, 5), 1), (2, F(6, 5), 1)]:
    m = classify_m(ModelParams(alpha, beta, d))
    print(alpha, beta, d, m.status, "|", m.basis)

print(evaluate_m(ModelParams(2, 1), [3.0]), np.exp(9j) / 3)

# %%
# Which L_p contain m and m' for alpha = 2, beta = 6/5
p = ModelParams(2, F(6, 5))
print("m :", m_hypothesis_exponents(p, (0,)))
print("m':", m_hypothesis_exponents(p, (1,)))

# %%
# Parameters showing the one-dimensional rule is sharp at p = q = 4
alpha, beta = construct_counterexample_params(4, 4)
print(alpha, beta, [(c.name, c.holds) for c in counterexample_checks(4, 4, alpha, beta)])
print(gallery("hat").known_status)
