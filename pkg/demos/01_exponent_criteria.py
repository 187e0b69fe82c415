"""
Deciding membership from integrability exponents
================================================

Each rule takes exact rational exponents and returns a verdict with the
slack of every inequality it checked, so boundary cases stay visible.
"""

from fractions import Fraction as F

from wienercert import ExponentAssignment, RuleInputs, run_all
from wienercert import criteria

# f in L_1 and every mixed derivative in L_2, in the plane
a = ExponentAssignment.build(2, 1, 2)
for v in run_all(RuleInputs(assignment=a)):
    print(f"{v.rule_id:12s} {v.status.value:22s} margin={v.margin}")

# %%
# The pairwise rule sits exactly on its boundary when 1/p0 + 1/p_eta = 1.
on_edge = ExponentAssignment.build(2, 2, 2)
print(criteria.check_theorem1(on_edge).status.value, criteria.check_theorem1(on_edge).margin)

# the summed rule still certifies once the top derivative is more integrable
better = ExponentAssignment.build(2, 2, 2, {"11": F(4, 3)})
print(criteria.check_theorem2(better).status.value)

# %%
# One dimension is sharp: outside the region a counterexample is produced.
v = criteria.check_dim1(4, 4)
print(v.status.value, v.witness)
