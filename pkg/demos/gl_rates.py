"""
Key first, randomness from the leftovers
========================================

Run the two-way key distillation recursion on an isotropic state and see
how much private randomness the discarded pairs still carry.
"""

import numpy as np

from residual_distill import bbpssw_pipeline, gl_pipeline, isotropic, step_b, step_p

# A noisy singlet: weight f on psi+, the rest spread evenly.
s = isotropic(0.79)
print("input weights      ", s.weights)

# One step B keeps about three quarters of the pairs and sharpens them.
b = step_b(s)
print("p_fail             ", round(b.p_fail, 6))
print("accepted           ", np.round(b.accepted.weights, 5))

# The failed pairs of an isotropic input are maximally mixed, so the first
# round yields no randomness at all.
print("first residual     ", b.residual.weights)

# Step P then trades phase errors for amplitude errors.
p = step_p(b.accepted)
print("after step P       ", np.round(p.branch_main.weights, 5), "q =", round(p.q_main, 5))

# Later residuals are no longer maximally mixed.
tr = gl_pipeline(s, 4)
for rec, rand, key in zip(tr.rounds, tr.cumulative_rand, tr.cumulative_key):
    print(f"round {rec.k}: p_fail {rec.p_fail:.4f}  R_A {rec.rand_rate:.4f}  "
          f"rand so far {rand:.3e}  key so far {key:.5f}")

# Iterating step B alone keeps the isotropic symmetry, so every residual
# stays maximally mixed.
print("bbpssw rand, r=6   ", bbpssw_pipeline(s, 6).rate_rand)
print("bbpssw rand, skewed", bbpssw_pipeline(s.from_weights([0.7, 0.1, 0.15, 0.05]), 1).rate_rand)
