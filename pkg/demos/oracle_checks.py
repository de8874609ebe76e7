"""
Checking the closed-form maps against circuits
==============================================

The step maps are short polynomials.  Here they are compared with a full
density-matrix simulation and with classical label sampling.
"""

import numpy as np

from residual_distill import exact_step_b, exact_step_p, isotropic, mc_step_b, step_b, step_p
from residual_distill.qstate import random_bell_diagonal

rng = np.random.default_rng(1)
s = random_bell_diagonal(rng)
print("state", np.round(s.weights, 4))

print("step B, closed form ", np.round(step_b(s).accepted.weights, 10))
print("step B, 4-qubit sim ", np.round(exact_step_b(s).accepted.weights, 10))
print("step P, closed form ", np.round(step_p(s).branch_main.weights, 10))
print("step P, 6-qubit sim ", np.round(exact_step_p(s).branch_main.weights, 10))

# The correction on the both-disagree outcome matters only if it is one-sided.
print("step P with Z_A only", np.round(exact_step_p(s, correction="z_a").branch_main.weights, 10))

rep = mc_step_b(isotropic(0.79), 10**6, seed=20240611)
print(f"sampled p_fail {rep.empirical_p_fail:.5f} +- {rep.std_errors['p_fail']:.5f} (exact 0.2408)")
print("sampled residual", np.round(rep.empirical_residual.weights, 4))
