"""
Splitting one-way correlations into key and shield randomness
=============================================================

Measuring Alice's half of a purified state gives I(X;B) bits of
correlation; I(X;E) of them are hidden from Bob's side but still private
from everyone except the shield holder.
"""

import numpy as np

from residual_distill import (
    dw_rates_from_state,
    isotropic,
    key_threshold,
    randomness_curve,
    to_density_matrix,
)

for f in (0.25, 0.5, 0.8, 0.9, 1.0):
    r = dw_rates_from_state(to_density_matrix(isotropic(f)), 2, 2)
    print(f"f={f:4.2f}  I(X;B)={r.i_xb:.4f}  key={r.r_key:+.4f}  shield rand={r.r_rand:.4f}")

# Key is positive above the hashing threshold.
f_star = key_threshold()
print("threshold f*", round(f_star, 6))

# Below f* the whole state is spent on local randomness; above it only the
# shield is.  The curve drops at the threshold.
for f in np.linspace(f_star - 0.02, f_star + 0.02, 5):
    print(f"  f={f:.4f}  randomness {randomness_curve(f):.4f}")
