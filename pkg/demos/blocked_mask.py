"""A QMF mask that still fails to give an MRA, and how blocked sets see it.

m has value table (1, 0, 0, 1) over (w_1, w_2) in {0,1}^2, p = 2.
Run:  python3 demos/blocked_mask.py
"""
import numpy as np

from vilenkin.mask import cascade, mask_diagnostics, mask_from_values, scaling_checks
from vilenkin.mra import blocked_set, mra_verdict, t_p_children, verify_blocked, zero_cosets

m = mask_from_values(2, 2, [1, 0, 0, 1])
print("coefficients:", np.round(m.coeffs.real, 3))

d = mask_diagnostics(m)
print("m(theta) =", d.theta_value, " QMF residual =", d.qmf_residual)

print("zero cosets:", zero_cosets(m))
for c in [(1,)]:
    print("children of", c, "->", t_p_children(c, 2))

M = blocked_set(m)
print("largest blocked set:", M, verify_blocked(M, m))

# orthonormality of translates fails, as the blocked set predicts
c = scaling_checks(m, 4)
print("translate orthonormality residual:", round(c.ortho_residual, 6))

phi = cascade(m, 6)
print("cascade converged:", phi.converged, " ||phi|| =", round(phi.norm(), 6))
print("distinct values of phi:", sorted(set(np.round(phi.values.real, 6).tolist())))

v = mra_verdict(m)
print(v.to_text())
