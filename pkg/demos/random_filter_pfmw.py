"""Random generalized filters give Parseval frame multiwavelets.

Run:  python3 demos/random_filter_pfmw.py
"""
import numpy as np

from vilenkin.gframe import (CLASSICAL, PAPER, build_pseudo_scaling, low_pass_check, parseval_check,
                             pfmw_build, random_filter, signum, telescoping_residual, two_scale_residual,
                             validate_filter)
from vilenkin.oracle import frame_oracle

p, R = 3, 2
F = random_filter(p, R, seed=4)
print("m_0 on the zero coset:", F.tables[:, 0].round(12))
print(validate_filter(F, CLASSICAL).to_text())
print("minus-sign cross residual:", round(validate_filter(F, PAPER).cross_residual_paper, 4))
print(low_pass_check(F, 2).to_text())

mu = signum(F)
print("|mu| - 1 max:", np.abs(np.abs(mu) - 1).max())

phi = build_pseudo_scaling(F, 3, CLASSICAL)
print("phi^ window [%d..%d], two-scale residual %.1e" % (phi.lo, phi.hi, two_scale_residual(F, phi)))
print("telescoping residual %.1e" % telescoping_residual(F, phi, 6))

Psi = pfmw_build(F, phi)
print(parseval_check(Psi).to_text())

# with conj(m_i) in place of m_i the cross terms no longer cancel
print("conjugated form, cond2 residual: %.3f" % parseval_check(pfmw_build(F, phi, conjugate=True)).cond2_residual)

# R = 1 keeps the wavelets band-limited, so the time-domain model is exact
G = random_filter(p, 1, seed=4)
PsiG = pfmw_build(G, build_pseudo_scaling(G, 2, CLASSICAL))
print(frame_oracle(PsiG, D=5, J_inner=2, trials=20).to_text())
