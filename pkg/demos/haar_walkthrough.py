"""Haar on the Vilenkin group, start to finish.

Run:  python3 demos/haar_walkthrough.py
"""
import numpy as np

from vilenkin import group, walsh
from vilenkin.gframe import build_pseudo_scaling, haar_filter, parseval_check, pfmw_build
from vilenkin.mask import cascade, haar_mask, mask_diagnostics, refinable_spectrum, scaling_checks
from vilenkin.mra import mra_verdict

p = 3

# group arithmetic has no carries
x = group.from_integer(7, p)
print("7 in base 3:", group.to_text(x))
print("x + x     :", group.to_text(x + x))
print("lambda(x + x + x) =", group.lambda_value(x + x + x))

# the Walsh functions W_0..W_8 on the 9 cells of U are orthonormal
G = walsh.walsh_gram(p, 2)
print("max |Gram - I| =", np.abs(G - np.eye(9)).max())

# the Haar mask: m(w) = 1 on w_1 = 0, else 0
m = haar_mask(p)
print(mask_diagnostics(m).to_text())

g = refinable_spectrum(m, 3)
print("phi^ on [%d..%d]: %d of %d samples are 1" % (g.lo, g.hi, int(g.values.real.sum()), g.size))

phi = cascade(m, 4)
print("cascade: %d iterations, phi = 1 on U: %s" % (phi.iterations, np.all(phi.values == 1)))

c = scaling_checks(m, 4)
print("ortho residual", c.ortho_residual, " two-scale residual", c.two_scale_residual)
print(mra_verdict(m).to_text())

# same thing through the filter pipeline: m_i = indicator of w_1 = i
F = haar_filter(p)
Psi = pfmw_build(F, build_pseudo_scaling(F, 3))
for i, s in enumerate(Psi.spectra, start=1):
    print("psi^_%d takes values" % i, sorted(set(np.round(s.values.real, 12).tolist())))
print(parseval_check(Psi, A_max=32, J=6).to_text())
