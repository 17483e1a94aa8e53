"""
Heat semigroup and spin-independent vacuum expectations
========================================================

f(H) inherits the time-reversal symmetry of H. Sandwiched between the
field vacuum, exp(-tH) is proportional to the 2x2 identity in spin space.
"""

import numpy as np

from kramers_lab import (
    ExpNegT,
    IndicatorBelow,
    ResolventShift,
    build_HP,
    build_modes,
    diagonalize,
    enumerate_basis,
    jreal_generalization_check,
    theta_for,
    theta_function_commutes,
    vacuum_expectation_check,
)
from kramers_lab.semigroup import expm_crosscheck, semigroup_law_residual

modes = build_modes([((0.0, 0.0, 1.0), 496.1), ((0.4, -0.3, 0.8), 300.0)])
basis = enumerate_basis(len(modes), 3)
H = build_HP(basis, modes, P=(0.1, 0.0, 0.4), e=0.8)
theta = theta_for(H)
spec = diagonalize(H)
lam = spec.eigenvalues

for f in (ExpNegT(1.0), ResolventShift(1.0 - lam[0]), IndicatorBelow(lam[0] + 1e-6)):
    print(f.describe(), "theta residual", theta_function_commutes(H, theta, f, spec))

print("semigroup law", semigroup_law_residual(H), "expm", expm_crosscheck(H))

for t in (0.1, 1.0, 10.0):
    r = vacuum_expectation_check(H, basis, t, spectrum=spec)
    print(f"t={t:5}: a(t)={r.a_t:.6e} offdiag={r.offdiag:.1e} diag gap={r.diag_gap:.1e}")

# any real Fock vector works in place of the vacuum
phi = np.random.default_rng(0).standard_normal(basis.dim)
phi /= np.linalg.norm(phi)
r = jreal_generalization_check(H, theta, ExpNegT(1.0), phi, spectrum=spec)
print("real phi: up/down gap", r.spin_gap)
