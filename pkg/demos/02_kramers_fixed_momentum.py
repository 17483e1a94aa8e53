"""
Kramers pairs of the fixed-momentum Hamiltonian
===============================================

Assemble H(P) for a small mode set, verify that time reversal commutes with
it, and look at the pairing of the low spectrum. A sigma_3 probe breaks the
symmetry and the report refuses to assert anything.
"""

from kramers_lab import (
    build_HP,
    build_modes,
    check_commutes,
    enumerate_basis,
    kramers_report,
    symmetry_breaking_probe,
    theta_for,
)

modes = build_modes([((0.0, 0.0, 1.0), 496.1), ((0.4, -0.3, 0.8), 300.0)]).take(3)
basis = enumerate_basis(len(modes), 3)
H = build_HP(basis, modes, P=(0.0, 0.2, 0.5), e=0.7)
theta = theta_for(H)
print("dim", H.dim, "theta^2 =", theta.sign, "commutator", check_commutes(H, theta))

rep = kramers_report(H, theta)
for c in rep.clusters[:6]:
    print(f"E={c.mean:+.8f}  multiplicity={c.multiplicity}  pairing={c.pairing:.1e}")
print("all even:", rep.all_even, "passed:", rep.passed)

probe = symmetry_breaking_probe(H)
bad = kramers_report(probe, theta)
print("probe commutator", bad.commutator_residual, "asserted:", bad.asserted)
print("probe multiplicities", bad.multiplicities[:6])
