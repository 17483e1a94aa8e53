"""
Odd versus even numbers of spins
================================

theta^2 = (-1)^N. Only for odd N does the spectrum have to pair up.
"""

from kramers_lab import (
    Involution,
    build_HN_toy,
    build_modes,
    enumerate_basis,
    kramers_report,
    make_theta,
    theta_for,
)

for N in range(1, 5):
    print(f"N={N}: theta^2 = {make_theta(Involution.conjugation(1), N).sign:+d}")

W = 496.1
modes = build_modes([((0.0, 0.0, 1.0), W), ((1.0, 0.0, 0.0), W)], polarizations=(1,))
basis = enumerate_basis(len(modes), 2)
for N in (2, 3):
    H = build_HN_toy(basis, modes, N, e=0.4)
    rep = kramers_report(H, theta_for(H, spin_factors=N))
    odd = [c.multiplicity for c in rep.clusters if c.multiplicity % 2]
    print(f"N={N}: dim {H.dim}, asserted {rep.asserted}, odd clusters {len(odd)}")
