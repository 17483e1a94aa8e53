"""
Electron on a symmetric grid
============================

Time reversal on the grid also flips x -> -x, so an even potential keeps the
symmetry and an odd one breaks it.
"""

import warnings

from kramers_lab import (
    GridSpec,
    build_HPF_grid,
    build_modes,
    enumerate_basis,
    kramers_report,
    theta_for,
)

modes = build_modes([((0.3, 0.2, 1.0), 2 * (2 * 3.141592653589793) ** 3)]).take(1)
basis = enumerate_basis(1, 2)
grid = GridSpec.symmetric(4, 0.5)
print("grid points", grid.points)

H = build_HPF_grid(basis, modes, grid, lambda x: x**2, e=0.3)
theta = theta_for(H, grid_size=grid.size)
rep = kramers_report(H, theta)
print("V = x^2: residual", rep.commutator_residual, "multiplicities", set(rep.multiplicities))

with warnings.catch_warnings(record=True) as caught:
    warnings.simplefilter("always")
    H_odd = build_HPF_grid(basis, modes, grid, lambda x: x, e=0.3)
print("warning:", caught[0].message)
odd = kramers_report(H_odd, theta)
print("V = x:   residual", odd.commutator_residual, "asserted", odd.asserted)
print("notes:", odd.notes)
