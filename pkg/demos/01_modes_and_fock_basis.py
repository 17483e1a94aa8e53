"""
Photon modes and the truncated occupation basis
===============================================

Build a two-point k quadrature, inspect the polarization frame and the
coupling prefactors, then enumerate the occupation basis.
"""

import numpy as np

from kramers_lab import build_modes, enumerate_basis

# two k-points, each carrying two transverse polarizations -> four modes
modes = build_modes([((0.0, 0.0, 1.0), 1.0), ((0.4, -0.3, 0.8), 2.0)])
for m, g in zip(modes, modes.coupling):
    print(f"k={m.k} lambda={m.polarization} eps={np.round(m.eps, 4)} g={g:.4f}")

# polarizations are orthonormal and transverse
E = modes.eps.reshape(2, 2, 3)
for pair, k in zip(E, modes.k[::2]):
    print("frame defect", np.abs(pair @ pair.T - np.eye(2)).max(), np.abs(pair @ k).max())

# occupation basis with at most 3 photons in total
basis = enumerate_basis(len(modes), 3)
print("dimension", basis.dim, "vacuum", basis.state(0), "last", basis.state(basis.dim - 1))
print("first states", basis.states[:6])
