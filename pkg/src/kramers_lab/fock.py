"""
Discretized photon modes and the truncated bosonic occupation basis.

The continuum field is replaced by a user-supplied quadrature
``{(k_m, w_m)}``; every k-point carries two real transverse polarizations.
Occupation states are truncated by total photon number ``sum(n) <= n_max``
and ordered graded-lexicographically, so the vacuum always sits at index 0.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from math import comb
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

DEFAULT_DIM_CAP = 2**20


class DimensionCapError(ValueError):
    """Raised when a requested space exceeds the configured dimension cap."""


@dataclass(frozen=True)
class Mode:
    k: np.ndarray
    polarization: int
    weight: float
    eps: np.ndarray

    def __post_init__(self):
        if np.linalg.norm(self.k) <= 0.0:
            raise ValueError("zero wave vector is not a valid mode")
        if self.polarization not in (1, 2):
            raise ValueError(f"polarization index must be 1 or 2, got {self.polarization}")
        if not self.weight > 0.0:
            raise ValueError(f"quadrature weight must be positive, got {self.weight}")

    @property
    def omega(self) -> float:
        return float(np.linalg.norm(self.k))

    @property
    def k_cross_eps(self) -> np.ndarray:
        return np.cross(self.k, self.eps)


def polarization_pair(k) -> tuple[np.ndarray, np.ndarray]:
    """Return the two real polarization vectors for wave vector ``k``.

    For k off the z axis, ``eps1 = k x z / |k x z|`` and ``eps2 = khat x eps1``,
    which makes ``(eps1, eps2, khat)`` right-handed. On the z axis (either
    sign) the fixed pair ``(1,0,0), (0,1,0)`` is used.
    """
    k = np.asarray(k, dtype=float)
    norm = np.linalg.norm(k)
    if norm <= 0.0:
        raise ValueError("zero wave vector has no transverse polarizations")
    khat = k / norm
    # exact pole test: anything with kx = ky = 0 takes the tie-break
    if k[0] == 0.0 and k[1] == 0.0:
        return np.array([1.0, 0.0, 0.0]), np.array([0.0, 1.0, 0.0])
    # k x z = (ky, -kx, 0); hypot avoids underflow right next to the pole
    eps1 = np.array([k[1], -k[0], 0.0]) / math.hypot(k[0], k[1])
    eps2 = np.cross(khat, eps1)
    return eps1, eps2


def mode_coupling(weight: float, omega: float) -> float:
    """Discretized mode prefactor ``sqrt(w / (2 (2 pi)^3 |k|))``."""
    return float(np.sqrt(weight / (2.0 * (2.0 * np.pi) ** 3 * omega)))


@dataclass(frozen=True)
class ModeSet:
    modes: tuple[Mode, ...]
    coupling: np.ndarray = field(repr=False)

    def __post_init__(self):
        if len(self.modes) == 0:
            raise ValueError("a mode set needs at least one mode")
        if len(self.coupling) != len(self.modes) or np.any(self.coupling <= 0):
            raise ValueError("couplings must be positive, one per mode")

    def __len__(self) -> int:
        return len(self.modes)

    def __iter__(self):
        return iter(self.modes)

    @property
    def k(self) -> np.ndarray:
        """(M, 3) array of wave vectors."""
        return np.array([m.k for m in self.modes])

    @property
    def eps(self) -> np.ndarray:
        return np.array([m.eps for m in self.modes])

    @property
    def omega(self) -> np.ndarray:
        return np.array([m.omega for m in self.modes])

    def take(self, count: int) -> "ModeSet":
        """First ``count`` modes, e.g. a single polarization of one k-point."""
        if not 1 <= count <= len(self.modes):
            raise ValueError(f"cannot take {count} of {len(self.modes)} modes")
        return ModeSet(self.modes[:count], self.coupling[:count].copy())

    def rotated(self, R) -> "ModeSet":
        """Apply a common rotation to every k and polarization vector."""
        R = np.asarray(R, dtype=float)
        modes = tuple(
            Mode(R @ m.k, m.polarization, m.weight, R @ m.eps) for m in self.modes
        )
        return ModeSet(modes, self.coupling.copy())


def build_modes(kpoints: Iterable, polarizations: Sequence[int] = (1, 2)) -> ModeSet:
    """Build the mode set for a list of ``(k, weight)`` quadrature nodes.

    Each k-point contributes one mode per requested polarization index,
    in the order ``(k, 1), (k, 2)``.
    """
    modes = []
    for entry in kpoints:
        k, w = entry
        k = np.asarray(k, dtype=float).reshape(3)
        w = float(w)
        if not np.all(np.isfinite(k)) or not np.isfinite(w):
            raise ValueError(f"non-finite k-point {k} / weight {w}")
        if np.linalg.norm(k) <= 0.0:
            raise ValueError("k = 0 is not allowed (coupling divides by |k|)")
        if w <= 0.0:
            raise ValueError(f"quadrature weight must be positive, got {w}")
        eps = polarization_pair(k)
        for lam in polarizations:
            modes.append(Mode(k, int(lam), w, eps[int(lam) - 1]))
    if not modes:
        raise ValueError("no k-points supplied")
    coupling = np.array([mode_coupling(m.weight, m.omega) for m in modes])
    return ModeSet(tuple(modes), coupling)


def read_kpoints(path) -> list[tuple[np.ndarray, float]]:
    """Read k-point rows ``kx ky kz weight`` (whitespace or comma separated)."""
    text = Path(path).read_text()
    delimiter = "," if "," in text else None
    rows = np.atleast_2d(np.loadtxt(path, delimiter=delimiter, comments="#", ndmin=2))
    if rows.shape[1] != 4:
        raise ValueError(f"{path}: expected 4 columns (kx, ky, kz, weight), got {rows.shape[1]}")
    return [(r[:3], r[3]) for r in rows]


def _compositions(total: int, parts: int):
    """All ways to write ``total`` as ``parts`` non-negative ints, lexicographic."""
    # stars and bars; combinations() does not emit lexicographic occupations
    out = []
    for bars in itertools.combinations(range(total + parts - 1), parts - 1):
        prev = -1
        occ = []
        for b in bars:
            occ.append(b - prev - 1)
            prev = b
        occ.append(total + parts - 1 - prev - 1)
        out.append(tuple(occ))
    out.sort()
    return out


@dataclass(frozen=True)
class FockBasis:
    """Occupation-number basis with total-occupation cutoff ``n_max``."""

    mode_count: int
    n_max: int
    states: tuple[tuple[int, ...], ...] = field(repr=False)
    index: dict = field(repr=False, compare=False)

    @property
    def dim(self) -> int:
        return len(self.states)

    def __len__(self) -> int:
        return len(self.states)

    @property
    def occupations(self) -> np.ndarray:
        """(D, M) integer array of occupation numbers."""
        return np.array(self.states, dtype=np.int64).reshape(self.dim, self.mode_count)

    @property
    def total_occupation(self) -> np.ndarray:
        return self.occupations.sum(axis=1)

    def state(self, i: int) -> tuple[int, ...]:
        return self.states[i]

    def index_of(self, occ) -> int:
        return self.index[tuple(int(n) for n in occ)]

    def vacuum(self) -> np.ndarray:
        v = np.zeros(self.dim, dtype=complex)
        v[0] = 1.0
        return v


def basis_dimension(mode_count: int, n_max: int) -> int:
    return comb(mode_count + n_max, mode_count)


def enumerate_basis(mode_count: int, n_max: int, dim_cap: int = DEFAULT_DIM_CAP) -> FockBasis:
    if mode_count < 1:
        raise ValueError(f"need at least one mode, got {mode_count}")
    if n_max < 0:
        raise ValueError(f"n_max must be non-negative, got {n_max}")
    dim = basis_dimension(mode_count, n_max)
    if dim > dim_cap:
        raise DimensionCapError(
            f"Fock dimension C({mode_count}+{n_max}, {mode_count}) = {dim} exceeds cap {dim_cap}"
        )
    states = []
    for total in range(n_max + 1):
        states.extend(_compositions(total, mode_count))
    index = {s: i for i, s in enumerate(states)}
    return FockBasis(mode_count, n_max, tuple(states), index)
