"""
Assembly of field operators and Hamiltonians on truncated spaces.

Layout conventions: spin factors come first in every tensor product and the
Fock factor last, so ``C^2 (x) h`` is the block matrix ``[[up, .], [., down]]``
with the spin-up block first. Grid operators act on ``grid (x) fock`` and the
spin block is laid around that.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from functools import reduce
from pathlib import Path
from typing import Callable, Sequence

import numpy as np
import scipy.sparse as sp

from .fock import DEFAULT_DIM_CAP, DimensionCapError, FockBasis, ModeSet

HERMITICITY_TOL = 1e-12

SIGMA = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


def _max_abs(m) -> float:
    if sp.issparse(m):
        m = m.tocoo()
        return float(np.max(np.abs(m.data))) if m.nnz else 0.0
    m = np.asarray(m)
    return float(np.max(np.abs(m))) if m.size else 0.0


def hermiticity_residual(m) -> float:
    return _max_abs(m - m.conj().T)


@dataclass(frozen=True, eq=False)
class HermitianOperator:
    """Hermitian matrix tagged with the space it acts on.

    ``factors`` lists the tensor-factor dimensions in layout order; their
    product must equal the matrix dimension.
    """

    matrix: sp.csr_matrix
    space_tag: str
    factors: tuple[int, ...]

    def __post_init__(self):
        m = self.matrix
        if not sp.issparse(m):
            m = sp.csr_matrix(np.asarray(m, dtype=complex))
        else:
            m = sp.csr_matrix(m, dtype=complex)
        m.eliminate_zeros()
        object.__setattr__(self, "matrix", m)
        n, n2 = m.shape
        if n != n2:
            raise ValueError(f"operator matrix must be square, got {m.shape}")
        if int(np.prod(self.factors)) != n:
            raise ValueError(f"factors {self.factors} inconsistent with dim {n}")
        res = hermiticity_residual(m)
        if res > HERMITICITY_TOL:
            raise ValueError(f"matrix is not Hermitian (residual {res:.3e}); assembly bug")

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def toarray(self) -> np.ndarray:
        return self.matrix.toarray()

    def stats(self) -> dict:
        return {
            "dim": self.dim,
            "space_tag": self.space_tag,
            "factors": list(self.factors),
            "nnz": int(self.matrix.nnz),
            "max_abs_entry": _max_abs(self.matrix),
            "hermiticity_residual": hermiticity_residual(self.matrix),
        }


@dataclass(frozen=True, eq=False)
class FieldOperators:
    a: tuple[sp.csr_matrix, ...]
    adag: tuple[sp.csr_matrix, ...]
    Hf: sp.csr_matrix
    Pf: tuple[sp.csr_matrix, ...]
    A0: tuple[sp.csr_matrix, ...]
    B0: tuple[sp.csr_matrix, ...]

    @property
    def dim(self) -> int:
        return self.Hf.shape[0]


@dataclass(frozen=True, eq=False)
class SpinBlockSpec:
    A: HermitianOperator
    B: tuple[HermitianOperator, HermitianOperator, HermitianOperator]

    def __post_init__(self):
        for b in self.B:
            if b.dim != self.A.dim or b.space_tag != self.A.space_tag:
                raise ValueError(
                    f"B component on {b.space_tag}/{b.dim} does not match A on "
                    f"{self.A.space_tag}/{self.A.dim}"
                )


def ladder_operator(basis: FockBasis, mode: int) -> sp.csr_matrix:
    """Annihilator ``a_m |n> = sqrt(n_m) |n - e_m>`` as a real sparse matrix."""
    rows, cols, vals = [], [], []
    for col, state in enumerate(basis.states):
        n = state[mode]
        if n == 0:
            continue
        lowered = state[:mode] + (n - 1,) + state[mode + 1 :]
        rows.append(basis.index[lowered])
        cols.append(col)
        vals.append(np.sqrt(n))
    D = basis.dim
    return sp.csr_matrix((np.array(vals, dtype=float), (rows, cols)), shape=(D, D))


def build_field_operators(basis: FockBasis, modes: ModeSet) -> FieldOperators:
    if basis.mode_count != len(modes):
        raise ValueError(f"basis has {basis.mode_count} modes, mode set has {len(modes)}")
    D = basis.dim
    occ = basis.occupations.astype(float)
    a = tuple(ladder_operator(basis, m) for m in range(len(modes)))
    adag = tuple(x.T.tocsr() for x in a)

    Hf = sp.diags(occ @ modes.omega, format="csr")
    kmat = modes.k
    Pf = tuple(sp.diags(occ @ kmat[:, alpha], format="csr") for alpha in range(3))

    zero = sp.csr_matrix((D, D), dtype=float)
    A0, B0 = [], []
    for alpha in range(3):
        Aa, Ba = zero.copy(), zero.copy()
        for m, mode in enumerate(modes):
            g = modes.coupling[m]
            Aa = Aa + (g * mode.eps[alpha]) * (a[m] + adag[m])
            Ba = Ba + (g * mode.k_cross_eps[alpha]) * (a[m] - adag[m])
        A0.append(Aa.tocsr())
        # real coefficient times i keeps the entries purely imaginary exactly
        B0.append((1j * Ba).tocsr())
    return FieldOperators(a, adag, Hf, Pf, tuple(A0), tuple(B0))


def build_spin_block(spec: SpinBlockSpec, g_spin: float) -> HermitianOperator:
    """``[[A + g B3, g (B1 - i B2)], [g (B1 + i B2), A - g B3]]``."""
    A = spec.A.matrix
    B1, B2, B3 = (b.matrix for b in spec.B)
    g = float(g_spin)
    m = sp.bmat(
        [[A + g * B3, g * (B1 - 1j * B2)], [g * (B1 + 1j * B2), A - g * B3]],
        format="csr",
    )
    tag = "spin*" + spec.A.space_tag
    return HermitianOperator(m, tag, (2,) + spec.A.factors)


def _square_sum(components) -> sp.csr_matrix:
    return reduce(lambda x, y: x + y, (c @ c for c in components)).tocsr()


def spinless_fixed_momentum(fields: FieldOperators, P, e: float) -> sp.csr_matrix:
    """``1/2 sum_a (P_a - Pf_a + e A0_a)^2 + Hf`` on the Fock truncation."""
    P = np.asarray(P, dtype=float).reshape(3)
    ident = sp.identity(fields.dim, format="csr")
    M = [P[a] * ident - fields.Pf[a] + e * fields.A0[a] for a in range(3)]
    return (0.5 * _square_sum(M) + fields.Hf).tocsr()


def build_HP(
    basis: FockBasis,
    modes: ModeSet,
    P=(0.0, 0.0, 0.0),
    e: float = 0.0,
    g_spin: float | None = None,
    fields: FieldOperators | None = None,
) -> HermitianOperator:
    """Fixed total momentum Hamiltonian on ``C^2 (x) fock``.

    ``g_spin`` multiplies ``sigma . B(0)``; it defaults to ``e/2``.
    """
    if fields is None:
        fields = build_field_operators(basis, modes)
    if g_spin is None:
        g_spin = e / 2.0
    D = basis.dim
    A = HermitianOperator(spinless_fixed_momentum(fields, P, e), "fock", (D,))
    B = tuple(HermitianOperator(b, "fock", (D,)) for b in fields.B0)
    return build_spin_block(SpinBlockSpec(A, B), g_spin)


@dataclass(frozen=True)
class GridSpec:
    """Uniform 1-D lattice symmetric about 0 (the electron moves along z)."""

    points: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.points, dtype=float)
        if x.ndim != 1 or x.size < 3 or x.size % 2 == 0:
            raise ValueError("grid needs an odd number (>= 3) of points")
        if not np.array_equal(x, -x[::-1]):
            raise ValueError("grid is not symmetric about 0; x -> -x must map grid to grid")
        d = np.diff(x)
        if np.any(d <= 0) or not np.allclose(d, d[0], rtol=1e-12, atol=0):
            raise ValueError("grid must be uniform and increasing")
        object.__setattr__(self, "points", x)

    @classmethod
    def symmetric(cls, half_width: int, spacing: float) -> "GridSpec":
        if half_width < 1 or not spacing > 0:
            raise ValueError("need half_width >= 1 and spacing > 0")
        return cls(np.arange(-half_width, half_width + 1) * float(spacing))

    @property
    def size(self) -> int:
        return self.points.size

    @property
    def spacing(self) -> float:
        return float(self.points[1] - self.points[0])


def lattice_momentum(grid: GridSpec) -> sp.csr_matrix:
    """Central-difference ``-i d/dx`` with hard-wall truncation (Hermitian)."""
    n, h = grid.size, grid.spacing
    off = np.full(n - 1, 1.0 / (2.0 * h))
    D = sp.diags([off, -off], [1, -1], format="csr")
    return (-1j * D).tocsr()


def _grid_field(fields: FieldOperators, modes: ModeSet, grid: GridSpec):
    """Position-dependent A(x), B(x) as block-diagonal operators on grid (x) fock."""
    n = grid.size
    A_blocks = [[None] * n for _ in range(3)]
    B_blocks = [[None] * n for _ in range(3)]
    for i, x in enumerate(grid.points):
        Ax = [0, 0, 0]
        Bx = [0, 0, 0]
        for m, mode in enumerate(modes):
            g = modes.coupling[m]
            phase = mode.k[2] * x
            c, s = np.cos(phase), np.sin(phase)
            plus = c * (fields.a[m] + fields.adag[m]) + 1j * s * (fields.a[m] - fields.adag[m])
            minus = c * (fields.a[m] - fields.adag[m]) + 1j * s * (fields.a[m] + fields.adag[m])
            for alpha in range(3):
                Ax[alpha] = Ax[alpha] + (g * mode.eps[alpha]) * plus
                Bx[alpha] = Bx[alpha] + (1j * g * mode.k_cross_eps[alpha]) * minus
        for alpha in range(3):
            A_blocks[alpha][i] = sp.csr_matrix(Ax[alpha], dtype=complex)
            B_blocks[alpha][i] = sp.csr_matrix(Bx[alpha], dtype=complex)
    A = tuple(sp.block_diag(A_blocks[a], format="csr") for a in range(3))
    B = tuple(sp.block_diag(B_blocks[a], format="csr") for a in range(3))
    return A, B


def potential_values(grid: GridSpec, V) -> np.ndarray:
    if callable(V):
        vals = np.array([V(x) for x in grid.points], dtype=float)
    else:
        vals = np.asarray(V, dtype=float).reshape(-1)
    if vals.size != grid.size:
        raise ValueError(f"potential table has {vals.size} entries, grid has {grid.size}")
    return vals


def build_HPF_grid(
    basis: FockBasis,
    modes: ModeSet,
    grid: GridSpec,
    V: Sequence[float] | Callable[[float], float] | None = None,
    e: float = 0.0,
    g_spin: float | None = None,
    fields: FieldOperators | None = None,
) -> HermitianOperator:
    """Pauli-Fierz Hamiltonian with the electron on a symmetric 1-D lattice.

    Index layout is spin (x) grid (x) fock. The kinetic term is
    ``1/2 [(p + e A_z(x))^2 + (e A_x(x))^2 + (e A_y(x))^2]`` with the phase
    ``k . x`` taken as ``k_z x``. An odd potential is accepted with a warning:
    the resulting operator no longer commutes with time reversal.
    """
    if fields is None:
        fields = build_field_operators(basis, modes)
    if g_spin is None:
        g_spin = e / 2.0
    if not isinstance(grid, GridSpec):
        grid = GridSpec(np.asarray(grid, dtype=float))
    Vx = np.zeros(grid.size) if V is None else potential_values(grid, V)
    if not np.array_equal(Vx, Vx[::-1]):
        warnings.warn("potential is not even under x -> -x; time-reversal symmetry is broken",
                      stacklevel=2)
    D, n = basis.dim, grid.size
    Ifock = sp.identity(D, format="csr")
    Igrid = sp.identity(n, format="csr")
    p = sp.kron(lattice_momentum(grid), Ifock, format="csr")
    Ax, Bx = _grid_field(fields, modes, grid)
    M = [e * Ax[0], e * Ax[1], p + e * Ax[2]]
    A = 0.5 * _square_sum(M) + sp.kron(sp.diags(Vx), Ifock) + sp.kron(Igrid, fields.Hf)
    tag = "grid*fock"
    spec = SpinBlockSpec(
        HermitianOperator(A, tag, (n, D)),
        tuple(HermitianOperator(b, tag, (n, D)) for b in Bx),
    )
    return build_spin_block(spec, g_spin)


def spin_operator(N: int, site: int, component: int) -> sp.csr_matrix:
    """``1 (x) ... (x) sigma_component (x) ... (x) 1`` on N spins."""
    factors = [sp.identity(2, dtype=complex, format="csr")] * N
    factors[site] = sp.csr_matrix(SIGMA[component])
    return reduce(lambda x, y: sp.kron(x, y, format="csr"), factors)


def build_HN_toy(
    basis: FockBasis,
    modes: ModeSet,
    N: int,
    e: float,
    g_spin: float | None = None,
    fields: FieldOperators | None = None,
    dim_cap: int = DEFAULT_DIM_CAP,
) -> HermitianOperator:
    """N spins sharing one field at the origin.

    ``sum_l g sigma^(l) . B(0) + Hf + 1/2 sum_a (e A0_a)^2`` on
    ``(C^2)^N (x) fock``. Coulomb terms and antisymmetrization are not part
    of this reduction.
    """
    if N < 1:
        raise ValueError(f"need N >= 1 spins, got {N}")
    D = basis.dim
    if 2**N * D > dim_cap:
        raise DimensionCapError(f"2^{N} * {D} = {2**N * D} exceeds cap {dim_cap}")
    if fields is None:
        fields = build_field_operators(basis, modes)
    if g_spin is None:
        g_spin = e / 2.0
    fock_part = fields.Hf + 0.5 * _square_sum([e * A for A in fields.A0])
    H = sp.kron(sp.identity(2**N, format="csr"), fock_part, format="csr")
    for site in range(N):
        for c in range(3):
            H = H + g_spin * sp.kron(spin_operator(N, site, c), fields.B0[c], format="csr")
    return HermitianOperator(H, "Nspin*fock", (2,) * N + (D,))


def export_triplets(op, path) -> int:
    """Write ``row col re im`` lines (17 significant digits); returns line count."""
    m = op.matrix if isinstance(op, HermitianOperator) else sp.csr_matrix(op)
    coo = m.tocoo()
    order = np.lexsort((coo.col, coo.row))
    lines = [f"# dim {m.shape[0]}"]
    for i in order:
        v = coo.data[i]
        lines.append(f"{coo.row[i]} {coo.col[i]} {v.real:.17g} {v.imag:.17g}")
    Path(path).write_text("\n".join(lines) + "\n")
    return len(order)


def load_triplets(path) -> sp.csr_matrix:
    text = Path(path).read_text().splitlines()
    dim = None
    rows, cols, vals = [], [], []
    for line in text:
        if line.startswith("#"):
            parts = line[1:].split()
            if len(parts) == 2 and parts[0] == "dim":
                dim = int(parts[1])
            continue
        if not line.strip():
            continue
        r, c, re_, im = line.split()
        rows.append(int(r))
        cols.append(int(c))
        vals.append(complex(float(re_), float(im)))
    if dim is None:
        dim = max(max(rows), max(cols)) + 1 if rows else 0
    return sp.csr_matrix((np.array(vals, dtype=complex), (rows, cols)), shape=(dim, dim))
