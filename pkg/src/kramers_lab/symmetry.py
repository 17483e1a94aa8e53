"""
Involutions, antiunitaries and reality-preserving checks.

An involution ``j`` is a basis permutation followed by entrywise complex
conjugation, ``j v = P conj(v)``. An antiunitary is stored as its unitary
part, ``theta v = U conj(v)``, so every symmetry statement reduces to a
matrix identity whose max-norm residual can be measured.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import NamedTuple

import numpy as np
import scipy.sparse as sp

from .operators import SIGMA, HermitianOperator, _max_abs

MEMBERSHIP_TOL = 1e-12


def _as_sparse(a) -> sp.csr_matrix:
    if isinstance(a, HermitianOperator):
        return a.matrix
    if sp.issparse(a):
        return sp.csr_matrix(a)
    return sp.csr_matrix(np.asarray(a))


@dataclass(frozen=True, eq=False)
class Involution:
    perm: np.ndarray

    def __post_init__(self):
        perm = np.asarray(self.perm, dtype=np.int64)
        n = perm.size
        if not np.array_equal(np.sort(perm), np.arange(n)):
            raise ValueError("perm is not a permutation")
        if not np.array_equal(perm[perm], np.arange(n)):
            raise ValueError("perm does not square to the identity (j^2 != 1)")
        object.__setattr__(self, "perm", perm)

    @classmethod
    def conjugation(cls, dim: int) -> "Involution":
        """Plain complex conjugation in the occupation basis."""
        return cls(np.arange(dim))

    @classmethod
    def grid_flip(cls, grid_size: int, inner_dim: int) -> "Involution":
        """``x -> -x`` on a symmetric grid, identity on the inner (Fock) factor."""
        flip = np.arange(grid_size)[::-1]
        perm = (flip[:, None] * inner_dim + np.arange(inner_dim)[None, :]).reshape(-1)
        return cls(perm)

    @property
    def dim(self) -> int:
        return self.perm.size

    def matrix(self) -> sp.csr_matrix:
        n = self.dim
        return sp.csr_matrix((np.ones(n), (np.arange(n), self.perm)), shape=(n, n))

    def apply(self, v) -> np.ndarray:
        v = np.asarray(v)
        return np.conj(v[self.perm])


@dataclass(frozen=True, eq=False)
class AntiunitaryOperator:
    U: sp.csr_matrix
    sign: int
    involution: Involution | None = None

    @property
    def dim(self) -> int:
        return self.U.shape[0]

    def apply(self, v) -> np.ndarray:
        return self.U @ np.conj(np.asarray(v))

    def square(self) -> sp.csr_matrix:
        """Unitary part of theta^2, i.e. ``U conj(U)``."""
        return (self.U @ self.U.conj()).tocsr()


def make_theta(j: Involution, spin_factors: int = 1) -> AntiunitaryOperator:
    """``theta = sigma_2^{(x)N} (x) j``; its square is ``(-1)^N``."""
    if spin_factors < 1:
        raise ValueError("need at least one spin factor")
    s2 = sp.csr_matrix(SIGMA[1])
    spin = reduce(lambda x, y: sp.kron(x, y, format="csr"), [s2] * spin_factors)
    U = sp.kron(spin, j.matrix(), format="csr")
    n = U.shape[0]
    ident = sp.identity(n, format="csr")
    if _max_abs(U.conj().T @ U - ident) > MEMBERSHIP_TOL:
        raise ArithmeticError("theta unitary part is not unitary")
    sq = U @ U.conj()
    sign = None
    for s in (1, -1):
        if _max_abs(sq - s * ident) <= MEMBERSHIP_TOL:
            sign = s
    if sign is None or sign != (-1) ** spin_factors:
        raise ArithmeticError("theta^2 is not +-1 as expected")
    return AntiunitaryOperator(U, sign, j)


def reality_residual(a, j: Involution) -> float:
    """``max |A P - P conj(A)|``, the matrix form of ``a j = j a``."""
    A = _as_sparse(a)
    P = j.matrix()
    return _max_abs(A @ P - P @ A.conj())


def is_reality_preserving(a, j: Involution, tol: float = MEMBERSHIP_TOL) -> tuple[bool, float]:
    """Membership in the real algebra of j-reality-preserving operators.

    Works for any square matrix, Hermitian or not (ladder operators, products).
    Returns ``(member, residual)``.
    """
    res = reality_residual(a, j)
    return res <= tol, res


def check_commutes(H, theta: AntiunitaryOperator) -> float:
    """``max |H U - U conj(H)|``, zero iff ``theta H = H theta``."""
    Hm = _as_sparse(H)
    if Hm.shape != theta.U.shape:
        raise ValueError(f"H is {Hm.shape}, theta acts on dim {theta.dim}")
    return _max_abs(Hm @ theta.U - theta.U @ Hm.conj())


class ClosureResult(NamedTuple):
    passed: bool
    combination_residual: float
    product_residual: float


def algebra_closure_test(a, b, alpha, beta, j: Involution,
                         tol: float = MEMBERSHIP_TOL) -> ClosureResult:
    """Check that ``alpha a + beta b`` and ``a b`` stay reality preserving.

    A complex ``alpha`` or ``beta`` generally fails: the algebra is only
    closed under real combinations.
    """
    A, B = _as_sparse(a), _as_sparse(b)
    for name, m in (("a", A), ("b", B)):
        ok, res = is_reality_preserving(m, j, tol)
        if not ok:
            raise ValueError(f"{name} is not reality preserving (residual {res:.3e})")
    comb = (alpha * A + beta * B).tocsr()
    prod = (A @ B).tocsr()
    r1 = reality_residual(comb, j)
    r2 = reality_residual(prod, j)
    return ClosureResult(r1 <= tol and r2 <= tol, r1, r2)


def symmetry_breaking_probe(H: HermitianOperator, strength: float = 1.0) -> HermitianOperator:
    """``H + strength * sigma_3 (x) 1``: a negative control that anticommutes with theta."""
    inner = H.dim // 2
    probe = sp.kron(sp.csr_matrix(SIGMA[2]), sp.identity(inner), format="csr")
    return HermitianOperator(H.matrix + strength * probe, H.space_tag, H.factors)


def theta_for(H: HermitianOperator, grid_size: int | None = None,
              spin_factors: int = 1) -> AntiunitaryOperator:
    """Time reversal matching the layout of an operator built in ``operators``."""
    inner = H.dim // 2**spin_factors
    if grid_size is None:
        j = Involution.conjugation(inner)
    else:
        j = Involution.grid_flip(grid_size, inner // grid_size)
    return make_theta(j, spin_factors)
