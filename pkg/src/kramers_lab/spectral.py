"""
Eigensolvers, eigenvalue clustering and Kramers diagnostics.

Dense problems (dim <= 4096) go to LAPACK. Larger ones use a block Lanczos
iteration (block size >= 2, full reorthogonalization) with locking and
deflated restarts, so eigenvalues of any multiplicity are recovered even
though a single Krylov block can only see ``block_size`` copies of each.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp

from .operators import HermitianOperator
from .symmetry import MEMBERSHIP_TOL, AntiunitaryOperator, check_commutes

DENSE_LIMIT = 4096
DEFAULT_GAP = 1e-8
ISOLATION_FACTOR = 10.0


class ConvergenceError(RuntimeError):
    """Iterative eigensolver did not reach the requested accuracy."""


@dataclass(frozen=True, eq=False)
class SpectralResult:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    method: str

    def residuals(self, H) -> np.ndarray:
        Hm = _as_matrix(H)
        R = Hm @ self.eigenvectors - self.eigenvectors * self.eigenvalues
        return np.linalg.norm(R, axis=0)

    def orthonormality_defect(self) -> float:
        V = self.eigenvectors
        G = V.conj().T @ V
        return float(np.max(np.abs(G - np.eye(G.shape[0])))) if G.size else 0.0


def _as_matrix(H):
    if isinstance(H, HermitianOperator):
        return H.matrix
    return H


def _dense(H) -> np.ndarray:
    Hm = _as_matrix(H)
    return Hm.toarray() if sp.issparse(Hm) else np.asarray(Hm)


# ---------------------------------------------------------------------------
# block Lanczos
# ---------------------------------------------------------------------------


def _orthonormalize(X, Qs, extra=None):
    """Project ``X`` off the columns of each array in ``Qs`` (twice), then QR."""
    for _ in range(2):
        for Q in Qs:
            if Q is not None and Q.shape[1]:
                X = X - Q @ (Q.conj().T @ X)
    Q, R = np.linalg.qr(X)
    return Q, np.abs(np.diag(R))


def _lanczos_pass(matvec, n, want, locked, rng, block_size, max_basis, tol, check_every):
    """Lowest ``want`` Ritz pairs of H restricted to the complement of ``locked``."""
    avail = n - locked.shape[1]
    want = min(want, avail)
    cap = min(max_basis, avail)
    X = rng.standard_normal((n, block_size)) + 1j * rng.standard_normal((n, block_size))
    Qb, _ = _orthonormalize(X, [locked])
    Q = Qb
    HQ = matvec(Qb)
    T = Qb.conj().T @ HQ
    steps = 0
    while True:
        m = Q.shape[1]
        T = 0.5 * (T + T.conj().T)
        done = m >= cap
        if m >= want and (done or steps % check_every == 0):
            theta, Y = np.linalg.eigh(T)
            theta, Y = theta[:want], Y[:, :want]
            X = Q @ Y
            R = HQ @ Y - X * theta
            res = np.linalg.norm(R, axis=0)
            if np.all(res <= tol * (1.0 + np.abs(theta))) or m >= avail:
                return theta, X, res
            if done:
                raise ConvergenceError(
                    f"block Lanczos: {np.sum(res > tol * (1 + np.abs(theta)))} of {want} "
                    f"Ritz pairs unconverged at basis size {m} (max residual {res.max():.2e})"
                )
        # next block from the last one, fully reorthogonalized
        W = HQ[:, -Qb.shape[1]:]
        take = min(block_size, cap - m)
        Qb, rdiag = _orthonormalize(W[:, :take], [locked, Q])
        if np.any(rdiag < 1e-10 * max(1.0, np.abs(T).max())):
            # invariant subspace reached: restart the Krylov sequence randomly
            X = rng.standard_normal((n, take)) + 1j * rng.standard_normal((n, take))
            Qb, _ = _orthonormalize(X, [locked, Q])
        HQb = matvec(Qb)
        top = Q.conj().T @ HQb
        T = np.block([[T, top], [top.conj().T, Qb.conj().T @ HQb]])
        Q = np.hstack([Q, Qb])
        HQ = np.hstack([HQ, HQb])
        steps += 1


def block_lanczos(H, k: int, block_size: int = 2, tol: float = 1e-11,
                  max_basis: int = 800, max_restarts: int = 30, seed: int = 0,
                  check_every: int = 5):
    """Lowest ``k`` eigenpairs of a Hermitian matrix via block Lanczos.

    After each pass the converged Ritz vectors are locked and a new pass is
    started on the deflated complement; the iteration stops once a pass finds
    nothing below the current k-th eigenvalue. Raises ``ConvergenceError``
    instead of returning partial results.
    """
    if block_size < 2:
        raise ValueError("block size must be >= 2 to resolve degenerate pairs")
    Hm = _as_matrix(H)
    n = Hm.shape[0]
    if not 1 <= k <= n:
        raise ValueError(f"k must be in [1, {n}], got {k}")
    rng = np.random.default_rng(seed)

    def matvec(X):
        return np.asarray(Hm @ X)

    locked = np.zeros((n, 0), dtype=complex)
    for _ in range(max_restarts):
        if locked.shape[1] >= n:
            break
        theta, X, _ = _lanczos_pass(matvec, n, k, locked, rng, block_size,
                                    max_basis, tol, check_every)
        if locked.shape[1] >= k:
            current = np.sort(np.real(np.diag(locked.conj().T @ matvec(locked))))
            kth = current[k - 1]
            if theta[0] >= kth - tol * (1.0 + abs(kth)) * 10:
                break
            X = X[:, theta < kth]
        locked, _ = _orthonormalize(np.hstack([locked, X]), [])
    else:
        raise ConvergenceError(f"block Lanczos: no stable spectrum after {max_restarts} restarts")

    # Rayleigh-Ritz over the locked span
    HL = matvec(locked)
    S = locked.conj().T @ HL
    vals, Y = np.linalg.eigh(0.5 * (S + S.conj().T))
    vals, Y = vals[:k], Y[:, :k]
    vecs = locked @ Y
    res = np.linalg.norm(HL @ Y - vecs * vals, axis=0)
    bad = res > 1e-9 * (1.0 + np.abs(vals))
    if np.any(bad):
        raise ConvergenceError(f"block Lanczos: final residual {res.max():.2e} too large")
    return vals, vecs


def diagonalize(H, k_lowest: int | None = None, method: str = "auto",
                **lanczos_kw) -> SpectralResult:
    """Eigenpairs in ascending order.

    ``method='auto'`` uses the dense solver up to dim 4096 and block Lanczos
    beyond (which then requires ``k_lowest``).
    """
    Hm = _as_matrix(H)
    n = Hm.shape[0]
    if method == "auto":
        method = "dense" if n <= DENSE_LIMIT else "iterative"
    if method == "dense":
        if n > DENSE_LIMIT:
            raise ValueError(f"dense diagonalization limited to dim {DENSE_LIMIT}, got {n}")
        vals, vecs = sla.eigh(_dense(Hm))
        if k_lowest is not None:
            vals, vecs = vals[:k_lowest], vecs[:, :k_lowest]
    elif method == "iterative":
        if k_lowest is None:
            raise ValueError("iterative solver needs k_lowest")
        vals, vecs = block_lanczos(Hm, k_lowest, **lanczos_kw)
    else:
        raise ValueError(f"unknown method {method!r}")
    return SpectralResult(np.asarray(vals, dtype=float), vecs, method)


# ---------------------------------------------------------------------------
# clustering and Kramers report
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Cluster:
    mean: float
    multiplicity: int
    spread: float
    start: int
    isolated: bool = True
    pairing: float = 0.0
    partner_residual: float = 0.0


def cluster(eigs, gap: float = DEFAULT_GAP) -> list[Cluster]:
    """Merge maximal runs whose consecutive gaps are <= ``gap`` (transitively)."""
    if not gap > 0:
        raise ValueError("gap must be positive")
    eigs = np.asarray(eigs, dtype=float)
    if eigs.size == 0:
        return []
    if np.any(np.diff(eigs) < 0):
        raise ValueError("eigenvalues must be ascending")
    breaks = np.flatnonzero(np.diff(eigs) > gap) + 1
    edges = np.concatenate([[0], breaks, [eigs.size]])
    out = []
    for lo, hi in zip(edges[:-1], edges[1:]):
        run = eigs[lo:hi]
        out.append(Cluster(float(run.mean()), int(hi - lo), float(run[-1] - run[0]), int(lo)))
    # isolation: neighbours at least 10x the spread away
    for i, c in enumerate(out):
        left = c.mean - out[i - 1].mean if i > 0 else np.inf
        right = out[i + 1].mean - c.mean if i + 1 < len(out) else np.inf
        iso = min(left, right) >= ISOLATION_FACTOR * c.spread
        out[i] = Cluster(c.mean, c.multiplicity, c.spread, c.start, bool(iso))
    return out


@dataclass
class DegeneracyReport:
    clusters: list[Cluster]
    theta_sign: int
    commutator_residual: float
    gap: float
    asserted: bool
    all_even: bool
    all_isolated: bool
    max_pairing: float
    max_partner_residual: float
    passed: bool | None
    notes: list[str] = field(default_factory=list)
    pairing_tol: float = 1e-9
    partner_tol: float = 1e-8
    commutator_tol: float = MEMBERSHIP_TOL

    @property
    def multiplicities(self) -> list[int]:
        return [c.multiplicity for c in self.clusters]

    def to_dict(self) -> dict:
        d = asdict(self)
        d["multiplicities"] = self.multiplicities
        return d


def kramers_report(H, theta: AntiunitaryOperator, gap: float = DEFAULT_GAP,
                   spectrum: SpectralResult | None = None,
                   pairing_tol: float = 1e-9, partner_tol: float = 1e-8) -> DegeneracyReport:
    """Cluster the spectrum and measure how theta acts on each eigenspace.

    The even-multiplicity assertion is only made when theta commutes with H
    (residual <= 1e-12) and theta^2 = -1; otherwise the report carries the
    diagnostics with ``asserted = False`` and ``passed = None``. If
    ``spectrum`` is partial (lowest k pairs) the topmost cluster may be cut
    and is dropped.
    """
    comm = check_commutes(H, theta)
    if spectrum is None:
        spectrum = diagonalize(H)
    vals, V = spectrum.eigenvalues, spectrum.eigenvectors
    n = _as_matrix(H).shape[0]
    clusters = cluster(vals, gap)
    notes = []
    if len(vals) < n and clusters:
        clusters = clusters[:-1]
        notes.append("partial spectrum: topmost cluster dropped")
    TV = theta.U @ np.conj(V)
    pairing = np.abs(np.einsum("ij,ij->j", np.conj(V), TV))
    detailed = []
    for c in clusters:
        sl = slice(c.start, c.start + c.multiplicity)
        Vc, Tc = V[:, sl], TV[:, sl]
        off = Tc - Vc @ (Vc.conj().T @ Tc)
        partner = float(np.max(np.linalg.norm(off, axis=0)))
        detailed.append(Cluster(c.mean, c.multiplicity, c.spread, c.start, c.isolated,
                                float(pairing[sl].max()), partner))
    all_even = all(c.multiplicity % 2 == 0 for c in detailed)
    all_iso = all(c.isolated for c in detailed)
    max_pair = max((c.pairing for c in detailed), default=0.0)
    max_partner = max((c.partner_residual for c in detailed), default=0.0)
    asserted = theta.sign == -1 and comm <= MEMBERSHIP_TOL
    if theta.sign != -1:
        notes.append("theta^2 = +1: Kramers degeneracy not implied, assertion disabled")
    if comm > MEMBERSHIP_TOL:
        notes.append(f"theta does not commute with H (residual {comm:.3e}): assertion withheld")
    passed = None
    if asserted:
        passed = bool(all_even and all_iso and max_pair <= pairing_tol
                      and max_partner <= partner_tol)
        extra = [c.multiplicity for c in detailed if c.multiplicity > 2]
        if extra:
            notes.append(f"{len(extra)} cluster(s) with multiplicity > 2 (allowed: at least double)")
    return DegeneracyReport(detailed, int(theta.sign), float(comm), float(gap), asserted,
                            all_even, all_iso, float(max_pair), float(max_partner), passed,
                            notes, pairing_tol, partner_tol)
