"""
Real functions of Hermitian operators and the vacuum-expectation identities.

``f(H)`` is always built from the dense spectral decomposition
``V f(Lambda) V^dagger``; the supported ``f`` form a small closed family
(heat semigroup, shifted resolvent, spectral indicator).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .operators import HermitianOperator
from .spectral import DENSE_LIMIT, _dense
from .symmetry import AntiunitaryOperator, Involution

SEMIGROUP_TOL = 1e-10


@dataclass(frozen=True)
class ExpNegT:
    t: float

    def __post_init__(self):
        if self.t < 0:
            raise ValueError("exp(-tH) needs t >= 0")

    def __call__(self, lam):
        return np.exp(-self.t * lam)

    def describe(self) -> dict:
        return {"f": "exp_neg_t", "t": float(self.t)}


@dataclass(frozen=True)
class ResolventShift:
    c: float

    def __call__(self, lam):
        return 1.0 / (lam + self.c)

    def describe(self) -> dict:
        return {"f": "resolvent_shift", "c": float(self.c)}


@dataclass(frozen=True)
class IndicatorBelow:
    threshold: float

    def __call__(self, lam):
        return (lam < self.threshold).astype(float)

    def describe(self) -> dict:
        return {"f": "indicator_below", "threshold": float(self.threshold)}


@dataclass(frozen=True, eq=False)
class FunctionOfOperator:
    f_tag: ExpNegT | ResolventShift | IndicatorBelow
    matrix: np.ndarray
    hermiticity_residual: float
    commutator_residual: float


def _spectral(H):
    A = _dense(H)
    if A.shape[0] > DENSE_LIMIT:
        raise ValueError(f"functional calculus limited to dim {DENSE_LIMIT}")
    lam, V = np.linalg.eigh(A)
    return A, lam, V


def apply_function(H, f, spectrum=None) -> FunctionOfOperator:
    """``f(H)`` by spectral calculus.

    ``spectrum`` may be a cached full eigendecomposition, either a
    ``SpectralResult`` or a ``(lam, V)`` pair.
    """
    if spectrum is None:
        A, lam, V = _spectral(H)
    else:
        A = _dense(H)
        if hasattr(spectrum, "eigenvectors"):
            lam, V = spectrum.eigenvalues, spectrum.eigenvectors
        else:
            lam, V = spectrum
        if V.shape != A.shape:
            raise ValueError("f(H) needs the full spectrum, got a partial one")
    if isinstance(f, ResolventShift) and lam[0] + f.c <= 1e-10:
        raise ValueError(
            f"H + c is singular or indefinite: lambda_min + c = {lam[0] + f.c:.3e}"
        )
    fl = f(lam)
    F = (V * fl) @ V.conj().T
    herm = float(np.max(np.abs(F - F.conj().T)))
    scale = max(1.0, float(np.max(np.abs(A))) * float(np.max(np.abs(fl))))
    comm = float(np.max(np.abs(F @ A - A @ F))) / scale
    if herm > 1e-11 or comm > 1e-10:
        raise ArithmeticError(f"f(H) failed sanity gate (herm {herm:.2e}, comm {comm:.2e})")
    return FunctionOfOperator(f, F, herm, comm)


def semigroup_law_residual(H, s: float = 0.3, t: float = 0.7, spectrum=None) -> float:
    """``max |e^{-(s+t)H} - e^{-sH} e^{-tH}|`` along the spectral route."""
    if spectrum is None:
        _, lam, V = _spectral(H)
        spectrum = (lam, V)
    E = lambda tau: apply_function(H, ExpNegT(tau), spectrum).matrix  # noqa: E731
    return float(np.max(np.abs(E(s + t) - E(s) @ E(t))))


def expm_crosscheck(H, t: float = 1.0, spectrum=None) -> float:
    """Spectral ``e^{-tH}`` against scaling-and-squaring ``scipy.linalg.expm``."""
    F = apply_function(H, ExpNegT(t), spectrum).matrix
    return float(np.max(np.abs(F - expm(-t * _dense(H)))))


def theta_function_commutes(H, theta: AntiunitaryOperator, f, spectrum=None) -> float:
    """``max |f(H) U - U conj(f(H))|``."""
    F = apply_function(H, f, spectrum).matrix
    U = theta.U
    return float(np.max(np.abs(np.asarray(F @ U) - np.asarray(U @ np.conj(F)))))


@dataclass(frozen=True)
class VacuumExpectationResult:
    t: float
    offdiag: float
    diag_gap: float
    a_t: float
    max_spinor_gap: float

    def passed(self, tol: float = 1e-12, spinor_tol: float = SEMIGROUP_TOL) -> bool:
        return self.offdiag <= tol and self.diag_gap <= tol and self.max_spinor_gap <= spinor_tol


def _spin_vacuum_block(F, fock_vec, D):
    """2x2 matrix ``<e_a (x) phi, F e_b (x) phi>``."""
    cols = [np.concatenate([fock_vec, np.zeros(D)]), np.concatenate([np.zeros(D), fock_vec])]
    W = np.stack(cols, axis=1)
    return W.conj().T @ F @ W


def _spinor_gaps(G, ref, rng, samples):
    gaps = []
    for _ in range(samples):
        x = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        val = x.conj() @ G @ x
        gaps.append(abs(val - ref * np.vdot(x, x).real))
    return max(gaps)


def vacuum_expectation_check(H_P: HermitianOperator, basis, t: float, seed: int = 0,
                          samples: int = 10, spectrum=None) -> VacuumExpectationResult:
    """Vacuum matrix elements of ``exp(-tH)`` between the two spin states.

    The cross term vanishes and both diagonal terms agree, so
    ``<x (x) Omega, e^{-tH} x (x) Omega> = a(t) |x|^2`` for every spinor x.
    """
    D = basis.dim
    if H_P.dim != 2 * D:
        raise ValueError(f"expected a spin (x) fock operator of dim {2 * D}, got {H_P.dim}")
    F = apply_function(H_P, ExpNegT(t), spectrum).matrix
    G = _spin_vacuum_block(F, basis.vacuum().real, D)
    offdiag = float(abs(G[0, 1]))
    diag_gap = float(abs(G[0, 0] - G[1, 1]))
    a_t = float(0.5 * (G[0, 0] + G[1, 1]).real)
    rng = np.random.default_rng(seed)
    return VacuumExpectationResult(float(t), offdiag, diag_gap, a_t,
                                float(_spinor_gaps(G, a_t, rng, samples)))


# older name for the same check
hiroshima_spohn_check = vacuum_expectation_check


@dataclass(frozen=True)
class JRealResult:
    f: dict
    gap_up: float
    gap_down: float
    spin_gap: float
    offdiag: float

    def passed(self, tol: float = SEMIGROUP_TOL) -> bool:
        return max(self.gap_up, self.gap_down) <= tol


def jreal_generalization_check(H_P: HermitianOperator, theta: AntiunitaryOperator, f, phi,
                               seed: int = 0, samples: int = 10, spectrum=None) -> JRealResult:
    """Spinor independence of ``<x (x) phi, f(H) x (x) phi>`` for j-real ``phi``.

    Returns the largest deviation from ``|x|^2 <e1 (x) phi, f(H) e1 (x) phi>``
    (``gap_up``) and from the spin-down analogue (``gap_down``) over random x.
    """
    phi = np.asarray(phi, dtype=complex)
    D = phi.size
    if H_P.dim != 2 * D:
        raise ValueError(f"phi has dim {D}, operator needs {H_P.dim // 2}")
    j = theta.involution if theta.involution is not None else Involution.conjugation(D)
    if j.dim != D:
        raise ValueError("theta's involution does not act on the Fock factor")
    if np.linalg.norm(j.apply(phi) - phi) > 1e-12:
        raise ValueError("phi is not j-real (j phi != phi)")
    F = apply_function(H_P, f, spectrum).matrix
    G = _spin_vacuum_block(F, phi, D)
    up, down = G[0, 0], G[1, 1]
    rng = np.random.default_rng(seed)
    gap_up, gap_down = 0.0, 0.0
    for _ in range(samples):
        x = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        val = x.conj() @ G @ x
        nrm = np.vdot(x, x).real
        gap_up = max(gap_up, abs(val - nrm * up))
        gap_down = max(gap_down, abs(val - nrm * down))
    return JRealResult(f.describe(), float(gap_up), float(gap_down),
                       float(abs(up - down)), float(abs(G[0, 1])))
