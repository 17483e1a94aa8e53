import warnings

import numpy as np
import pytest
import scipy.sparse as sp
from conftest import UNIT_WEIGHT, random_config, random_modes
from scipy.spatial.transform import Rotation

from kramers_lab import (
    GridSpec,
    HermitianOperator,
    SpinBlockSpec,
    build_field_operators,
    build_HN_toy,
    build_HP,
    build_HPF_grid,
    build_modes,
    build_spin_block,
    enumerate_basis,
    export_triplets,
    load_triplets,
)
from kramers_lab.fock import DimensionCapError
from kramers_lab.operators import lattice_momentum


def scalar(x):
    return HermitianOperator(np.array([[x]], dtype=complex), "scalar", (1,))


def test_ladder_hand_matrices(single_mode):
    b = enumerate_basis(1, 2)
    f = build_field_operators(b, single_mode)
    a_hand = np.array([[0, 1, 0], [0, 0, np.sqrt(2)], [0, 0, 0]])
    np.testing.assert_array_equal(f.a[0].toarray(), a_hand)
    np.testing.assert_array_equal(f.adag[0].toarray(), a_hand.T)
    assert np.all(f.Hf @ b.vacuum() == 0)
    A0x = f.A0[0].toarray()
    # eps = (1, 0, 0), coupling 1: A0_x = a + a^dagger
    np.testing.assert_allclose(A0x, a_hand + a_hand.T, atol=1e-15)
    assert A0x[0, 1] == pytest.approx(1.0, abs=1e-15)
    assert np.all(f.A0[1].toarray() == 0) and np.all(f.A0[2].toarray() == 0)
    # k x eps = z x x = y: B0_y = i (a - a^dagger)
    np.testing.assert_allclose(f.B0[1].toarray(), 1j * (a_hand - a_hand.T), atol=1e-15)


def test_field_operator_structure(rng):
    for _ in range(5):
        basis, modes, _, _ = random_config(rng)
        f = build_field_operators(basis, modes)
        for a, ad in zip(f.a, f.adag):
            assert (a.T.conj() != ad).nnz == 0
        for op in (f.Hf, *f.Pf, *f.A0):
            assert np.all(np.imag(op.toarray()) == 0)
        for B in f.B0:
            assert np.all(np.real(B.toarray()) == 0)
        for op in (f.Hf, *f.Pf):
            d = op.toarray()
            assert np.all(d == np.diag(np.diag(d)))


def test_truncated_ccr(rng):
    for _ in range(5):
        basis, modes, _, _ = random_config(rng, N_choices=(2, 3, 4))
        f = build_field_operators(basis, modes)
        low = np.flatnonzero(basis.total_occupation <= basis.n_max - 1)
        M = len(modes)
        for m in range(M):
            for n in range(M):
                C = (f.a[m] @ f.adag[n] - f.adag[n] @ f.a[m]).toarray()
                sub = C[np.ix_(low, low)]
                expected = np.eye(low.size) if m == n else np.zeros_like(sub)
                # sqrt(n)^2 carries one ulp of rounding
                np.testing.assert_allclose(sub, expected, rtol=0, atol=1e-14)
                # a_m and a_n commute exactly
                assert (f.a[m] @ f.a[n] - f.a[n] @ f.a[m]).count_nonzero() == 0


def test_spin_block_examples():
    zero = scalar(0.0)
    H = build_spin_block(SpinBlockSpec(zero, (zero, zero, scalar(1.0))), 1.0)
    np.testing.assert_allclose(np.linalg.eigvalsh(H.toarray()), [-1, 1])
    one = scalar(1.0)
    H = build_spin_block(SpinBlockSpec(zero, (one, one, one)), 1.0)
    np.testing.assert_allclose(np.linalg.eigvalsh(H.toarray()), [-np.sqrt(3), np.sqrt(3)],
                               atol=1e-15)


def test_spin_block_zero_field_doubles(rng):
    X = rng.standard_normal((5, 5))
    A = HermitianOperator(X + X.T, "h", (5,))
    z = HermitianOperator(np.zeros((5, 5)), "h", (5,))
    H = build_spin_block(SpinBlockSpec(A, (z, z, z)), 0.7)
    w = np.linalg.eigvalsh(A.toarray())
    np.testing.assert_allclose(np.linalg.eigvalsh(H.toarray()), np.repeat(w, 2), atol=1e-13)


def test_spin_block_mismatch():
    with pytest.raises(ValueError):
        SpinBlockSpec(scalar(0.0), (scalar(0.0), scalar(0.0),
                                    HermitianOperator(np.zeros((2, 2)), "scalar", (2,))))


def test_hermiticity_gate():
    with pytest.raises(ValueError):
        HermitianOperator(np.array([[0, 1], [0, 0]]), "x", (2,))
    with pytest.raises(ValueError):
        HermitianOperator(np.eye(2), "x", (3,))


def test_HP_zero_coupling_spectrum(single_mode):
    b = enumerate_basis(1, 2)
    H = build_HP(b, single_mode, P=(0, 0, 0), e=0.0)
    np.testing.assert_allclose(np.linalg.eigvalsh(H.toarray()), [0, 0, 1.5, 1.5, 4, 4],
                               atol=1e-14)
    # (P - n k)^2 / 2 + n |k| by hand for P = z, n = 0, 1, 2
    H = build_HP(b, single_mode, P=(0, 0, 1), e=0.0)
    np.testing.assert_allclose(np.linalg.eigvalsh(H.toarray()),
                               [0.5, 0.5, 1.0, 1.0, 2.5, 2.5], atol=1e-14)


def test_HP_zero_coupling_is_block_diagonal(rng):
    for _ in range(5):
        basis, modes, P, _ = random_config(rng)
        f = build_field_operators(basis, modes)
        H = build_HP(basis, modes, P, e=0.0, fields=f).toarray()
        occ = basis.occupations
        A = np.diag(0.5 * np.sum((P[None, :] - occ @ modes.k) ** 2, axis=1) + occ @ modes.omega)
        np.testing.assert_allclose(H, np.kron(np.eye(2), A), atol=1e-13)


def test_HP_rotation_invariance(rng):
    for seed in range(4):
        basis, modes, P, e = random_config(rng, e_range=(0.2, 1.0))
        R = Rotation.random(random_state=seed).as_matrix()
        w1 = np.linalg.eigvalsh(build_HP(basis, modes, P, e).toarray())
        w2 = np.linalg.eigvalsh(build_HP(basis, modes.rotated(R), R @ P, e).toarray())
        np.testing.assert_allclose(w1, w2, atol=1e-9)


def test_grid_free_spectrum_is_tensor_sum():
    modes = build_modes([((0.3, 0.2, 1.0), UNIT_WEIGHT)]).take(1)
    basis = enumerate_basis(1, 2)
    grid = GridSpec.symmetric(4, 0.5)
    H = build_HPF_grid(basis, modes, grid, None, e=0.0)
    p = lattice_momentum(grid).toarray()
    kin = np.linalg.eigvalsh(0.5 * p @ p)
    hf = np.linalg.eigvalsh(build_field_operators(basis, modes).Hf.toarray())
    oracle = np.sort(np.repeat((kin[:, None] + hf[None, :]).ravel(), 2))
    np.testing.assert_allclose(np.linalg.eigvalsh(H.toarray()), oracle, atol=1e-12)


def test_lattice_momentum_hermitian_antisymmetric_stencil():
    p = lattice_momentum(GridSpec.symmetric(3, 0.25)).toarray()
    np.testing.assert_array_equal(p, p.conj().T)
    assert p[0, 1] == pytest.approx(-1j / 0.5)
    assert np.all(np.diag(p) == 0)


def test_grid_rejections():
    with pytest.raises(ValueError):
        GridSpec(np.array([-1.0, 0.0, 2.0]))
    with pytest.raises(ValueError):
        GridSpec(np.array([-1.0, 1.0]))
    modes = build_modes([((0, 0, 1.0), UNIT_WEIGHT)]).take(1)
    basis = enumerate_basis(1, 1)
    grid = GridSpec.symmetric(2, 1.0)
    with pytest.warns(UserWarning, match="not even"):
        build_HPF_grid(basis, modes, grid, lambda x: x, e=0.3)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        build_HPF_grid(basis, modes, grid, lambda x: x * x, e=0.3)


def test_toy_N1_matches_HP_shared_terms(rng):
    for _ in range(3):
        basis, modes, _, e = random_config(rng, e_range=(0.1, 1.0))
        f = build_field_operators(basis, modes)
        HP = build_HP(basis, modes, (0, 0, 0), e, fields=f).matrix
        toy = build_HN_toy(basis, modes, 1, e, fields=f).matrix
        cross = sum(0.5 * (Pf @ Pf) - 0.5 * e * (Pf @ A + A @ Pf) for Pf, A in zip(f.Pf, f.A0))
        diff = HP - sp.kron(sp.identity(2), cross) - toy
        assert abs(diff).max() < 1e-13


def test_toy_dimension_and_cap():
    modes = build_modes([((0, 0, 1.0), UNIT_WEIGHT)]).take(1)
    basis = enumerate_basis(1, 2)
    H = build_HN_toy(basis, modes, 3, 0.4)
    assert H.dim == 24 and H.factors == (2, 2, 2, 3)
    with pytest.raises(DimensionCapError):
        build_HN_toy(basis, modes, 3, 0.4, dim_cap=20)


def test_triplet_round_trip(tmp_path, rng):
    basis, modes, P, e = random_config(rng)
    H = build_HP(basis, modes, P, e)
    path = tmp_path / "H.txt"
    n = export_triplets(H, path)
    assert n == H.matrix.nnz
    back = load_triplets(path)
    # 17 significant digits round-trip doubles exactly
    assert (back != H.matrix).nnz == 0
    first = path.read_text().splitlines()[1].split()
    assert len(first) == 4


def test_all_builders_pass_hermiticity_gate(rng):
    for _ in range(5):
        basis, modes, P, e = random_config(rng)
        build_HP(basis, modes, P, e)
        build_HN_toy(basis, modes, 2, e)
    modes = random_modes(rng, 2)
    build_HPF_grid(enumerate_basis(2, 2), modes, GridSpec.symmetric(3, 0.4), lambda x: x**2, e=1.0)
