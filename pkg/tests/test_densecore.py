"""Dense symmetric eigensolver, singular values, PSD powers, generators."""

import numpy as np
import pytest

from amgmlab.densecore import (
    GENERATOR_KINDS,
    is_psd,
    matrix_abs,
    matrix_from_text,
    matrix_to_text,
    psd_power,
    random_orthogonal,
    random_psd,
    singular_values,
    sym_eigen,
)
from amgmlab.rng import Rng, derive


def test_eigen_hand_example():
    w, V = sym_eigen(np.array([[2.0, 1.0], [1.0, 2.0]]))
    assert np.allclose(w, [3.0, 1.0], atol=1e-12)
    # eigenvector property
    A = np.array([[2.0, 1.0], [1.0, 2.0]])
    assert np.max(np.abs(A @ V - V * w)) < 1e-12


def test_eigen_matches_numpy_oracle():
    for t in range(50):
        rng = derive(31, t)
        d = 2 + rng.randint(6)
        G = rng.gaussian_matrix(d, d)
        S = 0.5 * (G + G.T)
        w, V = sym_eigen(S)
        w_np = np.sort(np.linalg.eigvalsh(S))[::-1]
        assert np.max(np.abs(w - w_np)) < 1e-10 * max(1.0, np.abs(w_np).max())
        # orthonormal frame reconstructs the input
        assert np.max(np.abs(V @ V.T - np.eye(d))) < 1e-12
        assert np.max(np.abs((V * w) @ V.T - S)) < 1e-10 * max(1.0, np.abs(S).max())


def test_eigen_rejects_asymmetric():
    with pytest.raises(ValueError):
        sym_eigen(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_singular_values_hand_example():
    # [[1,1],[0,1]] has singular values (1+sqrt5)/2 and (sqrt5-1)/2.
    sv = singular_values(np.array([[1.0, 1.0], [0.0, 1.0]]))
    golden = np.array([(1 + np.sqrt(5)) / 2, (np.sqrt(5) - 1) / 2])
    assert np.max(np.abs(sv - golden)) < 1e-12


def test_singular_values_match_numpy():
    for t in range(50):
        rng = derive(32, t)
        d = 1 + rng.randint(6)
        X = rng.gaussian_matrix(d, d)
        sv = singular_values(X)
        sv_np = np.linalg.svd(X, compute_uv=False)
        assert np.max(np.abs(sv - sv_np)) < 1e-8 * max(1.0, sv_np.max())


def test_singular_values_zero_noise_snapped():
    # Rank-one input: the second singular value must be exactly zero.
    v = np.array([[3.0], [4.0]])
    sv = singular_values(v @ v.T)
    assert sv[1] == 0.0


def test_matrix_abs_hand_example():
    X = np.array([[0.0, 0.0], [2.0, 0.0]])
    R = matrix_abs(X)
    assert np.allclose(R, [[2.0, 0.0], [0.0, 0.0]], atol=1e-12)


def test_psd_power_square_root_squares_back():
    for t in range(20):
        rng = derive(33, t)
        d = 2 + rng.randint(5)
        A = random_psd(rng, d, "wishart")
        R = psd_power(A, 0.5)
        assert np.max(np.abs(R @ R - A)) < 1e-9 * max(1.0, np.abs(A).max())


def test_psd_power_hand_example():
    A = np.array([[5.0, 4.0], [4.0, 5.0]])  # eigenvalues 9, 1
    R = psd_power(A, 0.5)
    assert np.allclose(R @ R, A, atol=1e-12)
    assert np.allclose(psd_power(A, 2.0), A @ A, atol=1e-10)


def test_psd_power_rejects_indefinite():
    with pytest.raises(ValueError):
        psd_power(np.array([[1.0, 0.0], [0.0, -1.0]]), 0.5)
    with pytest.raises(ValueError):
        psd_power(np.eye(2), -1.0)


def test_psd_power_scaling_covariance():
    rng = Rng(8)
    A = random_psd(rng, 4, "projector")
    for c in (1e-3, 1.0, 1e3):
        R = psd_power(c * A, 0.5)
        assert np.max(np.abs(R - np.sqrt(c) * psd_power(A, 0.5))) < 1e-9 * np.sqrt(c)


def test_is_psd():
    assert is_psd(np.eye(3))
    assert is_psd(np.zeros((2, 2)))
    assert not is_psd(np.array([[1.0, 0.0], [0.0, -1.0]]))
    assert not is_psd(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_random_orthogonal():
    for t in range(20):
        rng = derive(34, t)
        d = 1 + rng.randint(7)
        Q = random_orthogonal(rng, d)
        assert np.max(np.abs(Q @ Q.T - np.eye(d))) < 1e-12


def test_random_psd_kinds():
    for t, kind in enumerate(GENERATOR_KINDS):
        for d in (1, 3, 5):
            A = random_psd(derive(35, 10 * t + d), d, kind)
            assert A.shape == (d, d)
            assert is_psd(A)


def test_projector_is_idempotent():
    rng = Rng(12)
    P = random_psd(rng, 5, "projector", rank=3)
    assert np.max(np.abs(P @ P - P)) < 1e-12
    assert abs(np.trace(P) - 3.0) < 1e-12


def test_rotated_diagonal_condition_bound():
    rng = Rng(13)
    A = random_psd(rng, 4, "rotated-diagonal", cond=100.0)
    w, _ = sym_eigen(A)
    assert w[0] / w[-1] <= 100.0 * (1 + 1e-9)


def test_matrix_text_roundtrip():
    rng = Rng(14)
    X = rng.gaussian_matrix(4, 4)
    Y = matrix_from_text(matrix_to_text(X))
    assert np.array_equal(X, Y)  # 17 significant digits is lossless


def test_matrix_from_text_errors():
    with pytest.raises(ValueError):
        matrix_from_text("")
    with pytest.raises(ValueError):
        matrix_from_text("2\n1 0\n")
    with pytest.raises(ValueError):
        matrix_from_text("2\n1 0\n1\n")
