"""Double-double Householder, Jacobi and truncated solves."""

import numpy as np
import pytest

from diskfit.errors import ContractError, SingularityError
from diskfit.linalg import (
    GramSystem,
    embed_real,
    householder_solve,
    jacobi_eigen,
    truncated_solve,
    unembed,
)
from diskfit.scalars import XComplex, XReal, xsum


def test_embed_one_by_one():
    R, b = embed_real(XComplex(np.array([[1.0 + 0j]])), XComplex(np.array([1 + 1j])))
    assert np.array_equal(R.to_float(), np.eye(2))
    assert np.array_equal(b.to_float(), [1.0, 1.0])


def test_embed_rejects_non_hermitian():
    with pytest.raises(ContractError):
        embed_real(XComplex(np.array([[1j]])), XComplex(np.array([1 + 0j])))


def test_embedding_is_equivalent_to_complex_solve():
    rng = np.random.default_rng(3)
    G = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    T = G @ G.conj().T + np.eye(3)
    T = (T + T.conj().T) / 2
    A = rng.normal(size=3) + 1j * rng.normal(size=3)
    R, b = embed_real(XComplex(T), XComplex(A))
    mu = unembed(householder_solve(R, b)).to_complex()
    assert np.max(np.abs(T @ mu - A)) < 1e-25 * np.max(np.abs(A)) + 1e-14
    assert np.allclose(mu, np.linalg.solve(T, A), rtol=1e-12)


def test_identity_solve():
    b = XReal(np.array([1.0, -2.0, 3.5]))
    assert np.array_equal(householder_solve(XReal(np.eye(3)), b).to_float(), [1.0, -2.0, 3.5])


def test_hilbert_solve():
    n = 8
    i = np.arange(n)
    H = XReal(1.0) / XReal(i[:, None] + i[None, :] + 1.0)
    b = xsum(H, axis=1)
    x = householder_solve(H, b).to_float()
    assert np.max(np.abs(x - 1)) < 1e-15


def test_singular_matrix():
    with pytest.raises(SingularityError):
        householder_solve(XReal(np.array([[1.0, 2.0], [2.0, 4.0]])), XReal(np.array([1.0, 1.0])))


def test_shape_mismatch():
    with pytest.raises(ContractError):
        householder_solve(XReal(np.eye(2)), XReal(np.ones(3)))


def test_eigen_diagonal():
    spec = jacobi_eigen(XReal(np.diag([1.0, 4.0])))
    assert list(spec.values()) == [4.0, 1.0]
    assert float(spec.condition_number.hi) == 4.0


def test_eigen_two_by_two():
    spec = jacobi_eigen(XReal(np.array([[2.0, 1.0], [1.0, 2.0]])))
    assert spec.values() == pytest.approx([3.0, 1.0], abs=1e-30)
    V = spec.eigenvectors.to_float()
    assert abs(abs(V[0, 0]) - 2 ** -0.5) < 1e-15


def test_eigen_reconstruction():
    rng = np.random.default_rng(5)
    G = rng.normal(size=(6, 6))
    M = G + G.T
    spec = jacobi_eigen(XReal(M))
    V = spec.eigenvectors.to_float()
    assert np.allclose(V @ np.diag(spec.values()) @ V.T, M, atol=1e-13)
    assert spec.values() == pytest.approx(sorted(np.linalg.eigvalsh(M), reverse=True), abs=1e-13)


def test_eigen_determinism():
    M = XReal(np.array([[3.0, 1.0, 0.5], [1.0, 2.0, 0.1], [0.5, 0.1, 1.0]]))
    a, b = jacobi_eigen(M), jacobi_eigen(M)
    assert np.array_equal(a.eigenvalues.hi, b.eigenvalues.hi)
    assert np.array_equal(a.eigenvalues.lo, b.eigenvalues.lo)


def test_eigen_rejects_asymmetric():
    with pytest.raises(ContractError):
        jacobi_eigen(XReal(np.array([[1.0, 2.0], [0.0, 1.0]])))


def test_truncated_drops_small_direction():
    x, cond = truncated_solve(XReal(np.diag([1.0, 1e-20])), XReal(np.array([1.0, 1.0])), 1)
    assert list(x.to_float()) == [1.0, 0.0]
    assert float(cond.hi) == 1.0


def test_truncated_zero_is_full_solve():
    M = XReal(np.array([[2.0, 1.0], [1.0, 2.0]]))
    b = XReal(np.array([3.0, 3.0]))
    x, cond = truncated_solve(M, b, 0)
    assert x.to_float() == pytest.approx([1.0, 1.0], abs=1e-30)
    assert float(cond.hi) == pytest.approx(3.0)


def test_truncated_drop_too_many():
    with pytest.raises(ContractError):
        truncated_solve(XReal(np.eye(2)), XReal(np.ones(2)), 2)
    with pytest.raises(ContractError):
        truncated_solve(XReal(np.eye(4)), XReal(np.ones(4)), 2, pair_size=2)


def test_gram_system_pairs_eigenvalues():
    T = XComplex(np.array([[2.0, 1j], [-1j, 2.0]]))
    system = GramSystem.build(T, XComplex(np.array([1.0 + 0j, 0j])))
    vals = system.spectrum().values()
    assert vals == pytest.approx([3, 3, 1, 1], abs=1e-30)
    mu, cond = system.solve()
    assert np.max(np.abs(system.residual(mu).to_complex())) < 1e-30
    assert float(cond.hi) == pytest.approx(3.0)
