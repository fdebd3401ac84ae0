import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stressdesign import (
    DegenerateConfigurationError,
    InvalidArgumentError,
    clamp_eigs,
    kernel_basis,
    numerical_rank,
    random_generic,
    sym_eig,
)

from .conftest import SQUARE_Q


def random_symmetric(rng, n):
    A = rng.standard_normal((n, n))
    return A + A.T


def test_sym_eig_examples():
    np.testing.assert_allclose(sym_eig(np.eye(3)).eigenvalues, [1, 1, 1])
    np.testing.assert_allclose(sym_eig(np.diag([3.0, 1.0, 2.0])).eigenvalues, [1, 2, 3])
    np.testing.assert_allclose(sym_eig(np.outer(SQUARE_Q, SQUARE_Q)).eigenvalues, [0, 0, 0, 4], atol=1e-12)


def test_sym_eig_rejects_non_square():
    with pytest.raises(InvalidArgumentError):
        sym_eig(np.zeros((2, 3)))


@settings(max_examples=40, deadline=None)
@given(n=st.integers(1, 30), seed=st.integers(0, 2**32 - 1))
def test_sym_eig_reconstruction(n, seed):
    A = random_symmetric(np.random.default_rng(seed), n)
    lam, V = sym_eig(A)
    assert np.all(np.diff(lam) >= 0)
    assert np.linalg.norm(A - (V * lam) @ V.T) <= 1e-10 * max(1.0, np.linalg.norm(A))
    assert np.linalg.norm(V.T @ V - np.eye(n)) <= 1e-10 * n


def test_numerical_rank():
    assert numerical_rank([0, 0, 0, 4], 1e-8) == 1
    assert numerical_rank([0, 0, 0]) == 0
    assert numerical_rank([1e-12, 1, 1], 1e-8) == 2


def test_kernel_basis_square(square):
    Q = kernel_basis(square.augmented)
    assert Q.shape == (4, 1)
    np.testing.assert_allclose(np.abs(Q[:, 0]), 0.5, atol=1e-12)
    np.testing.assert_allclose(np.abs(Q[:, 0] @ SQUARE_Q), 2.0, atol=1e-12)


@pytest.mark.parametrize("seed", range(5))
def test_kernel_basis_generic(seed):
    cfg = random_generic(4, 2, seed)
    Q = kernel_basis(cfg.augmented)
    assert Q.shape == (4, 1)
    big = random_generic(9, 3, seed)
    Q = kernel_basis(big.augmented)
    assert Q.shape == (9, 5)
    np.testing.assert_allclose(Q.T @ Q, np.eye(5), atol=1e-10)
    assert np.linalg.norm(big.augmented @ Q) <= 1e-10 * np.linalg.norm(big.augmented)


def test_kernel_basis_rank_deficient():
    Pbar = np.vstack([np.arange(5.0), 2 * np.arange(5.0), np.ones(5)])
    with pytest.raises(DegenerateConfigurationError):
        kernel_basis(Pbar)


@pytest.mark.parametrize("seed", range(5))
def test_kernel_projector_is_basis_independent(seed):
    cfg = random_generic(8, 2, seed)
    Q1 = kernel_basis(cfg.augmented)
    # an independent basis: orthonormalize I - Pbar^+ Pbar through QR
    Pbar = cfg.augmented
    proj = np.eye(8) - np.linalg.pinv(Pbar) @ Pbar
    Q2, _ = np.linalg.qr(proj @ np.random.default_rng(seed).standard_normal((8, 5)))
    assert np.linalg.norm(Q1 @ Q1.T - Q2 @ Q2.T) <= 1e-9


def test_clamp_examples():
    np.testing.assert_allclose(clamp_eigs(np.diag([-1.0, 0.5, 2.0]), 0, 1), np.diag([0, 0.5, 1]), atol=1e-15)
    inside = np.diag([0.2, 0.7])
    np.testing.assert_allclose(clamp_eigs(inside, 0, 1), inside, atol=1e-15)
    np.testing.assert_allclose(clamp_eigs(np.diag([0.05, 5.0]), 0.1, np.inf), np.diag([0.1, 5]), atol=1e-15)


def test_clamp_rejects_empty_box():
    with pytest.raises(InvalidArgumentError):
        clamp_eigs(np.eye(2), 1.0, 0.5)


@settings(max_examples=40, deadline=None)
@given(
    n=st.integers(1, 10),
    seed=st.integers(0, 2**32 - 1),
    lo=st.floats(-2, 1),
    width=st.one_of(st.floats(0, 3), st.just(np.inf)),
)
def test_clamp_idempotent_and_in_box(n, seed, lo, width):
    hi = lo + width
    A = random_symmetric(np.random.default_rng(seed), n)
    C = clamp_eigs(A, lo, hi)
    np.testing.assert_allclose(clamp_eigs(C, lo, hi), C, atol=1e-12 * max(1, np.abs(C).max()))
    lam = np.linalg.eigvalsh(C)
    assert lam[0] >= lo - 1e-10 and lam[-1] <= hi + 1e-10


@pytest.mark.parametrize("seed", range(3))
def test_clamp_is_the_nearest_point(seed):
    rng = np.random.default_rng(seed)
    n, lo, hi = 6, 0.1, 1.0
    A = 2 * random_symmetric(rng, n)
    dist = np.linalg.norm(A - clamp_eigs(A, lo, hi))
    for _ in range(100):
        # random members of the box: random orthogonal basis, eigenvalues in [lo, hi]
        V, _ = np.linalg.qr(rng.standard_normal((n, n)))
        X = (V * rng.uniform(lo, hi, n)) @ V.T
        assert dist <= np.linalg.norm(A - X) + 1e-12
