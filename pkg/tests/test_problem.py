import numpy as np
import pytest

from stressdesign import (
    Configuration,
    DegenerateConfigurationError,
    InvalidHyperparametersError,
    alpha_max,
    assemble_stress,
    build_E,
    build_problem,
    build_psi,
    canonical_edges,
    incidence,
    random_generic,
)

from .conftest import SQUARE_PATTERN, random_affine


def test_square_psi(square):
    prob = build_problem(square)
    # diagonals (0,2) and (1,3) are invisible to the kernel vector (1,-1,1,-1)/2
    np.testing.assert_allclose(prob.psi, [1, 0, 1, 1, 0, 1], atol=1e-14)
    assert alpha_max(prob.psi) == pytest.approx(1.0)
    assert prob.alpha == pytest.approx(1.0)


@pytest.mark.parametrize("seed", range(4))
def test_psi_range_and_trace_identity(seed):
    rng = np.random.default_rng(seed)
    cfg = random_generic(6 + seed, 2, seed)
    prob = build_problem(cfg)
    assert np.all(prob.psi >= 0) and np.all(prob.psi <= 2 + 1e-12)
    for _ in range(100):
        w = rng.standard_normal(prob.m)
        omega = assemble_stress(prob.ordering, w)
        assert abs(np.trace(prob.Q.T @ omega @ prob.Q) - prob.psi @ w) <= 1e-10 * max(1, np.abs(w).sum())


@pytest.mark.parametrize("seed", range(4))
def test_E_stacks_pbar_omega(seed):
    rng = np.random.default_rng(seed)
    cfg = random_generic(5 + seed, 2 + seed % 2, seed)
    prob = build_problem(cfg)
    for _ in range(20):
        w = rng.standard_normal(prob.m)
        Pomega = cfg.augmented @ assemble_stress(prob.ordering, w)
        np.testing.assert_allclose(prob.E @ w, Pomega.T.reshape(-1), atol=1e-12)
        assert abs(np.linalg.norm(prob.E @ w) - np.linalg.norm(Pomega)) <= 1e-10


def test_E_square(square):
    prob = build_problem(square)
    assert np.max(np.abs(prob.E @ SQUARE_PATTERN)) <= 1e-12
    np.testing.assert_array_equal(prob.E @ np.zeros(6), 0.0)
    s = np.linalg.svd(prob.E, compute_uv=False)
    rank = int(np.sum(s > 1e-10 * s[0]))
    assert prob.m - rank == 1


def test_build_E_blocks(square):
    Pbar = square.augmented
    B = incidence(canonical_edges(4))
    E = build_E(Pbar, B)
    for i in range(4):
        np.testing.assert_allclose(E[3 * i : 3 * i + 3], Pbar @ B @ np.diag(B[i]))


def test_decagon_alpha_max(decagon):
    prob = build_problem(decagon, beta=1.0, gamma=0.1)
    assert prob.alpha == pytest.approx(0.51, abs=0.01)
    assert prob.alpha == alpha_max(prob.psi)


def test_psi_affine_invariance(decagon):
    rng = np.random.default_rng(3)
    psi = build_problem(decagon).psi
    for _ in range(10):
        A, t = random_affine(rng)
        moved = Configuration(A @ decagon.positions + t)
        np.testing.assert_allclose(build_problem(moved).psi, psi, atol=1e-9)


def test_psi_relabeling(decagon):
    perm = np.random.default_rng(0).permutation(10)
    prob = build_problem(decagon)
    relabeled = build_problem(Configuration(decagon.positions[:, perm]))
    order = prob.ordering
    for k, (i, j) in enumerate(relabeled.ordering.edges):
        assert relabeled.psi[k] == pytest.approx(prob.psi[order.index(perm[i], perm[j])], abs=1e-12)


def test_psi_basis_independence():
    cfg = random_generic(7, 2, 5)
    prob = build_problem(cfg)
    R, _ = np.linalg.qr(np.random.default_rng(1).standard_normal((4, 4)))
    _, psi2 = build_psi(prob.Q @ R, prob.B)
    np.testing.assert_allclose(psi2, prob.psi, atol=1e-12)


def test_hyperparameter_errors(square):
    with pytest.raises(InvalidHyperparametersError):
        build_problem(square, beta=0.05, gamma=0.1)
    with pytest.raises(InvalidHyperparametersError):
        build_problem(square, alpha=-1.0)
    with pytest.raises(InvalidHyperparametersError):
        build_problem(square).with_alpha(0.0)


def test_collinear_is_degenerate():
    with pytest.raises(DegenerateConfigurationError):
        build_problem(Configuration.from_points([[0, 0], [1, 0], [2, 0], [5, 0]]))


def test_alpha_max_of_zero_psi():
    with pytest.raises(RuntimeError):
        alpha_max(np.zeros(3))
