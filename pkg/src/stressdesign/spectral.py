"""Dense symmetric eigen-tools: decomposition, rank, kernel bases, clamping."""

from __future__ import annotations

from typing import NamedTuple

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .exceptions import DegenerateConfigurationError, InvalidArgumentError

RANK_TOL = 1e-8


class EigenDecomposition(NamedTuple):
    eigenvalues: NDArray[np.float64]
    eigenvectors: NDArray[np.float64]


def _square(A: ArrayLike) -> NDArray[np.float64]:
    A = np.asarray(A, dtype=np.float64)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise InvalidArgumentError(f"expected a square matrix, got shape {A.shape}")
    return A


def sym_eig(A: ArrayLike) -> EigenDecomposition:
    """Eigenpairs of the symmetric part of ``A``, eigenvalues ascending."""
    A = _square(A)
    lam, V = np.linalg.eigh(0.5 * (A + A.T))
    return EigenDecomposition(lam, V)


def numerical_rank(eigenvalues: ArrayLike, tol: float = RANK_TOL) -> int:
    lam = np.abs(np.asarray(eigenvalues, dtype=np.float64))
    if lam.size == 0:
        return 0
    peak = lam.max()
    if peak == 0.0:
        return 0
    return int(np.count_nonzero(lam > tol * peak))


def kernel_basis(Pbar: ArrayLike, tol: float = RANK_TOL) -> NDArray[np.float64]:
    """Orthonormal basis ``Q`` (``N x (N - r)``) of the null space of a full-row-rank matrix.

    Raises:
        DegenerateConfigurationError: if ``Pbar`` has numerical rank below
            its row count.
    """
    Pbar = np.asarray(Pbar, dtype=np.float64)
    r, n = Pbar.shape
    # the right singular vectors beyond the row count span the kernel
    U, s, Vt = np.linalg.svd(Pbar, full_matrices=True)
    if numerical_rank(s, tol) < r:
        raise DegenerateConfigurationError(
            f"matrix of shape {Pbar.shape} has numerical rank below {r}"
        )
    return Vt[r:].T.copy()


def clamp_eigs(A: ArrayLike, lo: float = -np.inf, hi: float = np.inf) -> NDArray[np.float64]:
    """Frobenius projection of symmetric ``A`` onto ``{X : lo I <= X <= hi I}``."""
    if lo > hi:
        raise InvalidArgumentError(f"empty spectral box [{lo}, {hi}]")
    lam, V = sym_eig(A)
    lam = np.clip(lam, lo, hi)
    out = (V * lam) @ V.T
    return 0.5 * (out + out.T)
