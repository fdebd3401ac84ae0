"""Data of the convex stress-design program.

The program is posed over the edge weights ``w`` of the complete graph::

    minimize    ||w||_1 - alpha * psi^T w
    subject to  Psi diag(w) Psi^T >= gamma I
                ||B diag(w) B^T||_2 <= beta
                E w = 0

with ``Psi = Q^T B`` for an orthonormal kernel basis ``Q`` of the augmented
configuration, ``psi = diag(Psi^T Psi)`` and ``E`` the stacked equilibrium
operator, ``E w = vec(Pbar B diag(w) B^T)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from .exceptions import InvalidArgumentError, InvalidHyperparametersError
from .framework import Configuration, EdgeOrdering, canonical_edges, incidence
from .spectral import kernel_basis

DEFAULT_BETA = 1.0
DEFAULT_GAMMA = 0.1


def build_psi(Q: NDArray, B: NDArray) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """Return ``Psi = Q^T B`` and its squared column norms ``psi``.

    ``psi^T w`` equals ``trace(Q^T B diag(w) B^T Q)`` for every ``w``.
    """
    Q = np.asarray(Q, dtype=np.float64)
    B = np.asarray(B, dtype=np.float64)
    if Q.shape[0] != B.shape[0]:
        raise InvalidArgumentError("kernel basis and incidence disagree on N")
    Psi = Q.T @ B
    return Psi, np.einsum("ke,ke->e", Psi, Psi)


def build_E(Pbar: NDArray, B: NDArray) -> NDArray[np.float64]:
    """Equilibrium operator of shape ``(N (D + 1), M)``.

    Block ``i`` is ``Pbar B diag(B[i, :])``, so ``E w`` stacks the columns of
    ``Pbar Omega(w)``.
    """
    Pbar = np.asarray(Pbar, dtype=np.float64)
    B = np.asarray(B, dtype=np.float64)
    if Pbar.shape[1] != B.shape[0]:
        raise InvalidArgumentError("configuration and incidence disagree on N")
    PB = Pbar @ B
    # (N, D+1, M) -> rows ordered block by block
    return (B[:, None, :] * PB[None, :, :]).reshape(-1, B.shape[1])


def alpha_max(psi: NDArray) -> float:
    """Supremum ``1 / max(psi)`` of the weights that keep the origin a minimizer of the cost."""
    peak = float(np.max(np.abs(psi))) if np.size(psi) else 0.0
    if peak <= 0.0:
        raise RuntimeError("psi vanishes identically; the kernel basis is empty")
    return 1.0 / peak


@dataclass(frozen=True, eq=False)
class DesignProblem:
    config: Configuration
    ordering: EdgeOrdering
    B: NDArray[np.float64]
    Q: NDArray[np.float64]
    Psi: NDArray[np.float64]
    psi: NDArray[np.float64]
    E: NDArray[np.float64]
    alpha: float
    beta: float
    gamma: float

    @property
    def n(self) -> int:
        return self.ordering.n

    @property
    def m(self) -> int:
        return self.ordering.m

    @property
    def dimension(self) -> int:
        return self.config.dimension

    def with_alpha(self, alpha: float) -> DesignProblem:
        """Same data, different sparsity/speed weight."""
        _check_hyper(alpha, self.beta, self.gamma)
        return DesignProblem(
            self.config, self.ordering, self.B, self.Q, self.Psi, self.psi, self.E,
            float(alpha), self.beta, self.gamma,
        )


def _check_hyper(alpha: float, beta: float, gamma: float) -> None:
    if not (np.isfinite(alpha) and alpha > 0):
        raise InvalidHyperparametersError(f"alpha must be positive, got {alpha}")
    if not (gamma > 0 and beta > gamma and np.isfinite(beta)):
        raise InvalidHyperparametersError(
            f"need beta > gamma > 0, got beta={beta}, gamma={gamma}"
        )


def build_problem(
    config: Configuration,
    alpha: float | None = None,
    beta: float = DEFAULT_BETA,
    gamma: float = DEFAULT_GAMMA,
) -> DesignProblem:
    """Assemble the design program for ``config``.

    ``alpha`` defaults to :func:`alpha_max`, the largest weight that still
    favours sparse solutions.  Any positive ``alpha`` is accepted; larger
    values buy convergence speed with extra edges.
    """
    _check_hyper(1.0 if alpha is None else alpha, beta, gamma)
    ordering = canonical_edges(config.count)
    B = incidence(ordering)
    Q = kernel_basis(config.augmented)
    Psi, psi = build_psi(Q, B)
    E = build_E(config.augmented, B)
    if alpha is None:
        alpha = alpha_max(psi)
    for arr in (B, Q, Psi, psi, E):
        arr.setflags(write=False)
    return DesignProblem(
        config, ordering, B, Q, Psi, psi, E, float(alpha), float(beta), float(gamma)
    )
