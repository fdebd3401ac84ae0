"""First-order solver for the stress-design program.

Global-consensus ADMM with matrix lifting.  The edge-weight vector ``w`` is
coupled to four copies, each handled by a cheap proximal step:

* ``z1 = w``                      shifted soft-thresholding (the cost)
* ``z2 = w``                      projection onto ``ker E``
* ``X  = Psi diag(w) Psi^T``      eigenvalue clamp to ``[gamma, inf)``
* ``Y  = B diag(w) B^T``          eigenvalue clamp to ``[0, beta]``

All copies share one penalty, so the ``w``-update solves a fixed positive
definite system ``(2 I + A1^T A1 + A2^T A2) w = rhs`` whose Cholesky factor is
computed once.  The penalty may be rebalanced during the run without
refactoring.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.linalg import cho_factor, cho_solve

from .exceptions import InvalidArgumentError
from .framework import DEFAULT_EDGE_TAU, assemble_stress, effective_edges
from .problem import DesignProblem
from .spectral import RANK_TOL, clamp_eigs, numerical_rank, sym_eig

log = logging.getLogger(__name__)

FEAS_TOL = 1e-5


class SolveStatus(str, Enum):
    OPTIMAL = "optimal"
    MAX_ITER = "max-iter"
    INFEASIBLE = "infeasible-detected"


@dataclass(frozen=True)
class SolveParams:
    rho: float = 1.0
    max_iter: int = 20000
    eps_abs: float = 1e-7
    eps_rel: float = 1e-6
    over_relaxation: float = 1.6
    adaptive_rho: bool = True

    def __post_init__(self) -> None:
        if not self.rho > 0:
            raise InvalidArgumentError("rho must be positive")
        if self.max_iter < 1:
            raise InvalidArgumentError("max_iter must be at least 1")
        if not (self.eps_abs > 0 and self.eps_rel > 0):
            raise InvalidArgumentError("tolerances must be positive")
        if not 1.0 <= self.over_relaxation <= 1.8:
            raise InvalidArgumentError("over_relaxation must lie in [1, 1.8]")


@dataclass(frozen=True)
class Feasibility:
    """Constraint values recomputed from a returned stress vector."""

    lambda_min_kernel: float
    lambda_max_stress: float
    equilibrium_residual: float

    def satisfied(self, gamma: float, beta: float, tol: float = FEAS_TOL) -> bool:
        return (
            self.lambda_min_kernel >= gamma - tol
            and self.lambda_max_stress <= beta + tol
            and self.equilibrium_residual <= tol
        )


@dataclass(frozen=True)
class SolveReport:
    status: SolveStatus
    iterations: int
    primal_residual: float
    dual_residual: float
    objective: float
    feasibility: Feasibility
    rho: float
    history: list[tuple[int, float, float, float]] = field(default_factory=list, repr=False)

    @property
    def converged(self) -> bool:
        return self.status is SolveStatus.OPTIMAL


def objective(problem: DesignProblem, w: ArrayLike) -> float:
    """``||w||_1 - alpha psi^T w``."""
    w = np.asarray(w, dtype=np.float64)
    return float(np.abs(w).sum() - problem.alpha * problem.psi @ w)


def feasibility(problem: DesignProblem, w: ArrayLike) -> Feasibility:
    w = np.asarray(w, dtype=np.float64)
    kernel_block = (problem.Psi * w) @ problem.Psi.T
    omega = assemble_stress(problem.ordering, w)
    return Feasibility(
        float(sym_eig(kernel_block).eigenvalues[0]),
        float(sym_eig(omega).eigenvalues[-1]),
        float(np.max(np.abs(problem.E @ w))) if w.size else 0.0,
    )


def _kernel_projector(E: NDArray) -> NDArray[np.float64]:
    """Orthogonal projector onto ``ker E``."""
    _, s, Vt = np.linalg.svd(E, full_matrices=True)
    r = numerical_rank(s, 1e-10)
    N = Vt[r:].T
    return N @ N.T


def _stress_block(B: NDArray, w: NDArray) -> NDArray:
    return (B * w) @ B.T


def _adjoint(G: NDArray, S: NDArray) -> NDArray:
    """Adjoint of ``w -> G diag(w) G^T``: ``g_e^T S g_e`` per column."""
    return np.sum(G * (S @ G), axis=0)


ProxFn = Callable[[NDArray, float], NDArray]


def _soft_threshold_prox(alpha_psi: NDArray) -> ProxFn:
    def prox(v: NDArray, rho: float) -> NDArray:
        shifted = v + alpha_psi / rho
        return np.sign(shifted) * np.maximum(np.abs(shifted) - 1.0 / rho, 0.0)

    return prox


def _linear_on_support_prox(alpha_psi: NDArray, mask: NDArray) -> ProxFn:
    def prox(v: NDArray, rho: float) -> NDArray:
        return np.where(mask, v + alpha_psi / rho, 0.0)

    return prox


def _admm(
    problem: DesignProblem,
    params: SolveParams,
    prox: ProxFn,
    mask: NDArray | None = None,
) -> tuple[NDArray, dict]:
    Psi, B = problem.Psi, problem.B
    m = problem.m
    k_dim = Psi.shape[0]
    n = problem.n
    gamma, beta = problem.gamma, problem.beta

    G1 = Psi.T @ Psi
    G2 = B.T @ B
    K = 2.0 * np.eye(m) + G1**2 + G2**2
    if mask is None:
        chol = cho_factor(K)
    else:
        # weights off the support are pinned to zero; solve on the support only
        chol = cho_factor(K[np.ix_(mask, mask)])
    proj_kernel = _kernel_projector(problem.E)

    x = np.zeros(m)
    z1 = np.zeros(m)
    z2 = np.zeros(m)
    X = gamma * np.eye(k_dim)
    Y = np.zeros((n, n))
    u1 = np.zeros(m)
    u2 = np.zeros(m)
    U = np.zeros((k_dim, k_dim))
    V = np.zeros((n, n))
    rho = params.rho
    a = params.over_relaxation
    n_constraints = 2 * m + k_dim * k_dim + n * n

    history = []
    status = SolveStatus.MAX_ITER
    r_norm = s_norm = np.inf
    it = 0
    for it in range(1, params.max_iter + 1):
        rhs = (z1 - u1) + (z2 - u2) + _adjoint(Psi, X - U) + _adjoint(B, Y - V)
        if mask is None:
            x = cho_solve(chol, rhs)
        else:
            x = np.zeros(m)
            x[mask] = cho_solve(chol, rhs[mask])

        AX = _stress_block(Psi, x)
        AY = _stress_block(B, x)
        h1 = a * x + (1 - a) * z1
        h2 = a * x + (1 - a) * z2
        hX = a * AX + (1 - a) * X
        hY = a * AY + (1 - a) * Y

        z1_old, z2_old, X_old, Y_old = z1, z2, X, Y
        z1 = prox(h1 + u1, rho)
        z2 = proj_kernel @ (h2 + u2)
        X = clamp_eigs(hX + U, gamma, np.inf)
        Y = clamp_eigs(hY + V, 0.0, beta)

        u1 = u1 + h1 - z1
        u2 = u2 + h2 - z2
        U = U + hX - X
        V = V + hY - Y

        r_norm = np.sqrt(
            np.sum((x - z1) ** 2) + np.sum((x - z2) ** 2)
            + np.sum((AX - X) ** 2) + np.sum((AY - Y) ** 2)
        )
        s_vec = (z1 - z1_old) + (z2 - z2_old) + _adjoint(Psi, X - X_old) + _adjoint(B, Y - Y_old)
        s_norm = rho * np.linalg.norm(s_vec)

        ax_norm = np.sqrt(2 * np.sum(x**2) + np.sum(AX**2) + np.sum(AY**2))
        z_norm = np.sqrt(np.sum(z1**2) + np.sum(z2**2) + np.sum(X**2) + np.sum(Y**2))
        aty = rho * np.linalg.norm(u1 + u2 + _adjoint(Psi, U) + _adjoint(B, V))
        eps_pri = np.sqrt(n_constraints) * params.eps_abs + params.eps_rel * max(ax_norm, z_norm)
        eps_dual = np.sqrt(m) * params.eps_abs + params.eps_rel * aty

        if it % 50 == 0 or it == 1:
            history.append((it, float(r_norm), float(s_norm), rho))
        if r_norm <= eps_pri and s_norm <= eps_dual:
            status = SolveStatus.OPTIMAL
            break

        if params.adaptive_rho and it % 25 == 0:
            scale = 1.0
            if r_norm > 10.0 * s_norm:
                scale = 2.0
            elif s_norm > 10.0 * r_norm:
                scale = 0.5
            if scale != 1.0:
                rho *= scale
                u1, u2, U, V = u1 / scale, u2 / scale, U / scale, V / scale

    log.debug("admm stopped after %d iterations: %s (r=%.3g, s=%.3g)", it, status, r_norm, s_norm)
    state = dict(
        x=x, z1=z1, z2=z2, status=status, iterations=it,
        r=float(r_norm), s=float(s_norm), rho=rho, history=history,
        proj_kernel=proj_kernel,
    )
    return z1, state


def _restore_equilibrium(problem: DesignProblem, w: NDArray) -> NDArray:
    """Smallest change of ``w`` on its own support that zeroes ``E w``."""
    support = w != 0.0
    if not support.any():
        return w
    Es = problem.E[:, support]
    delta, *_ = np.linalg.lstsq(Es, Es @ w[support], rcond=None)
    out = w.copy()
    out[support] = w[support] - delta
    return out


def _rescale_into_box(problem: DesignProblem, w: NDArray) -> NDArray:
    """Positive rescaling that removes a one-sided spectral violation.

    Scaling keeps the support and ``E w = 0``; it cannot help when both
    spectral bounds are violated at once.
    """
    feas = feasibility(problem, w)
    lo, hi = feas.lambda_min_kernel, feas.lambda_max_stress
    if lo <= 0.0:
        return w
    if lo < problem.gamma and hi * problem.gamma / lo <= problem.beta:
        return w * (problem.gamma / lo)
    if hi > problem.beta and lo * problem.beta / hi >= problem.gamma:
        return w * (problem.beta / hi)
    return w


def solve_p1(
    problem: DesignProblem, params: SolveParams | None = None
) -> tuple[NDArray[np.float64], SolveReport]:
    """Solve the stress-design program by ADMM.

    Returns the sparse iterate (exact zeros off the identified support) after
    removing the residual equilibrium error on that support, and a report
    whose feasibility figures are recomputed from the returned vector.
    """
    params = params or SolveParams()
    if problem.gamma > problem.beta or not np.any(_kernel_projector(problem.E)):
        w = np.zeros(problem.m)
        return w, SolveReport(
            SolveStatus.INFEASIBLE, 0, np.inf, np.inf, objective(problem, w),
            feasibility(problem, w), params.rho,
        )
    prox = _soft_threshold_prox(problem.alpha * problem.psi)
    w, state = _admm(problem, params, prox)
    w = _rescale_into_box(problem, _restore_equilibrium(problem, w))
    report = SolveReport(
        state["status"], state["iterations"], state["r"], state["s"],
        objective(problem, w), feasibility(problem, w), state["rho"], state["history"],
    )
    return w, report


@dataclass(frozen=True)
class PolishResult:
    weights: NDArray[np.float64]
    polished: bool
    report: SolveReport | None


def polish(
    problem: DesignProblem,
    weights: ArrayLike,
    tau: float = DEFAULT_EDGE_TAU,
    params: SolveParams | None = None,
) -> PolishResult:
    """Maximize ``alpha psi^T w`` on the thresholded support of ``weights``.

    The L1 term is dropped and every weight off the support is held at zero,
    so the support cannot grow.  The input is returned unchanged (with
    ``polished=False``) when the restricted program is infeasible, fails to
    converge, or would lower the smallest nonzero eigenvalue of the
    normalized stress.
    """
    params = params or SolveParams()
    w_in = np.asarray(weights, dtype=np.float64)
    mask = effective_edges(problem.ordering, w_in, tau).mask
    if not mask.any():
        return PolishResult(w_in.copy(), False, None)
    prox = _linear_on_support_prox(problem.alpha * problem.psi, mask)
    w, state = _admm(problem, params, prox, mask=mask)
    w = _rescale_into_box(problem, _restore_equilibrium(problem, w))
    feas = feasibility(problem, w)
    report = SolveReport(
        state["status"], state["iterations"], state["r"], state["s"],
        float(-problem.alpha * problem.psi @ w), feas, state["rho"], state["history"],
    )
    if not (report.converged and feas.satisfied(problem.gamma, problem.beta)):
        return PolishResult(w_in.copy(), False, report)
    d = problem.dimension
    before = _normalized_gap(problem, w_in, d)
    after = _normalized_gap(problem, w, d)
    if after < before - 1e-8:
        return PolishResult(w_in.copy(), False, report)
    return PolishResult(w, True, report)


def _normalized_gap(problem: DesignProblem, w: NDArray, d: int) -> float:
    lam = sym_eig(assemble_stress(problem.ordering, w)).eigenvalues
    if lam[-1] <= 0:
        return 0.0
    return float(lam[d + 1] / lam[-1])


def normalize_stress(omega: ArrayLike) -> NDArray[np.float64]:
    """Scale a PSD stress matrix to unit largest eigenvalue."""
    omega = np.asarray(omega, dtype=np.float64)
    lam = sym_eig(omega).eigenvalues
    if lam[-1] <= 0.0 or numerical_rank(lam, RANK_TOL) == 0:
        raise InvalidArgumentError("cannot normalize a zero (or negative definite) stress")
    return omega / lam[-1]
