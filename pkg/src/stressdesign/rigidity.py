"""Universal-rigidity certificates for designed stress matrices.

A framework on a generic configuration is universally rigid exactly when it
carries a PSD stress matrix of rank ``N - D - 1``.  For nongeneric targets
(regular polygons, for instance) the same three checks still certify what
the formation controller needs: PSD, the right rank, and the affine span of
the configuration in the null space.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .exceptions import InvalidArgumentError
from .framework import DEFAULT_EDGE_TAU, Configuration, canonical_edges, effective_edges, stress_vector
from .spectral import RANK_TOL, numerical_rank, sym_eig

PSD_TOL = 1e-8
NULL_TOL = 1e-8


@dataclass(frozen=True)
class SpectrumReport:
    spectrum: NDArray[np.float64]
    lambda_min_nonzero: float
    condition_number: float
    rigid: bool


@dataclass(frozen=True)
class RigidityCertificate:
    psd_ok: bool
    rank_ok: bool
    nullspace_ok: bool
    spectrum: NDArray[np.float64]
    rank: int
    lambda_min_nonzero: float
    condition_number: float
    edges_effective: int
    generic_assumed: bool
    tol_psd: float = PSD_TOL
    tol_rank: float = RANK_TOL
    tol_null: float = NULL_TOL

    @property
    def passed(self) -> bool:
        return self.psd_ok and self.rank_ok and self.nullspace_ok

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "psd_ok": self.psd_ok,
            "rank_ok": self.rank_ok,
            "nullspace_ok": self.nullspace_ok,
            "rank": self.rank,
            "spectrum": [float(x) for x in self.spectrum],
            "lambda_min_nonzero": self.lambda_min_nonzero,
            "condition_number": self.condition_number,
            "edges_effective": self.edges_effective,
            "generic_assumed": self.generic_assumed,
            "tolerances": {"psd": self.tol_psd, "rank": self.tol_rank, "null": self.tol_null},
        }


def spectrum_report(omega: ArrayLike, dimension: int, tol: float = RANK_TOL) -> SpectrumReport:
    """Ascending spectrum, smallest nonzero eigenvalue ``lambda_{D+2}`` and ``kappa``.

    ``kappa = lambda_max / lambda_{D+2}``; it is reported as ``inf`` (and the
    stress flagged non-rigid) when ``lambda_{D+2}`` is numerically zero.
    """
    lam = sym_eig(omega).eigenvalues
    k = dimension + 1
    if k >= lam.size:
        raise InvalidArgumentError(f"a {lam.size}x{lam.size} stress has no eigenvalue index {k}")
    lam_top = lam[-1]
    lam_k = float(lam[k])
    if lam_top <= 0.0 or lam_k <= tol * lam_top:
        return SpectrumReport(lam, lam_k, float("inf"), False)
    return SpectrumReport(lam, lam_k, float(lam_top / lam_k), True)


def verify_urf(
    omega: ArrayLike,
    config: Configuration,
    tol_psd: float = PSD_TOL,
    tol_rank: float = RANK_TOL,
    tol_null: float = NULL_TOL,
    tau: float = DEFAULT_EDGE_TAU,
    generic: bool | None = None,
) -> RigidityCertificate:
    """Check PSD-ness, rank ``N - D - 1`` and the affine null space of ``omega``.

    Args:
        omega: Symmetric ``N x N`` stress matrix.
        config: Target configuration it should stabilize.
        generic: Whether the configuration may be treated as generic.  Only
            then does a pass certify universal rigidity in the strict
            sense; the verdict is recorded as ``generic_assumed``.
    """
    omega = np.asarray(omega, dtype=np.float64)
    n, d = config.count, config.dimension
    if omega.shape != (n, n):
        raise InvalidArgumentError(f"stress has shape {omega.shape}, configuration has N={n}")
    if not np.allclose(omega, omega.T, rtol=0.0, atol=1e-9 * max(1.0, np.abs(omega).max())):
        raise InvalidArgumentError("stress matrix is not symmetric")

    lam = sym_eig(omega).eigenvalues
    top = float(np.max(np.abs(lam)))
    psd_ok = bool(lam[0] >= -tol_psd * top)
    rank = numerical_rank(lam, tol_rank)
    rank_ok = rank == n - d - 1
    Pbar = config.augmented
    lhs = np.linalg.norm(omega @ Pbar.T)
    rhs = tol_null * np.linalg.norm(omega) * np.linalg.norm(Pbar)
    nullspace_ok = bool(lhs <= rhs) and top > 0.0

    report = spectrum_report(omega, d, tol_rank)
    weights = stress_vector(canonical_edges(n), omega)
    edges = effective_edges(canonical_edges(n), weights, tau).count
    return RigidityCertificate(
        psd_ok, rank_ok, nullspace_ok, lam, rank, report.lambda_min_nonzero,
        report.condition_number, edges, bool(generic), tol_psd, tol_rank, tol_null,
    )
