"""Design -> normalize -> certify, plus alpha sweeps and tuning."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from numpy.typing import NDArray

from .framework import DEFAULT_EDGE_TAU, Configuration, EffectiveEdges, assemble_stress, effective_edges
from .problem import DEFAULT_BETA, DEFAULT_GAMMA, DesignProblem, build_problem
from .rigidity import RigidityCertificate, verify_urf
from .solver import SolveParams, SolveReport, normalize_stress, solve_p1


@dataclass(frozen=True)
class Design:
    problem: DesignProblem
    weights: NDArray[np.float64]
    report: SolveReport
    edges: EffectiveEdges
    stress: NDArray[np.float64]
    stress_normalized: NDArray[np.float64] | None
    certificate: RigidityCertificate

    @property
    def alpha(self) -> float:
        return self.problem.alpha

    @property
    def lambda_min_nonzero(self) -> float:
        """``lambda_{D+2}`` of the normalized stress."""
        return float(self.certificate.lambda_min_nonzero / self.certificate.spectrum[-1])


def design_from_problem(
    problem: DesignProblem,
    params: SolveParams | None = None,
    tau: float = DEFAULT_EDGE_TAU,
    generic: bool | None = None,
) -> Design:
    w, report = solve_p1(problem, params)
    edges = effective_edges(problem.ordering, w, tau)
    # weights below the threshold are treated as absent everywhere downstream
    w = np.where(edges.mask, w, 0.0)
    omega = assemble_stress(problem.ordering, w)
    try:
        normalized = normalize_stress(omega)
    except ValueError:
        normalized = None
    cert = verify_urf(omega if normalized is None else normalized, problem.config, tau=tau, generic=generic)
    return Design(problem, w, report, edges, omega, normalized, cert)


def design(
    config: Configuration,
    alpha: float | None = None,
    beta: float = DEFAULT_BETA,
    gamma: float = DEFAULT_GAMMA,
    params: SolveParams | None = None,
    tau: float = DEFAULT_EDGE_TAU,
    generic: bool | None = None,
) -> Design:
    """Solve for a sparse stress on ``config`` and certify the result."""
    problem = build_problem(config, alpha, beta, gamma)
    return design_from_problem(problem, params, tau, generic)


def sweep(
    problem: DesignProblem,
    alphas: Iterable[float],
    params: SolveParams | None = None,
    tau: float = DEFAULT_EDGE_TAU,
    generic: bool | None = None,
    workers: int = 1,
) -> list[Design]:
    """Independent designs for each ``alpha``, returned in input order."""
    problems = [problem.with_alpha(a) for a in alphas]
    if workers <= 1:
        return [design_from_problem(p, params, tau, generic) for p in problems]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda p: design_from_problem(p, params, tau, generic), problems))


def tune_alpha(
    problem: DesignProblem,
    factors: Sequence[float] = (1.0, 1.02, 1.05, 1.1),
    params: SolveParams | None = None,
    tau: float = DEFAULT_EDGE_TAU,
    generic: bool | None = None,
) -> Design:
    """Sparsest certified design over ``alpha = factor / max(psi)``.

    Starting from the upper end of the sparsity-preserving range and nudging
    ``alpha`` past it often removes a few more edges before the solution
    starts to densify.  Ties go to the larger ``lambda_{D+2}``.
    """
    base = 1.0 / float(np.max(problem.psi))
    candidates = sweep(problem, [f * base for f in factors], params, tau, generic)
    certified = [d for d in candidates if d.certificate.passed and d.report.converged]
    pool = certified or candidates
    return min(pool, key=lambda d: (d.edges.count, -d.lambda_min_nonzero))
