"""Sparse, fast-converging stress matrices for affine formation control."""

from .dynamics import InitMode, SimConfig, SimTrace, estimate_rate, init_perturbed, integrate_numeric, simulate
from .exceptions import DegenerateConfigurationError, InvalidArgumentError, InvalidHyperparametersError
from .framework import (
    Configuration,
    EdgeOrdering,
    assemble_stress,
    canonical_edges,
    effective_edges,
    incidence,
    random_generic,
    regular_polygon,
)
from .pipeline import Design, design, sweep, tune_alpha
from .problem import DesignProblem, alpha_max, build_E, build_problem, build_psi
from .rigidity import RigidityCertificate, spectrum_report, verify_urf
from .solver import SolveParams, SolveReport, SolveStatus, normalize_stress, polish, solve_p1
from .spectral import clamp_eigs, kernel_basis, numerical_rank, sym_eig

__version__ = "0.1.0"
