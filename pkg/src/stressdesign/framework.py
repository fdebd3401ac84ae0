"""Configurations, the complete-graph edge ordering and stress assembly.

Every design starts from the complete graph on ``N`` nodes.  Edges are
indexed lexicographically, ``(0, 1), (0, 2), ..., (N-2, N-1)``, and a
stress vector is simply one weight per edge in that order.  The incidence
column of edge ``(i, j)`` is ``e_i - e_j`` so the stress matrix is
``B diag(w) B^T``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .exceptions import DegenerateConfigurationError, InvalidArgumentError

DEFAULT_EDGE_TAU = 1e-6
RANK_TOL = 1e-8


@dataclass(frozen=True)
class EdgeOrdering:
    """Lexicographic ``i < j`` edge list of the complete graph on ``n`` nodes."""

    n: int
    edges: tuple[tuple[int, int], ...]

    @property
    def m(self) -> int:
        return len(self.edges)

    def index(self, i: int, j: int) -> int:
        """Position of the edge ``{i, j}`` in the ordering."""
        if i == j:
            raise InvalidArgumentError("self loops are not edges")
        i, j = min(i, j), max(i, j)
        # closed form of the lexicographic rank
        return i * self.n - i * (i + 1) // 2 + (j - i - 1)

    def as_array(self) -> NDArray[np.int_]:
        return np.asarray(self.edges, dtype=int).reshape(-1, 2)


@dataclass(frozen=True)
class Configuration:
    """Target positions of ``N`` agents in ``R^D``.

    Attributes:
        positions: ``(D, N)`` array, one column per agent.
    """

    positions: NDArray[np.float64]
    _augmented: NDArray[np.float64] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        P = np.array(self.positions, dtype=np.float64)
        if P.ndim != 2:
            raise InvalidArgumentError("positions must be a (D, N) array")
        D, N = P.shape
        if D < 1 or N < D + 2:
            raise InvalidArgumentError(f"need N >= D + 2 agents, got D={D}, N={N}")
        if not np.all(np.isfinite(P)):
            raise InvalidArgumentError("positions must be finite")
        P.setflags(write=False)
        Pbar = np.vstack([P, np.ones((1, N))])
        s = np.linalg.svd(Pbar, compute_uv=False)
        if s[-1] <= RANK_TOL * s[0]:
            raise DegenerateConfigurationError(
                f"augmented configuration has numerical rank < {D + 1} "
                "(points lie in a proper affine subspace)"
            )
        Pbar.setflags(write=False)
        object.__setattr__(self, "positions", P)
        object.__setattr__(self, "_augmented", Pbar)

    @classmethod
    def from_points(cls, points: ArrayLike) -> Configuration:
        """Build from an ``(N, D)`` list of points (one row per agent)."""
        return cls(np.asarray(points, dtype=np.float64).T)

    @property
    def dimension(self) -> int:
        return self.positions.shape[0]

    @property
    def count(self) -> int:
        return self.positions.shape[1]

    @property
    def augmented(self) -> NDArray[np.float64]:
        """``[P; 1^T]``, shape ``(D + 1, N)``."""
        return self._augmented

    @property
    def stacked(self) -> NDArray[np.float64]:
        """``vec(P)``: agent coordinates stacked agent by agent, length ``D N``."""
        return self.positions.T.reshape(-1).copy()


def canonical_edges(n: int) -> EdgeOrdering:
    if n < 2:
        raise InvalidArgumentError(f"need at least two nodes, got {n}")
    return EdgeOrdering(n, tuple(combinations(range(n), 2)))


def incidence(ordering: EdgeOrdering) -> NDArray[np.float64]:
    """Node-by-edge incidence matrix, ``+1`` at the smaller endpoint."""
    B = np.zeros((ordering.n, ordering.m))
    cols = np.arange(ordering.m)
    ij = ordering.as_array()
    B[ij[:, 0], cols] = 1.0
    B[ij[:, 1], cols] = -1.0
    return B


def assemble_stress(ordering: EdgeOrdering, weights: ArrayLike) -> NDArray[np.float64]:
    """Stress matrix ``B diag(w) B^T`` of an edge-weight vector."""
    w = np.asarray(weights, dtype=np.float64)
    if w.shape != (ordering.m,):
        raise InvalidArgumentError(
            f"stress vector has shape {w.shape}, expected ({ordering.m},)"
        )
    ij = ordering.as_array()
    omega = np.zeros((ordering.n, ordering.n))
    omega[ij[:, 0], ij[:, 1]] = -w
    omega[ij[:, 1], ij[:, 0]] = -w
    omega[np.diag_indices(ordering.n)] = -omega.sum(axis=1)
    return omega


def stress_vector(ordering: EdgeOrdering, omega: ArrayLike) -> NDArray[np.float64]:
    """Inverse of :func:`assemble_stress`: read edge weights off a stress matrix."""
    omega = np.asarray(omega, dtype=np.float64)
    if omega.shape != (ordering.n, ordering.n):
        raise InvalidArgumentError("stress matrix shape does not match the ordering")
    ij = ordering.as_array()
    return -0.5 * (omega[ij[:, 0], ij[:, 1]] + omega[ij[:, 1], ij[:, 0]])


@dataclass(frozen=True)
class EffectiveEdges:
    count: int
    edges: tuple[tuple[int, int], ...]
    weights: NDArray[np.float64]
    mask: NDArray[np.bool_]


def effective_edges(
    ordering: EdgeOrdering, weights: ArrayLike, tau: float = DEFAULT_EDGE_TAU
) -> EffectiveEdges:
    """Edges whose weight exceeds ``tau`` times the largest weight magnitude."""
    if not 0.0 < tau < 1.0:
        raise InvalidArgumentError(f"tau must lie in (0, 1), got {tau}")
    w = np.asarray(weights, dtype=np.float64)
    if w.shape != (ordering.m,):
        raise InvalidArgumentError("stress vector length does not match the ordering")
    peak = np.max(np.abs(w)) if w.size else 0.0
    if peak == 0.0:
        return EffectiveEdges(0, (), np.zeros(0), np.zeros(ordering.m, dtype=bool))
    mask = np.abs(w) > tau * peak
    kept = tuple(e for e, keep in zip(ordering.edges, mask) if keep)
    return EffectiveEdges(int(mask.sum()), kept, w[mask].copy(), mask)


def regular_polygon(n: int, radius: float = 1.0) -> Configuration:
    """Vertices ``radius * (cos 2 pi k / n, sin 2 pi k / n)``, ``k = 0..n-1``."""
    if n < 4:
        raise InvalidArgumentError(f"a planar design needs n >= 4 agents, got {n}")
    if not radius > 0:
        raise InvalidArgumentError("radius must be positive")
    theta = 2.0 * np.pi * np.arange(n) / n
    return Configuration(radius * np.vstack([np.cos(theta), np.sin(theta)]))


def random_generic(n: int, d: int, seed: int, max_draws: int = 100) -> Configuration:
    """Standard-normal coordinates from a seeded generator.

    Draws are repeated (same stream) until the augmented matrix has full
    row rank, which happens on the first draw with probability one.
    """
    if d < 1 or n < d + 2:
        raise InvalidArgumentError(f"need n >= d + 2 agents, got d={d}, n={n}")
    rng = np.random.default_rng(seed)
    for _ in range(max_draws):
        try:
            return Configuration(rng.standard_normal((d, n)))
        except DegenerateConfigurationError:
            continue
    raise DegenerateConfigurationError("could not draw a generic configuration")
