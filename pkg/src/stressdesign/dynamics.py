"""Closed-loop affine formation dynamics ``z' = -(Omega kron I_D) z``.

States are stacked agent by agent, ``z = [z_1; ...; z_N]`` with
``z_i in R^D``, so reshaping to ``(N, D)`` turns the Kronecker product into
a plain left multiplication by ``Omega``.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .exceptions import InvalidArgumentError
from .framework import Configuration
from .spectral import RANK_TOL, sym_eig

PSD_TOL = 1e-8
NULL_TOL = 1e-8
RATE_FLOOR = 1e-14


class InitMode(str, Enum):
    AT_TARGET = "at-target"
    PERTURBED_ORTHOGONAL = "perturbed-orthogonal"
    PERTURBED_FREE = "perturbed-free"


@dataclass(frozen=True)
class SimConfig:
    """Simulation settings.

    ``t_end=None`` picks ``20 / lambda_{D+2}``, long enough for the slowest
    mode to dominate the second half of the run.  ``perturbation_scale=None``
    means ``0.1 * ||p||``.
    """

    t_end: float | None = None
    samples: int = 401
    init_mode: InitMode = InitMode.PERTURBED_ORTHOGONAL
    perturbation_scale: float | None = None
    seed: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "init_mode", InitMode(self.init_mode))
        if self.t_end is not None and not self.t_end > 0:
            raise InvalidArgumentError("t_end must be positive")
        if self.samples < 2:
            raise InvalidArgumentError("need at least two samples")
        if self.perturbation_scale is not None and self.perturbation_scale < 0:
            raise InvalidArgumentError("perturbation_scale must be nonnegative")


@dataclass(frozen=True)
class SimTrace:
    times: NDArray[np.float64]
    states: NDArray[np.float64]
    delta: NDArray[np.float64]

    def __post_init__(self) -> None:
        if not (len(self.times) == len(self.states) == len(self.delta)):
            raise InvalidArgumentError("trace arrays have different lengths")
        if np.any(np.diff(self.times) <= 0):
            raise InvalidArgumentError("sample times must be strictly increasing")


class RateEstimate(NamedTuple):
    rate: float
    lower_bound: bool


def _as_agents(z: ArrayLike, n: int) -> NDArray[np.float64]:
    z = np.asarray(z, dtype=np.float64)
    if z.size % n:
        raise InvalidArgumentError(f"state of length {z.size} does not split over {n} agents")
    return z.reshape(n, -1)


def _stable_eig(omega: ArrayLike) -> tuple[NDArray, NDArray]:
    lam, V = sym_eig(omega)
    top = max(abs(lam[0]), abs(lam[-1]))
    if lam[0] < -PSD_TOL * max(top, 1.0):
        raise InvalidArgumentError(
            f"stress has eigenvalue {lam[0]:.3g} < 0; the closed loop is unstable"
        )
    return lam, V


def null_projector(omega: ArrayLike, tol: float = RANK_TOL) -> NDArray[np.float64]:
    """Orthogonal projector (``N x N``) onto the numerical null space of ``omega``."""
    lam, V = sym_eig(omega)
    top = np.max(np.abs(lam))
    Vn = V[:, np.abs(lam) <= tol * top] if top > 0 else V
    return Vn @ Vn.T


def init_perturbed(
    p: ArrayLike,
    scale: float,
    seed: int,
    orthogonal: bool,
    omega: ArrayLike | None = None,
    max_draws: int = 100,
) -> NDArray[np.float64]:
    """``p + scale * n / ||n||`` for a seeded Gaussian direction ``n``.

    With ``orthogonal=True`` the direction is first stripped of its
    component in ``null(Omega kron I_D)``, so the trajectory returns to ``p``
    itself rather than to another affine image of it.
    """
    if scale < 0:
        raise InvalidArgumentError("scale must be nonnegative")
    p = np.asarray(p, dtype=np.float64).reshape(-1)
    if scale == 0:
        return p.copy()
    proj = None
    if orthogonal:
        if omega is None:
            raise InvalidArgumentError("an orthogonal perturbation needs the stress matrix")
        proj = null_projector(omega)
        n_agents = proj.shape[0]
    rng = np.random.default_rng(seed)
    for _ in range(max_draws):
        direction = rng.standard_normal(p.size)
        if proj is not None:
            agents = _as_agents(direction, n_agents)
            direction = (agents - proj @ agents).reshape(-1)
        norm = np.linalg.norm(direction)
        if norm > 1e-12 * np.sqrt(p.size):
            return p + scale * direction / norm
    raise InvalidArgumentError("could not draw a perturbation outside the null space")


def propagate(omega: ArrayLike, z0: ArrayLike, times: ArrayLike) -> NDArray[np.float64]:
    """Exact solution ``z(t) = (V exp(-Lambda t) V^T kron I_D) z0`` at each time."""
    lam, V = _stable_eig(omega)
    lam = np.maximum(lam, 0.0)
    Z0 = _as_agents(z0, V.shape[0])
    coeffs = V.T @ Z0
    t = np.asarray(times, dtype=np.float64)
    decay = np.exp(-np.outer(t, lam))
    out = np.einsum("ik,tk,kd->tid", V, decay, coeffs)
    return out.reshape(t.size, -1)


def simulate(omega: ArrayLike, config: Configuration, sim: SimConfig | None = None) -> SimTrace:
    """Run the closed loop from an initial state chosen by ``sim.init_mode``."""
    sim = sim or SimConfig()
    omega = np.asarray(omega, dtype=np.float64)
    if omega.shape != (config.count, config.count):
        raise InvalidArgumentError("stress and configuration disagree on N")
    lam, _ = _stable_eig(omega)
    p = config.stacked
    t_end = sim.t_end
    if t_end is None:
        slow = lam[config.dimension + 1]
        if slow <= RANK_TOL * lam[-1]:
            raise InvalidArgumentError("stress has no positive lambda_{D+2}; pass t_end explicitly")
        t_end = 20.0 / slow
    scale = 0.1 * np.linalg.norm(p) if sim.perturbation_scale is None else sim.perturbation_scale
    if sim.init_mode is InitMode.AT_TARGET:
        z0 = p.copy()
    else:
        orthogonal = sim.init_mode is InitMode.PERTURBED_ORTHOGONAL
        z0 = init_perturbed(p, scale, sim.seed, orthogonal, omega)
    times = np.linspace(0.0, t_end, sim.samples)
    Pbar = config.augmented
    if np.linalg.norm(omega @ Pbar.T) <= NULL_TOL * np.linalg.norm(omega) * np.linalg.norm(Pbar):
        # p is an equilibrium: propagate the deviation so z(0) = p stays exactly put
        deviation = propagate(omega, z0 - p, times)
        states = p + deviation
        delta = np.linalg.norm(deviation, axis=1)
    else:
        states = propagate(omega, z0, times)
        delta = np.linalg.norm(states - p, axis=1)
    return SimTrace(times, states, delta)


def integrate_numeric(
    omega: ArrayLike,
    z0: ArrayLike,
    times: ArrayLike,
    dt: float,
    target: ArrayLike | None = None,
) -> SimTrace:
    """Classical fourth-order Runge-Kutta integration of the closed loop.

    Each interval between consecutive sample times is split into equal
    steps no longer than ``dt``.  ``delta`` is measured against ``target``
    (default: the initial state).
    """
    omega = np.asarray(omega, dtype=np.float64)
    lam, _ = _stable_eig(omega)
    if not dt > 0 or dt * lam[-1] >= 2.0:
        raise InvalidArgumentError(f"dt={dt} violates dt < 2 / lambda_max = {2.0 / max(lam[-1], 1e-300):.3g}")
    times = np.asarray(times, dtype=np.float64)
    n = omega.shape[0]
    Z = _as_agents(z0, n).copy()
    ref = Z.reshape(-1).copy() if target is None else np.asarray(target, dtype=np.float64).reshape(-1)

    def f(Y):
        return -(omega @ Y)

    states = np.empty((times.size, Z.size))
    states[0] = Z.reshape(-1)
    for k in range(1, times.size):
        span = times[k] - times[k - 1]
        steps = max(1, int(np.ceil(span / dt - 1e-9)))
        h = span / steps
        for _ in range(steps):
            k1 = f(Z)
            k2 = f(Z + 0.5 * h * k1)
            k3 = f(Z + 0.5 * h * k2)
            k4 = f(Z + h * k3)
            Z = Z + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        states[k] = Z.reshape(-1)
    return SimTrace(times, states, np.linalg.norm(states - ref, axis=1))


def lyapunov(omega: ArrayLike, states: ArrayLike) -> NDArray[np.float64]:
    """``V(z) = z^T (Omega kron I_D) z / 2`` for each row of ``states``."""
    omega = np.asarray(omega, dtype=np.float64)
    S = np.atleast_2d(np.asarray(states, dtype=np.float64))
    Z = S.reshape(S.shape[0], omega.shape[0], -1)
    return 0.5 * np.einsum("tid,ij,tjd->t", Z, omega, Z)


def estimate_rate(trace: SimTrace, window: float = 0.5) -> RateEstimate:
    """Decay rate from a least-squares line through ``log delta`` on the tail.

    The fit uses the last ``window`` fraction of samples.  Samples where
    ``delta`` has fallen below ``1e-14`` are dropped and the result is then
    flagged as a lower bound.
    """
    if not 0.0 < window <= 1.0:
        raise InvalidArgumentError("window must lie in (0, 1]")
    if np.max(trace.delta) <= RATE_FLOOR:
        # nothing to decay
        return RateEstimate(0.0, False)
    n = len(trace.times)
    start = min(int(np.floor(n * (1.0 - window))), n - 2)
    t = trace.times[start:]
    d = trace.delta[start:]
    keep = d > RATE_FLOOR
    lower_bound = not bool(keep.all())
    if keep.sum() < 2:
        return RateEstimate(float("inf") if lower_bound else 0.0, lower_bound)
    slope = np.polyfit(t[keep], np.log(d[keep]), 1)[0]
    return RateEstimate(float(-slope), lower_bound)
