"""Scenario files (JSON in) and design results (JSON/CSV out).

A scenario names the target configuration, either explicitly::

    {"dimension": 2, "positions": [[1, 1], [-1, 1], [-1, -1], [1, -1]]}

or through a generator::

    {"generator": {"polygon": {"n": 10, "radius": 1.0}}}
    {"generator": {"random": {"n": 6, "d": 2, "seed": 3}}}

plus optional ``alpha``, ``beta``, ``gamma``, ``tau``, ``solver`` and ``sim``
sections.  Unknown keys are rejected.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Any

import numpy as np

from .dynamics import InitMode, SimConfig
from .framework import DEFAULT_EDGE_TAU, Configuration, random_generic, regular_polygon
from .pipeline import Design
from .problem import DEFAULT_BETA, DEFAULT_GAMMA
from .solver import SolveParams


class ScenarioError(ValueError):
    """Malformed scenario or result file; the message names the offending field."""


@dataclass(frozen=True)
class Scenario:
    config: Configuration
    generic: bool
    alpha: float | None = None
    beta: float = DEFAULT_BETA
    gamma: float = DEFAULT_GAMMA
    tau: float = DEFAULT_EDGE_TAU
    solver: SolveParams = field(default_factory=SolveParams)
    sim: SimConfig = field(default_factory=SimConfig)
    raw: dict = field(default_factory=dict, compare=False)


_TOP_KEYS = {"dimension", "positions", "generator", "alpha", "beta", "gamma", "tau", "solver", "sim"}


def _number(obj: dict, key: str, where: str, default=None, integer: bool = False):
    if key not in obj:
        return default
    value = obj[key]
    if value is None and default is None:
        return None
    ok = isinstance(value, int) if integer else isinstance(value, (int, float))
    if isinstance(value, bool) or not ok:
        kind = "an integer" if integer else "a number"
        raise ScenarioError(f"{where}.{key}: expected {kind}, got {value!r}")
    return value


def _check_keys(obj: Any, allowed: set[str], where: str) -> dict:
    if not isinstance(obj, dict):
        raise ScenarioError(f"{where}: expected an object")
    unknown = sorted(set(obj) - allowed)
    if unknown:
        raise ScenarioError(f"{where}: unknown field(s) {', '.join(unknown)}")
    return obj


def _section(obj: dict, key: str, cls, where: str):
    if key not in obj:
        return cls()
    names = {f.name for f in fields(cls)}
    section = _check_keys(obj[key], names, f"{where}.{key}")
    try:
        return cls(**section)
    except (TypeError, ValueError) as exc:
        raise ScenarioError(f"{where}.{key}: {exc}") from None


def _configuration(data: dict, seed_override: int | None) -> tuple[Configuration, bool]:
    if ("positions" in data) == ("generator" in data):
        raise ScenarioError("scenario: give exactly one of 'positions' or 'generator'")
    if "positions" in data:
        pts = data["positions"]
        if not isinstance(pts, list) or not all(isinstance(r, list) for r in pts):
            raise ScenarioError("scenario.positions: expected a list of coordinate lists")
        try:
            arr = np.array(pts, dtype=np.float64)
        except (TypeError, ValueError):
            raise ScenarioError("scenario.positions: ragged or non-numeric coordinates") from None
        dim = _number(data, "dimension", "scenario", integer=True)
        if dim is None:
            raise ScenarioError("scenario.dimension: required with explicit positions")
        if arr.ndim != 2 or arr.shape[1] != dim:
            raise ScenarioError(f"scenario.positions: every point needs {dim} coordinates")
        try:
            return Configuration.from_points(arr), False
        except ValueError as exc:
            raise ScenarioError(f"scenario.positions: {exc}") from None

    gen = _check_keys(data["generator"], {"polygon", "random"}, "scenario.generator")
    if len(gen) != 1:
        raise ScenarioError("scenario.generator: give exactly one of 'polygon' or 'random'")
    (kind, spec), = gen.items()
    where = f"scenario.generator.{kind}"
    try:
        if kind == "polygon":
            _check_keys(spec, {"n", "radius"}, where)
            n = _number(spec, "n", where, integer=True)
            if n is None:
                raise ScenarioError(f"{where}.n: required")
            config = regular_polygon(n, _number(spec, "radius", where, 1.0))
            generic = False
        else:
            _check_keys(spec, {"n", "d", "seed"}, where)
            n = _number(spec, "n", where, integer=True)
            seed = _number(spec, "seed", where, integer=True)
            if n is None or seed is None:
                raise ScenarioError(f"{where}: 'n' and 'seed' are required")
            if seed_override is not None:
                seed = seed_override
            config = random_generic(n, _number(spec, "d", where, 2, integer=True), seed)
            generic = True
    except ScenarioError:
        raise
    except ValueError as exc:
        raise ScenarioError(f"{where}: {exc}") from None
    if "dimension" in data and data["dimension"] != config.dimension:
        raise ScenarioError("scenario.dimension: disagrees with the generator")
    return config, generic


def parse_scenario(data: Any, seed_override: int | None = None) -> Scenario:
    data = _check_keys(data, _TOP_KEYS, "scenario")
    config, generic = _configuration(data, seed_override)
    alpha = _number(data, "alpha", "scenario")
    beta = _number(data, "beta", "scenario", DEFAULT_BETA)
    gamma = _number(data, "gamma", "scenario", DEFAULT_GAMMA)
    tau = _number(data, "tau", "scenario", DEFAULT_EDGE_TAU)
    if alpha is not None and not alpha > 0:
        raise ScenarioError("scenario.alpha: must be positive")
    if not beta > gamma > 0:
        raise ScenarioError("scenario.beta/gamma: need beta > gamma > 0")
    if not 0 < tau < 1:
        raise ScenarioError("scenario.tau: must lie in (0, 1)")
    solver = _section(data, "solver", SolveParams, "scenario")
    sim = _section(data, "sim", SimConfig, "scenario")
    return Scenario(config, generic, alpha, beta, gamma, tau, solver, sim, dict(data))


def load_scenario(path: str | Path, seed_override: int | None = None) -> Scenario:
    text = Path(path).read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    return parse_scenario(data, seed_override)


# ---- result files -------------------------------------------------------


def _floats(a) -> list:
    return np.asarray(a, dtype=np.float64).tolist()


def design_to_dict(d: Design, scenario: Scenario | None = None) -> dict:
    report = d.report
    cert = d.certificate
    return {
        "alpha": d.problem.alpha,
        "beta": d.problem.beta,
        "gamma": d.problem.gamma,
        "dimension": d.problem.dimension,
        "positions": _floats(d.problem.config.positions.T),
        "generic": cert.generic_assumed,
        "M": d.edges.count,
        "edges": [
            {"i": i, "j": j, "weight": float(w)} for (i, j), w in zip(d.edges.edges, d.edges.weights)
        ],
        "weights": _floats(d.weights),
        "stress_raw": _floats(d.stress),
        "stress_normalized": None if d.stress_normalized is None else _floats(d.stress_normalized),
        "spectrum": _floats(cert.spectrum),
        "certificate": cert.to_dict(),
        "solve": {
            "status": report.status.value,
            "iterations": report.iterations,
            "primal_residual": report.primal_residual,
            "dual_residual": report.dual_residual,
            "objective": report.objective,
            "feasibility": asdict(report.feasibility),
        },
        "scenario": None if scenario is None else scenario.raw,
    }


def matrix_to_csv(A) -> str:
    A = np.atleast_2d(np.asarray(A, dtype=np.float64))
    return "".join(",".join(repr(float(x)) for x in row) + "\n" for row in A)


def read_matrix_csv(path: str | Path) -> np.ndarray:
    rows = []
    with open(path, newline="", encoding="utf-8") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or row[0].startswith("#"):
                continue
            try:
                rows.append([float(x) for x in row])
            except ValueError:
                raise ScenarioError(f"{path}:{lineno}: non-numeric entry") from None
    if not rows or any(len(r) != len(rows) for r in rows):
        raise ScenarioError(f"{path}: expected a square matrix")
    return np.array(rows)


def edges_to_csv(d: Design) -> str:
    buf = io.StringIO()
    buf.write("i,j,weight\n")
    for (i, j), w in zip(d.edges.edges, d.edges.weights):
        buf.write(f"{i},{j},{float(w)!r}\n")
    return buf.getvalue()


def configuration_from_result(data: dict) -> Configuration:
    try:
        return Configuration.from_points(np.asarray(data["positions"], dtype=np.float64))
    except (KeyError, TypeError, ValueError) as exc:
        raise ScenarioError(f"design.positions: {exc}") from None
