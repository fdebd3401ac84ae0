"""Command-line front end.

Exit codes: 0 success, 2 input error, 3 certificate failure, 4 solver did
not converge.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import sys
from pathlib import Path

import numpy as np

from .dynamics import InitMode, SimConfig, estimate_rate, simulate
from .framework import Configuration
from .pipeline import design_from_problem, sweep
from .problem import build_problem
from .rigidity import spectrum_report, verify_urf
from .scenario import (
    ScenarioError,
    configuration_from_result,
    design_to_dict,
    edges_to_csv,
    load_scenario,
    matrix_to_csv,
    read_matrix_csv,
)
from .spectral import numerical_rank, sym_eig

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_CERT = 3
EXIT_SOLVER = 4

log = logging.getLogger("stressdesign")


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")


def _scenario(args):
    sc = load_scenario(args.scenario, args.seed_override)
    changes = {}
    if args.tau is not None:
        if not 0 < args.tau < 1:
            raise ScenarioError("--tau must lie in (0, 1)")
        changes["tau"] = args.tau
    if args.max_iter is not None:
        try:
            changes["solver"] = dataclasses.replace(sc.solver, max_iter=args.max_iter)
        except ValueError as exc:
            raise ScenarioError(f"--max-iter: {exc}") from None
    return dataclasses.replace(sc, **changes) if changes else sc


def cmd_design(args) -> int:
    sc = _scenario(args)
    problem = build_problem(sc.config, sc.alpha, sc.beta, sc.gamma)
    d = design_from_problem(problem, sc.solver, sc.tau, sc.generic)
    out = Path(args.out)
    _write(out / "design.json", json.dumps(design_to_dict(d, sc), indent=2) + "\n")
    stress = d.stress if d.stress_normalized is None else d.stress_normalized
    _write(out / "stress.csv", matrix_to_csv(stress))
    _write(out / "edges.csv", edges_to_csv(d))
    log.info("alpha=%.6g M=%d status=%s certificate=%s", d.alpha, d.edges.count,
             d.report.status.value, "pass" if d.certificate.passed else "fail")
    if not d.report.converged:
        return EXIT_SOLVER
    return EXIT_OK if d.certificate.passed else EXIT_CERT


def cmd_verify(args) -> int:
    omega = read_matrix_csv(args.stress)
    sc = load_scenario(args.scenario, args.seed_override)
    if omega.shape[0] != sc.config.count:
        raise ScenarioError(f"{args.stress}: {omega.shape[0]} rows, scenario has N={sc.config.count}")
    cert = verify_urf(omega, sc.config, tau=args.tau or sc.tau, generic=sc.generic)
    text = json.dumps(cert.to_dict(), indent=2) + "\n"
    if args.out:
        _write(Path(args.out) / "certificate.json", text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if cert.passed else EXIT_CERT


def cmd_spectrum(args) -> int:
    omega = read_matrix_csv(args.stress)
    lam = sym_eig(omega).eigenvalues
    dim = args.dimension
    if dim is None:
        # an affine null space of dimension D + 1
        dim = max(1, omega.shape[0] - numerical_rank(lam) - 1)
    payload = {"spectrum": lam.tolist(), "dimension": dim}
    if dim + 1 < lam.size:
        rep = spectrum_report(omega, dim)
        payload.update(lambda_min_nonzero=rep.lambda_min_nonzero,
                       condition_number=rep.condition_number, rigid=rep.rigid)
    text = json.dumps(payload, indent=2) + "\n"
    if args.out:
        _write(Path(args.out) / "spectrum.json", text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_simulate(args) -> int:
    try:
        data = json.loads(Path(args.design).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"{args.design}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    if not isinstance(data, dict):
        raise ScenarioError(f"{args.design}: expected a design object")
    if not data.get("certificate", {}).get("passed", False) and not args.force:
        log.error("design does not carry a passing certificate (use --force to simulate anyway)")
        return EXIT_CERT
    config: Configuration = configuration_from_result(data)
    omega = data.get("stress_normalized") or data.get("stress_raw")
    if omega is None:
        raise ScenarioError(f"{args.design}: no stress matrix")
    omega = np.asarray(omega, dtype=np.float64)

    base = SimConfig()
    scenario_sim = (data.get("scenario") or {}).get("sim")
    if isinstance(scenario_sim, dict):
        base = SimConfig(**scenario_sim)
    changes = {}
    if args.t_end is not None:
        changes["t_end"] = args.t_end
    if args.samples is not None:
        changes["samples"] = args.samples
    if args.init is not None:
        changes["init_mode"] = InitMode(args.init)
    if args.scale is not None:
        changes["perturbation_scale"] = args.scale
    if args.seed_override is not None:
        changes["seed"] = args.seed_override
    sim = dataclasses.replace(base, **changes)

    trace = simulate(omega, config, sim)
    est = estimate_rate(trace)
    lines = ["t,delta\n"]
    lines += [f"{t!r},{d!r}\n" for t, d in zip(trace.times.tolist(), trace.delta.tolist())]
    lines.append(f"# rate={est.rate!r}\n")
    if est.lower_bound:
        lines.append("# rate_is_lower_bound=true\n")
    _write(Path(args.out) / "trace.csv", "".join(lines))
    return EXIT_OK


def _parse_alphas(text: str | None) -> list[float]:
    if not text:
        raise ScenarioError("--alphas: empty list")
    try:
        alphas = [float(a) for a in text.split(",") if a.strip()]
    except ValueError:
        raise ScenarioError(f"--alphas: not a comma-separated list of numbers: {text!r}") from None
    if not alphas:
        raise ScenarioError("--alphas: empty list")
    if any(not a > 0 for a in alphas):
        raise ScenarioError("--alphas: every alpha must be positive")
    return alphas


def cmd_sweep(args) -> int:
    alphas = _parse_alphas(args.alphas)
    sc = _scenario(args)
    problem = build_problem(sc.config, None, sc.beta, sc.gamma)
    designs = sweep(problem, alphas, sc.solver, sc.tau, sc.generic, workers=args.workers)
    lines = ["alpha,M,lambda_{D+2},kappa,objective,iterations\n"]
    for a, d in zip(alphas, designs):
        lines.append(
            f"{a!r},{d.edges.count},{d.lambda_min_nonzero!r},"
            f"{d.certificate.condition_number!r},{d.report.objective!r},{d.report.iterations}\n"
        )
    _write(Path(args.out) / "sweep.csv", "".join(lines))
    if not all(d.report.converged for d in designs):
        return EXIT_SOLVER
    return EXIT_OK if all(d.certificate.passed for d in designs) else EXIT_CERT


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="stressdesign", description="Sparse stress-matrix design for affine formation control.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, scenario=True):
        if scenario:
            p.add_argument("scenario", help="scenario JSON file")
        p.add_argument("--out", default=".", help="output directory")
        p.add_argument("--tau", type=float, default=None, help="relative edge threshold")
        p.add_argument("--seed-override", type=int, default=None)
        p.add_argument("--max-iter", type=int, default=None)

    p = sub.add_parser("design", help="design, certify and write a stress matrix")
    common(p)
    p.set_defaults(func=cmd_design)

    p = sub.add_parser("verify", help="certify a stress matrix against a scenario")
    p.add_argument("stress", help="stress CSV (N rows of N values)")
    common(p)
    p.set_defaults(func=cmd_verify, out=None)

    p = sub.add_parser("spectrum", help="eigenvalues of a stress matrix")
    p.add_argument("stress")
    p.add_argument("--out", default=None)
    p.add_argument("--dimension", type=int, default=None)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("simulate", help="simulate the closed loop of a design")
    p.add_argument("design", help="design.json written by 'design'")
    p.add_argument("--out", default=".")
    p.add_argument("--force", action="store_true", help="simulate even without a passing certificate")
    p.add_argument("--t-end", type=float, default=None)
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--init", choices=[m.value for m in InitMode], default=None)
    p.add_argument("--scale", type=float, default=None)
    p.add_argument("--seed-override", type=int, default=None)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sweep", help="independent designs over a list of alphas")
    common(p)
    p.add_argument("--alphas", default=None, help="comma-separated, e.g. 0.5,1.5,5")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (ScenarioError, ValueError, OSError) as exc:
        print(f"stressdesign: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
