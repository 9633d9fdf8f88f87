"""Command-line entry point: ``rbsqueeze {curve,optimize,scan,validate}``.

Exit codes: 0 success, 1 usage error, 2 validation failure,
3 numerical failure (non-unimodal bracket).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import asdict, dataclass, replace

import numpy as np

from . import hamiltonian, noise, oracle
from .angular import load_line
from .config import EtaGrid, OptimizerConfig, ScenarioConfig
from .optimize import NotUnimodal, minimise_on

CURVE_COLUMNS = ("eta", "beta", "gamma", "xi2", "xi2_prime", "system", "rho0")

EXIT_OK, EXIT_USAGE, EXIT_VALIDATION, EXIT_NUMERICAL = 0, 1, 2, 3


@dataclass(frozen=True)
class CurvePoint:
    eta: float
    xi2: float
    xi2_prime: float
    beta: float
    gamma: float


@dataclass(frozen=True)
class OptimizeResult:
    eta_star: float
    xi2_prime_min: float
    iterations: int
    converged: bool

    @property
    def squeezing_percent(self) -> float:
        return 100.0 * (1.0 - self.xi2_prime_min)


def _fmt(x) -> str:
    return f"{x:.9g}" if isinstance(x, float) else str(x)


def _system_curve(cfg: ScenarioConfig):
    return lambda eta: noise.evaluate(cfg.system, cfg.rho0, eta, cfg.r_ratio).xi2_prime


def run_curve(cfg: ScenarioConfig) -> list[CurvePoint]:
    g = cfg.eta_grid
    points = []
    for eta in np.linspace(g.min, g.max, g.steps):
        out = noise.evaluate(cfg.system, cfg.rho0, float(eta), cfg.r_ratio)
        points.append(CurvePoint(float(eta), out.xi2, out.xi2_prime,
                                 out.budget.beta, out.budget.gamma))
    return points


def curve_to_csv(points: list[CurvePoint], cfg: ScenarioConfig) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CURVE_COLUMNS)
    for p in points:
        w.writerow([_fmt(p.eta), _fmt(p.beta), _fmt(p.gamma), _fmt(p.xi2),
                    _fmt(p.xi2_prime), cfg.system.value, _fmt(float(cfg.rho0))])
    return buf.getvalue()


def run_optimize(cfg: ScenarioConfig) -> OptimizeResult:
    """Minimise xi'^2 over (0, eta_max]; raises NotUnimodal on several grid minima."""
    opt = cfg.optimizer
    res = minimise_on(_system_curve(cfg), 0.0, cfg.eta_grid.max, opt.grid_points,
                      opt.tolerance, opt.max_iters)
    return OptimizeResult(res.x, res.fx, res.iterations, res.converged)


def run_detuning_scan(cfg: ScenarioConfig, detunings_over_hfs, equal_detunings=False):
    line = load_line(cfg.line_data)
    return hamiltonian.detuning_scan(line, detunings_over_hfs, equal_detunings)


def run_validate(cfg: ScenarioConfig) -> tuple[dict, int]:
    if cfg.mc is None:
        raise ValueError("validate needs an mc configuration")
    results = oracle.run_battery(cfg.mc, cfg.r_ratio)
    report = oracle.battery_report(results, cfg.mc)
    status = EXIT_VALIDATION if report["summary"]["n_outside_4sigma"] else EXIT_OK
    return report, status


# ---------------------------------------------------------------------------
# argument handling
# ---------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="ScenarioConfig JSON file")
    common.add_argument("--system", choices=["rb87", "ideal", "ideal-spin-half", "coherent"])
    common.add_argument("--rho0", type=float)
    common.add_argument("--eta-min", type=float)
    common.add_argument("--eta-max", type=float)
    common.add_argument("--steps", type=int)
    common.add_argument("--ratio", type=float, help="gamma/beta branching ratio")
    common.add_argument("--out", help="output path (default: stdout)")
    common.add_argument("--format", choices=["csv", "json"])
    common.add_argument("--seed", type=int)
    common.add_argument("--line", help="HyperfineLine JSON (default: bundled 87Rb D2)")

    p = _Parser(prog="rbsqueeze", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("curve", parents=[common], help="xi'^2 against eta")
    o = sub.add_parser("optimize", parents=[common], help="optimal eta")
    o.add_argument("--tol", type=float)
    s = sub.add_parser("scan", parents=[common], help="Hamiltonian coefficients vs detuning")
    s.add_argument("--det-min", type=float, default=-100.0, help="in units of the excited hfs spread")
    s.add_argument("--det-max", type=float, default=100.0)
    s.add_argument("--det-steps", type=int, default=401)
    s.add_argument("--log", action="store_true", help="geometric grid (det-min, det-max > 0)")
    s.add_argument("--equal-detunings", action="store_true")
    v = sub.add_parser("validate", parents=[common], help="Monte Carlo battery")
    v.add_argument("--n-atoms", type=int)
    v.add_argument("--n-trials", type=int)
    return p


def config_from_args(args) -> ScenarioConfig:
    cfg = ScenarioConfig.load(args.config) if args.config else ScenarioConfig()
    changes = {}
    if args.system:
        changes["system"] = args.system
    if args.rho0 is not None:
        changes["rho0"] = args.rho0
    if args.ratio is not None:
        changes["r_ratio"] = args.ratio
    if args.line:
        changes["line_data"] = args.line
    g = cfg.eta_grid
    if any(v is not None for v in (args.eta_min, args.eta_max, args.steps)):
        changes["eta_grid"] = EtaGrid(
            g.min if args.eta_min is None else args.eta_min,
            g.max if args.eta_max is None else args.eta_max,
            g.steps if args.steps is None else args.steps)
    if getattr(args, "tol", None) is not None:
        changes["optimizer"] = replace(cfg.optimizer, tolerance=args.tol)
    if args.command == "validate":
        mc = cfg.mc or oracle.McConfig()
        mc_changes = {k: v for k, v in (("seed", args.seed), ("n_atoms", args.n_atoms),
                                        ("n_trials", args.n_trials)) if v is not None}
        changes["mc"] = replace(mc, **mc_changes)
    return replace(cfg, **changes)


def _emit(text: str, path: str | None):
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _table(rows: list[dict], columns) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_fmt(r[c]) for c in columns])
    return buf.getvalue()


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse exits on --help and usage errors
        return int(exc.code or 0)
    try:
        cfg = config_from_args(args)
    except (ValueError, TypeError, KeyError, OSError) as exc:
        print(f"rbsqueeze: {exc}", file=sys.stderr)
        return EXIT_USAGE
    fmt = args.format

    if args.command == "curve":
        pts = run_curve(cfg)
        if fmt == "json":
            text = json.dumps({"system": cfg.system.value, "rho0": cfg.rho0,
                               "points": [asdict(p) for p in pts]}, indent=1) + "\n"
        else:
            text = curve_to_csv(pts, cfg)
        _emit(text, args.out)
        return EXIT_OK

    if args.command == "optimize":
        try:
            res = run_optimize(cfg)
        except NotUnimodal as exc:
            cands = [{"eta": e, "xi2_prime": v} for e, v in exc.candidates]
            if fmt == "json":
                _emit(json.dumps({"error": "non-unimodal", "candidates": cands}) + "\n", args.out)
            else:
                _emit(_table(cands, ("eta", "xi2_prime")), args.out)
            print(f"rbsqueeze: {exc}", file=sys.stderr)
            return EXIT_NUMERICAL
        row = {"system": cfg.system.value, "rho0": float(cfg.rho0), "eta_star": res.eta_star,
               "xi2_prime_min": res.xi2_prime_min, "squeezing_percent": res.squeezing_percent,
               "iterations": res.iterations, "converged": res.converged}
        if fmt == "json":
            _emit(json.dumps(row) + "\n", args.out)
        else:
            _emit(_table([row], list(row)), args.out)
        return EXIT_OK

    if args.command == "scan":
        if args.det_steps < 2:
            print("rbsqueeze: --det-steps must be >= 2", file=sys.stderr)
            return EXIT_USAGE
        if args.log:
            if args.det_min <= 0 or args.det_max <= 0:
                print("rbsqueeze: --log needs positive --det-min/--det-max", file=sys.stderr)
                return EXIT_USAGE
            grid = np.geomspace(args.det_min, args.det_max, args.det_steps)
        else:
            grid = np.linspace(args.det_min, args.det_max, args.det_steps)
        try:
            rows = run_detuning_scan(cfg, grid, args.equal_detunings)
        except (ValueError, OSError) as exc:
            print(f"rbsqueeze: {exc}", file=sys.stderr)
            return EXIT_USAGE
        if fmt == "json":
            _emit(json.dumps(rows, default=str) + "\n", args.out)
        else:
            _emit(hamiltonian.scan_to_csv(rows), args.out)
        return EXIT_OK

    # validate
    try:
        report, status = run_validate(cfg)
    except oracle.InfeasibleConfig as exc:
        print(f"rbsqueeze: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if fmt == "csv":
        rows = [{"kind": c["kind"], "empirical": c["empirical"], "analytic": c["analytic"],
                 "standard_error": c["standard_error"], "z_score": c["z_score"]}
                for c in report["cases"]]
        _emit(_table(rows, ("kind", "empirical", "analytic", "standard_error", "z_score")),
              args.out)
    else:
        _emit(json.dumps(report, sort_keys=True, indent=1) + "\n", args.out)
    return status


if __name__ == "__main__":
    sys.exit(main())
