"""Command-line front end: ``fracspec solve|converge|params``."""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

import numpy as np

from .analysis import ExperimentError, error_curves, run_experiment
from .config import ConfigError, RunConfig, load_config
from .plotting import line_plot_svg
from .quadrature import gauss_legendre
from .solver import assemble, evaluate_u, solve
from .special_fn import fractional_params

log = logging.getLogger("fracspec")

EXIT_CONFIG = 1
EXIT_SOLVER = 2


def cache_dir() -> Path:
    env = os.environ.get("FRACSPEC_CACHE")
    if env:
        return Path(env)
    return Path.home() / ".cache" / "fracspec"


def _prepare_out(cfg: RunConfig) -> Path:
    out = cfg.out_dir
    try:
        out.mkdir(parents=True, exist_ok=True)
        probe = out / ".write-test"
        probe.write_text("")
        probe.unlink()
    except OSError as exc:
        raise ConfigError(f"output.dir: {out} is not writable ({exc})") from exc
    return out


def _grid(n: int) -> np.ndarray:
    return np.linspace(0.0, 1.0, n)


def _write_xy_csv(path: Path, header, columns) -> None:
    lines = [",".join(header)]
    for row in zip(*columns):
        lines.append(",".join([f"{row[0]:.6f}"] + [f"{v:.12e}" for v in row[1:]]))
    path.write_text("\n".join(lines) + "\n")


def cmd_solve(cfg: RunConfig) -> int:
    out = _prepare_out(cfg)
    exp = cfg.experiment
    degree = cfg.solve_N if cfg.solve_N is not None else exp.ref_degree
    try:
        sol = solve(assemble(cfg.problem, degree, gauss_legendre(exp.nodes)), cfg.problem)
    except (ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"error: solver failed at N={degree}: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    x = _grid(cfg.grid)
    u = evaluate_u(sol, x)
    (out / "solution.json").write_text(sol.to_json() + "\n")
    _write_xy_csv(out / "solution.csv", ["x", "u"], [x, u])
    if "svg" in cfg.formats:
        svg = line_plot_svg(x, {f"u_{degree}": u}, title=f"{exp.name}: solution")
        (out / "solution.svg").write_text(svg)
    print(f"beta={sol.params.beta:.6f} N={degree} max|u|={np.max(np.abs(u)):.6e} -> {out}")
    return 0


def cmd_converge(cfg: RunConfig) -> int:
    out = _prepare_out(cfg)
    exp = cfg.experiment
    try:
        report, ref, sols = run_experiment(exp, cache_dir=cache_dir(), return_solutions=True)
    except ExperimentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    if "csv" in cfg.formats:
        (out / "convergence.csv").write_text(report.to_csv())
    if "json" in cfg.formats:
        (out / "convergence.json").write_text(report.to_json() + "\n")
    if "plot-data" in cfg.formats or "svg" in cfg.formats:
        x = _grid(cfg.grid)
        curves = error_curves(ref, sols, x)
        if "plot-data" in cfg.formats:
            names = ["x"] + [f"err_N{n}" for n in curves]
            _write_xy_csv(out / "error_curves.csv", names, [x, *curves.values()])
        if "svg" in cfg.formats:
            series = {f"N={n}": v for n, v in curves.items()}
            (out / "error_curves.svg").write_text(line_plot_svg(x, series, title=f"{exp.name}: u_ref - u_N"))
            u_ref = evaluate_u(ref, x)
            (out / "reference.svg").write_text(
                line_plot_svg(x, {"u_ref": u_ref}, title=f"{exp.name}: reference solution")
            )
    sys.stdout.write(report.to_csv())
    return 0


def cmd_params(alpha: float, r: float) -> int:
    try:
        p = fractional_params(alpha, r, 5)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    print(json.dumps({"alpha": alpha, "r": r, "beta": p.beta, "c_star_star": p.c_star_star, "lambda": list(p.lam)}, indent=2))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fracspec",
        description="Petrov-Galerkin Jacobi spectral solver for fractional diffusion, advection, reaction problems.",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_ in (("solve", "solve once and sample u_N"), ("converge", "run a convergence study")):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--config", required=True, type=Path)
        p.add_argument("--out", type=Path, help="output directory (overrides output.dir)")
        p.add_argument("--nodes", type=int, help="quadrature node count override")
        p.add_argument("--nref", type=int, help="reference N override")
        p.add_argument("--format", dest="formats", help="comma list of csv,json,plot-data,svg")
    p = sub.add_parser("params", help="print beta, c** and lambda_0..lambda_5")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--r", type=float, required=True)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    if args.command == "params":
        return cmd_params(args.alpha, args.r)
    try:
        cfg = load_config(args.config).with_overrides(
            out=args.out, nodes=args.nodes, nref=args.nref, formats=args.formats
        )
        if args.command == "solve":
            return cmd_solve(cfg)
        return cmd_converge(cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
