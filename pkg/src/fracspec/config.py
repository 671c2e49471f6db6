"""YAML run configuration for the command-line tools."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from pathlib import Path

import yaml

from .analysis import ExperimentSpec
from .solver import ProblemSpec, coefficient_from_dict

__all__ = ["ConfigError", "RunConfig", "load_config", "parse_config", "dump_config"]

FORMATS = ("csv", "json", "plot-data", "svg")


class ConfigError(ValueError):
    """Invalid configuration; the message names the offending key."""


@dataclass(frozen=True)
class RunConfig:
    experiment: ExperimentSpec
    out_dir: Path = Path("out")
    formats: tuple = ("csv", "json")
    grid: int = 1001
    solve_N: int | None = None

    @property
    def problem(self) -> ProblemSpec:
        return self.experiment.problem

    def with_overrides(self, out=None, nodes=None, nref=None, formats=None) -> "RunConfig":
        cfg = self
        exp = self.experiment
        try:
            if nodes is not None:
                exp = replace(exp, nodes=int(nodes))
            if nref is not None:
                exp = replace(exp, N_ref=int(nref))
        except ValueError as exc:
            raise ConfigError(f"override: {exc}") from exc
        cfg = replace(cfg, experiment=exp)
        if out is not None:
            cfg = replace(cfg, out_dir=Path(out))
        if formats is not None:
            cfg = replace(cfg, formats=_formats(formats, "--format"))
        return cfg

    def to_dict(self) -> dict:
        exp = self.experiment
        d = {
            "name": exp.name,
            "problem": {**exp.problem.to_dict(), "f_regularity": _dump_float(exp.f_regularity)},
            "study": {
                "N_values": list(exp.N_values),
                "N_ref": exp.N_ref,
                "nodes": exp.nodes,
                "n_counts_terms": exp.n_counts_terms,
                "h_norm": exp.h_norm,
            },
            "output": {"dir": str(self.out_dir), "formats": list(self.formats), "grid": self.grid},
        }
        if self.solve_N is not None:
            d["solve"] = {"N": self.solve_N}
        return d


def _dump_float(v: float):
    return "inf" if v == math.inf else v


def _formats(value, key) -> tuple:
    if isinstance(value, str):
        value = [v.strip() for v in value.split(",") if v.strip()]
    if not isinstance(value, (list, tuple)):
        raise ConfigError(f"{key}: expected a list of formats")
    for v in value:
        if v not in FORMATS:
            raise ConfigError(f"{key}: unknown format {v!r} (choose from {', '.join(FORMATS)})")
    return tuple(value)


def _get(d: dict, key: str, path: str, required=True, default=None):
    if not isinstance(d, dict):
        raise ConfigError(f"{path}: expected a mapping")
    if key not in d:
        if required:
            raise ConfigError(f"{path}.{key}: missing required key".lstrip("."))
        return default
    return d[key]


def _number(v, key):
    if isinstance(v, str) and v.strip().lower() in ("inf", "+inf", "infinity"):
        return math.inf
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(f"{key}: expected a number, got {v!r}")
    return float(v)


def parse_config(data: dict) -> RunConfig:
    if not isinstance(data, dict):
        raise ConfigError("config: top level must be a mapping")
    known = {"name", "problem", "study", "output", "solve"}
    for k in data:
        if k not in known:
            raise ConfigError(f"{k}: unknown key")
    prob = _get(data, "problem", "")
    alpha = _number(_get(prob, "alpha", "problem"), "problem.alpha")
    r = _number(_get(prob, "r", "problem"), "problem.r")
    coeffs = {}
    for key, default in (("b", 0.0), ("c", 0.0), ("f", 1.0)):
        try:
            coeffs[key] = coefficient_from_dict(prob.get(key, default))
        except (ValueError, KeyError, TypeError, AttributeError) as exc:
            raise ConfigError(f"problem.{key}: {exc}") from exc
    try:
        problem = ProblemSpec(alpha=alpha, r=r, **coeffs)
    except ValueError as exc:
        raise ConfigError(f"problem: {exc}") from exc
    f_reg = _number(prob.get("f_regularity", "inf"), "problem.f_regularity")

    study = _get(data, "study", "")
    n_values = _get(study, "N_values", "study")
    if not isinstance(n_values, list) or not n_values:
        raise ConfigError("study.N_values: must be a nonempty list")
    if not all(isinstance(n, int) and not isinstance(n, bool) for n in n_values):
        raise ConfigError("study.N_values: entries must be integers")
    if n_values != sorted(set(n_values)):
        raise ConfigError("study.N_values: must be strictly ascending")
    h_norm = study.get("h_norm", "u")
    if h_norm not in ("u", "phi"):
        raise ConfigError(f"study.h_norm: must be 'u' or 'phi', got {h_norm!r}")
    try:
        exp = ExperimentSpec(
            problem=problem,
            N_values=tuple(n_values),
            N_ref=int(study.get("N_ref", 40)),
            nodes=int(study.get("nodes", 200)),
            f_regularity=f_reg,
            n_counts_terms=bool(study.get("n_counts_terms", False)),
            h_norm=h_norm,
            name=str(data.get("name", "experiment")),
        )
    except ValueError as exc:
        raise ConfigError(f"study: {exc}") from exc

    out = data.get("output", {}) or {}
    if not isinstance(out, dict):
        raise ConfigError("output: expected a mapping")
    grid = out.get("grid", 1001)
    if not isinstance(grid, int) or grid < 2:
        raise ConfigError("output.grid: must be an integer >= 2")
    solve_N = None
    if "solve" in data:
        solve_N = _get(data["solve"], "N", "solve")
        if not isinstance(solve_N, int) or solve_N < 0:
            raise ConfigError("solve.N: must be a nonnegative integer")
    return RunConfig(
        experiment=exp,
        out_dir=Path(out.get("dir", "out")),
        formats=_formats(out.get("formats", ["csv", "json"]), "output.formats"),
        grid=grid,
        solve_N=solve_N,
    )


def load_config(path) -> RunConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"config: cannot read {path}: {exc}") from exc
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"config: YAML parse error: {exc}") from exc
    return parse_config(data)


def dump_config(cfg: RunConfig) -> str:
    return yaml.safe_dump(cfg.to_dict(), sort_keys=False)
