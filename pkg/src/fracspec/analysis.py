"""Convergence studies against a high-degree reference solution."""

from __future__ import annotations

import csv
import hashlib
import io
import json
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import NamedTuple, Sequence

import numpy as np

from .quadrature import gauss_legendre
from .solver import ProblemSpec, Solution, assemble, solve, evaluate_u
from .spectral import sobolev_norm
from .special_fn import JacobiBasis, orthonormal_eval_all, solve_beta

log = logging.getLogger(__name__)

__all__ = [
    "BasisMismatchError",
    "ExperimentSpec",
    "ConvergenceRow",
    "ConvergenceReport",
    "PredictedRates",
    "error_norms",
    "u_sobolev_error",
    "fit_rate",
    "predicted_rates",
    "run_experiment",
    "reference_solution",
    "error_curves",
]


class BasisMismatchError(ValueError):
    pass


class ExperimentError(RuntimeError):
    pass


@dataclass(frozen=True)
class ExperimentSpec:
    """One convergence study.

    ``n_counts_terms`` reads every N (including ``N_ref``) as the number of
    basis functions, i.e. polynomial degree N - 1. ``h_norm`` selects how the
    H^{alpha/2} error is measured: ``"u"`` expands u_ref - u_N in the
    omega^{-1}-weighted Jacobi basis, truncated to the reference size;
    ``"phi"`` uses the coefficient-decay norm of phi_ref - phi_N directly.
    """

    problem: ProblemSpec
    N_values: tuple
    N_ref: int = 40
    nodes: int = 200
    f_regularity: float = math.inf
    n_counts_terms: bool = False
    h_norm: str = "u"
    name: str = "experiment"

    def __post_init__(self):
        nv = tuple(int(n) for n in self.N_values)
        object.__setattr__(self, "N_values", nv)
        if not nv:
            raise ValueError("N_values must be nonempty")
        if list(nv) != sorted(set(nv)):
            raise ValueError("N_values must be strictly ascending")
        if max(nv) >= self.N_ref:
            raise ValueError("max(N_values) must be below N_ref")
        if min(nv) < (1 if self.n_counts_terms else 0):
            raise ValueError("N_values must describe at least one basis function")
        if self.h_norm not in ("u", "phi"):
            raise ValueError(f"h_norm must be 'u' or 'phi', got {self.h_norm!r}")
        if self.nodes < 1:
            raise ValueError("nodes must be positive")

    def degree(self, n: int) -> int:
        return n - 1 if self.n_counts_terms else n

    @property
    def ref_degree(self) -> int:
        return self.degree(self.N_ref)


@dataclass(frozen=True)
class ConvergenceRow:
    N: int
    e_L2: float
    kappa_L2: float | None
    e_H: float
    kappa_H: float | None


class PredictedRates(NamedTuple):
    beta: float
    s_tilde: float
    kappa_L2: float
    kappa_H: float


@dataclass
class ConvergenceReport:
    rows: list
    predicted: PredictedRates
    name: str = "experiment"
    settings: dict = field(default_factory=dict)

    @property
    def beta(self) -> float:
        return self.predicted.beta

    @property
    def s_tilde(self) -> float:
        return self.predicted.s_tilde

    def row(self, N: int) -> ConvergenceRow:
        for r in self.rows:
            if r.N == N:
                return r
        raise KeyError(N)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["N", "e_L2", "kappa_L2", "e_H", "kappa_H"])
        for r in self.rows:
            w.writerow([r.N, _sci(r.e_L2), _rate(r.kappa_L2), _sci(r.e_H), _rate(r.kappa_H)])
        w.writerow(["Pred.", "", _rate(self.predicted.kappa_L2), "", _rate(self.predicted.kappa_H)])
        return buf.getvalue()

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "beta": self.predicted.beta,
            "s_tilde": _json_float(self.predicted.s_tilde),
            "predicted": {"kappa_L2": self.predicted.kappa_L2, "kappa_H": self.predicted.kappa_H},
            "rows": [
                {"N": r.N, "e_L2": r.e_L2, "kappa_L2": r.kappa_L2, "e_H": r.e_H, "kappa_H": r.kappa_H}
                for r in self.rows
            ],
            "settings": self.settings,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def _sci(v: float) -> str:
    return f"{v:.2E}"


def _rate(v) -> str:
    return "" if v is None else f"{v:.2f}"


def _json_float(v):
    return "inf" if v == math.inf else v


def _check_compatible(ref: Solution, approx: Solution) -> None:
    if ref.phi.basis != approx.phi.basis:
        raise BasisMismatchError(f"bases differ: {ref.phi.basis} vs {approx.phi.basis}")
    if ref.N < approx.N:
        raise BasisMismatchError("reference degree is below the approximation degree")


def _coeff_diff(ref: Solution, approx: Solution) -> np.ndarray:
    e = np.array(ref.phi.coeffs, dtype=float)
    e[: approx.N + 1] -= approx.phi.coeffs
    return e


def error_norms(ref: Solution, approx: Solution, h_norm: str = "phi", terms: int | None = None):
    """(e_L2, e_H) for u_ref - u_N.

    e_L2 is the L^2_{omega^{-1}} norm of u_ref - u_N, which equals the
    Euclidean norm of the phi-coefficient difference. With ``h_norm="phi"``,
    e_H is sum_j (1 + j^2)^{alpha/2} e_j^2 under a square root; with
    ``h_norm="u"`` it is :func:`u_sobolev_error` at s = alpha/2.
    """
    _check_compatible(ref, approx)
    e = _coeff_diff(ref, approx)
    alpha = ref.params.alpha
    e_l2 = float(np.sqrt(e @ e))
    if h_norm == "phi":
        e_h = sobolev_norm(e, alpha / 2.0)
    elif h_norm == "u":
        e_h = u_sobolev_error(ref, approx, alpha / 2.0, terms=terms)
    else:
        raise ValueError(f"unknown h_norm {h_norm!r}")
    return e_l2, e_h


def u_sobolev_error(ref: Solution, approx: Solution, s: float, terms: int | None = None) -> float:
    """Coefficient-decay H^s norm of z = u_ref - u_N in the omega^{-1} basis.

    z_j = int omega^{-1} z Ghat_j^{(-(alpha-beta), -beta)} dx
        = int (phi_ref - phi_N) Ghat_j^{(-(alpha-beta), -beta)} dx,
    a polynomial integrand, so Gauss-Legendre is exact. The expansion of z is
    infinite; it is truncated to ``terms`` coefficients (default: the number
    of reference coefficients).
    """
    _check_compatible(ref, approx)
    terms = ref.N + 1 if terms is None else int(terms)
    trial = ref.phi.basis
    dual = JacobiBasis(-trial.a, -trial.b)
    e = _coeff_diff(ref, approx)
    rule = gauss_legendre(max(200, (ref.N + terms) // 2 + 2))
    x, w = rule.nodes, rule.weights
    zeta = e @ orthonormal_eval_all(trial, ref.N, x)
    z = orthonormal_eval_all(dual, terms - 1, x) @ (w * zeta)
    return sobolev_norm(z, s)


def fit_rate(errors: Sequence[tuple]) -> list:
    """kappa_k = ln(e_{k-1}/e_k) / ln(N_k/N_{k-1}) for consecutive pairs."""
    pairs = [(float(n), float(e)) for n, e in errors]
    for n, e in pairs:
        if not e > 0:
            raise ValueError(f"error at N={n:g} must be positive, got {e!r}")
    return [
        math.log(e0 / e1) / math.log(n1 / n0)
        for (n0, e0), (n1, e1) in zip(pairs[:-1], pairs[1:])
    ]


def predicted_rates(problem: ProblemSpec, s: float = math.inf) -> PredictedRates:
    """Regularity index s~ and the resulting L2 / energy-norm rates."""
    alpha = problem.alpha
    if s < -alpha / 2.0:
        raise ValueError("f regularity s must be >= -alpha/2")
    beta = solve_beta(alpha, problem.r)
    shift = -1.0 if not problem.b.is_zero() else 1.0
    s_tilde = min(s, alpha + (alpha - beta) + shift, alpha + beta + shift)
    return PredictedRates(beta, s_tilde, s_tilde + alpha, s_tilde + alpha / 2.0)


def _cache_key(problem: ProblemSpec, degree: int, nodes: int) -> str:
    blob = json.dumps({"problem": problem.to_dict(), "N_ref": degree, "nodes": nodes}, sort_keys=True)
    return hashlib.sha256(blob.encode()).hexdigest()[:24]


def reference_solution(problem: ProblemSpec, degree: int, nodes: int = 200, cache_dir=None) -> Solution:
    """Solve at the reference degree, reusing a cached JSON copy if present."""
    path = None
    if cache_dir is not None:
        path = Path(cache_dir) / f"ref-{_cache_key(problem, degree, nodes)}.json"
        if path.exists():
            try:
                sol = Solution.from_dict(json.loads(path.read_text()))
                log.debug("reference loaded from %s", path)
                return sol
            except (ValueError, KeyError, json.JSONDecodeError):
                log.warning("ignoring unreadable cache file %s", path)
    sol = solve(assemble(problem, degree, gauss_legendre(nodes)), problem)
    if path is not None:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(sol.to_json())
    return sol


def _safe_rates(labels, errs):
    out = [None]
    for k in range(1, len(errs)):
        if errs[k - 1] > 0 and errs[k] > 0:
            out.append(fit_rate([(labels[k - 1], errs[k - 1]), (labels[k], errs[k])])[0])
        else:
            out.append(None)
    return out


def run_experiment(spec: ExperimentSpec, cache_dir=None, return_solutions: bool = False):
    """Reference solve, then one solve per N; errors, fitted and predicted rates."""
    rule = gauss_legendre(spec.nodes)
    try:
        ref = reference_solution(spec.problem, spec.ref_degree, spec.nodes, cache_dir)
    except (ArithmeticError, np.linalg.LinAlgError) as exc:
        raise ExperimentError(f"reference solve failed at N={spec.N_ref}: {exc}") from exc
    sols = {}
    e_l2, e_h = [], []
    for n in spec.N_values:
        try:
            sol = solve(assemble(spec.problem, spec.degree(n), rule), spec.problem)
        except (ArithmeticError, np.linalg.LinAlgError) as exc:
            raise ExperimentError(f"solve failed at N={n}: {exc}") from exc
        sols[n] = sol
        a, h = error_norms(ref, sol, h_norm=spec.h_norm)
        e_l2.append(a)
        e_h.append(h)
    k_l2 = _safe_rates(spec.N_values, e_l2)
    k_h = _safe_rates(spec.N_values, e_h)
    rows = [
        ConvergenceRow(n, e_l2[i], k_l2[i], e_h[i], k_h[i]) for i, n in enumerate(spec.N_values)
    ]
    settings = {
        "N_ref": spec.N_ref,
        "nodes": spec.nodes,
        "n_counts_terms": spec.n_counts_terms,
        "h_norm": spec.h_norm,
        "f_regularity": _json_float(spec.f_regularity),
        "problem": spec.problem.to_dict(),
    }
    report = ConvergenceReport(rows, predicted_rates(spec.problem, spec.f_regularity), spec.name, settings)
    if return_solutions:
        return report, ref, sols
    return report


def error_curves(ref: Solution, sols: dict, xs) -> dict:
    """Pointwise u_ref - u_N on ``xs`` for each labelled solution."""
    u_ref = evaluate_u(ref, xs)
    return {n: u_ref - evaluate_u(s, xs) for n, s in sols.items()}
