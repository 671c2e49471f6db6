"""Petrov-Galerkin assembly and solve for

    L_r^alpha u + b(x) u' + c(x) u = f(x) on (0, 1),  u(0) = u(1) = 0,

with trial functions omega * Ghat_j^{(alpha-beta, beta)} and test functions
Ghat_i^{(beta, alpha-beta)} weighted by omega* = (1-x)^beta x^(alpha-beta).
The fractional diffusion block is diagonal by the eigenrelation and is never
integrated numerically.
"""

from __future__ import annotations

import json
import logging
import warnings
from dataclasses import dataclass, field

import numpy as np

from .quadrature import QuadRule, composite, gauss_legendre
from .spectral import Expansion, synthesize, synthesize_deriv, weight_eval
from .special_fn import (
    FractionalParams,
    fractional_params,
    orthonormal_deriv_all,
    orthonormal_eval_all,
)

log = logging.getLogger(__name__)

__all__ = [
    "CoefficientFn",
    "Constant",
    "PiecewiseConstant",
    "Polynomial",
    "coefficient_from_dict",
    "ProblemSpec",
    "DiscreteSystem",
    "Solution",
    "AssemblyError",
    "SingularSystemError",
    "assemble",
    "solve",
    "evaluate_u",
    "solve_problem",
]


class AssemblyError(ArithmeticError):
    pass


class SingularSystemError(np.linalg.LinAlgError):
    pass


class CoefficientFn:
    """A data function of the problem (b, c or f).

    Subclasses expose ``breakpoints``: interior jump locations used to split
    quadrature.
    """

    def __call__(self, x):
        raise NotImplementedError

    def derivative(self, x):
        raise NotImplementedError

    def is_zero(self) -> bool:
        return False

    def to_dict(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class Constant(CoefficientFn):
    value: float
    breakpoints = ()

    def __call__(self, x):
        return np.full(np.shape(x), float(self.value))

    def derivative(self, x):
        return np.zeros(np.shape(x))

    def is_zero(self):
        return self.value == 0.0

    def to_dict(self):
        return {"type": "constant", "value": self.value}


@dataclass(frozen=True)
class PiecewiseConstant(CoefficientFn):
    """values[k] on (bp[k-1], bp[k]]; the last piece is (bp[-1], 1)."""

    breakpoints: tuple
    values: tuple

    def __post_init__(self):
        bps = tuple(float(b) for b in self.breakpoints)
        vals = tuple(float(v) for v in self.values)
        if len(vals) != len(bps) + 1:
            raise ValueError("piecewise constant needs len(values) == len(breakpoints) + 1")
        if any(not 0.0 < b < 1.0 for b in bps) or list(bps) != sorted(set(bps)):
            raise ValueError("breakpoints must be strictly ascending inside (0, 1)")
        object.__setattr__(self, "breakpoints", bps)
        object.__setattr__(self, "values", vals)

    def __call__(self, x):
        idx = np.searchsorted(np.asarray(self.breakpoints), np.asarray(x, dtype=float), side="left")
        return np.asarray(self.values)[idx]

    def derivative(self, x):
        # the jump part is dropped
        return np.zeros(np.shape(x))

    def is_zero(self):
        return all(v == 0.0 for v in self.values)

    def to_dict(self):
        return {"type": "piecewise", "breakpoints": list(self.breakpoints), "values": list(self.values)}


@dataclass(frozen=True)
class Polynomial(CoefficientFn):
    """sum_k coeffs[k] x**k."""

    coeffs: tuple
    breakpoints = ()

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(float(c) for c in self.coeffs) or (0.0,))

    def __call__(self, x):
        return np.polynomial.polynomial.polyval(np.asarray(x, dtype=float), self.coeffs)

    def derivative(self, x):
        d = np.polynomial.polynomial.polyder(self.coeffs)
        return np.polynomial.polynomial.polyval(np.asarray(x, dtype=float), d)

    def is_zero(self):
        return all(c == 0.0 for c in self.coeffs)

    def to_dict(self):
        return {"type": "polynomial", "coeffs": list(self.coeffs)}


def coefficient_from_dict(d) -> CoefficientFn:
    """Build a CoefficientFn from a config mapping or a bare number."""
    if isinstance(d, (int, float)):
        return Constant(float(d))
    kind = d.get("type")
    if kind == "constant":
        return Constant(float(d["value"]))
    if kind == "piecewise":
        return PiecewiseConstant(tuple(d["breakpoints"]), tuple(d["values"]))
    if kind == "polynomial":
        return Polynomial(tuple(d["coeffs"]))
    raise ValueError(f"unknown coefficient type {kind!r}")


@dataclass(frozen=True)
class ProblemSpec:
    alpha: float
    r: float
    b: CoefficientFn = field(default_factory=lambda: Constant(0.0))
    c: CoefficientFn = field(default_factory=lambda: Constant(0.0))
    f: CoefficientFn = field(default_factory=lambda: Constant(1.0))

    def __post_init__(self):
        if not 1.0 < self.alpha < 2.0:
            raise ValueError(f"alpha must lie in (1, 2), got {self.alpha}")
        if not 0.0 <= self.r <= 1.0:
            raise ValueError(f"r must lie in [0, 1], got {self.r}")
        self.check_sign_condition()

    def check_sign_condition(self, npts: int = 1000) -> bool:
        """Warn (do not fail) if c - b'/2 < 0 somewhere on an interior grid."""
        x = (np.arange(npts) + 0.5) / npts
        ok = bool(np.all(self.c(x) - 0.5 * self.b.derivative(x) >= 0.0))
        if not ok:
            warnings.warn("c(x) - b'(x)/2 >= 0 is violated; well-posedness is not guaranteed")
        return ok

    def to_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "r": self.r,
            "b": self.b.to_dict(),
            "c": self.c.to_dict(),
            "f": self.f.to_dict(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ProblemSpec":
        return cls(
            alpha=float(d["alpha"]),
            r=float(d["r"]),
            b=coefficient_from_dict(d.get("b", 0.0)),
            c=coefficient_from_dict(d.get("c", 0.0)),
            f=coefficient_from_dict(d.get("f", 1.0)),
        )


@dataclass(frozen=True, eq=False)
class DiscreteSystem:
    A: np.ndarray
    rhs: np.ndarray
    params: FractionalParams
    problem: ProblemSpec | None = None

    @property
    def N(self) -> int:
        return self.rhs.size - 1

    def to_dict(self) -> dict:
        return {
            "A": self.A.tolist(),
            "rhs": self.rhs.tolist(),
            "params": self.params.to_dict(),
        }


@dataclass(frozen=True, eq=False)
class Solution:
    phi: Expansion
    params: FractionalParams
    problem: ProblemSpec

    @property
    def N(self) -> int:
        return self.phi.degree

    def to_dict(self) -> dict:
        return {
            "problem": self.problem.to_dict(),
            "params": self.params.to_dict(),
            "phi": self.phi.to_dict(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_dict(cls, d: dict) -> "Solution":
        problem = ProblemSpec.from_dict(d["problem"])
        phi = Expansion.from_dict(d["phi"])
        params = fractional_params(problem.alpha, problem.r, phi.degree)
        return cls(phi, params, problem)


def _advection_trial(params: FractionalParams, N: int, x: np.ndarray) -> np.ndarray:
    """Rows D[omega * Ghat_j](x), by the product rule."""
    p, q = params.alpha - params.beta, params.beta
    trial = params.trial_basis
    dw = -p * (1.0 - x) ** (p - 1.0) * x**q + q * (1.0 - x) ** p * x ** (q - 1.0)
    w = (1.0 - x) ** p * x**q
    return dw * orthonormal_eval_all(trial, N, x) + w * orthonormal_deriv_all(trial, N, x)


def assemble(problem: ProblemSpec, N: int, rule: QuadRule | None = None) -> DiscreteSystem:
    """Matrix A[i, j] = B(Ghat_j^{trial}, Ghat_i^{test}) and rhs[i] = <f, Ghat_i^{test}>_{omega*}."""
    if N < 0:
        raise ValueError("N must be nonnegative")
    rule = rule or gauss_legendre(200)
    params = fractional_params(problem.alpha, problem.r, N)
    trial, test = params.trial_basis, params.test_basis

    A = np.diag(np.asarray(params.lam, dtype=float))

    # non-finite data is caught below with the offending index
    with np.errstate(invalid="ignore", over="ignore"):
        if not problem.b.is_zero():
            cr = composite(rule, problem.b.breakpoints)
            x = cr.nodes
            tw = orthonormal_eval_all(test, N, x) * (cr.weights * weight_eval(test, x) * problem.b(x))
            A = A + tw @ _advection_trial(params, N, x).T

        if not problem.c.is_zero():
            cr = composite(rule, problem.c.breakpoints)
            x = cr.nodes
            # omega* omega = (1-x)^alpha x^alpha
            tw = orthonormal_eval_all(test, N, x) * (cr.weights * ((1.0 - x) * x) ** problem.alpha * problem.c(x))
            A = A + tw @ orthonormal_eval_all(trial, N, x).T

        cr = composite(rule, problem.f.breakpoints)
        x = cr.nodes
        rhs = orthonormal_eval_all(test, N, x) @ (cr.weights * weight_eval(test, x) * problem.f(x))

    if not np.all(np.isfinite(A)):
        i, j = np.argwhere(~np.isfinite(A))[0]
        raise AssemblyError(f"non-finite matrix entry at (i={i}, j={j})")
    if not np.all(np.isfinite(rhs)):
        i = int(np.argmax(~np.isfinite(rhs)))
        raise AssemblyError(f"non-finite right-hand side entry at i={i}")
    return DiscreteSystem(A, rhs, params, problem)


def solve(system: DiscreteSystem, problem: ProblemSpec | None = None) -> Solution:
    """Dense LU solve (partial pivoting) of A c = rhs."""
    problem = problem or system.problem
    if problem is None:
        raise ValueError("a ProblemSpec is required to package the solution")
    A, rhs = system.A, system.rhs
    try:
        coeffs = np.linalg.solve(A, rhs)
    except np.linalg.LinAlgError as exc:
        raise SingularSystemError(f"singular system at N={system.N}: {exc}") from exc
    cond = np.linalg.cond(A)
    if not np.isfinite(cond) or cond > 1e12:
        raise SingularSystemError(f"system at N={system.N} is numerically singular (cond={cond:.2e})")
    scale = np.max(np.abs(rhs))
    if scale > 0:
        res = np.max(np.abs(A @ coeffs - rhs)) / scale
        if res > 1e-10:
            raise SingularSystemError(f"relative residual {res:.2e} at N={system.N}")
    log.debug("solved N=%d, cond=%.3e", system.N, cond)
    return Solution(Expansion(system.params.trial_basis, coeffs), system.params, problem)


def solve_problem(problem: ProblemSpec, N: int, rule: QuadRule | None = None) -> Solution:
    return solve(assemble(problem, N, rule), problem)


def evaluate_u(sol: Solution, xs) -> np.ndarray:
    """u_N(x) = omega(x) phi_N(x); exactly zero at x = 0 and x = 1."""
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    if np.any((xs < 0.0) | (xs > 1.0)):
        raise ValueError("evaluation points must lie in [0, 1]")
    out = np.zeros_like(xs)
    inner = (xs > 0.0) & (xs < 1.0)
    xi = xs[inner]
    out[inner] = weight_eval(sol.params.trial_basis, xi) * synthesize(sol.phi, xi)
    return out


def evaluate_du(sol: Solution, xs) -> np.ndarray:
    """u_N'(x) at interior points."""
    xs = np.asarray(xs, dtype=float)
    p, q = sol.params.alpha - sol.params.beta, sol.params.beta
    w = (1.0 - xs) ** p * xs**q
    dw = -p * (1.0 - xs) ** (p - 1.0) * xs**q + q * (1.0 - xs) ** p * xs ** (q - 1.0)
    return dw * synthesize(sol.phi, xs) + w * synthesize_deriv(sol.phi, xs)
