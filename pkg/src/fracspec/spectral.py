"""Expansions in orthonormal shifted-Jacobi bases."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .quadrature import QuadRule, composite, gauss_legendre, IntegrationError
from .special_fn import JacobiBasis, orthonormal_eval_all, orthonormal_deriv_all

__all__ = [
    "Expansion",
    "analyze",
    "synthesize",
    "synthesize_deriv",
    "sobolev_norm",
    "weight_eval",
]

DEFAULT_NODES = 200


@dataclass(frozen=True, eq=False)
class Expansion:
    """Coefficients v_0..v_N against the orthonormal functions of ``basis``."""

    basis: JacobiBasis
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=float)
        if c.ndim != 1 or c.size == 0:
            raise ValueError("coeffs must be a nonempty 1-d sequence")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1

    def __eq__(self, other):
        if not isinstance(other, Expansion):
            return NotImplemented
        return self.basis == other.basis and np.array_equal(self.coeffs, other.coeffs)

    def __call__(self, x):
        return synthesize(self, x)

    def to_dict(self) -> dict:
        return {"basis": self.basis.to_dict(), "coeffs": [float(v) for v in self.coeffs]}

    @classmethod
    def from_dict(cls, d: dict) -> "Expansion":
        return cls(JacobiBasis.from_dict(d["basis"]), d["coeffs"])

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_json(cls, s: str) -> "Expansion":
        return cls.from_dict(json.loads(s))


def weight_eval(basis: JacobiBasis, x):
    """(1 - x)**a * x**b."""
    xa = np.asarray(x, dtype=float)
    if (basis.a < 0 and np.any(xa >= 1.0)) or (basis.b < 0 and np.any(xa <= 0.0)):
        raise ValueError("weight with a negative exponent is singular at the endpoint")
    if np.any((xa < 0.0) | (xa > 1.0)):
        raise ValueError("x must lie in [0, 1]")
    w = (1.0 - xa) ** basis.a * xa**basis.b
    return float(w) if w.ndim == 0 else w


def analyze(
    f: Callable[[np.ndarray], np.ndarray],
    basis: JacobiBasis,
    N: int,
    rule: QuadRule | None = None,
    breakpoints: Sequence[float] = (),
) -> Expansion:
    """Weighted L2 projection of ``f`` onto degree <= N, by quadrature."""
    if N < 0:
        raise ValueError("N must be nonnegative")
    rule = rule or gauss_legendre(DEFAULT_NODES)
    cr = composite(rule, breakpoints)
    x = cr.nodes
    fx = np.broadcast_to(np.asarray(f(x), dtype=float), x.shape)
    if not np.all(np.isfinite(fx)):
        bad = x[np.argmax(~np.isfinite(fx))]
        raise IntegrationError(f"integrand is not finite at node x={bad!r}")
    g = orthonormal_eval_all(basis, N, x)
    return Expansion(basis, g @ (cr.weights * weight_eval(basis, x) * fx))


def synthesize(e: Expansion, x):
    """Sum of v_j * Ghat_j(x)."""
    xa = np.atleast_1d(np.asarray(x, dtype=float))
    vals = e.coeffs @ orthonormal_eval_all(e.basis, e.degree, xa)
    return float(vals[0]) if np.ndim(x) == 0 else vals


def synthesize_deriv(e: Expansion, x):
    xa = np.atleast_1d(np.asarray(x, dtype=float))
    vals = e.coeffs @ orthonormal_deriv_all(e.basis, e.degree, xa)
    return float(vals[0]) if np.ndim(x) == 0 else vals


def sobolev_norm(e: Expansion | np.ndarray, s: float) -> float:
    """Coefficient-decay norm (sum_j (1 + j^2)^s v_j^2)^(1/2)."""
    c = e.coeffs if isinstance(e, Expansion) else np.asarray(e, dtype=float)
    j = np.arange(c.size, dtype=float)
    return float(np.sqrt(np.sum((1.0 + j * j) ** s * c * c)))
