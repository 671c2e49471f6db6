"""Gauss-Legendre rules on (0, 1) and composite integration across breakpoints."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

__all__ = ["QuadRule", "IntegrationError", "gauss_legendre", "integrate", "composite"]


class IntegrationError(ArithmeticError):
    pass


@dataclass(frozen=True, eq=False)
class QuadRule:
    nodes: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        self.nodes.setflags(write=False)
        self.weights.setflags(write=False)

    def __len__(self):
        return self.nodes.size


def _legendre_and_deriv(n: int, t: np.ndarray):
    p0 = np.ones_like(t)
    p1 = t.copy()
    for k in range(2, n + 1):
        p0, p1 = p1, ((2 * k - 1) * t * p1 - (k - 1) * p0) / k
    # P_n' from P_n and P_{n-1}
    dp = n * (t * p1 - p0) / (t * t - 1.0)
    return p1, dp


def gauss_legendre(n: int, tol: float = 1e-15, maxiter: int = 100) -> QuadRule:
    """n-point Gauss-Legendre rule mapped to (0, 1).

    Roots of P_n by Newton iteration from Chebyshev-type initial guesses.
    Only the upper half is computed; the lower half is its mirror image, so
    nodes are exactly symmetric about 1/2 and weights exactly palindromic.
    """
    if n < 1:
        raise ValueError("node count must be >= 1")
    if n == 1:
        return QuadRule(np.array([0.5]), np.array([1.0]))
    m = (n + 1) // 2
    i = np.arange(1, m + 1)
    t = np.cos(np.pi * (i - 0.25) / (n + 0.5))
    for _ in range(maxiter):
        p, dp = _legendre_and_deriv(n, t)
        dt = p / dp
        t = t - dt
        if np.max(np.abs(dt)) <= tol:
            break
    else:
        raise IntegrationError(f"Legendre root finding did not converge for n={n}")
    _, dp = _legendre_and_deriv(n, t)
    w = 2.0 / ((1.0 - t * t) * dp * dp)
    if n % 2:
        t[-1] = 0.0
    # t is descending in (0, 1]; assemble the full symmetric rule ascending.
    upper_t, upper_w = t[::-1], w[::-1]
    if n % 2:
        full_t = np.concatenate([-upper_t[:0:-1], upper_t])
        full_w = np.concatenate([upper_w[:0:-1], upper_w])
    else:
        full_t = np.concatenate([-upper_t[::-1], upper_t])
        full_w = np.concatenate([upper_w[::-1], upper_w])
    return QuadRule(0.5 * (full_t + 1.0), 0.5 * full_w)


def composite(rule: QuadRule, breakpoints: Sequence[float] = ()) -> QuadRule:
    """The rule replicated on each sub-interval of (0, 1) cut at ``breakpoints``."""
    bps = sorted(set(float(b) for b in breakpoints))
    if not bps:
        return rule
    for bp in bps:
        if not 0.0 < bp < 1.0:
            raise ValueError(f"breakpoint {bp} not strictly inside (0, 1)")
    edges = [0.0, *bps, 1.0]
    nodes, weights = [], []
    for lo, hi in zip(edges[:-1], edges[1:]):
        h = hi - lo
        nodes.append(lo + h * rule.nodes)
        weights.append(h * rule.weights)
    return QuadRule(np.concatenate(nodes), np.concatenate(weights))


def integrate(
    rule: QuadRule,
    g: Callable[[np.ndarray], np.ndarray],
    breakpoints: Sequence[float] = (),
) -> float:
    """Integral of a vectorized ``g`` over (0, 1); never samples 0 or 1."""
    cr = composite(rule, breakpoints)
    vals = np.asarray(g(cr.nodes), dtype=float)
    if vals.shape != cr.nodes.shape:
        vals = np.broadcast_to(vals, cr.nodes.shape)
    bad = ~np.isfinite(vals)
    if bad.any():
        x = cr.nodes[np.argmax(bad)]
        raise IntegrationError(f"integrand is not finite at node x={x!r}")
    return float(vals @ cr.weights)
