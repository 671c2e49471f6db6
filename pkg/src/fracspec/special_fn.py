"""Special functions: log-gamma, shifted Jacobi polynomials on (0, 1), and the
boundary-exponent parameters of the two-sided fractional diffusion operator."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "JacobiBasis",
    "FractionalParams",
    "log_gamma",
    "jacobi_eval",
    "jacobi_eval_all",
    "jacobi_norm",
    "jacobi_deriv",
    "orthonormal_eval_all",
    "orthonormal_deriv_all",
    "solve_beta",
    "fractional_params",
    "NoRootError",
]


class NoRootError(ValueError):
    """Bisection failed to reach the residual tolerance."""


# Lanczos approximation, g = 607/128, 15 terms (Godfrey's coefficients).
_LANCZOS_G = 607.0 / 128.0
_LANCZOS_COEF = (
    0.99999999999999709182,
    57.156235665862923517,
    -59.597960355475491248,
    14.136097974741747174,
    -0.49191381609762019978,
    0.33994649984811888699e-4,
    0.46523628927048575665e-4,
    -0.98374475304879564677e-4,
    0.15808870322491248884e-3,
    -0.21026444172410488319e-3,
    0.21743961811521264320e-3,
    -0.16431810653676389022e-3,
    0.84418223983852743293e-4,
    -0.26190838401581408670e-4,
    0.36899182659531622704e-5,
)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)


def log_gamma(x: float) -> float:
    """Natural log of the gamma function for x > 0."""
    x = float(x)
    if not x > 0.0:
        raise ValueError(f"log_gamma requires x > 0, got {x!r}")
    if x < 0.5:
        # Gamma(x) = Gamma(x + 1) / x keeps the series argument away from 0.
        return log_gamma(x + 1.0) - math.log(x)
    if x == 1.0 or x == 2.0:
        return 0.0
    z = x - 1.0
    s = _LANCZOS_COEF[0]
    for k in range(1, len(_LANCZOS_COEF)):
        s += _LANCZOS_COEF[k] / (z + k)
    t = z + _LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (z + 0.5) * math.log(t) - t + math.log(s)


def _gamma_ratio(num: float, den: float) -> float:
    """Gamma(num) / Gamma(den) for positive arguments, via log space."""
    return math.exp(log_gamma(num) - log_gamma(den))


@dataclass(frozen=True)
class JacobiBasis:
    """Shifted Jacobi family on (0, 1) with weight (1 - x)**a * x**b."""

    a: float
    b: float

    def __post_init__(self):
        if not (self.a > -1.0 and self.b > -1.0):
            raise ValueError(f"Jacobi exponents must exceed -1, got a={self.a}, b={self.b}")

    def dual(self) -> "JacobiBasis":
        return JacobiBasis(self.b, self.a)

    def to_dict(self) -> dict:
        return {"a": self.a, "b": self.b}

    @classmethod
    def from_dict(cls, d: dict) -> "JacobiBasis":
        return cls(float(d["a"]), float(d["b"]))


def jacobi_eval_all(basis: JacobiBasis, n: int, x) -> np.ndarray:
    """Rows G_0 .. G_n evaluated at the points x, shape (n + 1, len(x)).

    Uses the three-term recurrence in t = 2x - 1.
    """
    a, b = basis.a, basis.b
    t = 2.0 * np.atleast_1d(np.asarray(x, dtype=float)) - 1.0
    out = np.empty((n + 1, t.size))
    out[0] = 1.0
    if n == 0:
        return out
    out[1] = 0.5 * (a - b + (a + b + 2.0) * t)
    apb = a + b
    for k in range(2, n + 1):
        a1 = 2.0 * k * (k + apb) * (2.0 * k + apb - 2.0)
        a2 = (2.0 * k + apb - 1.0) * (a * a - b * b)
        a3 = (2.0 * k + apb - 2.0) * (2.0 * k + apb - 1.0) * (2.0 * k + apb)
        a4 = 2.0 * (k + a - 1.0) * (k + b - 1.0) * (2.0 * k + apb)
        out[k] = ((a2 + a3 * t) * out[k - 1] - a4 * out[k - 2]) / a1
    return out


def jacobi_eval(basis: JacobiBasis, n: int, x):
    """G_n^{(a,b)}(x) = P_n^{(a,b)}(2x - 1). Scalar in, scalar out."""
    if n < 0:
        raise ValueError("degree must be nonnegative")
    vals = jacobi_eval_all(basis, n, x)[n]
    return float(vals[0]) if np.ndim(x) == 0 else vals


def jacobi_norm(basis: JacobiBasis, n: int) -> float:
    """Norm of G_n in L^2 with weight (1 - x)**a * x**b on (0, 1)."""
    if n < 0:
        raise ValueError("degree must be nonnegative")
    a, b = basis.a, basis.b
    if n == 0:
        # (a+b+1) Gamma(a+b+1) = Gamma(a+b+2); stays valid when a+b+1 <= 0.
        sq = math.exp(log_gamma(a + 1.0) + log_gamma(b + 1.0) - log_gamma(a + b + 2.0))
        return math.sqrt(sq)
    lg = (
        log_gamma(n + a + 1.0)
        + log_gamma(n + b + 1.0)
        - log_gamma(n + 1.0)
        - log_gamma(n + a + b + 1.0)
    )
    return math.sqrt(math.exp(lg) / (2.0 * n + a + b + 1.0))


def jacobi_norms(basis: JacobiBasis, n: int) -> np.ndarray:
    return np.array([jacobi_norm(basis, j) for j in range(n + 1)])


def _deriv_factor(basis: JacobiBasis, n: int, k: int) -> float:
    apb = basis.a + basis.b
    return _gamma_ratio(n + k + apb + 1.0, n + apb + 1.0)


def jacobi_deriv(basis: JacobiBasis, n: int, k: int, x):
    """k-th derivative of G_n^{(a,b)} at x; zero when k > n."""
    if k < 0 or n < 0:
        raise ValueError("degree and order must be nonnegative")
    if k == 0:
        return jacobi_eval(basis, n, x)
    if k > n:
        return 0.0 if np.ndim(x) == 0 else np.zeros(np.shape(x))
    shifted = JacobiBasis(basis.a + k, basis.b + k)
    return _deriv_factor(basis, n, k) * jacobi_eval(shifted, n - k, x)


def orthonormal_eval_all(basis: JacobiBasis, n: int, x) -> np.ndarray:
    """Rows of G_j / |||G_j|||, j = 0..n, at the points x."""
    return jacobi_eval_all(basis, n, x) / jacobi_norms(basis, n)[:, None]


def orthonormal_deriv_all(basis: JacobiBasis, n: int, x) -> np.ndarray:
    """First derivatives of the orthonormal functions, shape (n + 1, len(x))."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.zeros((n + 1, x.size))
    if n == 0:
        return out
    lowered = jacobi_eval_all(JacobiBasis(basis.a + 1.0, basis.b + 1.0), n - 1, x)
    norms = jacobi_norms(basis, n)
    for j in range(1, n + 1):
        out[j] = _deriv_factor(basis, j, 1) * lowered[j - 1] / norms[j]
    return out


def _ratio(alpha: float, beta: float) -> float:
    s_b = math.sin(math.pi * beta)
    return s_b / (math.sin(math.pi * (alpha - beta)) + s_b)


def _check_alpha_r(alpha: float, r: float) -> None:
    if not 1.0 < alpha < 2.0:
        raise ValueError(f"alpha must lie in (1, 2), got {alpha!r}")
    if not 0.0 <= r <= 1.0:
        raise ValueError(f"r must lie in [0, 1], got {r!r}")


def solve_beta(alpha: float, r: float, tol: float = 1e-14) -> float:
    """Right-endpoint exponent beta in [alpha - 1, 1] for the operator mix r.

    The ratio sin(pi b) / (sin(pi (alpha - b)) + sin(pi b)) falls from 1 at
    b = alpha - 1 to 0 at b = 1, so r = 0 gives beta = 1 and r = 1 gives
    beta = alpha - 1. Bisection; the residual is checked against ``tol``.
    """
    _check_alpha_r(alpha, r)
    if r == 0.0:
        return 1.0
    if r == 1.0:
        return alpha - 1.0
    eps = 1e-12
    lo, hi = alpha - 1.0 + eps, 1.0 - eps
    f_lo = r - _ratio(alpha, lo)
    if f_lo > 0:
        raise NoRootError(f"no root for alpha={alpha}, r={r} in bracket")
    # r - ratio(b) increases from <= 0 at lo to >= 0 at hi.
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        if r - _ratio(alpha, mid) < 0:
            lo = mid
        else:
            hi = mid
    beta = lo if abs(r - _ratio(alpha, lo)) <= abs(r - _ratio(alpha, hi)) else hi
    if abs(r - _ratio(alpha, beta)) > tol:
        raise NoRootError(
            f"beta residual {abs(r - _ratio(alpha, beta)):.3e} exceeds {tol:.1e} "
            f"for alpha={alpha}, r={r}"
        )
    return beta


@dataclass(frozen=True)
class FractionalParams:
    alpha: float
    r: float
    beta: float
    c_star_star: float
    lam: tuple

    @property
    def trial_basis(self) -> JacobiBasis:
        """Basis of the solution factor phi, weight omega = (1-x)^(alpha-beta) x^beta."""
        return JacobiBasis(self.alpha - self.beta, self.beta)

    @property
    def test_basis(self) -> JacobiBasis:
        return JacobiBasis(self.beta, self.alpha - self.beta)

    def to_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "r": self.r,
            "beta": self.beta,
            "c_star_star": self.c_star_star,
            "lambda": list(self.lam),
        }


def fractional_params(alpha: float, r: float, N: int) -> FractionalParams:
    """beta, c** and the eigenvalues lambda_0..lambda_N of the diffusion operator.

    lambda_k = -c** Gamma(k + 1 + alpha) / Gamma(k + 1); positive for 1 < alpha < 2.
    """
    if N < 0:
        raise ValueError("N must be nonnegative")
    beta = solve_beta(alpha, r)
    css = math.sin(math.pi * alpha) / (
        math.sin(math.pi * (alpha - beta)) + math.sin(math.pi * beta)
    )
    lam = tuple(-css * _gamma_ratio(k + 1.0 + alpha, k + 1.0) for k in range(N + 1))
    return FractionalParams(alpha, r, beta, css, lam)
