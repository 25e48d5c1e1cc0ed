"""Log-space special functions and adaptive quadrature on the unit interval."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import integrate
from scipy.special import betainc, betaln, gammaln

__all__ = [
    "QuadratureSettings",
    "ConvergenceError",
    "DEFAULT_QUADRATURE",
    "log_beta",
    "reg_inc_beta",
    "log_binom_coeff",
    "integrate_01",
]


@dataclass(frozen=True)
class QuadratureSettings:
    """Tolerances and subdivision budget for adaptive quadrature on (0, 1)."""

    abs_tol: float = 1e-10
    rel_tol: float = 1e-8
    max_subdivisions: int = 200

    def __post_init__(self) -> None:
        if not (self.abs_tol > 0.0 and self.rel_tol > 0.0):
            raise ValueError("quadrature tolerances must be strictly positive")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be at least 1")


DEFAULT_QUADRATURE = QuadratureSettings()


class ConvergenceError(ArithmeticError):
    """Quadrature failed to converge; ``estimate`` holds the best value found."""

    def __init__(self, message: str, estimate: float):
        super().__init__(message)
        self.estimate = estimate


def log_beta(a, b):
    """ln B(a, b) via log-gamma, finite for all positive shapes.

    Accepts scalars or arrays; shapes must be strictly positive.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if np.any(a <= 0.0) or np.any(b <= 0.0):
        raise ValueError("log_beta requires strictly positive shapes")
    out = betaln(a, b)
    return float(out) if np.ndim(out) == 0 else out


def reg_inc_beta(x, a, b):
    """Regularized incomplete beta function I_x(a, b)."""
    x = np.asarray(x, dtype=float)
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if np.any(a <= 0.0) or np.any(b <= 0.0):
        raise ValueError("reg_inc_beta requires strictly positive shapes")
    if np.any(x < 0.0) or np.any(x > 1.0):
        raise ValueError("reg_inc_beta requires x in [0, 1]")
    out = betainc(a, b, x)
    return float(out) if np.ndim(out) == 0 else out


def log_binom_coeff(n, y):
    """ln C(n, y) for integers 0 <= y <= n."""
    n = np.asarray(n)
    y = np.asarray(y)
    if np.any(n < 0) or np.any(y < 0) or np.any(y > n):
        raise ValueError("log_binom_coeff requires 0 <= y <= n")
    out = _log_choose(n.astype(float), y.astype(float))
    return float(out) if np.ndim(out) == 0 else out


def _log_choose(r, k):
    # Generalized binomial coefficient: r may be real as long as r - k > -1.
    return gammaln(r + 1.0) - gammaln(k + 1.0) - gammaln(r - k + 1.0)


def integrate_01(
    f: Callable[[float], float],
    settings: QuadratureSettings = DEFAULT_QUADRATURE,
) -> float:
    """Adaptive quadrature of ``f`` over (0, 1).

    The integrand is evaluated strictly inside the interval, so integrable
    endpoint singularities (Beta-type, shapes below 1) are handled. Raises
    ConvergenceError carrying the best estimate when the subdivision budget
    is exhausted before the tolerances are met.
    """
    out = integrate.quad(
        f,
        0.0,
        1.0,
        epsabs=settings.abs_tol,
        epsrel=settings.rel_tol,
        limit=settings.max_subdivisions,
        full_output=True,
    )
    if len(out) > 3:
        raise ConvergenceError(out[3], estimate=float(out[0]))
    return float(out[0])
