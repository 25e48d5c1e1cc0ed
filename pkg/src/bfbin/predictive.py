"""Exact prior-predictive pmfs of the two-arm counts under each hypothesis.

Each hypothesis induces a predictive probability mass function over the
(n1 + 1) x (n2 + 1) lattice of count pairs (y1, y2). All values are computed
as full log-space matrices in one pass per layout; scalar accessors index
into the cached matrices. The order-constrained hypotheses reduce to the
one-dimensional integrals

    J(y1, y2) = integral of p^(A1-1) (1-p)^(B1-1) I_p(A2, B2) dp
    I(y1, y2) = B(A2, B2) * (B(A1, B1) - J(y1, y2))

with updated shapes A1 = y1 + a1 etc. When a2 is an integer, S := I / B(A2, B2)
has a direct finite sum (so no subtraction is needed for I); when b2 is an
integer, J has a direct mirror sum. Both sums share the constant
r2 = n2 + a2 + b2 - 1 across the lattice, so each is one cumulative
log-sum-exp over a coefficient matrix. Only shapes that are integer in
neither a2 nor b2 fall back to quadrature.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import betainc, betaincc, betaln, xlog1py, xlogy

from .numerics import DEFAULT_QUADRATURE, QuadratureSettings, _log_choose, integrate_01
from .priors import (
    PriorSpec,
    _is_integer,
    trunc_const_leq,
    trunc_const_minus,
    trunc_const_plus,
)

__all__ = [
    "TrialLayout",
    "UpdatedShapes",
    "pred_point_null",
    "pred_indep",
    "pred_plus",
    "pred_minus",
    "pred_leq",
    "log_pred_point_null_matrix",
    "log_pred_indep_matrix",
    "log_pred_plus_matrix",
    "log_pred_minus_matrix",
    "log_pred_leq_matrix",
]


@dataclass(frozen=True)
class TrialLayout:
    """Per-arm sample sizes."""

    n1: int
    n2: int

    def __post_init__(self) -> None:
        if self.n1 < 1 or self.n2 < 1:
            raise ValueError("arm sizes must be at least 1")


@dataclass(frozen=True)
class UpdatedShapes:
    """Posterior Beta shapes after observing (y1, y2)."""

    A1: float
    B1: float
    A2: float
    B2: float

    @classmethod
    def from_counts(
        cls,
        y1: int,
        y2: int,
        layout: TrialLayout,
        arm1: PriorSpec,
        arm2: PriorSpec,
    ) -> "UpdatedShapes":
        _check_counts(y1, y2, layout)
        return cls(
            A1=y1 + arm1.a,
            B1=layout.n1 - y1 + arm1.b,
            A2=y2 + arm2.a,
            B2=layout.n2 - y2 + arm2.b,
        )


def _check_counts(y1: int, y2: int, layout: TrialLayout) -> None:
    if not (0 <= y1 <= layout.n1 and 0 <= y2 <= layout.n2):
        raise ValueError("counts must satisfy 0 <= y1 <= n1 and 0 <= y2 <= n2")


def _updated_vectors(layout: TrialLayout, arm1: PriorSpec, arm2: PriorSpec):
    y1 = np.arange(layout.n1 + 1)
    y2 = np.arange(layout.n2 + 1)
    return y1 + arm1.a, layout.n1 - y1 + arm1.b, y2 + arm2.a, layout.n2 - y2 + arm2.b


def _log_diff(la, lb):
    # log(exp(la) - exp(lb)) with la >= lb up to rounding; equal inputs give -inf.
    with np.errstate(divide="ignore", invalid="ignore"):
        return la + np.log1p(-np.exp(np.minimum(lb - la, 0.0)))


def _order_sums_quadrature(layout, arm1, arm2, settings):
    A1, B1, A2, B2 = _updated_vectors(layout, arm1, arm2)
    lb11 = betaln(A1, B1)
    log_s = np.empty((layout.n1 + 1, layout.n2 + 1))
    log_j = np.empty_like(log_s)
    for i in range(layout.n1 + 1):
        a, b, lnorm = A1[i], B1[i], lb11[i]

        def dens(p):
            return np.exp(xlogy(a - 1.0, p) + xlog1py(b - 1.0, -p) - lnorm)

        for j in range(layout.n2 + 1):
            a2j, b2j = A2[j], B2[j]
            # Both region masses are integrated directly so neither side
            # suffers cancellation when the other is close to 1.
            upper = integrate_01(lambda p: dens(p) * betaincc(a2j, b2j, p), settings)
            lower = integrate_01(lambda p: dens(p) * betainc(a2j, b2j, p), settings)
            with np.errstate(divide="ignore"):
                log_s[i, j] = lnorm + np.log(max(upper, 0.0))
                log_j[i, j] = lnorm + np.log(max(lower, 0.0))
    return log_s, log_j


def _order_sums(layout, arm1, arm2, settings):
    """Log S and log J matrices over the lattice (see module docstring)."""
    n2 = layout.n2
    a2, b2 = arm2.a, arm2.b
    A1, B1, _, _ = _updated_vectors(layout, arm1, arm2)
    r2 = n2 + a2 + b2 - 1.0
    log_s = log_j = None
    if _is_integer(a2):
        m = int(round(a2))
        k = np.arange(n2 + m, dtype=float)
        g = _log_choose(r2, k)[None, :] + betaln(A1[:, None] + k, B1[:, None] + (r2 - k))
        log_s = np.logaddexp.accumulate(g, axis=1)[:, np.arange(n2 + 1) + m - 1]
    if _is_integer(b2):
        m = int(round(b2))
        k = np.arange(n2 + m, dtype=float)
        g = _log_choose(r2, k)[None, :] + betaln(A1[:, None] + (r2 - k), B1[:, None] + k)
        idx = (n2 - np.arange(n2 + 1)) + m - 1
        log_j = np.logaddexp.accumulate(g, axis=1)[:, idx]
    if log_s is None and log_j is None:
        return _order_sums_quadrature(layout, arm1, arm2, settings)
    lb11 = betaln(A1, B1)[:, None]  # S + J = B(A1, B1) row-wise
    if log_s is None:
        log_s = _log_diff(lb11 + np.zeros_like(log_j), log_j)
    if log_j is None:
        log_j = _log_diff(lb11 + np.zeros_like(log_s), log_s)
    return log_s, log_j


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


@lru_cache(maxsize=32)
def log_point_null_kernel(layout: TrialLayout, null_prior: PriorSpec) -> np.ndarray:
    """Log marginal likelihood of each (y1, y2) under a common proportion,
    without the binomial coefficients."""
    s = np.arange(layout.n1 + 1)[:, None] + np.arange(layout.n2 + 1)[None, :]
    n = layout.n1 + layout.n2
    out = betaln(null_prior.a + s, null_prior.b + n - s) - betaln(null_prior.a, null_prior.b)
    return _freeze(out)


@lru_cache(maxsize=32)
def log_indep_kernel(layout: TrialLayout, arm1: PriorSpec, arm2: PriorSpec) -> np.ndarray:
    """Log marginal likelihood under independent per-arm priors, without
    binomial coefficients."""
    A1, B1, A2, B2 = _updated_vectors(layout, arm1, arm2)
    out = (betaln(A1, B1) - betaln(arm1.a, arm1.b))[:, None] + (
        betaln(A2, B2) - betaln(arm2.a, arm2.b)
    )[None, :]
    return _freeze(out)


@lru_cache(maxsize=32)
def _order_kernels(layout, arm1, arm2, settings):
    # Shared core of the plus/minus/leq kernels: only the truncation
    # constant differs between minus and leq.
    A1, B1, A2, B2 = _updated_vectors(layout, arm1, arm2)
    log_s, log_j = _order_sums(layout, arm1, arm2, settings)
    base = betaln(arm1.a, arm1.b) + betaln(arm2.a, arm2.b)
    lb22 = betaln(A2, B2)[None, :]
    plus = lb22 + log_s - base - np.log(trunc_const_plus(arm1, arm2, settings))
    minus_unnorm = lb22 + log_j - base
    return _freeze(plus), _freeze(minus_unnorm)


def log_plus_kernel(layout, arm1, arm2, settings=DEFAULT_QUADRATURE) -> np.ndarray:
    """Log marginal likelihood under the {p2 > p1} truncated prior."""
    return _order_kernels(layout, arm1, arm2, settings)[0]


def log_minus_kernel(layout, arm1, arm2, settings=DEFAULT_QUADRATURE) -> np.ndarray:
    """Log marginal likelihood under the {p2 < p1} truncated prior."""
    unnorm = _order_kernels(layout, arm1, arm2, settings)[1]
    return unnorm - np.log(trunc_const_minus(arm1, arm2, settings))


def log_leq_kernel(layout, arm1, arm2, settings=DEFAULT_QUADRATURE) -> np.ndarray:
    """Log marginal likelihood under the {p2 <= p1} truncated prior."""
    unnorm = _order_kernels(layout, arm1, arm2, settings)[1]
    return unnorm - np.log(trunc_const_leq(arm1, arm2, settings))


@lru_cache(maxsize=32)
def log_lattice_coeff(layout: TrialLayout) -> np.ndarray:
    """log C(n1, y1) + log C(n2, y2) over the whole lattice."""
    c1 = _log_choose(float(layout.n1), np.arange(layout.n1 + 1, dtype=float))
    c2 = _log_choose(float(layout.n2), np.arange(layout.n2 + 1, dtype=float))
    return _freeze(c1[:, None] + c2[None, :])


def log_pred_point_null_matrix(layout, null_prior) -> np.ndarray:
    return log_lattice_coeff(layout) + log_point_null_kernel(layout, null_prior)


def log_pred_indep_matrix(layout, arm1, arm2) -> np.ndarray:
    return log_lattice_coeff(layout) + log_indep_kernel(layout, arm1, arm2)


def log_pred_plus_matrix(layout, arm1, arm2, settings=DEFAULT_QUADRATURE) -> np.ndarray:
    return log_lattice_coeff(layout) + log_plus_kernel(layout, arm1, arm2, settings)


def log_pred_minus_matrix(layout, arm1, arm2, settings=DEFAULT_QUADRATURE) -> np.ndarray:
    return log_lattice_coeff(layout) + log_minus_kernel(layout, arm1, arm2, settings)


def log_pred_leq_matrix(layout, arm1, arm2, settings=DEFAULT_QUADRATURE) -> np.ndarray:
    return log_lattice_coeff(layout) + log_leq_kernel(layout, arm1, arm2, settings)


def pred_point_null(y1: int, y2: int, layout: TrialLayout, null_prior: PriorSpec) -> float:
    """Prior-predictive probability of (y1, y2) under the point null."""
    _check_counts(y1, y2, layout)
    return float(np.exp(log_pred_point_null_matrix(layout, null_prior)[y1, y2]))


def pred_indep(y1: int, y2: int, layout: TrialLayout, arm1: PriorSpec, arm2: PriorSpec) -> float:
    """Prior-predictive probability under independent per-arm priors."""
    _check_counts(y1, y2, layout)
    return float(np.exp(log_pred_indep_matrix(layout, arm1, arm2)[y1, y2]))


def pred_plus(
    y1: int,
    y2: int,
    layout: TrialLayout,
    arm1: PriorSpec,
    arm2: PriorSpec,
    settings: QuadratureSettings = DEFAULT_QUADRATURE,
) -> float:
    """Prior-predictive probability under the {p2 > p1} truncated prior."""
    _check_counts(y1, y2, layout)
    return float(np.exp(log_pred_plus_matrix(layout, arm1, arm2, settings)[y1, y2]))


def pred_minus(
    y1: int,
    y2: int,
    layout: TrialLayout,
    arm1: PriorSpec,
    arm2: PriorSpec,
    settings: QuadratureSettings = DEFAULT_QUADRATURE,
) -> float:
    """Prior-predictive probability under the {p2 < p1} truncated prior."""
    _check_counts(y1, y2, layout)
    return float(np.exp(log_pred_minus_matrix(layout, arm1, arm2, settings)[y1, y2]))


def pred_leq(
    y1: int,
    y2: int,
    layout: TrialLayout,
    arm1: PriorSpec,
    arm2: PriorSpec,
    settings: QuadratureSettings = DEFAULT_QUADRATURE,
) -> float:
    """Prior-predictive probability under the {p2 <= p1} truncated prior."""
    _check_counts(y1, y2, layout)
    return float(np.exp(log_pred_leq_matrix(layout, arm1, arm2, settings)[y1, y2]))
