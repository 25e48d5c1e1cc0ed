"""Rejection-set enumeration and operating characteristics at fixed arm sizes.

The count lattice is small enough to enumerate exactly, so every operating
characteristic is a finite sum: Bayesian power and type-I error sum the
design-prior predictive mass over the rejection set, the probability of
compelling evidence sums null-side mass over the high-evidence set, and the
frequentist quantities sum exact binomial pmfs over the rejection set at
fixed parameter values (maximized over a grid for the type-I error).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional, Tuple

import numpy as np
from scipy.stats import binom

from .bayesfactor import log_bf_null_over_alt_matrix
from .numerics import DEFAULT_QUADRATURE, QuadratureSettings
from .predictive import (
    TrialLayout,
    log_pred_indep_matrix,
    log_pred_leq_matrix,
    log_pred_minus_matrix,
    log_pred_plus_matrix,
    log_pred_point_null_matrix,
)
from .priors import HypothesisSpec, TestKind

__all__ = [
    "Thresholds",
    "RejectionSet",
    "OCResult",
    "GridSupremum",
    "rejection_set",
    "bayes_power",
    "bayes_t1e",
    "pce_null",
    "freq_t1e_sup",
    "freq_power",
    "oc_at",
]


@dataclass(frozen=True)
class Thresholds:
    """Evidence thresholds: reject the null when BF < k, call evidence for
    the null compelling when BF > k_f."""

    k: float
    k_f: float = 3.0

    def __post_init__(self) -> None:
        if not (0.0 < self.k < 1.0 < self.k_f):
            raise ValueError("thresholds must satisfy 0 < k < 1 < k_f")


@dataclass(frozen=True)
class RejectionSet:
    members: frozenset
    layout: TrialLayout
    k: float


@dataclass(frozen=True)
class OCResult:
    bayes_power: float
    bayes_t1e: float
    pce_null: float
    freq_t1e_sup: Optional[float] = None
    freq_power: Optional[float] = None
    freq_t1e_at: Optional[Tuple[float, float]] = None


class GridSupremum(NamedTuple):
    value: float
    at: Tuple[float, float]


def rejection_set(
    layout: TrialLayout,
    analysis: HypothesisSpec,
    k: float,
    settings: QuadratureSettings = DEFAULT_QUADRATURE,
) -> RejectionSet:
    """All count pairs whose null-over-alternative BF is strictly below k."""
    if k <= 0.0:
        raise ValueError("k must be positive")
    log_m = log_bf_null_over_alt_matrix(layout, analysis, settings)
    # Comparison in value space keeps exact ties out of the set even when
    # exp(log(k)) != k, and saturated 0/inf values compare correctly.
    hit = np.exp(log_m) < k
    members = frozenset((int(i), int(j)) for i, j in np.argwhere(hit))
    return RejectionSet(members=members, layout=layout, k=float(k))


def _member_mask(rejset: RejectionSet) -> np.ndarray:
    mask = np.zeros((rejset.layout.n1 + 1, rejset.layout.n2 + 1), dtype=bool)
    for y1, y2 in rejset.members:
        mask[y1, y2] = True
    return mask


def _design_alt_log_pred(
    layout: TrialLayout, design: HypothesisSpec, settings: QuadratureSettings
) -> np.ndarray:
    a1, a2 = design.arm1_prior, design.arm2_prior
    if design.test is TestKind.TWO_SIDED:
        return log_pred_indep_matrix(layout, a1, a2)
    if design.test is TestKind.MINUS_VS_POINT:
        return log_pred_minus_matrix(layout, a1, a2, settings)
    return log_pred_plus_matrix(layout, a1, a2, settings)


def _design_null_log_pred(
    layout: TrialLayout, design: HypothesisSpec, settings: QuadratureSettings
) -> np.ndarray:
    if design.test is TestKind.PLUS_VS_MINUS:
        return log_pred_leq_matrix(
            layout, design.arm1_prior_null_side, design.arm2_prior_null_side, settings
        )
    return log_pred_point_null_matrix(layout, design.null_prior)


def bayes_power(
    rejset: RejectionSet,
    design: HypothesisSpec,
    settings: QuadratureSettings = DEFAULT_QUADRATURE,
) -> float:
    """Design-prior predictive probability of rejecting under the alternative."""
    if not rejset.members:
        return 0.0
    log_pred = _design_alt_log_pred(rejset.layout, design, settings)
    return float(np.exp(log_pred[_member_mask(rejset)]).sum())


def bayes_t1e(
    rejset: RejectionSet,
    design: HypothesisSpec,
    settings: QuadratureSettings = DEFAULT_QUADRATURE,
) -> float:
    """Design-prior predictive probability of rejecting under the null."""
    if not rejset.members:
        return 0.0
    log_pred = _design_null_log_pred(rejset.layout, design, settings)
    return float(np.exp(log_pred[_member_mask(rejset)]).sum())


def pce_null(
    layout: TrialLayout,
    analysis: HypothesisSpec,
    design: HypothesisSpec,
    k_f: float,
    settings: QuadratureSettings = DEFAULT_QUADRATURE,
) -> float:
    """Null-side design mass on counts with BF strictly above k_f."""
    if k_f <= 0.0:
        raise ValueError("k_f must be positive")
    log_m = log_bf_null_over_alt_matrix(layout, analysis, settings)
    compelling = np.exp(log_m) > k_f
    if not compelling.any():
        return 0.0
    log_pred = _design_null_log_pred(layout, design, settings)
    return float(np.exp(log_pred[compelling]).sum())


def _param_grid(grid_step: float) -> np.ndarray:
    if not (0.0 < grid_step <= 0.1):
        raise ValueError("grid_step must be in (0, 0.1]")
    m = round(1.0 / grid_step)
    if abs(m * grid_step - 1.0) < 1e-9:
        return np.linspace(0.0, 1.0, m + 1)
    return np.append(np.arange(0.0, 1.0, grid_step), 1.0)


def _arm_pmfs(layout: TrialLayout, grid: np.ndarray):
    y1 = np.arange(layout.n1 + 1)[:, None]
    y2 = np.arange(layout.n2 + 1)[:, None]
    return binom.pmf(y1, layout.n1, grid[None, :]), binom.pmf(y2, layout.n2, grid[None, :])


def freq_t1e_sup(
    layout: TrialLayout,
    analysis: HypothesisSpec,
    k: float,
    grid_step: float = 0.005,
    settings: QuadratureSettings = DEFAULT_QUADRATURE,
) -> GridSupremum:
    """Maximum exact rejection probability over a grid on the null set.

    Point nulls use the diagonal p1 = p2 = p; the composite null uses the
    closed triangle {p2 <= p1}. Returns the maximum and its grid point.
    """
    rejset = rejection_set(layout, analysis, k, settings)
    mask = _member_mask(rejset).astype(float)
    grid = _param_grid(grid_step)
    b1, b2 = _arm_pmfs(layout, grid)
    if analysis.test is TestKind.PLUS_VS_MINUS:
        w = b1.T @ mask @ b2  # w[i, j] = P(reject | p1=grid[i], p2=grid[j])
        keep = grid[None, :] <= grid[:, None]
        masked = np.where(keep, w, -1.0)
        flat_idx = int(np.argmax(masked))
        i, j = np.unravel_index(flat_idx, masked.shape)
        return GridSupremum(float(masked[i, j]), (float(grid[i]), float(grid[j])))
    vals = np.einsum("ig,ij,jg->g", b1, mask, b2)
    g = int(np.argmax(vals))
    return GridSupremum(float(vals[g]), (float(grid[g]), float(grid[g])))


def freq_power(
    layout: TrialLayout,
    analysis: HypothesisSpec,
    k: float,
    p1: float,
    p2: float,
    settings: QuadratureSettings = DEFAULT_QUADRATURE,
) -> float:
    """Exact rejection probability at fixed proportions (p1, p2)."""
    if not (0.0 <= p1 <= 1.0 and 0.0 <= p2 <= 1.0):
        raise ValueError("p1 and p2 must lie in [0, 1]")
    rejset = rejection_set(layout, analysis, k, settings)
    if not rejset.members:
        return 0.0
    mask = _member_mask(rejset).astype(float)
    b1 = binom.pmf(np.arange(layout.n1 + 1), layout.n1, p1)
    b2 = binom.pmf(np.arange(layout.n2 + 1), layout.n2, p2)
    return float(b1 @ mask @ b2)


def oc_at(
    layout: TrialLayout,
    analysis: HypothesisSpec,
    design: HypothesisSpec,
    thresholds: Thresholds,
    freq_power_point: Optional[Tuple[float, float]] = None,
    compute_freq_t1e: bool = False,
    grid_step: float = 0.005,
    settings: QuadratureSettings = DEFAULT_QUADRATURE,
) -> OCResult:
    """All operating characteristics at one layout, sharing one BF matrix."""
    rejset = rejection_set(layout, analysis, thresholds.k, settings)
    power = bayes_power(rejset, design, settings)
    t1e = bayes_t1e(rejset, design, settings)
    pce = pce_null(layout, analysis, design, thresholds.k_f, settings)
    fsup = fat = fpow = None
    if compute_freq_t1e:
        sup = freq_t1e_sup(layout, analysis, thresholds.k, grid_step, settings)
        fsup, fat = sup.value, sup.at
    if freq_power_point is not None:
        fpow = freq_power(layout, analysis, thresholds.k, *freq_power_point, settings)
    return OCResult(
        bayes_power=power,
        bayes_t1e=t1e,
        pce_null=pce,
        freq_t1e_sup=fsup,
        freq_power=fpow,
        freq_t1e_at=fat,
    )
