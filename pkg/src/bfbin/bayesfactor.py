"""Bayes factors for the four tests, computed with analysis priors.

Every Bayes factor is a ratio of two prior-predictive pmfs at the observed
counts, so the binomial coefficients cancel and only the kernels matter.
The full null-over-alternative log matrix over the count lattice is the
input to the operating-characteristics module.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .numerics import DEFAULT_QUADRATURE, QuadratureSettings, log_beta
from .predictive import (
    TrialLayout,
    _check_counts,
    log_indep_kernel,
    log_leq_kernel,
    log_minus_kernel,
    log_plus_kernel,
    log_point_null_kernel,
)
from .priors import HypothesisSpec, PriorRole, PriorSpec, TestKind

__all__ = [
    "Orientation",
    "BFOrientation",
    "bf01_two_sided",
    "bf01_two_sided_closed_form",
    "bf_plus_over_null",
    "bf_minus_over_null",
    "bf_plus_over_minus",
    "log_bf_null_over_alt_matrix",
]


class Orientation(enum.Enum):
    BF01_NULL_OVER_ALT = "BF01_NULL_OVER_ALT"
    BF_PLUS_OVER_NULL = "BF_PLUS_OVER_NULL"
    BF_MINUS_OVER_NULL = "BF_MINUS_OVER_NULL"
    BF_PLUS_OVER_MINUS = "BF_PLUS_OVER_MINUS"


@dataclass(frozen=True)
class BFOrientation:
    """A Bayes factor value together with which ratio it is."""

    value: float
    orientation: Orientation
    log_value: float

    def reciprocal_log(self) -> float:
        return -self.log_value


def _require(analysis: HypothesisSpec, test: TestKind) -> None:
    if analysis.test is not test:
        raise ValueError(f"analysis spec is for {analysis.test.value}, expected {test.value}")
    if analysis.role is not PriorRole.ANALYSIS:
        raise ValueError("Bayes factors take analysis priors, not design priors")


def induced_null_prior(arm1: PriorSpec, arm2: PriorSpec) -> PriorSpec:
    """Beta prior on the common proportion implied by the two-sided test.

    Conditioning the independent arm priors on p1 = p2 gives a
    Beta(a1+a2-1, b1+b2-1) density, which is proper only when a1+a2 > 1
    and b1+b2 > 1.
    """
    return PriorSpec(arm1.a + arm2.a - 1.0, arm1.b + arm2.b - 1.0)


def bf01_two_sided(y1: int, y2: int, layout: TrialLayout, analysis: HypothesisSpec) -> BFOrientation:
    """BF of the point null over the two-sided alternative."""
    _require(analysis, TestKind.TWO_SIDED)
    _check_counts(y1, y2, layout)
    null = induced_null_prior(analysis.arm1_prior, analysis.arm2_prior)
    log_bf = float(
        log_point_null_kernel(layout, null)[y1, y2]
        - log_indep_kernel(layout, analysis.arm1_prior, analysis.arm2_prior)[y1, y2]
    )
    return BFOrientation(float(np.exp(log_bf)), Orientation.BF01_NULL_OVER_ALT, log_bf)


def bf01_two_sided_closed_form(
    y1: int, y2: int, layout: TrialLayout, analysis: HypothesisSpec
) -> float:
    """Independent single-expression form of the two-sided BF01."""
    _require(analysis, TestKind.TWO_SIDED)
    _check_counts(y1, y2, layout)
    a1, b1 = analysis.arm1_prior.a, analysis.arm1_prior.b
    a2, b2 = analysis.arm2_prior.a, analysis.arm2_prior.b
    A1, B1 = y1 + a1, layout.n1 - y1 + b1
    A2, B2 = y2 + a2, layout.n2 - y2 + b2
    log_bf = (
        log_beta(A1 + A2 - 1.0, B1 + B2 - 1.0)
        - log_beta(a1 + a2 - 1.0, b1 + b2 - 1.0)
        - log_beta(A1, B1)
        - log_beta(A2, B2)
        + log_beta(a1, b1)
        + log_beta(a2, b2)
    )
    return float(np.exp(log_bf))


def bf_plus_over_null(
    y1: int,
    y2: int,
    layout: TrialLayout,
    analysis: HypothesisSpec,
    settings: QuadratureSettings = DEFAULT_QUADRATURE,
) -> BFOrientation:
    """BF of the {p2 > p1} alternative over the point null."""
    _require(analysis, TestKind.PLUS_VS_POINT)
    _check_counts(y1, y2, layout)
    log_bf = float(
        log_plus_kernel(layout, analysis.arm1_prior, analysis.arm2_prior, settings)[y1, y2]
        - log_point_null_kernel(layout, analysis.null_prior)[y1, y2]
    )
    return BFOrientation(float(np.exp(log_bf)), Orientation.BF_PLUS_OVER_NULL, log_bf)


def bf_minus_over_null(
    y1: int,
    y2: int,
    layout: TrialLayout,
    analysis: HypothesisSpec,
    settings: QuadratureSettings = DEFAULT_QUADRATURE,
) -> BFOrientation:
    """BF of the {p2 < p1} alternative over the point null."""
    _require(analysis, TestKind.MINUS_VS_POINT)
    _check_counts(y1, y2, layout)
    log_bf = float(
        log_minus_kernel(layout, analysis.arm1_prior, analysis.arm2_prior, settings)[y1, y2]
        - log_point_null_kernel(layout, analysis.null_prior)[y1, y2]
    )
    return BFOrientation(float(np.exp(log_bf)), Orientation.BF_MINUS_OVER_NULL, log_bf)


def bf_plus_over_minus(
    y1: int,
    y2: int,
    layout: TrialLayout,
    analysis: HypothesisSpec,
    settings: QuadratureSettings = DEFAULT_QUADRATURE,
) -> BFOrientation:
    """BF of the {p2 > p1} hypothesis over the {p2 <= p1} hypothesis."""
    _require(analysis, TestKind.PLUS_VS_MINUS)
    _check_counts(y1, y2, layout)
    log_bf = float(
        log_plus_kernel(layout, analysis.arm1_prior, analysis.arm2_prior, settings)[y1, y2]
        - log_leq_kernel(
            layout, analysis.arm1_prior_null_side, analysis.arm2_prior_null_side, settings
        )[y1, y2]
    )
    return BFOrientation(float(np.exp(log_bf)), Orientation.BF_PLUS_OVER_MINUS, log_bf)


def log_bf_null_over_alt_matrix(
    layout: TrialLayout,
    analysis: HypothesisSpec,
    settings: QuadratureSettings = DEFAULT_QUADRATURE,
) -> np.ndarray:
    """Log BF of the null over the alternative at every lattice point.

    Orientation is uniform (null over alternative) so the rejection rule
    BF < k reads the same for all four tests.
    """
    if analysis.role is not PriorRole.ANALYSIS:
        raise ValueError("Bayes factors take analysis priors, not design priors")
    a1, a2 = analysis.arm1_prior, analysis.arm2_prior
    if analysis.test is TestKind.TWO_SIDED:
        null = induced_null_prior(a1, a2)
        return log_point_null_kernel(layout, null) - log_indep_kernel(layout, a1, a2)
    if analysis.test is TestKind.PLUS_VS_POINT:
        return log_point_null_kernel(layout, analysis.null_prior) - log_plus_kernel(
            layout, a1, a2, settings
        )
    if analysis.test is TestKind.MINUS_VS_POINT:
        return log_point_null_kernel(layout, analysis.null_prior) - log_minus_kernel(
            layout, a1, a2, settings
        )
    return log_leq_kernel(
        layout, analysis.arm1_prior_null_side, analysis.arm2_prior_null_side, settings
    ) - log_plus_kernel(layout, a1, a2, settings)
