"""Beta priors per hypothesis and the order-truncation normalizing constants.

The four supported tests compare a treatment-effect parameter eta = p2 - p1
against zero. Order-constrained hypotheses (eta > 0, eta < 0, eta <= 0)
carry truncated independent Beta priors whose normalizing constants
C = P(p2 > p1), C- = P(p2 < p1) and C0 = P(p2 <= p1) are computed here,
with a finite-sum fast path for integer shapes and quadrature otherwise.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import logsumexp

from .numerics import (
    DEFAULT_QUADRATURE,
    QuadratureSettings,
    _log_choose,
    integrate_01,
    log_beta,
    reg_inc_beta,
)

__all__ = [
    "TestKind",
    "PriorRole",
    "PriorSpec",
    "FLAT",
    "HypothesisSpec",
    "trunc_const_plus",
    "trunc_const_minus",
    "trunc_const_leq",
]

# A shape counts as integer within this tolerance; only then is the
# finite-sum path taken.
INTEGER_TOL = 1e-9


def _is_integer(x: float) -> bool:
    return abs(x - round(x)) < INTEGER_TOL


class TestKind(enum.Enum):
    """The four hypothesis tests on eta = p2 - p1."""

    __test__ = False  # keep pytest from collecting the Test* name

    TWO_SIDED = "two-sided"        # eta = 0 vs eta != 0
    PLUS_VS_POINT = "plus0"        # eta = 0 vs eta > 0
    MINUS_VS_POINT = "minus0"      # eta = 0 vs eta < 0
    PLUS_VS_MINUS = "plusminus"    # eta <= 0 vs eta > 0


class PriorRole(enum.Enum):
    DESIGN = "design"
    ANALYSIS = "analysis"


@dataclass(frozen=True)
class PriorSpec:
    """Beta(a, b) hyperparameters for one arm or for the common proportion."""

    a: float
    b: float

    def __post_init__(self) -> None:
        if not (self.a > 0.0 and self.b > 0.0):
            raise ValueError("Beta shapes must be strictly positive")


FLAT = PriorSpec(1.0, 1.0)


@dataclass(frozen=True)
class HypothesisSpec:
    """One of the four tests together with its per-hypothesis prior sets.

    ``arm1_prior``/``arm2_prior`` parameterize the two-arm side, which is the
    alternative for every test. ``null_prior`` is the common-proportion prior
    used by the point-null tests. The composite test instead carries
    ``arm1_prior_null_side``/``arm2_prior_null_side`` for its order-constrained
    null. The two-sided Bayes factor has a closed form without a null prior,
    so an analysis-role two-sided spec must not carry one; a design-role spec
    needs it to weight the null-side operating characteristics.
    """

    test: TestKind
    role: PriorRole
    arm1_prior: PriorSpec
    arm2_prior: PriorSpec
    null_prior: PriorSpec | None = None
    arm1_prior_null_side: PriorSpec | None = None
    arm2_prior_null_side: PriorSpec | None = None

    def __post_init__(self) -> None:
        has_null_side = (
            self.arm1_prior_null_side is not None
            or self.arm2_prior_null_side is not None
        )
        if self.test is TestKind.PLUS_VS_MINUS:
            if self.arm1_prior_null_side is None or self.arm2_prior_null_side is None:
                raise ValueError("the composite test requires null-side arm priors")
            if self.null_prior is not None:
                raise ValueError("the composite test has no point-null prior")
            return
        if has_null_side:
            raise ValueError("null-side arm priors apply only to the composite test")
        if self.test is TestKind.TWO_SIDED and self.role is PriorRole.ANALYSIS:
            if self.null_prior is not None:
                raise ValueError(
                    "the two-sided Bayes factor takes no null prior; "
                    "only design-role specs carry one"
                )
            # Required by the induced common-proportion prior
            # Beta(a1 + a2 - 1, b1 + b2 - 1) of the closed form.
            if not (
                self.arm1_prior.a + self.arm2_prior.a > 1.0
                and self.arm1_prior.b + self.arm2_prior.b > 1.0
            ):
                raise ValueError(
                    "two-sided analysis priors require a1 + a2 > 1 and b1 + b2 > 1"
                )
        elif self.null_prior is None:
            raise ValueError("point-null tests require a null prior")


@lru_cache(maxsize=None)
def _trunc_plus_cached(
    a1: float, b1: float, a2: float, b2: float, settings: QuadratureSettings
) -> float:
    # P(p2 > p1) for p1 ~ Beta(a1, b1), p2 ~ Beta(a2, b2) independent.
    if _is_integer(a1):
        r1 = a1 + b1 - 1.0
        k = np.arange(int(round(a1)), dtype=float)
        terms = _log_choose(r1, k) + log_beta(a2 + k, b2 + r1 - k)
        return float(-np.expm1(logsumexp(terms) - log_beta(a2, b2)))

    log_norm = log_beta(a2, b2)

    def integrand(p: float) -> float:
        dens = np.exp((a2 - 1.0) * np.log(p) + (b2 - 1.0) * np.log1p(-p) - log_norm)
        return dens * reg_inc_beta(p, a1, b1)

    return integrate_01(integrand, settings)


def trunc_const_plus(
    arm1: PriorSpec,
    arm2: PriorSpec,
    settings: QuadratureSettings = DEFAULT_QUADRATURE,
) -> float:
    """P(p2 > p1): normalizing constant of the {p2 > p1} truncated prior.

    Uses a finite sum when the first shape of ``arm1`` is an integer,
    quadrature otherwise. Cached per shape tuple.
    """
    return _trunc_plus_cached(arm1.a, arm1.b, arm2.a, arm2.b, settings)


def trunc_const_minus(
    arm1: PriorSpec,
    arm2: PriorSpec,
    settings: QuadratureSettings = DEFAULT_QUADRATURE,
) -> float:
    """P(p2 < p1): the plus constant with the arms relabeled."""
    return _trunc_plus_cached(arm2.a, arm2.b, arm1.a, arm1.b, settings)


def trunc_const_leq(
    arm1: PriorSpec,
    arm2: PriorSpec,
    settings: QuadratureSettings = DEFAULT_QUADRATURE,
) -> float:
    """P(p2 <= p1) = 1 - P(p2 > p1); the boundary carries no mass."""
    return 1.0 - trunc_const_plus(arm1, arm2, settings)
