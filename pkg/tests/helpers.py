"""Shared test fixtures: spec builders and exact-rational oracles."""

import math
from fractions import Fraction

from bfbin import HypothesisSpec, PriorRole, PriorSpec, TestKind

FLAT = PriorSpec(1.0, 1.0)


def spec(test, role, arm1=FLAT, arm2=FLAT, null=None, null1=None, null2=None):
    if test is TestKind.PLUS_VS_MINUS:
        return HypothesisSpec(
            test=test,
            role=role,
            arm1_prior=arm1,
            arm2_prior=arm2,
            arm1_prior_null_side=null1 or arm1,
            arm2_prior_null_side=null2 or arm2,
        )
    if test is TestKind.TWO_SIDED and role is PriorRole.ANALYSIS:
        return HypothesisSpec(test=test, role=role, arm1_prior=arm1, arm2_prior=arm2)
    return HypothesisSpec(
        test=test, role=role, arm1_prior=arm1, arm2_prior=arm2, null_prior=null or FLAT
    )


def analysis(test, **kw):
    return spec(test, PriorRole.ANALYSIS, **kw)


def design(test, **kw):
    return spec(test, PriorRole.DESIGN, **kw)


def beta_fraction(a: int, b: int) -> Fraction:
    """Exact B(a, b) for positive integer arguments."""
    return Fraction(math.factorial(a - 1) * math.factorial(b - 1), math.factorial(a + b - 1))


def upper_region_mass(c1: int, d1: int, c2: int, d2: int) -> Fraction:
    """Exact integral of p1^c1 (1-p1)^d1 p2^c2 (1-p2)^d2 over {p2 > p1}."""
    total = Fraction(0)
    for j in range(d2 + 1):
        cj = Fraction(math.comb(d2, j) * (-1) ** j)
        e = c2 + j + 1
        for i in range(d1 + 1):
            ci = Fraction(math.comb(d1, i) * (-1) ** i)
            whole = Fraction(1, c1 + i + 1)
            shifted = Fraction(1, c1 + i + e + 1)
            total += cj * ci * (whole - shifted) / e
    return total


def exact_pred_plus(y1, n1, y2, n2, a1=1, b1=1, a2=1, b2=1) -> Fraction:
    """Exact {p2 > p1} predictive pmf for integer prior shapes."""
    region = upper_region_mass(
        y1 + a1 - 1, n1 - y1 + b1 - 1, y2 + a2 - 1, n2 - y2 + b2 - 1
    )
    c = upper_region_mass(a1 - 1, b1 - 1, a2 - 1, b2 - 1)
    return Fraction(math.comb(n1, y1) * math.comb(n2, y2)) * region / c


def exact_pred_leq(y1, n1, y2, n2, a1=1, b1=1, a2=1, b2=1) -> Fraction:
    """Exact {p2 <= p1} predictive pmf for integer prior shapes."""
    region = beta_fraction(y1 + a1, n1 - y1 + b1) * beta_fraction(
        y2 + a2, n2 - y2 + b2
    ) - upper_region_mass(y1 + a1 - 1, n1 - y1 + b1 - 1, y2 + a2 - 1, n2 - y2 + b2 - 1)
    c0 = beta_fraction(a1, b1) * beta_fraction(a2, b2) - upper_region_mass(
        a1 - 1, b1 - 1, a2 - 1, b2 - 1
    )
    return Fraction(math.comb(n1, y1) * math.comb(n2, y2)) * region / c0
