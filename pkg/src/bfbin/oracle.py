"""Seeded Monte Carlo cross-check of the exact operating characteristics.

Test-only harness: draws proportions from the design priors (rejection
sampling on order-constrained regions), simulates counts, evaluates the
exact BF at the simulated counts, and tallies threshold crossings. Results
depend only on (seed, n_sims); chunks use seeds spawned from one root so
the tallies are reproducible and order-independent (integer sums).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .bayesfactor import log_bf_null_over_alt_matrix
from .numerics import DEFAULT_QUADRATURE, QuadratureSettings
from .oc import OCResult, Thresholds
from .predictive import TrialLayout
from .priors import HypothesisSpec, PriorSpec, TestKind

__all__ = ["McSettings", "mc_operating_characteristics"]

_CHUNK = 10_000
_PROPOSAL_FACTOR = 10


@dataclass(frozen=True)
class McSettings:
    n_sims: int = 100_000
    seed: int = 0

    def __post_init__(self) -> None:
        if self.n_sims < 1000:
            raise ValueError("n_sims must be at least 1000 for stable standard errors")
        if not (0 <= self.seed < 2**64):
            raise ValueError("seed must be a 64-bit unsigned integer")


def _draw_pair(
    rng: np.random.Generator,
    arm1: PriorSpec,
    arm2: PriorSpec,
    m: int,
    region: str,
) -> Tuple[np.ndarray, np.ndarray]:
    """m draws of (p1, p2) from independent Betas truncated to a region."""
    if region == "free":
        return rng.beta(arm1.a, arm1.b, m), rng.beta(arm2.a, arm2.b, m)
    budget = _PROPOSAL_FACTOR * m
    used = 0
    out1 = np.empty(m)
    out2 = np.empty(m)
    got = 0
    while got < m:
        batch = min(max(m - got, 1000), budget - used)
        if batch <= 0:
            raise RuntimeError(
                f"rejection sampling for region '{region}' exceeded {budget} proposals"
            )
        p1 = rng.beta(arm1.a, arm1.b, batch)
        p2 = rng.beta(arm2.a, arm2.b, batch)
        used += batch
        if region == "plus":
            keep = p2 > p1
        elif region == "minus":
            keep = p2 < p1
        else:  # leq
            keep = p2 <= p1
        take = min(int(keep.sum()), m - got)
        out1[got : got + take] = p1[keep][:take]
        out2[got : got + take] = p2[keep][:take]
        got += take
    return out1, out2


def _alt_params(rng, design: HypothesisSpec, m: int):
    if design.test is TestKind.TWO_SIDED:
        return _draw_pair(rng, design.arm1_prior, design.arm2_prior, m, "free")
    if design.test is TestKind.MINUS_VS_POINT:
        return _draw_pair(rng, design.arm1_prior, design.arm2_prior, m, "minus")
    return _draw_pair(rng, design.arm1_prior, design.arm2_prior, m, "plus")


def _null_params(rng, design: HypothesisSpec, m: int):
    if design.test is TestKind.PLUS_VS_MINUS:
        return _draw_pair(
            rng, design.arm1_prior_null_side, design.arm2_prior_null_side, m, "leq"
        )
    p = rng.beta(design.null_prior.a, design.null_prior.b, m)
    return p, p


def mc_operating_characteristics(
    analysis: HypothesisSpec,
    design: HypothesisSpec,
    layout: TrialLayout,
    thresholds: Thresholds,
    mc: McSettings,
    settings: QuadratureSettings = DEFAULT_QUADRATURE,
) -> Tuple[OCResult, OCResult]:
    """Monte Carlo estimates of (bayes_power, bayes_t1e, pce_null) and
    their binomial standard errors."""
    bf = np.exp(log_bf_null_over_alt_matrix(layout, analysis, settings))
    reject = bf < thresholds.k
    compel = bf > thresholds.k_f

    n_chunks = -(-mc.n_sims // _CHUNK)
    sizes = [_CHUNK] * (n_chunks - 1) + [mc.n_sims - _CHUNK * (n_chunks - 1)]
    children = np.random.SeedSequence(mc.seed).spawn(n_chunks)

    rej_alt = rej_null = comp_null = 0
    for size, child in zip(sizes, children):
        rng = np.random.default_rng(child)
        p1, p2 = _alt_params(rng, design, size)
        y1 = rng.binomial(layout.n1, p1)
        y2 = rng.binomial(layout.n2, p2)
        rej_alt += int(reject[y1, y2].sum())
        q1, q2 = _null_params(rng, design, size)
        z1 = rng.binomial(layout.n1, q1)
        z2 = rng.binomial(layout.n2, q2)
        rej_null += int(reject[z1, z2].sum())
        comp_null += int(compel[z1, z2].sum())

    n = mc.n_sims

    def se(count: int) -> float:
        phat = count / n
        return float(np.sqrt(phat * (1.0 - phat) / n))

    est = OCResult(
        bayes_power=rej_alt / n, bayes_t1e=rej_null / n, pce_null=comp_null / n
    )
    errs = OCResult(
        bayes_power=se(rej_alt), bayes_t1e=se(rej_null), pce_null=se(comp_null)
    )
    return est, errs
