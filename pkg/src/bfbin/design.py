"""Smallest-n calibration over total sample sizes, with allocation handling.

Candidate totals are scanned from n_min upward. Each criterion (Bayesian
power, Bayesian type-I error, compelling-evidence probability, and optional
frequentist power) is calibrated independently: a total n qualifies when the
criterion holds at n and at each of the next `lookahead` candidate totals
that lie within the range. The full OC-versus-n curve is always returned.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Tuple

from .numerics import DEFAULT_QUADRATURE, QuadratureSettings
from .oc import OCResult, Thresholds, oc_at
from .predictive import TrialLayout
from .priors import HypothesisSpec, PriorSpec

__all__ = [
    "CalibrationTargets",
    "SearchRange",
    "CurveRow",
    "DesignResult",
    "allocate",
    "oc_curve",
    "calibrate",
]


@dataclass(frozen=True)
class CalibrationTargets:
    """Calibration targets and evidence thresholds."""

    thresholds: Thresholds
    power_target: float = 0.8
    alpha_target: float = 0.05
    pce_target: float = 0.8
    freq_power_point: Optional[Tuple[float, float]] = None
    compute_freq_t1e: bool = False
    grid_step: float = 0.005

    def __post_init__(self) -> None:
        for name in ("power_target", "alpha_target", "pce_target"):
            v = getattr(self, name)
            if not (0.0 < v < 1.0):
                raise ValueError(f"{name} must lie in (0, 1)")
        if self.freq_power_point is not None:
            p1, p2 = self.freq_power_point
            if not (0.0 <= p1 <= 1.0 and 0.0 <= p2 <= 1.0):
                raise ValueError("freq_power_point coordinates must lie in [0, 1]")


@dataclass(frozen=True)
class SearchRange:
    """Range of total sample sizes to scan, with the arm split."""

    n_min: int
    n_max: int
    n_step: int = 1
    alloc1: float = 0.5
    alloc2: float = 0.5
    lookahead: int = 10

    def __post_init__(self) -> None:
        if self.n_min < 2:
            raise ValueError("n_min must be at least 2 (one patient per arm)")
        if self.n_min > self.n_max:
            raise ValueError("n_min must not exceed n_max")
        if self.n_step < 1:
            raise ValueError("n_step must be a positive integer")
        if not (0.0 < self.alloc1 < 1.0 and 0.0 < self.alloc2 < 1.0):
            raise ValueError("allocation fractions must lie in (0, 1)")
        if abs(self.alloc1 + self.alloc2 - 1.0) > 1e-12:
            raise ValueError("allocation fractions must sum to 1")
        if self.lookahead < 0:
            raise ValueError("lookahead must be nonnegative")

    def candidates(self) -> range:
        return range(self.n_min, self.n_max + 1, self.n_step)


@dataclass(frozen=True)
class CurveRow:
    n_total: int
    n1: int
    n2: int
    oc: OCResult


@dataclass(frozen=True)
class DesignResult:
    n_power: Optional[int]
    n_alpha: Optional[int]
    n_pce: Optional[int]
    n_freq_power: Optional[int]
    curves: Tuple[CurveRow, ...]
    config_echo: dict


def allocate(n_total: int, alloc1: float, alloc2: float) -> Tuple[int, int]:
    """Split a total into per-arm sizes: round half to even, then clamp so
    both arms get at least one patient."""
    if n_total < 2:
        raise ValueError("n_total must be at least 2")
    if abs(alloc1 + alloc2 - 1.0) > 1e-12:
        raise ValueError("allocation fractions must sum to 1")
    n1 = min(max(round(alloc1 * n_total), 1), n_total - 1)
    return n1, n_total - n1


def _prior_echo(p: Optional[PriorSpec]):
    return None if p is None else [p.a, p.b]


def _spec_echo(h: HypothesisSpec) -> dict:
    return {
        "test": h.test.value,
        "role": h.role.value,
        "arm1_prior": _prior_echo(h.arm1_prior),
        "arm2_prior": _prior_echo(h.arm2_prior),
        "null_prior": _prior_echo(h.null_prior),
        "arm1_prior_null_side": _prior_echo(h.arm1_prior_null_side),
        "arm2_prior_null_side": _prior_echo(h.arm2_prior_null_side),
    }


def _config_echo(
    analysis: HypothesisSpec, design: HypothesisSpec, targets: CalibrationTargets, search: SearchRange
) -> dict:
    return {
        "analysis": _spec_echo(analysis),
        "design": _spec_echo(design),
        "k": targets.thresholds.k,
        "k_f": targets.thresholds.k_f,
        "power_target": targets.power_target,
        "alpha_target": targets.alpha_target,
        "pce_target": targets.pce_target,
        "freq_power_point": list(targets.freq_power_point)
        if targets.freq_power_point is not None
        else None,
        "compute_freq_t1e": targets.compute_freq_t1e,
        "grid_step": targets.grid_step,
        "n_min": search.n_min,
        "n_max": search.n_max,
        "n_step": search.n_step,
        "alloc1": search.alloc1,
        "alloc2": search.alloc2,
        "lookahead": search.lookahead,
    }


def oc_curve(
    analysis: HypothesisSpec,
    design: HypothesisSpec,
    targets: CalibrationTargets,
    search: SearchRange,
    threads: Optional[int] = None,
    settings: QuadratureSettings = DEFAULT_QUADRATURE,
) -> Tuple[CurveRow, ...]:
    """One OCResult per candidate total, in scan order."""

    def row(n_total: int) -> CurveRow:
        n1, n2 = allocate(n_total, search.alloc1, search.alloc2)
        oc = oc_at(
            TrialLayout(n1, n2),
            analysis,
            design,
            targets.thresholds,
            freq_power_point=targets.freq_power_point,
            compute_freq_t1e=targets.compute_freq_t1e,
            grid_step=targets.grid_step,
            settings=settings,
        )
        return CurveRow(n_total=n_total, n1=n1, n2=n2, oc=oc)

    candidates = search.candidates()
    if threads is not None and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return tuple(pool.map(row, candidates))
    return tuple(row(n) for n in candidates)


def _first_stable(ok: list, lookahead: int) -> Optional[int]:
    # Index of the first position where the criterion holds and keeps
    # holding for the next `lookahead` candidates still inside the range.
    for i in range(len(ok)):
        if all(ok[i : i + lookahead + 1]):
            return i
    return None


def calibrate(
    analysis: HypothesisSpec,
    design: HypothesisSpec,
    targets: CalibrationTargets,
    search: SearchRange,
    threads: Optional[int] = None,
    settings: QuadratureSettings = DEFAULT_QUADRATURE,
) -> DesignResult:
    """Smallest calibrated total per criterion, plus the full curve."""
    curves = oc_curve(analysis, design, targets, search, threads, settings)
    totals = [r.n_total for r in curves]

    def smallest(ok: list) -> Optional[int]:
        i = _first_stable(ok, search.lookahead)
        return None if i is None else totals[i]

    n_power = smallest([r.oc.bayes_power >= targets.power_target for r in curves])
    n_alpha = smallest([r.oc.bayes_t1e <= targets.alpha_target for r in curves])
    n_pce = smallest([r.oc.pce_null >= targets.pce_target for r in curves])
    n_freq_power = None
    if targets.freq_power_point is not None:
        n_freq_power = smallest([r.oc.freq_power >= targets.power_target for r in curves])
    return DesignResult(
        n_power=n_power,
        n_alpha=n_alpha,
        n_pce=n_pce,
        n_freq_power=n_freq_power,
        curves=curves,
        config_echo=_config_echo(analysis, design, targets, search),
    )
