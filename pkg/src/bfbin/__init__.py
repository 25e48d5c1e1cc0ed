"""Bayes factor design and analysis for two-arm binomial trials.

Exact enumeration of the count lattice gives the four Bayes factor tests,
their operating characteristics under design priors, and smallest-n
calibration, with a seeded Monte Carlo harness for independent validation.
"""

__version__ = "0.1.0"

from .bayesfactor import (
    BFOrientation,
    Orientation,
    bf01_two_sided,
    bf_minus_over_null,
    bf_plus_over_minus,
    bf_plus_over_null,
)
from .design import CalibrationTargets, DesignResult, SearchRange, allocate, calibrate, oc_curve
from .numerics import ConvergenceError, QuadratureSettings
from .oc import (
    OCResult,
    RejectionSet,
    Thresholds,
    bayes_power,
    bayes_t1e,
    freq_power,
    freq_t1e_sup,
    oc_at,
    pce_null,
    rejection_set,
)
from .oracle import McSettings, mc_operating_characteristics
from .predictive import (
    TrialLayout,
    UpdatedShapes,
    pred_indep,
    pred_leq,
    pred_minus,
    pred_plus,
    pred_point_null,
)
from .priors import (
    HypothesisSpec,
    PriorRole,
    PriorSpec,
    TestKind,
    trunc_const_leq,
    trunc_const_minus,
    trunc_const_plus,
)

__all__ = [
    "__version__",
    "BFOrientation",
    "Orientation",
    "bf01_two_sided",
    "bf_minus_over_null",
    "bf_plus_over_minus",
    "bf_plus_over_null",
    "CalibrationTargets",
    "DesignResult",
    "SearchRange",
    "allocate",
    "calibrate",
    "oc_curve",
    "ConvergenceError",
    "QuadratureSettings",
    "OCResult",
    "RejectionSet",
    "Thresholds",
    "bayes_power",
    "bayes_t1e",
    "freq_power",
    "freq_t1e_sup",
    "oc_at",
    "pce_null",
    "rejection_set",
    "McSettings",
    "mc_operating_characteristics",
    "TrialLayout",
    "UpdatedShapes",
    "pred_indep",
    "pred_leq",
    "pred_minus",
    "pred_plus",
    "pred_point_null",
    "HypothesisSpec",
    "PriorRole",
    "PriorSpec",
    "TestKind",
    "trunc_const_leq",
    "trunc_const_minus",
    "trunc_const_plus",
]
