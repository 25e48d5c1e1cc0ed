"""Command-line interface: bf, oc, and calibrate subcommands.

Outputs are machine-readable (json, csv for curves, svg-plot with a csv
sidecar) or a human-readable table. Every run echoes the fully resolved
configuration so results are self-describing.
"""

from __future__ import annotations

import argparse
import csv
import enum
import io
import json
import os
import sys
import time
from fractions import Fraction
from typing import Optional

from . import __version__
from .bayesfactor import (
    BFOrientation,
    bf01_two_sided,
    bf_minus_over_null,
    bf_plus_over_minus,
    bf_plus_over_null,
)
from .design import CalibrationTargets, DesignResult, SearchRange, calibrate
from .numerics import ConvergenceError
from .oc import Thresholds, oc_at, rejection_set
from .predictive import TrialLayout
from .priors import HypothesisSpec, PriorRole, PriorSpec, TestKind

__all__ = ["OutputFormat", "ConfigError", "main", "cmd_bf", "cmd_oc", "cmd_calibrate"]


class OutputFormat(enum.Enum):
    JSON = "json"
    CSV = "csv"
    SVG_PLOT = "svg-plot"
    HUMAN_TABLE = "human-table"


class ConfigError(Exception):
    pass


def _fraction(text: str) -> float:
    """Accept decimal ('0.1') and fraction ('1/10') syntax."""
    try:
        return float(Fraction(text))
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number or fraction: {text!r}")


_CURVE_KEYS = (
    "n_total",
    "n1",
    "n2",
    "bayes_power",
    "bayes_t1e",
    "pce_null",
    "freq_t1e",
    "freq_power",
)

_JEFFREYS_BINS = ((3.0, "anecdotal"), (10.0, "moderate"), (30.0, "strong"), (100.0, "very strong"))

_NUM_DEN = {
    "BF01_NULL_OVER_ALT": ("H0", "H1"),
    "BF_PLUS_OVER_NULL": ("H+", "H0"),
    "BF_MINUS_OVER_NULL": ("H-", "H0"),
    "BF_PLUS_OVER_MINUS": ("H+", "H-"),
}


def jeffreys_label(bf: BFOrientation) -> str:
    num, den = _NUM_DEN[bf.orientation.value]
    if bf.value >= 1.0:
        v, favored, other = bf.value, num, den
    else:
        v, favored, other = 1.0 / bf.value, den, num
    strength = "extreme"
    for bound, name in _JEFFREYS_BINS:
        if v < bound:
            strength = name
            break
    return f"{strength} evidence for {favored} over {other}"


def _add_analysis_prior_flags(p: argparse.ArgumentParser) -> None:
    for flag in ("a1a", "b1a", "a2a", "b2a", "a0a", "b0a", "a1na", "b1na", "a2na", "b2na"):
        p.add_argument(f"--{flag}", type=_fraction, default=None, metavar="X")


def _add_design_prior_flags(p: argparse.ArgumentParser) -> None:
    for flag in ("a1d", "b1d", "a2d", "b2d", "a0d", "b0d", "a1nd", "b1nd", "a2nd", "b2nd"):
        p.add_argument(f"--{flag}", type=_fraction, default=None, metavar="X")


def _pick(args, name: str, default: Optional[float] = 1.0) -> Optional[float]:
    v = getattr(args, name)
    return default if v is None else v


def _resolve_spec(args, test: TestKind, role: PriorRole) -> HypothesisSpec:
    sfx = "a" if role is PriorRole.ANALYSIS else "d"
    arm1 = PriorSpec(_pick(args, f"a1{sfx}"), _pick(args, f"b1{sfx}"))
    arm2 = PriorSpec(_pick(args, f"a2{sfx}"), _pick(args, f"b2{sfx}"))
    point_given = getattr(args, f"a0{sfx}") is not None or getattr(args, f"b0{sfx}") is not None
    side_given = any(
        getattr(args, f"{f}{sfx}") is not None for f in ("a1n", "b1n", "a2n", "b2n")
    )
    if test is TestKind.PLUS_VS_MINUS:
        if point_given:
            raise ConfigError(f"--a0{sfx}/--b0{sfx} do not apply to the plusminus test")
        null_side1 = PriorSpec(_pick(args, f"a1n{sfx}"), _pick(args, f"b1n{sfx}"))
        null_side2 = PriorSpec(_pick(args, f"a2n{sfx}"), _pick(args, f"b2n{sfx}"))
        return HypothesisSpec(
            test=test,
            role=role,
            arm1_prior=arm1,
            arm2_prior=arm2,
            arm1_prior_null_side=null_side1,
            arm2_prior_null_side=null_side2,
        )
    if side_given:
        raise ConfigError("null-side prior flags apply only to the plusminus test")
    if test is TestKind.TWO_SIDED and role is PriorRole.ANALYSIS:
        if point_given:
            raise ConfigError("--a0a/--b0a do not apply to the two-sided analysis prior")
        return HypothesisSpec(test=test, role=role, arm1_prior=arm1, arm2_prior=arm2)
    null = PriorSpec(_pick(args, f"a0{sfx}"), _pick(args, f"b0{sfx}"))
    return HypothesisSpec(test=test, role=role, arm1_prior=arm1, arm2_prior=arm2, null_prior=null)


def _prior_list(p: Optional[PriorSpec]):
    return None if p is None else [p.a, p.b]


def _spec_dict(h: HypothesisSpec) -> dict:
    return {
        "test": h.test.value,
        "role": h.role.value,
        "arm1_prior": _prior_list(h.arm1_prior),
        "arm2_prior": _prior_list(h.arm2_prior),
        "null_prior": _prior_list(h.null_prior),
        "arm1_prior_null_side": _prior_list(h.arm1_prior_null_side),
        "arm2_prior_null_side": _prior_list(h.arm2_prior_null_side),
    }


def _resolve_threads(args) -> Optional[int]:
    env = os.environ.get("BFBIN_THREADS")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise ConfigError(f"BFBIN_THREADS must be an integer, got {env!r}")
    if getattr(args, "threads", None) is not None:
        return args.threads
    return os.cpu_count()


def _write_text(text: str, out_file: Optional[str]) -> None:
    if out_file is None:
        sys.stdout.write(text)
    else:
        with open(out_file, "w", encoding="utf-8", newline="") as f:
            f.write(text)


def _json_document(config: dict, result: dict, started: float) -> str:
    doc = {
        "config": config,
        "result": result,
        "meta": {
            "version": __version__,
            "runtime_ms": int(round((time.perf_counter() - started) * 1000.0)),
        },
    }
    return json.dumps(doc, indent=2) + "\n"


def _human_table(pairs) -> str:
    width = max(len(k) for k, _ in pairs)
    return "".join(f"{k.ljust(width)}  {v}\n" for k, v in pairs)


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return f"{x:.10g}"
    return str(x)


def _curve_dicts(result: DesignResult) -> list:
    rows = []
    for r in result.curves:
        rows.append(
            {
                "n_total": r.n_total,
                "n1": r.n1,
                "n2": r.n2,
                "bayes_power": r.oc.bayes_power,
                "bayes_t1e": r.oc.bayes_t1e,
                "pce_null": r.oc.pce_null,
                "freq_t1e": r.oc.freq_t1e_sup,
                "freq_power": r.oc.freq_power,
            }
        )
    return rows


def _curves_csv(rows: list) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(_CURVE_KEYS)
    for row in rows:
        writer.writerow([_fmt(row[key]) for key in _CURVE_KEYS])
    return buf.getvalue()


def cmd_bf(args) -> int:
    started = time.perf_counter()
    test = TestKind(args.test)
    analysis = _resolve_spec(args, test, PriorRole.ANALYSIS)
    layout = TrialLayout(args.n1, args.n2)
    compute = {
        TestKind.TWO_SIDED: lambda: bf01_two_sided(args.y1, args.y2, layout, analysis),
        TestKind.PLUS_VS_POINT: lambda: bf_plus_over_null(args.y1, args.y2, layout, analysis),
        TestKind.MINUS_VS_POINT: lambda: bf_minus_over_null(args.y1, args.y2, layout, analysis),
        TestKind.PLUS_VS_MINUS: lambda: bf_plus_over_minus(args.y1, args.y2, layout, analysis),
    }[test]
    bf = compute()
    config = {
        "command": "bf",
        "test": test.value,
        "n1": args.n1,
        "y1": args.y1,
        "n2": args.n2,
        "y2": args.y2,
        "analysis": _spec_dict(analysis),
    }
    result = {
        "value": bf.value,
        "log_value": bf.log_value,
        "orientation": bf.orientation.value,
        "jeffreys": jeffreys_label(bf),
    }
    if OutputFormat(args.output) is OutputFormat.JSON:
        _write_text(_json_document(config, result, started), args.out_file)
    else:
        pairs = [
            ("test", test.value),
            ("counts", f"y1={args.y1}/{args.n1}, y2={args.y2}/{args.n2}"),
            ("bf", f"{bf.value:.10g}"),
            ("log_bf", f"{bf.log_value:.10g}"),
            ("orientation", bf.orientation.value),
            ("jeffreys", jeffreys_label(bf)),
        ]
        _write_text(_human_table(pairs), args.out_file)
    return 0


def cmd_oc(args) -> int:
    started = time.perf_counter()
    test = TestKind(args.test)
    analysis = _resolve_spec(args, test, PriorRole.ANALYSIS)
    design = _resolve_spec(args, test, PriorRole.DESIGN)
    layout = TrialLayout(args.n1, args.n2)
    thresholds = Thresholds(k=args.k, k_f=args.kf)
    point = None
    if (args.p1 is None) != (args.p2 is None):
        raise ConfigError("--p1 and --p2 must be given together")
    if args.p1 is not None:
        point = (args.p1, args.p2)
    oc = oc_at(
        layout,
        analysis,
        design,
        thresholds,
        freq_power_point=point,
        compute_freq_t1e=args.freq_t1e,
        grid_step=args.grid_step,
    )
    rejset = rejection_set(layout, analysis, thresholds.k)
    config = {
        "command": "oc",
        "test": test.value,
        "n1": args.n1,
        "n2": args.n2,
        "k": args.k,
        "k_f": args.kf,
        "analysis": _spec_dict(analysis),
        "design": _spec_dict(design),
        "freq_power_point": list(point) if point else None,
        "compute_freq_t1e": bool(args.freq_t1e),
        "grid_step": args.grid_step,
    }
    result = {
        "bayes_power": oc.bayes_power,
        "bayes_t1e": oc.bayes_t1e,
        "pce_null": oc.pce_null,
        "rejection_set_size": len(rejset.members),
        "freq_t1e": oc.freq_t1e_sup,
        "freq_t1e_at": list(oc.freq_t1e_at) if oc.freq_t1e_at else None,
        "freq_power": oc.freq_power,
    }
    if OutputFormat(args.output) is OutputFormat.JSON:
        _write_text(_json_document(config, result, started), args.out_file)
    else:
        pairs = [(k, _fmt(v) if not isinstance(v, list) else str(v)) for k, v in result.items()]
        _write_text(_human_table(pairs), args.out_file)
    return 0


def _svg_report(result: DesignResult, targets: CalibrationTargets, out_file: str) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    import numpy as np
    from scipy.stats import beta as beta_dist

    fig, (ax_prior, ax_power, ax_pce) = plt.subplots(3, 1, figsize=(7.0, 10.0))
    echo = result.config_echo
    grid = np.linspace(0.001, 0.999, 400)
    shown = set()
    for label, pair in (
        ("design arm 1", echo["design"]["arm1_prior"]),
        ("design arm 2", echo["design"]["arm2_prior"]),
        ("design null", echo["design"]["null_prior"]),
        ("design null-side arm 1", echo["design"]["arm1_prior_null_side"]),
        ("design null-side arm 2", echo["design"]["arm2_prior_null_side"]),
    ):
        if pair is None or tuple(pair) + (label,) in shown:
            continue
        shown.add(tuple(pair) + (label,))
        ax_prior.plot(grid, beta_dist.pdf(grid, *pair), label=f"{label} Beta{tuple(pair)}")
    ax_prior.set_xlabel("proportion")
    ax_prior.set_ylabel("density")
    ax_prior.set_title("design priors")
    ax_prior.legend(fontsize=8)

    totals = [r.n_total for r in result.curves]
    ax_power.plot(totals, [r.oc.bayes_power for r in result.curves], label="bayes power")
    ax_power.plot(totals, [r.oc.bayes_t1e for r in result.curves], label="bayes type-I error")
    if any(r.oc.freq_t1e_sup is not None for r in result.curves):
        ax_power.plot(
            totals, [r.oc.freq_t1e_sup for r in result.curves], label="freq type-I error"
        )
    if any(r.oc.freq_power is not None for r in result.curves):
        ax_power.plot(totals, [r.oc.freq_power for r in result.curves], label="freq power")
    ax_power.axhline(targets.power_target, linestyle="--", linewidth=0.8, color="gray")
    ax_power.axhline(targets.alpha_target, linestyle=":", linewidth=0.8, color="gray")
    ax_power.set_xlabel("total sample size")
    ax_power.set_ylabel("probability")
    ax_power.set_title("power and type-I error")
    ax_power.legend(fontsize=8)

    ax_pce.plot(totals, [r.oc.pce_null for r in result.curves], label="pce under null")
    ax_pce.axhline(targets.pce_target, linestyle="--", linewidth=0.8, color="gray")
    ax_pce.set_xlabel("total sample size")
    ax_pce.set_ylabel("probability")
    ax_pce.set_title("probability of compelling evidence")
    ax_pce.legend(fontsize=8)

    fig.tight_layout()
    fig.savefig(out_file, format="svg")
    plt.close(fig)


def _csv_sidecar_path(out_file: str) -> str:
    root, ext = os.path.splitext(out_file)
    return (root if ext else out_file) + ".csv"


def cmd_calibrate(args) -> int:
    started = time.perf_counter()
    test = TestKind(args.test)
    analysis = _resolve_spec(args, test, PriorRole.ANALYSIS)
    design = _resolve_spec(args, test, PriorRole.DESIGN)
    if (args.p1 is None) != (args.p2 is None):
        raise ConfigError("--p1 and --p2 must be given together")
    point = (args.p1, args.p2) if args.p1 is not None else None
    targets = CalibrationTargets(
        thresholds=Thresholds(k=args.k, k_f=args.kf),
        power_target=args.power,
        alpha_target=args.alpha,
        pce_target=args.pce,
        freq_power_point=point,
        compute_freq_t1e=args.freq_t1e,
        grid_step=args.grid_step,
    )
    search = SearchRange(
        n_min=args.nmin,
        n_max=args.nmax,
        n_step=args.step,
        alloc1=args.alloc1,
        alloc2=args.alloc2,
        lookahead=args.lookahead,
    )
    result = calibrate(analysis, design, targets, search, threads=_resolve_threads(args))
    rows = _curve_dicts(result)
    fmt = OutputFormat(args.output)
    if fmt is OutputFormat.SVG_PLOT and args.out_file is None:
        raise ConfigError("svg-plot output requires --out-file")
    result_dict = {
        "n_power": result.n_power,
        "n_alpha": result.n_alpha,
        "n_pce": result.n_pce,
        "n_freq_power": result.n_freq_power,
        "curves": rows,
    }
    if fmt is OutputFormat.JSON:
        _write_text(_json_document(result.config_echo, result_dict, started), args.out_file)
    elif fmt is OutputFormat.CSV:
        _write_text(_curves_csv(rows), args.out_file)
    elif fmt is OutputFormat.SVG_PLOT:
        _svg_report(result, targets, args.out_file)
        _write_text(_curves_csv(rows), _csv_sidecar_path(args.out_file))
    else:
        pairs = [
            ("n_power", _fmt(result.n_power) or "not reached"),
            ("n_alpha", _fmt(result.n_alpha) or "not reached"),
            ("n_pce", _fmt(result.n_pce) or "not reached"),
            ("n_freq_power", _fmt(result.n_freq_power) or "not reached"),
            ("curve_rows", str(len(rows))),
        ]
        header = "  ".join(k.rjust(11) for k in _CURVE_KEYS)
        lines = [_human_table(pairs), header + "\n"]
        for row in rows:
            lines.append("  ".join(_fmt(row[k]).rjust(11) for k in _CURVE_KEYS) + "\n")
        _write_text("".join(lines), args.out_file)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bfbin",
        description="Bayes factor design and analysis for two-arm binomial trials",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    test_choices = [t.value for t in TestKind]

    p_bf = sub.add_parser("bf", help="Bayes factor at observed counts")
    p_bf.add_argument("--test", required=True, choices=test_choices)
    p_bf.add_argument("--n1", type=int, required=True)
    p_bf.add_argument("--y1", type=int, required=True)
    p_bf.add_argument("--n2", type=int, required=True)
    p_bf.add_argument("--y2", type=int, required=True)
    _add_analysis_prior_flags(p_bf)
    p_bf.add_argument("--output", choices=["json", "human-table"], default="human-table")
    p_bf.add_argument("--out-file", default=None)
    p_bf.set_defaults(func=cmd_bf)

    p_oc = sub.add_parser("oc", help="operating characteristics at fixed arm sizes")
    p_oc.add_argument("--test", required=True, choices=test_choices)
    p_oc.add_argument("--n1", type=int, required=True)
    p_oc.add_argument("--n2", type=int, required=True)
    p_oc.add_argument("--k", type=_fraction, required=True)
    p_oc.add_argument("--kf", type=_fraction, default=3.0)
    _add_analysis_prior_flags(p_oc)
    _add_design_prior_flags(p_oc)
    p_oc.add_argument("--freq-t1e", action="store_true")
    p_oc.add_argument("--grid-step", type=_fraction, default=0.005)
    p_oc.add_argument("--p1", type=_fraction, default=None)
    p_oc.add_argument("--p2", type=_fraction, default=None)
    p_oc.add_argument("--output", choices=["json", "human-table"], default="human-table")
    p_oc.add_argument("--out-file", default=None)
    p_oc.set_defaults(func=cmd_oc)

    p_cal = sub.add_parser("calibrate", help="smallest-n calibration search")
    p_cal.add_argument("--test", required=True, choices=test_choices)
    p_cal.add_argument("--k", type=_fraction, required=True)
    p_cal.add_argument("--kf", type=_fraction, default=3.0)
    p_cal.add_argument("--power", type=_fraction, default=0.8)
    p_cal.add_argument("--alpha", type=_fraction, default=0.05)
    p_cal.add_argument("--pce", type=_fraction, default=0.8)
    p_cal.add_argument("--nmin", type=int, required=True)
    p_cal.add_argument("--nmax", type=int, required=True)
    p_cal.add_argument("--step", type=int, default=1)
    _add_analysis_prior_flags(p_cal)
    _add_design_prior_flags(p_cal)
    p_cal.add_argument("--alloc1", type=_fraction, default=0.5)
    p_cal.add_argument("--alloc2", type=_fraction, default=0.5)
    p_cal.add_argument("--lookahead", type=int, default=10)
    p_cal.add_argument("--p1", type=_fraction, default=None)
    p_cal.add_argument("--p2", type=_fraction, default=None)
    p_cal.add_argument("--freq-t1e", action="store_true")
    p_cal.add_argument("--grid-step", type=_fraction, default=0.005)
    p_cal.add_argument("--threads", type=int, default=None)
    p_cal.add_argument(
        "--output",
        choices=["json", "csv", "svg-plot", "human-table"],
        default="json",
    )
    p_cal.add_argument("--out-file", default=None)
    p_cal.set_defaults(func=cmd_calibrate)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ValueError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except (ConvergenceError, ArithmeticError, RuntimeError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
