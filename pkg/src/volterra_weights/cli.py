"""Command-line front end.

Usage:
    volterra-weights weight-check --config cfg.json
    volterra-weights classify --config cfg.json --operator volterra
    volterra-weights corollary-table --alpha 1 --p 1 2 3 --max-deg 5
    volterra-weights lp-check --config cfg.json --seed 42

Exit codes: 0 success, 1 a requested check failed, 2 malformed config,
3 inconclusive trend, 4 hypothesis failure, 5 grid coverage,
6 disagreement with the degree rule.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from . import io
from ._numerics import log_grid
from .classifier import (
    Verdict,
    classify_multiplication,
    evaluate_volterra,
    lp_log_norms,
    oracle_exp_power,
    prepare_volterra,
)
from .entire import monomial, random_polynomials
from .exceptions import (
    ConsistencyError,
    DomainCoverageError,
    InconclusiveError,
    ParameterError,
    PartialOracleError,
    PreconditionError,
    UnsupportedFamilyError,
)
from .weights import (
    check_essentialness,
    check_kp_condition,
    check_thm_two_weight_conditions,
    check_weight_axioms,
    exponent_from_weight,
    growth_from_weight,
    make_weight,
)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_CONFIG = 2
EXIT_INCONCLUSIVE = 3
EXIT_HYPOTHESIS = 4
EXIT_COVERAGE = 5
EXIT_DISAGREE = 6

ALL_CHECKS = ("axioms", "kp", "two_weight", "essentialness")


def _log(msg):
    print(msg, file=sys.stderr)


def _grid_for(cfg, start):
    lo = start if cfg.r_min is None else max(float(cfg.r_min), start)
    return log_grid(max(lo, 1e-12), cfg.r_max, cfg.points)


def cmd_weight_check(cfg):
    spec = cfg.weight or cfg.source_weight
    v = io.parse_weight(spec, "weight")
    checks = cfg.checks or list(ALL_CHECKS)
    bad = [c for c in checks if c not in ALL_CHECKS]
    if bad:
        raise io.ConfigError(f"checks: unknown check(s) {bad}; expected {list(ALL_CHECKS)}")
    reports = []
    try:
        for name in checks:
            if name == "axioms":
                reports.append(check_weight_axioms(v))
            elif name == "kp":
                reports.append(check_kp_condition(growth_from_weight(v)))
            elif name == "two_weight":
                reports.append(check_thm_two_weight_conditions(v, cfg.delta))
            else:
                reports.append(check_essentialness(exponent_from_weight(v)))
    except UnsupportedFamilyError as exc:
        raise io.ConfigError(f"weight: {exc}") from None
    out = Path(cfg.output_dir)
    files = {out / f"check_{r.name}.json": io.dumps(r.to_dict()) for r in reports}
    summary = {"weight": v.to_dict(), "passed": all(r.passed for r in reports),
               "reports": [r.to_dict() for r in reports]}
    files[out / "weight_check.json"] = io.dumps(summary)
    io.write_all(files)
    sys.stdout.write(io.dumps(summary))
    return EXIT_OK if summary["passed"] else EXIT_FAILED


def cmd_classify(cfg, operator="volterra"):
    v = io.parse_weight(cfg.source_weight, "source_weight")
    w = io.parse_weight(cfg.target_weight, "target_weight")
    g = io.parse_symbol(cfg.symbol, int(cfg.truncation))
    if operator == "volterra":
        pipe = prepare_volterra(v, w, r_max=cfg.r_max, points=cfg.points,
                                grid=None if cfg.r_min is None else _grid_for(cfg, 0.0))
        result = evaluate_volterra(pipe, g, cfg.slope_tol, cfg.tail_fraction)
    elif operator == "mult":
        grid = _grid_for(cfg, 1.0)
        result = classify_multiplication(v, w, g, cfg.slope_tol, cfg.tail_fraction, grid=grid)
    else:
        raise io.ConfigError(f"operator must be 'volterra' or 'mult', got {operator!r}")
    payload = dict(result.to_dict(), operator=operator, spaces="H^inf and H^0")
    curve = result.evidence
    out = Path(cfg.output_dir)
    io.write_all({
        out / "classification.json": io.dumps(payload),
        out / "curve.csv": io.csv_text(["r", "log_q"], curve.rows() if curve is not None else []),
    })
    sys.stdout.write(io.dumps(payload))
    return EXIT_OK


def corollary_rows(alpha, p_list, max_deg, r_max=50.0, points=64, slope_tol=0.05, tail_fraction=0.5):
    """One row per p: numeric verdicts for deg 0..max_deg and whether all match the degree rule."""
    rows = []
    for p in p_list:
        v = make_weight("exp_power", alpha=alpha, p=p)
        pipe = prepare_volterra(v, v, r_max=r_max, points=points)
        verdicts, agree = [], True
        for d in range(max_deg + 1):
            got = evaluate_volterra(pipe, monomial(d), slope_tol, tail_fraction, cross_check=False)
            verdicts.append(str(got.verdict))
            try:
                agree &= got.verdict == oracle_exp_power(alpha, p, d).verdict
            except PartialOracleError as exc:
                agree &= (got.verdict == Verdict.COMPACT) == exc.compact
        rows.append((alpha, p, verdicts, agree))
    return rows


def cmd_corollary_table(cfg, alpha, p_list, max_deg):
    rows = corollary_rows(alpha, p_list, max_deg, cfg.r_max, cfg.points, cfg.slope_tol, cfg.tail_fraction)
    header = ["alpha", "p"] + [f"deg_{d}" for d in range(max_deg + 1)] + ["oracle_agreement"]
    text = io.csv_text(header, [(float(a), float(p), *vs, str(ok).lower()) for a, p, vs, ok in rows])
    io.write_all({Path(cfg.output_dir) / "corollary_table.csv": text})
    sys.stdout.write(text)
    return EXIT_OK if all(r[3] for r in rows) else EXIT_DISAGREE


def lp_rows(phi, polys):
    rows = []
    for i, f in enumerate(polys):
        log_f, log_df = lp_log_norms(phi, f)
        log_f0 = math.log(abs(f.coeffs[0])) if f.coeffs[0] != 0 else -math.inf
        first = math.exp(log_df - log_f) if math.isfinite(log_df) else 0.0
        second = math.exp(log_f - np.logaddexp(log_f0, log_df))
        rows.append((i, int(f.degree), log_f, log_df, first, second))
    return rows


def cmd_lp_check(cfg):
    v = io.parse_weight(cfg.weight or cfg.source_weight or {"family": "exp_power", "alpha": 1.0, "p": 2.0},
                        "weight")
    try:
        phi = growth_from_weight(v)
    except UnsupportedFamilyError as exc:
        raise io.ConfigError(f"weight: {exc}") from None
    kp = check_kp_condition(phi)
    if not kp.passed:
        raise PreconditionError("sup phi'' phi / phi'^2 < inf", kp)
    probes = [monomial(0), monomial(1)]
    polys = random_polynomials(int(cfg.samples), int(cfg.max_degree), int(cfg.seed))
    probe_rows = lp_rows(phi, probes)
    rand_rows = lp_rows(phi, polys)
    vals = np.array([[r[4], r[5]] for r in rand_rows])
    finite = bool(np.all(np.isfinite(vals)) and all(np.isfinite(r[4:]).all() for r in probe_rows))
    C = float(np.max(np.maximum(vals, 1.0 / vals))) if vals.size else math.nan
    header = ["kind", "index", "degree", "log_norm_f_w", "log_norm_df_u", "ratio_df_over_f", "ratio_f_over_sum"]
    rows = [("probe", *r) for r in probe_rows] + [("random", *r) for r in rand_rows]
    summary = {"seed": int(cfg.seed), "samples": int(cfg.samples), "r_phi": phi.r_phi,
               "envelope_C": C, "min_ratio_df_over_f": float(vals[:, 0].min()),
               "max_ratio_df_over_f": float(vals[:, 0].max()),
               "min_ratio_f_over_sum": float(vals[:, 1].min()),
               "max_ratio_f_over_sum": float(vals[:, 1].max()), "all_finite": finite}
    out = Path(cfg.output_dir)
    io.write_all({out / "lp_check.csv": io.csv_text(header, rows), out / "lp_summary.json": io.dumps(summary)})
    sys.stdout.write(io.dumps(summary))
    return EXIT_OK if finite else EXIT_FAILED


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON run configuration")
    common.add_argument("--out", dest="output_dir", help="output directory")
    common.add_argument("--seed", type=int)
    common.add_argument("--grid-points", dest="points", type=int)
    common.add_argument("--r-max", dest="r_max", type=float)
    common.add_argument("--truncation", type=int)
    common.add_argument("--slope-tol", dest="slope_tol", type=float)

    parser = argparse.ArgumentParser(prog="volterra-weights", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("weight-check", parents=[common], help="check weight hypotheses")
    pc = sub.add_parser("classify", parents=[common], help="classify V_g or M_h")
    pc.add_argument("--operator", choices=["volterra", "mult"], default="volterra")
    pt = sub.add_parser("corollary-table", parents=[common], help="degree table for exp-power weights")
    pt.add_argument("--alpha", type=float, default=1.0)
    pt.add_argument("--p", dest="p_list", type=float, nargs="+", default=[1.0, 2.0, 3.0])
    pt.add_argument("--max-deg", type=int, default=5)
    sub.add_parser("lp-check", parents=[common], help="Littlewood-Paley ratio sample")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    overrides = {k: getattr(args, k) for k in
                 ("output_dir", "seed", "points", "r_max", "truncation", "slope_tol")}
    try:
        cfg = io.load_config(args.config, overrides)
        if args.command == "weight-check":
            return cmd_weight_check(cfg)
        if args.command == "classify":
            return cmd_classify(cfg, args.operator)
        if args.command == "corollary-table":
            if not args.alpha > 0 or any(not p > 0 for p in args.p_list) or args.max_deg < 0:
                raise io.ConfigError("alpha > 0, p > 0 and max-deg >= 0 required")
            return cmd_corollary_table(cfg, args.alpha, args.p_list, args.max_deg)
        return cmd_lp_check(cfg)
    except (io.ConfigError, ParameterError) as exc:
        _log(f"config error: {exc}")
        return EXIT_CONFIG
    except InconclusiveError as exc:
        _log(f"inconclusive: {exc}")
        return EXIT_INCONCLUSIVE
    except PreconditionError as exc:
        _log(str(exc))
        return EXIT_HYPOTHESIS
    except DomainCoverageError as exc:
        _log(f"grid coverage: {exc}")
        return EXIT_COVERAGE
    except ConsistencyError as exc:
        _log(f"internal consistency: {exc}")
        return EXIT_DISAGREE


if __name__ == "__main__":
    sys.exit(main())
