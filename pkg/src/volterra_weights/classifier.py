"""Criterion curves for V_g and M_h, trend classification, and the degree rule for exp-power weights."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from ._numerics import log_grid, safe_log, tail_start
from .assoc import assoc_upper_log, build_table, default_table_size
from .entire import (
    differentiate,
    log_coeff_majorant,
    weighted_norm_log,
)
from .exceptions import (
    ConsistencyError,
    InconclusiveError,
    ParameterError,
    PartialOracleError,
    PreconditionError,
)
from .weights import (
    EXP_POWER,
    check_essentialness,
    check_kp_condition,
    check_thm_two_weight_conditions,
    check_weight_axioms,
    derived_weight_u,
    exponent_from_weight,
    growth_from_weight,
)

OSCILLATION_FLOOR = 0.1
WEAK_COMPACT_NOTE = "equivalent to compactness under interpolation hypothesis"


class Verdict(str, enum.Enum):
    UNBOUNDED = "Unbounded"
    BOUNDED = "Bounded"
    COMPACT = "Compact"

    def __str__(self):
        return self.value


class Form(str, enum.Enum):
    PHI = "PhiForm"
    TWO_WEIGHT = "TwoWeightForm"
    MULT = "MultForm"

    def __str__(self):
        return self.value


@dataclass
class CriterionCurve:
    form: Form
    r: np.ndarray
    log_q: np.ndarray
    r_start: float

    @property
    def empty(self):
        """Marks ``V_g = 0`` (constant symbol)."""
        return self.r.size == 0

    def rows(self):
        return list(zip(self.r.tolist(), self.log_q.tolist()))


@dataclass
class Classification:
    verdict: Verdict
    slope: float
    tail_value: float
    weak_compact_note: str = ""
    evidence: CriterionCurve | None = None
    proxy: str = ""
    warnings: list = field(default_factory=list)

    @property
    def form(self):
        return str(self.evidence.form) if self.evidence is not None else ""

    def to_dict(self):
        return {
            "verdict": str(self.verdict),
            "slope": self.slope,
            "tail_value": self.tail_value,
            "proxy": self.proxy,
            "form": self.form,
            "weak_compact_note": self.weak_compact_note,
            "warnings": list(self.warnings),
        }


def _empty_curve(form, r_start):
    return CriterionCurve(form, np.empty(0), np.empty(0), r_start)


def _finite_curve(form, r, log_q, r_start):
    if not np.all(np.isfinite(log_q)):
        raise ValueError("criterion curve has non-finite samples")
    return CriterionCurve(form, r, log_q, r_start)


def criterion_curve_phi(v_proxy_log, phi, g, grid):
    """``log q(r) = log|g'|_maj(r) - log phi'(r) - log v~(r)`` on ``grid >= r_phi``."""
    r = np.asarray(grid, dtype=float)
    if r.size and r[0] < phi.r_phi:
        raise ParameterError(f"grid must start at or beyond r_phi = {phi.r_phi:g}")
    dg = differentiate(g)
    if dg.is_zero:
        return _empty_curve(Form.PHI, phi.r_phi)
    log_q = log_coeff_majorant(dg, r) - phi.log_phi_prime(r) - v_proxy_log(r)
    return _finite_curve(Form.PHI, r, log_q, phi.r_phi)


def criterion_curve_two_weight(v_proxy_log, w, g, grid, r_start=None):
    """``log q = 2 log w + log|g'|_maj - log|w'| - log v~``."""
    r = np.asarray(grid, dtype=float)
    r_start = float(r[0]) if r_start is None else r_start
    dg = differentiate(g)
    if dg.is_zero:
        return _empty_curve(Form.TWO_WEIGHT, r_start)
    log_q = 2.0 * w.log_value(r) + log_coeff_majorant(dg, r) - w.log_abs_derivative(r) - v_proxy_log(r)
    return _finite_curve(Form.TWO_WEIGHT, r, log_q, r_start)


def criterion_curve_mult(v_proxy_log, w, h, grid):
    """``log q = log w + log|h|_maj - log v~``."""
    r = np.asarray(grid, dtype=float)
    if h.is_zero:
        return _empty_curve(Form.MULT, float(r[0]) if r.size else 0.0)
    log_q = w.log_value(r) + log_coeff_majorant(h, r) - v_proxy_log(r)
    return _finite_curve(Form.MULT, r, log_q, float(r[0]))


def _tail_fit(log_r, log_q):
    """Least squares ``log q ~ c + s log r + a / r``; returns ``(s, residual)``.

    The ``a / r`` column absorbs the transient from lower-order terms of the
    symbol, which approach a constant like ``1/r`` and would otherwise read as
    a slow power-law decline.
    """
    cols = [np.ones_like(log_r), log_r]
    if log_r.size >= 6:
        cols.append(np.exp(-log_r))
    X = np.column_stack(cols)
    coef, *_ = np.linalg.lstsq(X, log_q, rcond=None)
    return float(coef[1]), log_q - X @ coef


def classify(curve, slope_tol=0.05, tail_fraction=0.5):
    """Read Unbounded / Bounded / Compact off the tail trend of ``log q``.

    The tail is fitted by ``c + s log r + a / r``.  ``s > slope_tol`` is
    Unbounded, ``s < -slope_tol`` is Compact; in between, a power-law decline
    ``-s * (log r_end - log r_start)`` of at least 2 still counts as Compact,
    otherwise Bounded.
    """
    if curve.empty:
        return Classification(Verdict.COMPACT, -math.inf, -math.inf, evidence=curve,
                              warnings=["constant symbol: operator is zero"])
    r, lq = curve.r, curve.log_q
    if r.size < 16 or r[-1] < 10.0 * r[0]:
        raise ParameterError("curve needs >= 16 samples spanning at least one decade in r")
    i0 = min(tail_start(r.size, tail_fraction), r.size - 3)
    tr, tq = r[i0:], lq[i0:]
    lr = np.log(tr)
    steps = np.diff(tq) / np.diff(lr)
    signs = np.sign(np.where(np.abs(steps) > 1e-8 * (1.0 + np.abs(tq[1:])), steps, 0.0))
    signs = signs[signs != 0]
    s, resid = _tail_fit(lr, tq)
    wobble = float(np.max(np.abs(resid)))
    # small sawtooth (e.g. from the integer-n envelope) is not an oscillation
    if np.count_nonzero(signs[1:] != signs[:-1]) > 3 and wobble > OSCILLATION_FLOOR:
        raise InconclusiveError("criterion ratio oscillates on the tail", curve)
    drop = -s * float(lr[-1] - lr[0])
    warnings = []
    if s > slope_tol:
        verdict = Verdict.UNBOUNDED
    elif s < -slope_tol:
        verdict = Verdict.COMPACT
    elif drop >= 2.0:
        verdict = Verdict.COMPACT
    else:
        verdict = Verdict.BOUNDED
        if drop > 1e-3:
            warnings.append(f"slow decay over tail (fitted decline {drop:.3g}); classified Bounded")
    return Classification(verdict, s, float(tq[-1]), evidence=curve, warnings=warnings)


def oracle_exp_power(alpha, p, deg_g):
    """Verdict of ``V_g`` on ``H^inf_v`` with ``v = exp(-alpha r^p)`` and polynomial ``g``.

    Bounded iff ``deg g <= floor(p)`` (only answered for ``p >= 1``); compact
    iff ``deg g < p``, which equals ``deg g <= p - 1`` for integer ``p``.  A
    constant symbol gives the zero operator.
    """
    if not (alpha > 0 and p > 0):
        raise ParameterError("alpha > 0 and p > 0 required")
    if deg_g < 0:
        raise ParameterError("deg_g >= 0 required")
    if deg_g == 0 or deg_g < p:
        return Classification(Verdict.COMPACT, math.nan, math.nan, WEAK_COMPACT_NOTE)
    if p < 1:
        raise PartialOracleError("boundedness rule only stated for p >= 1", compact=False)
    if deg_g <= math.floor(p):
        return Classification(Verdict.BOUNDED, math.nan, math.nan, WEAK_COMPACT_NOTE)
    return Classification(Verdict.UNBOUNDED, math.nan, math.nan, WEAK_COMPACT_NOTE)


# --- full pipeline -----------------------------------------------------------

AXIOM_GRID = log_grid(1e-2, 1e4, 200)


@dataclass
class Pipeline:
    """Everything about (v, w) that does not depend on the symbol."""

    source: object
    target: object
    grid: np.ndarray
    proxy: str
    proxy_log: object
    form: Form
    phi: object = None
    r_start: float = 0.0
    reports: dict = field(default_factory=dict)
    warnings: list = field(default_factory=list)


def select_proxy(v, r_max, policy="auto", reports=None):
    """Return ``(name, log_fn)``: ``v`` itself if certified essential, else the envelope ``v_M``."""
    if policy not in ("auto", "v", "vM"):
        raise ParameterError("proxy policy must be 'auto', 'v' or 'vM'")
    essential = False
    if policy == "auto" and v.has_derivatives:
        rep = check_essentialness(exponent_from_weight(v))
        if reports is not None:
            reports["essentialness"] = rep
        essential = rep.passed
    if policy == "v" or (policy == "auto" and essential):
        return "v", v.log_value
    table = build_table(v, default_table_size(v, r_max), strict=v.family == EXP_POWER)
    return "vM", lambda r: assoc_upper_log(table, r)


def prepare_volterra(v, w, *, r_max=50.0, points=64, grid=None, proxy="auto", form="auto", delta=0.5):
    reports = {}
    for role, weight in (("source", v), ("target", w)):
        rep = check_weight_axioms(weight, AXIOM_GRID)
        reports[f"{role}_axioms"] = rep
        if not rep.passed:
            raise PreconditionError(f"{role} weight axioms (non-increasing, rapid decay)", rep)
    if not w.has_derivatives:
        raise PreconditionError("target weight needs closed-form derivatives")

    phi = None
    if form in ("auto", "phi"):
        phi = growth_from_weight(w)
        kp = check_kp_condition(phi)
        reports["kp_condition"] = kp
        if not kp.passed:
            if form == "phi":
                raise PreconditionError("sup phi'' phi / phi'^2 < inf", kp)
            phi = None
    if phi is not None:
        chosen, r_start = Form.PHI, phi.r_phi
    else:
        tw = check_thm_two_weight_conditions(w, delta)
        reports["two_weight_conditions"] = tw
        if not tw.passed:
            raise PreconditionError("two-weight conditions on the target weight", tw)
        chosen, r_start = Form.TWO_WEIGHT, tw.witness[0][0]

    if grid is None:
        grid = log_grid(max(r_start, 1.0), r_max, points)
    grid = np.asarray(grid, dtype=float)
    grid = grid[grid >= r_start]
    name, proxy_log = select_proxy(v, float(grid[-1]), proxy, reports)
    pipe = Pipeline(v, w, grid, name, proxy_log, chosen, phi, r_start, reports)
    if _same_exp_power(v, w) and v.params["p"] < 1:
        pipe.warnings.append("p < 1: no closed-form boundedness rule to cross-check")
    return pipe


def _same_exp_power(v, w):
    return v.family == EXP_POWER and w.family == EXP_POWER and v.params == w.params


def volterra_curve(pipe, g):
    if pipe.form == Form.PHI:
        return criterion_curve_phi(pipe.proxy_log, pipe.phi, g, pipe.grid)
    return criterion_curve_two_weight(pipe.proxy_log, pipe.target, g, pipe.grid, pipe.r_start)


def evaluate_volterra(pipe, g, slope_tol=0.05, tail_fraction=0.5, cross_check=True):
    result = classify(volterra_curve(pipe, g), slope_tol, tail_fraction)
    result.proxy = pipe.proxy
    result.warnings = pipe.warnings + result.warnings
    if pipe.source.family == EXP_POWER:
        result.weak_compact_note = WEAK_COMPACT_NOTE
    result.warnings.append("verdict covers both H^inf and H^0 space pairs")
    if cross_check and g.exact and _same_exp_power(pipe.source, pipe.target):
        alpha, p = pipe.source.params["alpha"], pipe.source.params["p"]
        deg = max(int(g.degree), 0) if not g.is_zero else 0
        try:
            expected = oracle_exp_power(alpha, p, deg).verdict
        except PartialOracleError as exc:
            if (result.verdict == Verdict.COMPACT) != exc.compact:
                raise ConsistencyError(
                    f"numeric verdict {result.verdict} disagrees with compactness rule "
                    f"(alpha={alpha:g}, p={p:g}, deg={deg})"
                ) from None
        else:
            if result.verdict != expected:
                raise ConsistencyError(
                    f"numeric verdict {result.verdict} != degree rule {expected} "
                    f"(alpha={alpha:g}, p={p:g}, deg={deg})"
                )
    return result


def classify_volterra(v, w, g, slope_tol=0.05, tail_fraction=0.5, cross_check=True, **opts):
    """Classify ``V_g : H^inf_v -> H^inf_w``; see :func:`prepare_volterra` for ``opts``."""
    pipe = prepare_volterra(v, w, **opts)
    return evaluate_volterra(pipe, g, slope_tol, tail_fraction, cross_check)


def prepare_multiplication(v, w, *, r_max=50.0, points=64, grid=None, proxy="auto"):
    reports = {}
    for role, weight in (("source", v), ("target", w)):
        rep = check_weight_axioms(weight, AXIOM_GRID)
        reports[f"{role}_axioms"] = rep
        if not rep.passed:
            raise PreconditionError(f"{role} weight axioms (non-increasing, rapid decay)", rep)
    grid = log_grid(1.0, r_max, points) if grid is None else np.asarray(grid, dtype=float)
    name, proxy_log = select_proxy(v, float(grid[-1]), proxy, reports)
    return Pipeline(v, w, grid, name, proxy_log, Form.MULT, None, float(grid[0]), reports)


def evaluate_multiplication(pipe, h, slope_tol=0.05, tail_fraction=0.5):
    result = classify(criterion_curve_mult(pipe.proxy_log, pipe.target, h, pipe.grid),
                      slope_tol, tail_fraction)
    if h.is_zero:
        result.warnings = ["zero multiplier: operator is zero"]
    result.proxy = pipe.proxy
    if pipe.source.family == EXP_POWER:
        result.weak_compact_note = WEAK_COMPACT_NOTE
    return result


def classify_multiplication(v, w, h, slope_tol=0.05, tail_fraction=0.5, **opts):
    pipe = prepare_multiplication(v, w, **opts)
    return evaluate_multiplication(pipe, h, slope_tol, tail_fraction)


def lp_log_norms(phi, f, grid=None):
    """``(log ||f||_w, log ||f'||_u)`` for ``w = 1/phi`` and ``u = u_phi``."""
    log_f = weighted_norm_log(f, phi.weight, grid)
    log_df = weighted_norm_log(differentiate(f), derived_weight_u(phi), grid)
    return log_f, log_df


def lp_ratio(phi, f, grid=None):
    """``(||f'||_u / ||f||_w, ||f||_w / (|f(0)| + ||f'||_u))`` for ``w = 1/phi``, ``u = u_phi``."""
    if f.is_zero:
        raise ParameterError("f must be nonzero")
    log_f, log_df = lp_log_norms(phi, f, grid)
    log_f0 = float(safe_log(abs(f.coeffs[0])))
    first = math.exp(log_df - log_f) if math.isfinite(log_df) else 0.0
    second = math.exp(log_f - np.logaddexp(log_f0, log_df))
    return first, second
