"""Radial weights, growth functions and the hypothesis checks on them.

A closed-form weight is stored through its exponent: ``v(r) = exp(-psi(r))``.
Everything is evaluated in the log domain, so ``phi = 1/v = exp(psi)`` is
never formed explicitly; ``log phi'(r) = log psi'(r) + psi(r)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.optimize import bisect

from ._numerics import (
    inf_is_positive,
    log_grid,
    safe_exp,
    safe_log,
    sup_is_finite,
    tail_start,
)
from .exceptions import ParameterError, UnsupportedFamilyError

EXP_POWER = "exp_power"
EXP_POWER_LOG = "exp_power_log"
LOG_POWER = "log_power"
HARDY = "hardy"
CUSTOM = "custom"

FAMILIES = (EXP_POWER, EXP_POWER_LOG, LOG_POWER, HARDY, CUSTOM)

# r_phi is picked from this grid
COARSE_GRID = np.arange(1.0, 101.0)

DEFAULT_R_MAX = 1e4


# --- exponent formulas: each returns (psi, psi', psi'') at r with L = log r ----

def _exp_power(r, L, alpha, p):
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        rp = np.exp(p * L)
        psi = alpha * rp
        d1 = alpha * p * rp / r
        d2 = alpha * p * (p - 1.0) * rp / (r * r)
    return psi, d1, d2


def _log_power(r, L, p):
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        psi = L**p
        d1 = p * L ** (p - 1.0) / r
        d2 = p * ((p - 1.0) * L ** (p - 2.0) - L ** (p - 1.0)) / (r * r)
    return psi, d1, d2


def _exp_power_log(r, L, alpha, p, beta, q):
    psi, d1, d2 = _exp_power(r, L, alpha, p)
    lp, l1, l2 = _log_power(r, L, q)
    return psi - beta * lp, d1 - beta * l1, d2 - beta * l2


def _hardy(r, L, a, b, c, d, k, m):
    # psi = log of r^a (log r)^b exp(c r^d + k (log r)^m)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        LL = np.log(L)
        psi = a * L + b * LL
        d1 = a / r + b / (r * L)
        d2 = -a / (r * r) - b * (L + 1.0) / (r * r * L * L)
    if c > 0:
        e0, e1, e2 = _exp_power(r, L, c, d)
        psi, d1, d2 = psi + e0, d1 + e1, d2 + e2
    if k != 0:
        l0, l1, l2 = _log_power(r, L, m)
        psi, d1, d2 = psi + k * l0, d1 + k * l1, d2 + k * l2
    return psi, d1, d2


_FORMULAS = {
    EXP_POWER: (_exp_power, ("alpha", "p")),
    EXP_POWER_LOG: (_exp_power_log, ("alpha", "p", "beta", "q")),
    LOG_POWER: (_log_power, ("p",)),
    HARDY: (_hardy, ("a", "b", "c", "d", "k", "m")),
}

_DEFAULTS = {
    EXP_POWER: {"alpha": 1.0},
    EXP_POWER_LOG: {"alpha": 1.0, "beta": 0.0, "q": 1.0},
    LOG_POWER: {},
    HARDY: {"a": 0.0, "b": 0.0, "c": 0.0, "d": 1.0, "k": 0.0, "m": 2.0},
}

# families whose formula only makes sense for r >= 2
_PATCHED = {EXP_POWER_LOG: 2.0, LOG_POWER: 2.0, HARDY: 2.0}


@dataclass(frozen=True)
class RadialWeight:
    """A radial weight ``v(r)`` with log-domain evaluation.

    Closed-form families carry ``params``; ``custom`` weights carry only
    ``log_fn`` (a vectorised ``r -> log v(r)``) and cannot be used where
    derivatives are required.  Below ``patch_radius`` the family formula is
    replaced by the constant ``v(patch_radius)``.
    """

    family: str
    params: dict = field(default_factory=dict)
    patch_radius: float = 0.0
    log_fn: Callable | None = field(default=None, compare=False, repr=False)
    label: str = ""

    @property
    def has_derivatives(self):
        return self.family != CUSTOM

    def _terms(self, r):
        fn, names = _FORMULAS[self.family]
        r = np.asarray(r, dtype=float)
        reff = np.maximum(r, self.patch_radius)
        L = safe_log(reff)
        psi, d1, d2 = fn(reff, L, *(self.params[n] for n in names))
        below = r < self.patch_radius
        if np.any(below):
            d1 = np.where(below, 0.0, d1)
            d2 = np.where(below, 0.0, d2)
        return psi, d1, d2

    def log_value(self, r):
        """log v(r), vectorised."""
        if self.log_fn is not None:
            return np.asarray(self.log_fn(np.asarray(r, dtype=float)), dtype=float)
        psi, _, _ = self._terms(r)
        if self.family == EXP_POWER:
            # 0**p is fine, but keep psi(0) = 0 exact
            psi = np.where(np.asarray(r) == 0, 0.0, psi)
        return -psi

    def log_value_t(self, t):
        """log v(e^t); exact for log-type families even where e^t overflows."""
        t = np.asarray(t, dtype=float)
        if self.log_fn is not None:
            with np.errstate(over="ignore"):
                return self.log_value(np.exp(t))
        fn, names = _FORMULAS[self.family]
        tt = np.maximum(t, math.log(self.patch_radius)) if self.patch_radius > 0 else t
        with np.errstate(over="ignore"):
            r = np.exp(tt)
        psi, _, _ = fn(r, tt, *(self.params[n] for n in names))
        return np.where(np.isnan(psi), -np.inf, -psi)

    def value(self, r):
        return safe_exp(self.log_value(r))

    def _require_derivatives(self):
        if not self.has_derivatives:
            raise UnsupportedFamilyError(
                f"weight family {self.family!r} has no closed-form derivatives"
            )

    def psi(self, r):
        self._require_derivatives()
        return -self.log_value(r)

    def psi_prime(self, r):
        self._require_derivatives()
        return self._terms(r)[1]

    def psi_second(self, r):
        self._require_derivatives()
        return self._terms(r)[2]

    def log_abs_derivative(self, r):
        """log |v'(r)| = log psi'(r) - psi(r)."""
        return safe_log(self.psi_prime(r)) + self.log_value(r)

    def to_dict(self):
        if self.family == CUSTOM:
            raise UnsupportedFamilyError("custom weights are not expressible in config")
        return {"family": self.family, **self.params}


def make_weight(family, params=None, patch_radius=None, **kwargs):
    """Build a :class:`RadialWeight` after checking the parameter ranges.

    >>> float(make_weight("exp_power", alpha=1.0, p=2.0).log_value(1.0))
    -1.0
    """
    params = dict(params or {}, **kwargs)
    if family == CUSTOM:
        log_fn = params.pop("log_fn", None)
        if log_fn is None:
            raise ParameterError("custom weight needs log_fn")
        return RadialWeight(CUSTOM, {}, 0.0, log_fn, params.pop("label", "custom"))
    if family not in _FORMULAS:
        raise ParameterError(f"unknown weight family {family!r}; expected one of {FAMILIES}")
    names = _FORMULAS[family][1]
    full = dict(_DEFAULTS[family])
    for key, val in params.items():
        if key not in names:
            raise ParameterError(f"unexpected parameter {key!r} for family {family!r}")
        try:
            full[key] = float(val)
        except (TypeError, ValueError):
            raise ParameterError(f"parameter {key!r} must be a real number") from None
    missing = [n for n in names if n not in full]
    if missing:
        raise ParameterError(f"family {family!r} missing parameter(s): {', '.join(missing)}")
    if not all(math.isfinite(v) for v in full.values()):
        raise ParameterError("parameters must be finite")
    _validate(family, full)
    if patch_radius is None:
        patch_radius = _PATCHED.get(family, 0.0)
    if patch_radius < 0:
        raise ParameterError("patch_radius must be >= 0")
    return RadialWeight(family, full, float(patch_radius))


def _validate(family, p):
    if family in (EXP_POWER, EXP_POWER_LOG):
        if not p["alpha"] > 0:
            raise ParameterError("alpha > 0 required")
        if not p["p"] > 0:
            raise ParameterError("p > 0 required")
    if family == EXP_POWER_LOG and not p["q"] > 0:
        raise ParameterError("q > 0 required")
    if family == LOG_POWER and not p["p"] > 1:
        raise ParameterError("p > 1 required for log_power")
    if family == HARDY:
        if p["c"] > 0:
            if not p["d"] > 0:
                raise ParameterError("hardy: d > 0 required when c > 0")
        elif p["c"] == 0:
            if not (p["k"] > 0 and p["m"] > 1):
                raise ParameterError("hardy: with c = 0 need k > 0 and m > 1")
        else:
            raise ParameterError("hardy: c >= 0 required")


def weight_from_dict(spec):
    """Inverse of :meth:`RadialWeight.to_dict`."""
    if not isinstance(spec, dict) or "family" not in spec:
        raise ParameterError("weight spec must be an object with a 'family' key")
    spec = dict(spec)
    family = spec.pop("family")
    patch = spec.pop("patch_radius", None)
    return make_weight(family, spec, patch_radius=patch)


# --- growth function ---------------------------------------------------------

@dataclass(frozen=True)
class GrowthFunction:
    """``phi = 1/w`` for a closed-form weight ``w``, with derivatives in log form."""

    weight: RadialWeight
    r_phi: float

    def log_phi(self, r):
        return -self.weight.log_value(r)

    def log_phi_prime(self, r):
        return safe_log(self.weight.psi_prime(r)) + self.log_phi(r)

    def phi_second_over_prime(self, r):
        # phi''/phi' = psi''/psi' + psi'
        d1 = self.weight.psi_prime(r)
        d2 = self.weight.psi_second(r)
        with np.errstate(divide="ignore", invalid="ignore"):
            return d2 / d1 + d1

    def kp_ratio(self, r):
        """phi'' phi / phi'^2, as (phi''/phi') * (phi/phi')."""
        d1 = self.weight.psi_prime(r)
        with np.errstate(divide="ignore", invalid="ignore"):
            return self.phi_second_over_prime(r) / d1

    def log_u(self, r):
        """log u_phi(r) = -log max(phi'(r_phi), phi'(r)), constant on [0, r_phi]."""
        r = np.asarray(r, dtype=float)
        base = float(self.log_phi_prime(self.r_phi))
        above = r > self.r_phi
        vals = np.full(r.shape, -base)
        if np.any(above):
            vals[above] = -np.maximum(base, self.log_phi_prime(r[above]))
        return vals


def _pick_r_phi(weight):
    lp = np.asarray(safe_log(weight.psi_prime(COARSE_GRID)) - weight.log_value(COARSE_GRID))
    ok = (lp >= 0.0) & np.isfinite(lp)
    # phi' must also be non-decreasing from r_phi on
    rising = np.concatenate([np.diff(lp) >= 0, [True]])
    good = ok & rising
    # first index from which every later coarse point is good
    bad = np.nonzero(~good)[0]
    start = 0 if bad.size == 0 else bad[-1] + 1
    if start >= COARSE_GRID.size:
        raise ParameterError("phi' does not reach 1 on [1, 100]; cannot choose r_phi")
    return float(COARSE_GRID[start])


def growth_from_weight(v):
    """Return ``phi = 1/v`` with ``r_phi`` the first coarse-grid point where ``phi' >= 1``."""
    if not v.has_derivatives:
        raise UnsupportedFamilyError("growth function needs a closed-form weight family")
    return GrowthFunction(v, _pick_r_phi(v))


def derived_weight_u(phi):
    """The companion weight ``u_phi = 1/max(phi'(r_phi), phi'(r))`` as a custom weight."""
    return RadialWeight(CUSTOM, {}, 0.0, phi.log_u, "u_phi")


# --- exponent function -------------------------------------------------------

@dataclass(frozen=True)
class ExponentFunction:
    """psi with ``v = exp(-psi)`` on ``[domain_start, inf)``; callables are vectorised."""

    psi: Callable
    psi_prime: Callable
    psi_second: Callable
    domain_start: float = 0.0


def exponent_from_weight(v):
    if not v.has_derivatives:
        raise UnsupportedFamilyError("exponent function needs a closed-form weight family")
    return ExponentFunction(v.psi, v.psi_prime, v.psi_second, v.patch_radius)


# --- condition reports -------------------------------------------------------

@dataclass
class ConditionReport:
    name: str
    passed: bool
    witness: list
    sup_or_lim_estimate: float
    notes: str = ""
    subchecks: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.passed and not self.witness:
            raise ValueError("a failed report needs at least one witness point")

    def to_dict(self):
        return {
            "name": self.name,
            "passed": bool(self.passed),
            "sup_or_lim_estimate": float(self.sup_or_lim_estimate),
            "witness": [[float(r), float(x)] for r, x in self.witness],
            "notes": self.notes,
            "subchecks": {k: bool(v) for k, v in self.subchecks.items()},
        }


def _pairs(r, x, idx=None):
    r = np.atleast_1d(r)
    x = np.atleast_1d(x)
    if idx is None:
        idx = range(r.size)
    return [(float(r[i]), float(x[i])) for i in idx]


def default_grid(v, lo=1e-2, hi=DEFAULT_R_MAX, points=200):
    return log_grid(max(lo, v.patch_radius), hi, points)


def check_weight_axioms(v, grid=None, max_power=10):
    """Sampled evidence that ``v`` is a weight: positive, non-increasing, rapidly decaying.

    Rapid decay is read as: for every ``n <= max_power`` the sequence
    ``n log r + log v(r)`` is strictly decreasing over the last 10% of the grid.
    The stricter ``r_max^n v(r_max) < 1e-6 v(0)`` is reported in the notes.
    """
    r = np.asarray(default_grid(v) if grid is None else grid, dtype=float)
    if r.size == 0 or np.any(np.diff(r) <= 0):
        raise ValueError("grid must be non-empty and increasing")
    lv = v.log_value(r)
    finite = np.isfinite(lv)
    if not np.all(finite):
        bad = np.nonzero(~finite)[0]
        return ConditionReport("weight_axioms", False, _pairs(r, lv, bad[:5]), math.nan,
                               "non-finite log v (v not positive)")
    steps = np.diff(lv)
    bad = np.nonzero(steps > math.log1p(1e-12))[0]
    if bad.size:
        return ConditionReport("weight_axioms", False, _pairs(r, lv, bad[:5] + 1), float(steps.max()),
                               "v increases between grid points")
    lr = safe_log(r)
    i0 = max(0, min(int(math.floor(0.9 * r.size)), r.size - 2))
    log_v0 = float(v.log_value(0.0))
    worst = -math.inf
    failing = []
    notes = []
    for n in range(max_power + 1):
        with np.errstate(invalid="ignore"):
            s = lv + (n * lr if n else 0.0)
        if not np.all(np.diff(s[i0:]) < 0):
            failing.append((float(r[-1]), float(s[-1])))
            notes.append(f"r^{n} v(r) not decreasing at grid end")
        worst = max(worst, float(s[-1] - log_v0))
    if worst >= math.log(1e-6):
        notes.append(f"r_max^n v(r_max)/v(0) = exp({worst:.6g}) not yet below 1e-6")
    passed = not failing
    witness = failing if failing else [(float(r[-1]), worst)]
    return ConditionReport("weight_axioms", passed, witness, worst, "; ".join(notes),
                           {"monotone": True, "rapid_decay": passed})


def check_kp_condition(phi, grid=None):
    """Is ``phi'' phi / phi'^2`` bounded on ``[r_phi, inf)``? Sampled tail test."""
    if grid is None:
        grid = log_grid(phi.r_phi, 100.0, 200)
    r = np.asarray(grid, dtype=float)
    r = r[r >= phi.r_phi]
    if r.size < 4:
        raise ValueError("need at least 4 grid points at or beyond r_phi")
    x = phi.kp_ratio(r)
    bounded, est = sup_is_finite(r, x)
    imax = int(np.nanargmax(x)) if np.any(np.isfinite(x)) else 0
    witness = _pairs(r, x, sorted({imax, r.size - 1}))
    if not bounded:
        witness = _pairs(r, x, range(tail_start(r.size, 0.25), r.size))[-5:]
    return ConditionReport("kp_condition", bounded, witness, est,
                           f"r_phi = {phi.r_phi:g}; tail value {x[-1]:.17g}")


def check_thm_two_weight_conditions(w, delta=0.5, grid=None):
    """Check the smoothness/monotonicity hypotheses a target weight ``w`` needs.

    Sub-checks: ``|w'| r^(1+delta)`` non-increasing beyond an onset radius R;
    ``-w w''/w'^2`` bounded above beyond R; the identity
    ``2 - w''w/w'^2 == phi''phi/phi'^2`` for ``phi = 1/w``; and
    ``w(r) <= C |w'(r)| r`` on the tail.
    """
    if not 0 < delta <= 1:
        raise ParameterError("0 < delta <= 1 required")
    if not w.has_derivatives:
        raise UnsupportedFamilyError("two-weight conditions need closed-form derivatives")
    r = np.asarray(default_grid(w) if grid is None else grid, dtype=float)
    d1 = w.psi_prime(r)
    keep = (d1 > 0) & (r > 0)
    r, d1 = r[keep], d1[keep]
    if r.size < 8:
        raise ValueError("too few grid points with w' < 0")
    d2 = w.psi_second(r)
    lr = np.log(r)

    # |w'| r^(1+delta) in logs
    m = np.log(d1) + w.log_value(r) + (1.0 + delta) * lr
    rise = np.diff(m) > math.log1p(1e-10)
    onset = int(np.nonzero(rise)[0][-1] + 1) if rise.any() else 0
    cond_ii = onset <= int(0.75 * r.size)
    R = float(r[min(onset, r.size - 1)])

    tr = r[onset:]
    # -w w''/w'^2 with w'' w / w'^2 = (psi'^2 - psi'')/psi'^2
    ww = (d1 * d1 - d2) / (d1 * d1)
    x = -ww[onset:]
    cond_iii, C = sup_is_finite(tr, x) if tr.size >= 4 else (False, math.nan)

    kp = GrowthFunction(w, R).kp_ratio(r)
    err = np.abs((2.0 - ww) - kp) / np.maximum(1.0, np.abs(kp))
    identity_ok = bool(np.all(err <= 1e-8))

    # log of w / (|w'| r) = -log(r psi')
    y = -np.log(r * d1)[onset:]
    ineq_ok, log_c89 = sup_is_finite(tr, y) if tr.size >= 4 else (False, math.nan)

    passed = bool(cond_ii and cond_iii and identity_ok and ineq_ok)
    witness = [(R, float(m[min(onset, m.size - 1)]))]
    if cond_iii:
        witness.append((float(tr[int(np.argmax(x))]), float(np.max(x))))
    else:
        witness.append((float(tr[-1]), float(x[-1])) if tr.size else (R, math.nan))
    notes = (f"onset R = {R:.17g}; sup -ww''/w'^2 = {C:.17g}; "
             f"max identity error = {float(err.max()):.3g}; C in w <= C|w'|r: {math.exp(min(log_c89, 700)):.17g}")
    return ConditionReport(
        "two_weight_conditions", passed, witness, float(C), notes,
        {"smooth": True, "derivative_decay": cond_ii, "log_concavity_bound": bool(cond_iii),
         "identity": identity_ok, "weight_vs_derivative": bool(ineq_ok)},
    )


def check_essentialness(psi, grid=None):
    """Sufficient conditions on ``psi`` for ``exp(-psi)`` to be an essential weight.

    (a) ``r psi'(r)`` keeps increasing; (b) some ``delta > 0`` with
    ``psi'' <= (1 - delta) psi'^2`` on the tail; (c) some ``c > 0`` with
    ``r (psi' + r psi'') >= c`` on the tail.  Also locates ``R psi'(R) = 1`` by
    bisection when the grid brackets it; a missing bracket is only noted.
    """
    lo = max(1e-2, psi.domain_start)
    r = np.asarray(log_grid(lo, DEFAULT_R_MAX, 200) if grid is None else grid, dtype=float)
    r = r[(r >= psi.domain_start) & (r > 0)]
    if r.size < 8:
        raise ValueError("too few grid points inside the domain of psi")
    d1 = np.asarray(psi.psi_prime(r), dtype=float)
    d2 = np.asarray(psi.psi_second(r), dtype=float)
    i0 = tail_start(r.size, 0.25)
    notes = []

    a = r * d1
    ta = a[i0:]
    grows = bool(np.all(np.diff(ta) > 0) and ta[-1] > ta[0])

    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = d2 / (d1 * d1)
    delta = 1.0 - float(np.max(ratio[i0:]))
    second_ok = bool(np.all(d1[i0:] > 0) and delta > 0)

    q = r * (d1 + r * d2)
    lower_ok, c_est = inf_is_positive(q)

    h = a - 1.0
    cross = np.nonzero(np.sign(h[:-1]) * np.sign(h[1:]) < 0)[0]
    if cross.size:
        j = int(cross[0])
        R = bisect(lambda s: float(s * psi.psi_prime(np.array(s)) - 1.0), r[j], r[j + 1], xtol=1e-14)
        notes.append(f"R psi'(R) = 1 at R = {R:.17g}")
    else:
        notes.append("no bracket for R psi'(R) = 1 on the grid")

    notes.append(f"delta >= {delta:.6g}; c >= {c_est:.6g}")
    passed = grows and second_ok and lower_ok
    witness = []
    if not grows:
        witness.append((float(r[-1]), float(a[-1])))
    if not second_ok:
        witness.append((float(r[i0 + int(np.argmax(ratio[i0:]))]), float(np.max(ratio[i0:]))))
    if not lower_ok:
        witness.extend(_pairs(r, q, [i0, r.size - 1]))
    if not witness:
        witness = [(float(r[-1]), float(q[-1]))]
    return ConditionReport(
        "essentialness", passed, witness, float(c_est), "; ".join(notes),
        {"growth_faster_than_log": grows, "second_derivative_bound": second_ok,
         "essential_lower_bound": bool(lower_ok)},
    )
