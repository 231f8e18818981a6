"""Monomial norms and the monomial envelope v_M bounding the associated weight from above.

For every ``n`` the function ``z^n / ||z^n||_v`` lies in the unit ball of
``H^inf_v``, so the associated weight satisfies
``v(r) <= v~(r) <= v_M(r) := min_n ||z^n||_v r^-n``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._numerics import golden_max, safe_log
from .exceptions import DomainCoverageError
from .weights import EXP_POWER, RadialWeight

# supported range of log r when searching for monomial maximisers
LOG_R_MIN = -30.0
LOG_R_MAX = 700.0
_SCAN_POINTS = 4096


@dataclass(frozen=True)
class MonomialNormTable:
    weight: RadialWeight
    log_norms: np.ndarray
    maximizers: np.ndarray

    @property
    def N(self):
        return self.log_norms.size - 1

    def to_rows(self):
        return [(n, float(self.log_norms[n]), float(self.maximizers[n])) for n in range(self.N + 1)]


def _sup_monomials(v, ns, strict=True):
    """``(log ||z^n||_v, log r_n)`` for each ``n >= 1`` in ``ns``.

    For the exp-power family the analytic maximiser brackets the search;
    otherwise a coarse scan in ``log r`` finds the bracket.  With
    ``strict=False`` entries whose maximiser leaves the supported range come
    back as NaN instead of raising.
    """
    ns = np.asarray(ns, dtype=float)

    def obj(t, n):
        with np.errstate(invalid="ignore", over="ignore"):
            return n * t + v.log_value_t(t)

    if v.family == EXP_POWER:
        alpha, p = v.params["alpha"], v.params["p"]
        center = np.log(ns / (alpha * p)) / p
        lo, hi = center - 1.0, center + 1.0
        extra_t = center
    else:
        T = np.linspace(LOG_R_MIN, LOG_R_MAX, _SCAN_POINTS)
        lt = v.log_value_t(T)
        j = np.empty(ns.size, dtype=int)
        for s in range(0, ns.size, 256):
            block = ns[s:s + 256, None] * T[None, :] + lt[None, :]
            j[s:s + 256] = np.argmax(np.nan_to_num(block, nan=-np.inf), axis=1)
        edge = j >= _SCAN_POINTS - 1
        if np.any(edge) and strict:
            n_bad = int(ns[np.argmax(edge)])
            raise DomainCoverageError(f"maximiser of r^{n_bad} v(r) beyond r = exp({LOG_R_MAX:g})")
        lo = T[np.maximum(j - 1, 0)]
        hi = T[np.minimum(j + 1, _SCAN_POINTS - 1)]
        extra_t = T[j]
    t, val = golden_max(lambda t: obj(t, ns), lo, hi)
    # the bracket centre can beat the last golden probe by an ulp
    val_c = obj(extra_t, ns)
    better = val_c > val
    t = np.where(better, extra_t, t)
    val = np.where(better, val_c, val)
    if v.family != EXP_POWER and not strict:
        val = np.where(edge, np.nan, val)
        t = np.where(edge, np.nan, t)
    if strict and np.any(t > LOG_R_MAX):
        raise DomainCoverageError(f"maximiser beyond r = exp({LOG_R_MAX:g})")
    return val, t


def monomial_norm_log(v, n):
    """``log ||z^n||_v = sup_r (n log r + log v(r))``."""
    if n == 0:
        return float(v.log_value(0.0))
    val, _ = _sup_monomials(v, [n])
    return float(val[0])


def build_table(v, N, strict=True):
    """Monomial norms for ``n = 0..N``.  With ``strict=False`` the table stops
    at the last ``n`` whose maximiser is inside the supported range."""
    ns = np.arange(1, N + 1)
    vals, ts = _sup_monomials(v, ns, strict=strict) if N >= 1 else (np.empty(0), np.empty(0))
    if not strict:
        bad = np.nonzero(~np.isfinite(vals))[0]
        if bad.size:
            vals, ts = vals[: bad[0]], ts[: bad[0]]
    log_norms = np.r_[float(v.log_value(0.0)), vals]
    maximizers = np.r_[0.0, np.exp(ts)]
    return MonomialNormTable(v, log_norms, maximizers)


def default_table_size(v, r_max):
    """``4 alpha r_max^p`` for exp-power weights (keeps the minimising n interior), else 400."""
    if v.family == EXP_POWER:
        return max(8, int(math.ceil(4.0 * v.params["alpha"] * r_max ** v.params["p"])))
    return 400


def assoc_upper_log(table, r):
    """``log v_M(r) = min_n (log ||z^n||_v - n log r)``.

    ``log ||z^n||_v`` is convex in ``n`` (a supremum of affine functions), so the
    minimiser is where the forward difference first reaches ``log r``; a small
    window around it absorbs rounding in the differences.
    """
    r = np.asarray(r, dtype=float)
    lr = safe_log(np.atleast_1d(r))
    L = table.log_norms
    if L.size == 1:
        out = np.full(lr.shape, L[0])
        return out if r.ndim else float(out[0])
    diffs = np.diff(L)
    k = np.searchsorted(np.maximum.accumulate(diffs), lr, side="left")
    out = np.empty(lr.shape)
    for i, (t, kk) in enumerate(zip(lr, k)):
        if t == -np.inf:
            out[i] = L[0]
            continue
        lo, hi = max(kk - 3, 0), min(kk + 4, L.size)
        n = np.arange(lo, hi)
        out[i] = np.min(L[lo:hi] - n * t)
    return out if r.ndim else float(out[0])


def sandwich_report(v, grid, N):
    """Rows ``(r, log v, log v_M, gap)`` with ``gap = log v_M - log v >= 0``."""
    table = build_table(v, N)
    r = np.asarray(grid, dtype=float)
    lv = v.log_value(r)
    lvm = assoc_upper_log(table, r)
    return np.column_stack([r, lv, lvm, lvm - lv])
