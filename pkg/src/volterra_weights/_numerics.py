"""Small numeric kernels shared by the modules: grids, golden-section search, tail tests."""

import math

import numpy as np

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
INV_PHI2 = 1.0 - INV_PHI

# exp() is never called on arguments above this
LOG_CAP = 700.0


def log_grid(lo, hi, points):
    return np.geomspace(float(lo), float(hi), int(points))


def safe_log(x):
    with np.errstate(divide="ignore"):
        return np.log(x)


def safe_exp(x):
    return np.exp(np.minimum(x, LOG_CAP))


def golden_max(fun, lo, hi, iterations=60):
    """Vectorised golden-section maximisation of ``fun`` on ``[lo, hi]``.

    ``lo`` and ``hi`` may be arrays; ``fun`` must accept arrays of the same
    shape.  Returns ``(x, fun(x))`` at the best point visited.  Ties go to the
    left end, so a flat objective returns the smaller abscissa.
    """
    a = np.array(lo, dtype=float, copy=True)
    b = np.array(hi, dtype=float, copy=True)
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc = fun(c)
    fd = fun(d)
    for _ in range(iterations):
        left = fc >= fd
        # keep [a, d] where the left probe wins, else [c, b]
        b = np.where(left, d, b)
        a = np.where(left, a, c)
        new_c = b - INV_PHI * (b - a)
        new_d = a + INV_PHI * (b - a)
        c_next = np.where(left, new_c, d)
        d_next = np.where(left, c, new_d)
        f_eval = fun(np.where(left, new_c, new_d))
        fc, fd = np.where(left, f_eval, fd), np.where(left, fc, f_eval)
        c, d = c_next, d_next
    x = np.where(fc >= fd, c, d)
    return x, np.maximum(fc, fd)


def tail_start(n, fraction):
    """Index where the trailing ``fraction`` of ``n`` samples begins (at least 3 samples)."""
    start = int(math.floor(n * (1.0 - fraction)))
    return max(0, min(start, n - 3))


def is_nonincreasing(x, rtol=1e-12):
    x = np.asarray(x, dtype=float)
    if x.size < 2:
        return True
    scale = np.maximum(1.0, np.abs(x[:-1]))
    return bool(np.all(np.diff(x) <= rtol * scale))


def is_nondecreasing(x, rtol=1e-12):
    return is_nonincreasing(-np.asarray(x, dtype=float), rtol)


def plateau(x, rtol=0.01):
    x = np.asarray(x, dtype=float)
    ref = max(np.max(np.abs(x)), 1e-300)
    return bool((np.max(x) - np.min(x)) <= rtol * ref)


def power_law_convergent(r, x, gamma_min=0.05):
    """True if an increasing sequence approaches its limit at least like r**-gamma_min.

    Fits log(increment) against log r; a slope below -gamma_min (plus the
    log-spacing term) means the increments shrink like a power of r, so the
    sequence has a finite limit.  Logarithmic growth fails this test.
    """
    r = np.asarray(r, dtype=float)
    x = np.asarray(x, dtype=float)
    inc = np.diff(x)
    if inc.size < 3 or np.any(inc <= 0):
        return False, math.nan
    lr = np.log(r)
    dt = np.diff(lr)
    # increment per unit log r, so non-uniform spacing does not bias the fit
    rate = np.log(inc / dt)
    mid = 0.5 * (lr[1:] + lr[:-1])
    slope = np.polyfit(mid, rate, 1)[0]
    if not slope < -gamma_min:
        return False, math.nan
    gamma = -slope
    # remaining rise: integral of rate * r^-gamma beyond the last point
    limit = x[-1] + (inc[-1] / dt[-1]) / gamma
    return True, float(limit)


def sup_is_finite(r, x, fraction=0.25, rtol=0.01, gamma_min=0.05):
    """Decide from samples whether sup of ``x`` over the sampled ray is finite.

    Looks at the trailing ``fraction`` of samples: non-increasing, a plateau
    within ``rtol``, or power-law convergence upward all count as bounded.
    Returns ``(bounded, estimate)`` where ``estimate`` is the sampled sup or the
    extrapolated limit, whichever is larger.
    """
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)):
        return False, math.inf
    i = tail_start(x.size, fraction)
    tail = x[i:]
    sup = float(np.max(x))
    if is_nonincreasing(tail, 1e-10) or plateau(tail, rtol):
        return True, sup
    ok, limit = power_law_convergent(np.asarray(r)[i:], tail, gamma_min)
    if ok:
        return True, max(sup, limit)
    return False, sup


def inf_is_positive(x, fraction=0.25, rtol=0.01):
    """Positive lower bound on the tail: min > 0 and tail non-decreasing or flat within ``rtol``."""
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)):
        return False, math.nan
    tail = x[tail_start(x.size, fraction):]
    low = float(np.min(tail))
    if low <= 0:
        return False, low
    return (is_nondecreasing(tail, 1e-10) or plateau(tail, rtol)), low


def loglog_slope(r, logq):
    """Least-squares slope of log q against log r."""
    return float(np.polyfit(np.log(r), logq, 1)[0])
