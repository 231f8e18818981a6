"""Truncated Taylor series and the operators D, J, M_h, V_g acting on them."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from ._numerics import golden_max, safe_log
from .exceptions import DomainCoverageError, ParameterError

DEFAULT_TRUNCATION = 128


@dataclass(frozen=True, eq=False)
class TaylorPolynomial:
    """Coefficients ``c_0..c_N`` of ``sum c_n z^n``.

    ``exact`` is False when the polynomial is a truncation of a genuinely
    entire function (for instance the exponential series); degree-based
    shortcuts are only trusted for exact polynomials.
    """

    coeffs: np.ndarray
    exact: bool = True

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=complex).ravel()
        if c.size == 0:
            c = np.zeros(1, dtype=complex)
        if not np.all(np.isfinite(c)):
            raise ParameterError("coefficients must be finite")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def N(self):
        return self.coeffs.size - 1

    @property
    def degree(self):
        nz = np.nonzero(self.coeffs)[0]
        return int(nz[-1]) if nz.size else -math.inf

    @property
    def is_zero(self):
        return not np.any(self.coeffs)

    def __call__(self, z):
        return evaluate(self, z)

    def __add__(self, other):
        n = max(self.coeffs.size, other.coeffs.size)
        c = np.zeros(n, dtype=complex)
        c[: self.coeffs.size] += self.coeffs
        c[: other.coeffs.size] += other.coeffs
        return TaylorPolynomial(c, self.exact and other.exact)

    def __sub__(self, other):
        return self + other.scale(-1.0)

    def scale(self, s):
        return TaylorPolynomial(self.coeffs * s, self.exact)

    def truncate(self, N):
        return TaylorPolynomial(self.coeffs[: N + 1], self.exact)

    def __eq__(self, other):
        if not isinstance(other, TaylorPolynomial):
            return NotImplemented
        n = max(self.coeffs.size, other.coeffs.size)
        a = np.zeros(n, dtype=complex)
        b = np.zeros(n, dtype=complex)
        a[: self.coeffs.size] = self.coeffs
        b[: other.coeffs.size] = other.coeffs
        return bool(np.array_equal(a, b))

    __hash__ = None

    def __repr__(self):
        return f"TaylorPolynomial(N={self.N}, degree={self.degree})"


def monomial(n, c=1.0):
    coeffs = np.zeros(n + 1, dtype=complex)
    coeffs[n] = c
    return TaylorPolynomial(coeffs)


def exp_series(scale=1.0, truncation=DEFAULT_TRUNCATION):
    """Taylor truncation of ``exp(scale * z)``; coefficients are built in logs."""
    n = np.arange(truncation + 1)
    s = complex(scale)
    if s == 0:
        return TaylorPolynomial(np.r_[1.0, np.zeros(truncation)], exact=False)
    log_mag = n * math.log(abs(s)) - np.array([math.lgamma(k + 1) for k in n])
    phase = np.exp(1j * n * np.angle(s))
    with np.errstate(under="ignore"):
        coeffs = np.exp(log_mag) * phase
    return TaylorPolynomial(coeffs, exact=False)


def evaluate(f, z):
    """Horner evaluation of ``f`` at ``z`` (scalar or array)."""
    z = np.asarray(z, dtype=complex)
    acc = np.zeros_like(z)
    for c in f.coeffs[::-1]:
        acc = acc * z + c
    return acc if acc.ndim else complex(acc)


def log_coeff_majorant(f, r):
    """``log sum |c_n| r^n``, an upper bound for ``log M(f, r)``; ``-inf`` for f = 0."""
    r = np.asarray(r, dtype=float)
    idx = np.nonzero(f.coeffs)[0]
    if idx.size == 0:
        return np.full(r.shape, -np.inf) if r.ndim else -math.inf
    logc = np.log(np.abs(f.coeffs[idx]))
    lr = safe_log(np.atleast_1d(r))
    with np.errstate(invalid="ignore"):
        terms = logc[None, :] + idx[None, :] * lr[:, None]
    if idx[0] == 0:
        terms[:, 0] = logc[0]
    out = logsumexp(terms, axis=1)
    return out if r.ndim else float(out[0])


def max_modulus_lower(f, r, K=360):
    """Max of ``|f|`` over ``K`` equally spaced points on ``|z| = r`` (angle 0 included)."""
    if K < 8:
        raise ParameterError("K >= 8 sample angles required")
    theta = 2.0 * np.pi * np.arange(K) / K
    return float(np.max(np.abs(evaluate(f, r * np.exp(1j * theta)))))


def differentiate(f):
    c = f.coeffs
    if c.size == 1:
        return TaylorPolynomial([0.0], f.exact)
    return TaylorPolynomial(c[1:] * np.arange(1, c.size), f.exact)


def integrate(f):
    c = f.coeffs
    out = np.zeros(c.size + 1, dtype=complex)
    out[1:] = c / np.arange(1, c.size + 1)
    return TaylorPolynomial(out, f.exact)


def multiply(f, h, N_out=None):
    """Cauchy product of ``f`` and ``h`` truncated at degree ``N_out``."""
    if N_out is None:
        N_out = f.N + h.N
    if N_out < 0:
        raise ParameterError("N_out >= 0 required")
    prod = np.convolve(f.coeffs, h.coeffs)[: N_out + 1]
    if prod.size < N_out + 1:
        prod = np.r_[prod, np.zeros(N_out + 1 - prod.size)]
    return TaylorPolynomial(prod, f.exact and h.exact)


def volterra(g, f, N_out=None):
    """``V_g f = J(f g')`` truncated at degree ``N_out``."""
    dg = differentiate(g)
    if N_out is None:
        N_out = f.N + dg.N + 1
    if N_out < 0:
        raise ParameterError("N_out >= 0 required")
    inner = multiply(f, dg, max(N_out - 1, 0))
    return integrate(inner).truncate(N_out)


def _norm_objective(f, v):
    def obj(r):
        return log_coeff_majorant(f, r) + v.log_value(r)
    return obj


def auto_norm_grid(f, v, points=513, r_start=2.0, max_doublings=40):
    """Linear grid ``[0, r_max]`` with ``r_max`` doubled until the objective falls at the end."""
    obj = _norm_objective(f, v)
    r_max = r_start
    for _ in range(max_doublings):
        grid = np.linspace(0.0, r_max, points)
        vals = obj(grid)
        i0 = int(0.9 * points)
        if np.all(np.diff(vals[i0:]) < 0):
            return grid
        r_max *= 2.0
    raise DomainCoverageError(f"objective still increasing at r = {r_max:g}")


def weighted_norm_log(f, v, grid=None, return_argmax=False):
    """Upper-bound surrogate for ``log ||f||_v = log sup_r v(r) M(f, r)``.

    Uses the coefficient majorant in place of ``M(f, r)``, so the value is
    exact when all coefficients are non-negative reals.  The grid maximum is
    refined by 60 golden-section steps in ``log r``.
    """
    if f.is_zero:
        return (-math.inf, 0.0) if return_argmax else -math.inf
    grid = auto_norm_grid(f, v) if grid is None else np.asarray(grid, dtype=float)
    obj = _norm_objective(f, v)
    vals = obj(grid)
    n = grid.size
    i0 = max(0, min(int(0.9 * n), n - 2))
    if not np.all(np.diff(vals[i0:]) < 0):
        raise DomainCoverageError(
            f"weighted objective not decreasing over the last 10% of the grid (r_max = {grid[-1]:g})"
        )
    i = int(np.argmax(vals))
    best_r, best = float(grid[i]), float(vals[i])
    lo = grid[max(i - 1, 0)]
    hi = grid[min(i + 1, n - 1)]
    if hi > lo:
        if lo > 0:
            t, val = golden_max(lambda t: obj(np.exp(t)), math.log(lo), math.log(hi))
            x = math.exp(float(t))
        else:
            x, val = golden_max(obj, lo, hi)
            x = float(x)
        val = float(val)
        if val > best:
            best_r, best = x, val
    return (best, best_r) if return_argmax else best


def random_polynomials(count, max_degree=20, seed=42):
    """Seeded sample: degree uniform in ``[1, max_degree]``, coefficients uniform in the unit disc."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        deg = int(rng.integers(1, max_degree + 1))
        rad = np.sqrt(rng.random(deg + 1))
        ang = 2.0 * np.pi * rng.random(deg + 1)
        out.append(TaylorPolynomial(rad * np.exp(1j * ang)))
    return out
