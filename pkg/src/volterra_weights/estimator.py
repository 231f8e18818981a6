"""scikit-learn style front end.

``fit`` runs the weight hypothesis checks and builds the associated-weight
proxy once; ``transform`` maps a batch of symbols to criterion curves and
``predict`` to verdicts.  Parameters round-trip through ``get_params`` /
``set_params`` so the estimators work with ``sklearn.base.clone``.
"""

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .classifier import (
    evaluate_multiplication,
    evaluate_volterra,
    prepare_multiplication,
    prepare_volterra,
    criterion_curve_mult,
    volterra_curve,
)
from .entire import DEFAULT_TRUNCATION, TaylorPolynomial
from .exceptions import ParameterError
from .weights import RadialWeight, weight_from_dict


def check_weight(w, name):
    if isinstance(w, RadialWeight):
        return w
    if isinstance(w, dict):
        return weight_from_dict(w)
    raise ParameterError(f"{name} must be a RadialWeight or a weight spec dict")


def check_symbols(X, truncation=DEFAULT_TRUNCATION):
    """Normalise ``X`` to a list of :class:`TaylorPolynomial`.

    Accepts a single polynomial, a sequence of polynomials, a 1-D coefficient
    vector (one symbol) or a 2-D array whose rows are coefficient vectors.
    """
    if isinstance(X, TaylorPolynomial):
        return [X.truncate(truncation)]
    if isinstance(X, (list, tuple)) and X and all(isinstance(x, TaylorPolynomial) for x in X):
        return [x.truncate(truncation) for x in X]
    if isinstance(X, (list, tuple)) and X and all(np.ndim(x) == 1 for x in X):
        # ragged batch of coefficient rows
        return [p for row in X for p in check_symbols(np.asarray(row), truncation)]
    arr = np.asarray(X)
    if arr.dtype == object or not np.issubdtype(arr.dtype, np.number):
        raise ParameterError("symbols must be numeric coefficient arrays or TaylorPolynomial objects")
    if arr.ndim == 1:
        arr = arr[None, :]
    if arr.ndim != 2 or arr.shape[1] == 0:
        raise ParameterError(f"expected 1-D or 2-D coefficient array, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ParameterError("coefficients must be finite")
    return [TaylorPolynomial(row[: truncation + 1]) for row in arr]


class _CriterionEstimator(BaseEstimator):
    def __init__(self, source_weight=None, target_weight=None, r_max=50.0, grid_points=64,
                 slope_tol=0.05, tail_fraction=0.5, proxy="auto", truncation=DEFAULT_TRUNCATION):
        self.source_weight = source_weight
        self.target_weight = target_weight
        self.r_max = r_max
        self.grid_points = grid_points
        self.slope_tol = slope_tol
        self.tail_fraction = tail_fraction
        self.proxy = proxy
        self.truncation = truncation

    def _validate_params(self):
        if self.grid_points < 16:
            raise ParameterError("grid_points >= 16 required")
        if self.truncation < 1:
            raise ParameterError("truncation >= 1 required")
        if not 0 < self.tail_fraction <= 1:
            raise ParameterError("0 < tail_fraction <= 1 required")
        return (check_weight(self.source_weight, "source_weight"),
                check_weight(self.target_weight, "target_weight"))

    def transform(self, X):
        """Criterion curves ``log q`` sampled on ``grid_``; one row per symbol (NaN row for V = 0)."""
        check_is_fitted(self, "pipeline_")
        rows = []
        for g in check_symbols(X, self.truncation):
            curve = self._curve(g)
            rows.append(curve.log_q if not curve.empty else np.full(self.grid_.size, np.nan))
        return np.vstack(rows)

    def predict(self, X):
        return np.array([str(c.verdict) for c in self.classify_many(X)])

    def classify_many(self, X):
        check_is_fitted(self, "pipeline_")
        return [self.classify(g) for g in check_symbols(X, self.truncation)]


class VolterraClassifier(_CriterionEstimator):
    """Boundedness / compactness of ``V_g : H^inf_v -> H^inf_w`` for batches of symbols ``g``.

    >>> from volterra_weights import make_weight
    >>> v = make_weight("exp_power", alpha=1.0, p=2.0)
    >>> clf = VolterraClassifier(v, v).fit()
    >>> clf.predict([[0, 1], [0, 0, 1], [0, 0, 0, 1]]).tolist()
    ['Compact', 'Bounded', 'Unbounded']
    """

    def __init__(self, source_weight=None, target_weight=None, r_max=50.0, grid_points=64,
                 slope_tol=0.05, tail_fraction=0.5, proxy="auto", truncation=DEFAULT_TRUNCATION,
                 form="auto", delta=0.5, cross_check=True):
        super().__init__(source_weight, target_weight, r_max, grid_points, slope_tol,
                         tail_fraction, proxy, truncation)
        self.form = form
        self.delta = delta
        self.cross_check = cross_check

    def fit(self, X=None, y=None):
        v, w = self._validate_params()
        self.pipeline_ = prepare_volterra(v, w, r_max=self.r_max, points=self.grid_points,
                                          proxy=self.proxy, form=self.form, delta=self.delta)
        self.grid_ = self.pipeline_.grid
        return self

    def _curve(self, g):
        return volterra_curve(self.pipeline_, g)

    def classify(self, g):
        check_is_fitted(self, "pipeline_")
        if not isinstance(g, TaylorPolynomial):
            g = check_symbols(g, self.truncation)[0]
        return evaluate_volterra(self.pipeline_, g, self.slope_tol, self.tail_fraction,
                                 self.cross_check)


class MultiplierClassifier(_CriterionEstimator):
    """Boundedness / compactness of ``M_h : H^inf_v -> H^inf_w``."""

    def fit(self, X=None, y=None):
        v, w = self._validate_params()
        self.pipeline_ = prepare_multiplication(v, w, r_max=self.r_max, points=self.grid_points,
                                                proxy=self.proxy)
        self.grid_ = self.pipeline_.grid
        return self

    def _curve(self, h):
        p = self.pipeline_
        return criterion_curve_mult(p.proxy_log, p.target, h, p.grid)

    def classify(self, h):
        check_is_fitted(self, "pipeline_")
        if not isinstance(h, TaylorPolynomial):
            h = check_symbols(h, self.truncation)[0]
        return evaluate_multiplication(self.pipeline_, h, self.slope_tol, self.tail_fraction)
