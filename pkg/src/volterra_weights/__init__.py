"""Boundedness and compactness of Volterra and multiplication operators between
weighted sup-norm spaces of entire functions, decided numerically in the log domain."""

from .assoc import (
    MonomialNormTable,
    assoc_upper_log,
    build_table,
    monomial_norm_log,
    sandwich_report,
)
from .classifier import (
    Classification,
    CriterionCurve,
    Verdict,
    classify,
    classify_multiplication,
    classify_volterra,
    criterion_curve_mult,
    criterion_curve_phi,
    criterion_curve_two_weight,
    lp_ratio,
    oracle_exp_power,
)
from .entire import (
    TaylorPolynomial,
    differentiate,
    evaluate,
    exp_series,
    integrate,
    log_coeff_majorant,
    max_modulus_lower,
    monomial,
    multiply,
    volterra,
    weighted_norm_log,
)
from .estimator import MultiplierClassifier, VolterraClassifier
from .weights import (
    ConditionReport,
    ExponentFunction,
    GrowthFunction,
    RadialWeight,
    check_essentialness,
    check_kp_condition,
    check_thm_two_weight_conditions,
    check_weight_axioms,
    derived_weight_u,
    exponent_from_weight,
    growth_from_weight,
    make_weight,
    weight_from_dict,
)

__version__ = "0.1.0"

__all__ = [
    "MonomialNormTable",
    "assoc_upper_log",
    "build_table",
    "monomial_norm_log",
    "sandwich_report",
    "Classification",
    "CriterionCurve",
    "Verdict",
    "classify",
    "classify_multiplication",
    "classify_volterra",
    "criterion_curve_mult",
    "criterion_curve_phi",
    "criterion_curve_two_weight",
    "lp_ratio",
    "oracle_exp_power",
    "TaylorPolynomial",
    "differentiate",
    "evaluate",
    "exp_series",
    "integrate",
    "log_coeff_majorant",
    "max_modulus_lower",
    "monomial",
    "multiply",
    "volterra",
    "weighted_norm_log",
    "MultiplierClassifier",
    "VolterraClassifier",
    "ConditionReport",
    "ExponentFunction",
    "GrowthFunction",
    "RadialWeight",
    "check_essentialness",
    "check_kp_condition",
    "check_thm_two_weight_conditions",
    "check_weight_axioms",
    "derived_weight_u",
    "exponent_from_weight",
    "growth_from_weight",
    "make_weight",
    "weight_from_dict",
]
