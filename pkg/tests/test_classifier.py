import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from volterra_weights import (
    CriterionCurve,
    TaylorPolynomial,
    Verdict,
    classify,
    classify_multiplication,
    classify_volterra,
    criterion_curve_phi,
    criterion_curve_two_weight,
    growth_from_weight,
    lp_ratio,
    make_weight,
    monomial,
    oracle_exp_power,
)
from volterra_weights._numerics import log_grid
from volterra_weights.classifier import (
    WEAK_COMPACT_NOTE,
    Form,
    evaluate_volterra,
    prepare_volterra,
    volterra_curve,
)
from volterra_weights.exceptions import (
    ConsistencyError,
    InconclusiveError,
    ParameterError,
    PartialOracleError,
    PreconditionError,
)

R = log_grid(1.0, 20.0, 200)


def curve(log_q, r=R):
    return CriterionCurve(Form.PHI, r, np.asarray(log_q, dtype=float), float(r[0]))


# --- curve identities ----------------------------------------------------------

@pytest.fixture(scope="module")
def gauss_phi():
    return growth_from_weight(make_weight("exp_power", alpha=1, p=2))


@pytest.mark.parametrize("n, expected", [
    (2, lambda r: np.zeros_like(r)),
    (1, lambda r: -np.log(2 * r)),
    (3, lambda r: np.log(1.5 * r)),
])
def test_phi_curve_identities(gauss_phi, n, expected):
    v = gauss_phi.weight
    c = criterion_curve_phi(v.log_value, gauss_phi, monomial(n), R)
    assert np.max(np.abs(c.log_q - expected(R))) <= 1e-6


def test_phi_curve_rejects_grid_below_r_phi(gauss_phi):
    with pytest.raises(ParameterError, match="r_phi"):
        criterion_curve_phi(gauss_phi.weight.log_value, gauss_phi, monomial(2), [0.5, 2.0])


def test_phi_and_two_weight_forms_agree_asymptotically():
    # both ratios carry the same growth; they differ by w^2 phi' / |w'| -> 1
    w = make_weight("exp_power", alpha=1, p=2)
    phi = growth_from_weight(w)
    r = log_grid(2, 50, 100)
    g = monomial(3)
    a = criterion_curve_phi(w.log_value, phi, g, r).log_q
    b = criterion_curve_two_weight(w.log_value, w, g, r).log_q
    np.testing.assert_allclose(a - b, 0.0, atol=1e-12)


def test_constant_symbol_gives_empty_curve(gauss_phi):
    c = criterion_curve_phi(gauss_phi.weight.log_value, gauss_phi, TaylorPolynomial([5.0]), R)
    assert c.empty
    res = classify(c)
    assert res.verdict == Verdict.COMPACT and res.slope == -math.inf


# --- classify on synthetic curves ----------------------------------------------

def test_classify_constant_is_bounded():
    res = classify(curve(np.zeros_like(R)))
    assert res.verdict == Verdict.BOUNDED and abs(res.slope) < 1e-12


def test_classify_decay_is_compact():
    assert classify(curve(-np.log(2 * R))).verdict == Verdict.COMPACT


def test_classify_growth_is_unbounded():
    assert classify(curve(np.log(1.5 * R))).verdict == Verdict.UNBOUNDED


def test_classify_slow_drop_is_compact():
    # slope within tolerance but log q falls by more than 2 across the tail
    r = log_grid(1, 1e80, 200)
    res = classify(curve(-0.04 * np.log(r), r))
    assert abs(res.slope) < 0.05 and res.verdict == Verdict.COMPACT


def test_classify_oscillation_is_inconclusive():
    with pytest.raises(InconclusiveError) as info:
        classify(curve(np.sin(8 * np.log(R)) * 2))
    assert info.value.curve is not None


def test_classify_small_sawtooth_is_tolerated():
    assert classify(curve(0.01 * np.sin(40 * np.log(R)))).verdict == Verdict.BOUNDED


def test_classify_needs_a_decade():
    with pytest.raises(ParameterError):
        classify(curve(np.zeros(50), np.linspace(1, 5, 50)))


@given(st.floats(-50, 50), st.sampled_from([-1.0, -0.5, 0.0, 0.5, 1.0]))
@settings(max_examples=50, deadline=None)
def test_classify_invariant_under_constant_shift(shift, slope):
    base = classify(curve(slope * np.log(R)))
    moved = classify(curve(slope * np.log(R) + shift))
    assert base.verdict == moved.verdict
    assert moved.slope == pytest.approx(base.slope, abs=1e-9)


# --- oracle --------------------------------------------------------------------

@pytest.mark.parametrize("p, deg, expected", [
    (1, 0, "Compact"), (1, 1, "Bounded"), (1, 2, "Unbounded"),
    (2, 1, "Compact"), (2, 2, "Bounded"), (2, 3, "Unbounded"),
    (3, 2, "Compact"), (3, 3, "Bounded"), (3, 4, "Unbounded"),
    (1.5, 1, "Compact"), (1.5, 2, "Unbounded"),
])
def test_oracle_table(p, deg, expected):
    res = oracle_exp_power(1.0, p, deg)
    assert str(res.verdict) == expected
    assert res.weak_compact_note == WEAK_COMPACT_NOTE


def test_oracle_partial_for_small_p():
    assert oracle_exp_power(1.0, 0.5, 0).verdict == Verdict.COMPACT
    with pytest.raises(PartialOracleError) as info:
        oracle_exp_power(1.0, 0.5, 1)
    assert info.value.compact is False


@pytest.mark.parametrize("args", [(0, 1, 1), (1, -1, 1), (1, 1, -1)])
def test_oracle_rejects_bad_input(args):
    with pytest.raises(ParameterError):
        oracle_exp_power(*args)


@pytest.mark.parametrize("alpha", [0.5, 1.0, 2.0])
@pytest.mark.parametrize("p", [1.0, 1.5, 2.0, 3.0])
def test_numeric_verdicts_match_oracle(alpha, p):
    v = make_weight("exp_power", alpha=alpha, p=p)
    pipe = prepare_volterra(v, v, proxy="v")
    for deg in range(6):
        got = evaluate_volterra(pipe, monomial(deg) if deg else TaylorPolynomial([1.0]))
        assert got.verdict == oracle_exp_power(alpha, p, deg).verdict


def test_verdicts_independent_of_proxy():
    v = make_weight("exp_power", alpha=1, p=2)
    a = prepare_volterra(v, v, proxy="v")
    b = prepare_volterra(v, v, proxy="vM")
    assert b.proxy == "vM"
    for deg in range(1, 5):
        assert evaluate_volterra(a, monomial(deg)).verdict == evaluate_volterra(b, monomial(deg)).verdict


def test_auto_proxy_picks_v_for_essential_weight():
    v = make_weight("exp_power", alpha=1, p=2)
    assert classify_volterra(v, v, monomial(2)).proxy == "v"


@pytest.mark.parametrize("coeffs, expected", [
    ([3.0, -1.0, 0.5j, 0.0], Verdict.BOUNDED),
    ([0.0, 1.0, 1000.0], Verdict.BOUNDED),
    ([0.0, 1000.0, 0.0, 1.0], Verdict.UNBOUNDED),
    ([7.0, 50.0], Verdict.COMPACT),
])
def test_general_symbol_uses_leading_growth(coeffs, expected):
    # lower-order terms only add a transient that fades like 1/r
    v = make_weight("exp_power", alpha=1, p=2)
    assert classify_volterra(v, v, TaylorPolynomial(coeffs)).verdict == expected


def test_large_lower_order_coefficient_needs_long_grid():
    # g' = 1000 + 2z: the ratio falls like 1/r until r ~ 500, so a short grid
    # cannot tell it from decay; the degree cross-check flags that
    v = make_weight("exp_power", alpha=1, p=2)
    g = TaylorPolynomial([0.0, 1000.0, 1.0])
    with pytest.raises(ConsistencyError):
        classify_volterra(v, v, g)
    assert classify_volterra(v, v, g, r_max=1e5, points=200).verdict == Verdict.BOUNDED


def test_two_weight_form_on_request():
    v = make_weight("exp_power", alpha=1, p=2)
    res = classify_volterra(v, v, monomial(1), form="two_weight")
    assert res.form == "TwoWeightForm" and res.verdict == Verdict.COMPACT


def test_p_below_one_warns_and_keeps_compactness_rule():
    v = make_weight("exp_power", alpha=1, p=0.5)
    res = classify_volterra(v, v, monomial(1), r_max=1e4, points=200)
    assert res.verdict != Verdict.COMPACT
    assert any("p < 1" in msg for msg in res.warnings)


def test_disagreement_is_reported(monkeypatch):
    v = make_weight("exp_power", alpha=1, p=2)
    pipe = prepare_volterra(v, v, proxy="v")
    from volterra_weights import classifier
    monkeypatch.setattr(classifier, "oracle_exp_power",
                        lambda a, p, d: classifier.Classification(Verdict.UNBOUNDED, 0, 0))
    with pytest.raises(ConsistencyError):
        evaluate_volterra(pipe, monomial(1))
    assert evaluate_volterra(pipe, monomial(1), cross_check=False).verdict == Verdict.COMPACT


def test_precondition_failure_for_polynomial_weight():
    v = make_weight("custom", log_fn=lambda r: -np.log1p(r))
    w = make_weight("exp_power", alpha=1, p=2)
    with pytest.raises(PreconditionError) as info:
        classify_volterra(v, w, monomial(1))
    assert info.value.report is not None and not info.value.report.passed


def test_mismatched_weights_classified_without_oracle():
    # v = e^{-r^2}, w = e^{-2 r^2}: q ~ r^{n-1} e^{-r^2} tends to zero for every polynomial
    v = make_weight("exp_power", alpha=1, p=2)
    w = make_weight("exp_power", alpha=2, p=2)
    assert classify_volterra(v, w, monomial(4)).verdict == Verdict.COMPACT


def test_curve_rows(gauss_phi):
    v = make_weight("exp_power", alpha=1, p=2)
    pipe = prepare_volterra(v, v, proxy="v", points=20)
    rows = volterra_curve(pipe, monomial(2)).rows()
    assert len(rows) == 20 and rows[0][0] == pytest.approx(1.0)


# --- multiplication ------------------------------------------------------------

@pytest.mark.parametrize("w_alpha, h, expected", [
    (1.0, TaylorPolynomial([1.0]), Verdict.BOUNDED),
    (1.0, monomial(1), Verdict.UNBOUNDED),
    (2.0, monomial(5), Verdict.COMPACT),
    (1.0, TaylorPolynomial([0.0]), Verdict.COMPACT),
])
def test_multiplication_examples(w_alpha, h, expected):
    v = make_weight("exp_power", alpha=1, p=2)
    w = make_weight("exp_power", alpha=w_alpha, p=2)
    res = classify_multiplication(v, w, h)
    assert res.verdict == expected
    assert res.form == "MultForm"


# --- Littlewood-Paley ratio ----------------------------------------------------

def test_lp_ratio_for_z(gauss_phi):
    a, b = lp_ratio(gauss_phi, monomial(1))
    norm_f = (2 * math.e) ** -0.5
    norm_df = 1 / (2 * math.e)  # u_phi is constant e^{-1}/2 near 0
    assert a == pytest.approx(norm_df / norm_f, rel=1e-10)
    assert b == pytest.approx(norm_f / norm_df, rel=1e-10)


def test_lp_ratio_rejects_zero(gauss_phi):
    with pytest.raises(ParameterError):
        lp_ratio(gauss_phi, TaylorPolynomial([0.0]))
