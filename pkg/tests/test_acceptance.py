"""Exit criteria of the build; each test maps to one numbered criterion and the
terminal summary prints one PASS/FAIL line per criterion."""

import json
import math
import time
from pathlib import Path

import numpy as np
import pytest

from volterra_weights import (
    TaylorPolynomial,
    check_essentialness,
    check_kp_condition,
    check_thm_two_weight_conditions,
    cli,
    criterion_curve_phi,
    differentiate,
    exponent_from_weight,
    growth_from_weight,
    integrate,
    make_weight,
    monomial,
    multiply,
    oracle_exp_power,
    sandwich_report,
    volterra,
)
from volterra_weights._numerics import log_grid
from volterra_weights.classifier import lp_log_norms
from volterra_weights.entire import random_polynomials

from conftest import FAMILY_SPECS

SNAPSHOTS = Path(__file__).parent / "snapshots"


def padded(a, b):
    n = max(a.coeffs.size, b.coeffs.size)
    x = np.zeros(n, complex)
    y = np.zeros(n, complex)
    x[: a.coeffs.size] = a.coeffs
    y[: b.coeffs.size] = b.coeffs
    return x, y


def rel_err(a, b):
    x, y = padded(a, b)
    return float(np.max(np.abs(x - y)) / max(np.max(np.abs(y)), 1e-300))


def lp_envelope(seed=42):
    phi = growth_from_weight(make_weight("exp_power", alpha=1, p=2))
    vals = []
    for f in random_polynomials(100, 20, seed):
        log_f, log_df = lp_log_norms(phi, f)
        log_f0 = math.log(abs(f.coeffs[0]))
        a = math.exp(log_df - log_f)
        b = math.exp(log_f - np.logaddexp(log_f0, log_df))
        vals += [a, b]
    vals = np.array(vals)
    return float(np.max(np.maximum(vals, 1 / vals))), vals


@pytest.mark.acceptance(1, "degree corollaries reproduced in all 54 cells, runtime < 30 s")
def test_corollary_reproduction(tmp_path, capsys):
    start = time.perf_counter()
    cells = 0
    for alpha in (0.5, 1.0, 2.0):
        out = tmp_path / f"a{alpha}"
        code = cli.main(["corollary-table", "--out", str(out), "--alpha", str(alpha),
                         "--p", "1", "2", "3", "--max-deg", "5"])
        assert code == cli.EXIT_OK
        lines = (out / "corollary_table.csv").read_text().splitlines()[1:]
        for line in lines:
            a, p, *verdicts, agree = line.split(",")
            assert agree == "true"
            for deg, got in enumerate(verdicts):
                assert got == str(oracle_exp_power(float(a), float(p), deg).verdict)
                cells += 1
    elapsed = time.perf_counter() - start
    capsys.readouterr()
    assert cells == 54
    assert elapsed < 30.0


@pytest.mark.acceptance(2, "phi-form curve identities for g = z, z^2, z^3 within 1e-6")
def test_symbolic_curve_identities():
    v = make_weight("exp_power", alpha=1, p=2)
    phi = growth_from_weight(v)
    r = np.linspace(1.0, 20.0, 400)
    q2 = criterion_curve_phi(v.log_value, phi, monomial(2), r).log_q
    q1 = criterion_curve_phi(v.log_value, phi, monomial(1), r).log_q
    q3 = criterion_curve_phi(v.log_value, phi, monomial(3), r).log_q
    assert np.max(np.abs(q2)) <= 1e-6
    assert np.max(np.abs(q1 + np.log(2 * r))) <= 1e-6
    assert np.max(np.abs(q3 - np.log(1.5 * r))) <= 1e-6


@pytest.mark.acceptance(3, "log-power essentialness: fails for p < 2, passes for p >= 2")
def test_essentialness_log_power():
    for p in (1.2, 1.5, 1.9):
        rep = check_essentialness(exponent_from_weight(make_weight("log_power", p=p)))
        assert not rep.passed and not rep.subchecks["essential_lower_bound"]
    for p in (2.0, 2.5, 3.0):
        rep = check_essentialness(exponent_from_weight(make_weight("log_power", p=p)))
        assert rep.passed and all(rep.subchecks.values())


@pytest.mark.acceptance(4, "K_p ratio of exp(alpha r^p) within its bound and -> 1 at r = 100")
def test_kp_condition():
    for alpha in (0.5, 1.0, 2.0):
        for p in (1.0, 2.0, 3.0):
            phi = growth_from_weight(make_weight("exp_power", alpha=alpha, p=p))
            r = log_grid(phi.r_phi, 100.0, 200)
            rep = check_kp_condition(phi, r)
            upper = 1 + (p - 1) / (alpha * p * phi.r_phi**p)
            assert rep.passed
            assert 1.0 <= rep.sup_or_lim_estimate <= upper + 1e-9
            assert abs(float(phi.kp_ratio(100.0)) - 1.0) <= 1e-3


@pytest.mark.acceptance(5, "operator identities to 1e-14 relative on 100 seeded symbols, N = 64")
def test_operator_identities():
    rng = np.random.default_rng(42)
    N = 64

    def draw():
        return TaylorPolynomial(rng.standard_normal(N + 1) + 1j * rng.standard_normal(N + 1))

    worst = 0.0
    for _ in range(100):
        f, g1, g2 = draw(), draw(), draw()
        f0 = TaylorPolynomial([f.coeffs[0]])
        checks = [
            (differentiate(integrate(f)), f),
            (integrate(differentiate(f)), f - f0),
            (differentiate(volterra(g1, f)), multiply(f, differentiate(g1))),
            (volterra(g1 + g2, f), volterra(g1, f) + volterra(g2, f)),
        ]
        worst = max(worst, *(rel_err(a, b) for a, b in checks))
    assert worst <= 1e-14


@pytest.mark.acceptance(6, "monomial envelope sandwich for exp(-r^2), N = 400, r in [0, 10]")
def test_associated_weight_sandwich():
    v = make_weight("exp_power", alpha=1, p=2)
    r = np.linspace(0.0, 10.0, 1001)
    rep = sandwich_report(v, r, 400)
    gap = rep[:, 3]
    assert np.all(np.isfinite(gap))
    assert np.all(gap >= -1e-12)  # rounding only
    assert np.all(gap <= 1 + np.log1p(r))
    assert abs(sandwich_report(v, [1.0], 400)[0, 3]) <= 1e-8


@pytest.mark.acceptance(7, "Littlewood-Paley ratios within [1/C, C], C <= 10, stable across reruns")
def test_littlewood_paley():
    C1, vals = lp_envelope(42)
    C2, _ = lp_envelope(42)
    frozen = json.loads((SNAPSHOTS / "lp_constant.json").read_text())["envelope_C"]
    assert np.all(np.isfinite(vals))
    assert C1 <= 10.0
    assert np.all((vals >= 1 / C1) & (vals <= C1))
    assert abs(C1 - C2) <= 1e-12
    assert abs(C1 - frozen) <= 1e-12


@pytest.mark.acceptance(8, "two-weight checker: exp(-r) exact, identity 1e-8 on every family, w <= C|w'|r")
def test_two_weight_checker():
    w = make_weight("exp_power", alpha=1, p=1)
    r = log_grid(0.01, 1e4, 200)
    rep = check_thm_two_weight_conditions(w, grid=r)
    assert rep.passed
    d1, d2 = w.psi_prime(r), w.psi_second(r)
    assert np.all(-(d1 * d1 - d2) / (d1 * d1) == -1.0)
    for family, params in FAMILY_SPECS:
        wf = make_weight(family, params)
        assert check_thm_two_weight_conditions(wf).subchecks["identity"]
        grid = log_grid(3.0, 1e3, 200)
        phi = growth_from_weight(wf)
        lhs = 2 - (wf.psi_prime(grid) ** 2 - wf.psi_second(grid)) / wf.psi_prime(grid) ** 2
        np.testing.assert_allclose(lhs, phi.kp_ratio(grid), rtol=0, atol=1e-8)
    # w <= C |w'| r on the tail, for weights that meet the hypotheses
    assert rep.subchecks["weight_vs_derivative"]
    gauss = check_thm_two_weight_conditions(make_weight("exp_power", alpha=1, p=2), 0.5, log_grid(2, 50, 200))
    assert gauss.passed and gauss.subchecks["weight_vs_derivative"]


@pytest.mark.acceptance(9, "no overflow or non-finite intermediates, incl. exp(r^2) at r = 100")
def test_overflow_safety(tmp_path, capsys):
    phi = growth_from_weight(make_weight("exp_power", alpha=1, p=2))
    with np.errstate(over="raise", invalid="raise"):
        assert float(phi.log_phi(100.0)) == pytest.approx(1e4, rel=1e-15)
        assert float(phi.log_phi_prime(100.0)) == pytest.approx(math.log(200.0) + 1e4, rel=1e-15)
        assert math.isfinite(float(phi.kp_ratio(100.0)))
        test_symbolic_curve_identities()
        test_kp_condition()
        test_operator_identities()
        test_associated_weight_sandwich()
        test_two_weight_checker()
        C, vals = lp_envelope(42)
        assert math.isfinite(C) and np.all(np.isfinite(vals))
        test_corollary_reproduction(tmp_path, capsys)
