import math

import numpy as np
import pytest

import noisyodds as no

trapezoid = getattr(np, "trapezoid", None) or np.trapz


def test_envelope_and_woe_roundtrip():
    lo, hi = no.belief_envelope(0.3, 0.5)
    assert lo == pytest.approx(0.15)
    assert hi == pytest.approx(0.45)
    assert no.woe_to_probability(no.probability_to_woe(0.2)) == pytest.approx(0.2, abs=1e-15)


def test_special_value_of_conditional_margin():
    target = 1.0 + math.log(0.5) / 0.5
    assert no.conditional_mean_seller_margin(0.5 - 1e-9, 1.0, 0.5) == pytest.approx(target, abs=1e-6)


def test_fair_adjustment_zeroes_the_mean_margin():
    adj = no.solve_adjustment(0.3, 0.5)
    assert adj["m"] == pytest.approx(0.025403360131977791, abs=1e-12)
    assert no.quadrature_mean_margin(0.3, 0.5, adj["m"]) == pytest.approx(0.0, abs=1e-10)
    assert adj["fair_odds"] == pytest.approx(1.0 / (0.3 + adj["m"]))
    assert no.solve_adjustment(0.5, 0.5)["m"] == pytest.approx(0.0, abs=1e-15)


def test_posterior_density_integrates_to_one():
    f = no.PosteriorDensity(0.3, 1.0, "definetti")
    lo, hi = f.support
    xs = np.linspace(lo, hi, 20001)
    ys = np.array([f(x) for x in xs])
    assert trapezoid(ys, xs) == pytest.approx(1.0, abs=1e-4)
    assert f.mean == pytest.approx(0.3 + 0.0566948, abs=1e-6)


def test_mean_margin_reports_segment():
    r = no.mean_margin(0.3, 0.5)
    assert r["segment"]
    assert r["value"] == pytest.approx(no.quadrature_mean_margin(0.3, 0.5), abs=1e-12)


def test_w1_star():
    assert no.solve_w1_star(0.3, 0.25)["w1"] == pytest.approx(0.43609, abs=1e-5)


def test_simulate_is_reproducible_and_columnar():
    a = no.simulate(0.5, trials=20000, seed=7, threads=1)
    b = no.simulate(0.5, trials=20000, seed=7, threads=4)
    assert isinstance(a["p_c"], np.ndarray)
    assert len(a["p_c"]) == 20000
    np.testing.assert_array_equal(a["payoff_seller"], b["payoff_seller"])
    np.testing.assert_array_equal(a["p_t"], b["p_t"])


def test_errors_are_python_exceptions():
    with pytest.raises(no.DomainError):
        no.belief_envelope(1.5, 0.5)
    with pytest.raises(ValueError):
        no.simulate(0.5, adjust="bogus")


def test_figure_series_columns():
    cols = no.figure_series(1, points=11)
    assert cols
    assert all(len(v) == len(next(iter(cols.values()))) for v in cols.values())


def test_small_verification_passes():
    passed, findings = no.run_verification(p_c_grid=[0.3, 0.7], epsilon_grid=[0.5])
    assert passed
    assert "status" in findings
    assert "fail" not in findings["status"]
