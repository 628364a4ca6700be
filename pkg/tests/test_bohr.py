import math

import numpy as np
import pytest

from src.bohr import (
    abscissa_L,
    bohr_coefficient,
    bohr_spectrum,
    coefficient_bound_check,
    frequency_prefix,
    tail_bound,
)
from src.errors import DivergentTail, FrequencyTooShort, NumericPrecondition
from src.polynomial import GDPolynomial, vertical_translate
from tests.strategies import random_polynomial


def test_single_term_off_frequency_closed_form():
    P = GDPolynomial(((2, 3),))
    coeff = bohr_coefficient(P, 1.0, sigma=1.0, T=100.0)
    expected = 3 * math.exp(-1) * math.sin(100) / 100
    assert coeff.exact == 0
    assert coeff.estimate.real == pytest.approx(expected, abs=1e-12)
    assert abs(coeff.estimate.imag) <= 1e-12
    assert coeff.error_bound == pytest.approx(3 * math.exp(-1) / 100)


def test_coefficient_recovered_within_error_bound():
    P = GDPolynomial(((0, 1), (1, 2), (2.5, 1j)))
    coeff = bohr_coefficient(P, 1.0)
    assert coeff.exact == 2
    assert coeff.deviation <= coeff.error_bound + 1e-9


def test_random_coefficients_within_error_bound():
    rng = np.random.default_rng(11)
    for _ in range(20):
        P = random_polynomial(rng, max_lambda=4.0)
        sigma = float(rng.uniform(0.2, 1.5))
        for lam in P.lambdas:
            coeff = bohr_coefficient(P, float(lam), sigma=sigma, T=200.0)
            assert coeff.deviation <= coeff.error_bound + 1e-8


def test_pure_constant_mean_is_exact():
    coeff = bohr_coefficient(GDPolynomial(((0, 2 - 1j),)), 0.0, T=10.0)
    assert coeff.estimate == pytest.approx(2 - 1j, abs=1e-14)
    assert coeff.error_bound == 0.0


def test_zero_polynomial_coefficient():
    coeff = bohr_coefficient(GDPolynomial(), 1.0)
    assert (coeff.estimate, coeff.error_bound, coeff.exact) == (0j, 0.0, 0j)


@pytest.mark.parametrize("kwargs", [dict(sigma=0.0), dict(T=0.0), dict(T=-5.0)])
def test_bohr_coefficient_rejects_bad_controls(kwargs):
    with pytest.raises(NumericPrecondition):
        bohr_coefficient(GDPolynomial(((1, 1),)), 1.0, **kwargs)


def test_bohr_coefficient_rejects_negative_lambda():
    with pytest.raises(NumericPrecondition):
        bohr_coefficient(GDPolynomial(((1, 1),)), -1.0)


SPECTRUM_POLY = GDPolynomial(((1, 2), (2, 1)))
CANDIDATES = [0, 0.5, 1, 1.5, 2, 3]


def test_spectrum_with_fixed_threshold():
    report = bohr_spectrum(SPECTRUM_POLY, CANDIDATES, T=1e4, threshold=0.05)
    assert report.detected_lambdas == (1.0, 2.0)
    assert report.thresholds == (0.05,) * len(CANDIDATES)
    assert [c.lambda_ for c in report.candidates] == [float(x) for x in CANDIDATES]


def test_spectrum_with_default_threshold():
    report = bohr_spectrum(SPECTRUM_POLY, CANDIDATES, T=1e4)
    assert report.detected_lambdas == (1.0, 2.0)
    for coeff, level in zip(report.candidates, report.thresholds):
        assert level >= 10 * coeff.error_bound


def test_spectrum_detected_estimates_close_to_exact():
    report = bohr_spectrum(SPECTRUM_POLY, CANDIDATES, T=1e4)
    for coeff in report.detected:
        assert coeff.deviation <= coeff.error_bound + 1e-9


@pytest.mark.parametrize("candidates", [[1, 0.5], [-1, 2]])
def test_spectrum_rejects_bad_candidates(candidates):
    with pytest.raises(NumericPrecondition):
        bohr_spectrum(SPECTRUM_POLY, candidates, T=10)


def test_coefficient_bound_on_two_term_polynomial():
    check = coefficient_bound_check(GDPolynomial(((0, 1), (1, 1))), 0.0, t_window=20, step=0.01)
    assert check.holds
    assert check.max_coefficient == 1.0
    assert check.norm_upper == pytest.approx(2.0, abs=1e-6)
    assert check.margin == pytest.approx(1.0, abs=1e-6)


def test_coefficient_bound_uses_dilated_coefficients():
    P = GDPolynomial(((0, 0.1), (1, 2)))
    check = coefficient_bound_check(P, 1.0, t_window=20, step=0.01)
    assert check.max_coefficient == pytest.approx(2 * math.exp(-1))
    assert check.holds


def test_coefficient_bound_random_periodic_polynomials():
    rng = np.random.default_rng(3)
    for _ in range(100):
        # frequencies on the 0.5 lattice make the line values 4 pi periodic
        P = random_polynomial(rng, lattice=0.5)
        kappa = float(rng.uniform(0, 1))
        check = coefficient_bound_check(P, kappa, t_window=20, step=0.01)
        assert check.holds
        assert check.margin >= -1e-6 * check.norm_upper


def test_frequency_prefix_rules():
    assert frequency_prefix("linear", 4).tolist() == [1, 2, 3, 4]
    assert frequency_prefix("log", 3).tolist() == pytest.approx([0.0, math.log(2), math.log(3)])
    assert frequency_prefix("sqrt", 4).tolist() == pytest.approx([1, math.sqrt(2), math.sqrt(3), 2])
    assert frequency_prefix("loglog", 2).tolist() == pytest.approx([math.log(math.log(3)), math.log(math.log(4))])


def test_frequency_prefix_errors():
    with pytest.raises(NumericPrecondition):
        frequency_prefix("cubic", 10)
    with pytest.raises(NumericPrecondition):
        frequency_prefix("log", 0)


def test_abscissa_of_log_frequencies_is_one():
    assert abscissa_L(frequency_prefix("log", 10_000)) == pytest.approx(1.0)


@pytest.mark.parametrize("rule", ["linear", "sqrt"])
def test_abscissa_of_fast_frequencies_is_small(rule):
    assert abscissa_L(frequency_prefix(rule, 10_000)) < 0.2


def test_abscissa_of_loglog_frequencies_is_infinite():
    assert math.isinf(abscissa_L(frequency_prefix("loglog", 10_000)))


def test_abscissa_rejects_short_or_unordered_prefix():
    with pytest.raises(FrequencyTooShort):
        abscissa_L(frequency_prefix("linear", 10))
    lambdas = frequency_prefix("linear", 20)
    lambdas[5] = lambdas[4]
    with pytest.raises(NumericPrecondition):
        abscissa_L(lambdas)


def test_tail_bound_linear_frequencies_is_geometric():
    lambdas = frequency_prefix("linear", 64)
    bound = tail_bound(lambdas, 1.0, 3)
    assert bound == pytest.approx(math.exp(-4) / (1 - math.exp(-1)), rel=1e-12)


def test_tail_bound_decreases_with_cut():
    lambdas = frequency_prefix("linear", 64)
    bounds = [tail_bound(lambdas, 0.5, n) for n in (0, 4, 16, 64)]
    assert all(b < a for a, b in zip(bounds, bounds[1:]))


def test_tail_bound_diverges_before_abscissa():
    with pytest.raises(DivergentTail):
        tail_bound(frequency_prefix("log", 1000), 0.5, 10)


def test_tail_bound_rejects_cut_outside_prefix():
    with pytest.raises(NumericPrecondition):
        tail_bound(frequency_prefix("linear", 32), 1.0, 33)


def test_bohr_coefficient_is_linear():
    P = GDPolynomial(((0.5, 1), (1, 2), (2, 1j)))
    Q = GDPolynomial(((1, -1j), (3, 0.5)))
    combined = bohr_coefficient(P + Q.scale(2), 1.0, T=500.0)
    first, second = bohr_coefficient(P, 1.0, T=500.0), bohr_coefficient(Q, 1.0, T=500.0)
    assert combined.exact == pytest.approx(first.exact + 2 * second.exact)
    assert combined.estimate == pytest.approx(first.estimate + 2 * second.estimate, abs=1e-9)
    assert combined.error_bound <= first.error_bound + 2 * second.error_bound + 1e-15


@pytest.mark.parametrize("tau", [0.7, 3.0, 41.5])
def test_bohr_coefficient_follows_vertical_translation(tau):
    P = GDPolynomial(((0.5, 1), (1, 2), (2, 1j)))
    base = bohr_coefficient(P, 1.0)
    moved = bohr_coefficient(vertical_translate(P, tau), 1.0)
    phase = np.exp(-1j * tau)
    assert moved.exact == pytest.approx(phase * base.exact)
    assert moved.error_bound == pytest.approx(base.error_bound)
    assert abs(moved.estimate - phase * base.estimate) <= moved.error_bound + base.error_bound + 1e-8


def test_bohr_coefficient_does_not_depend_on_sigma():
    P = GDPolynomial(((0.5, 1), (1, 2), (2, 1j)))
    low, high = bohr_coefficient(P, 1.0, sigma=0.5), bohr_coefficient(P, 1.0, sigma=2.0)
    assert low.exact == high.exact == 2
    assert low.deviation <= low.error_bound + 1e-8
    assert high.deviation <= high.error_bound + 1e-8
    assert abs(low.estimate - high.estimate) <= low.error_bound + high.error_bound + 2e-8
    assert high.error_bound < 0.01
