import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from src.errors import NegativeFrequency, NumericPrecondition
from src.polynomial import (
    GDPolynomial,
    HalfPlaneGrid,
    analytic_bound,
    certified_sup_norm,
    evaluate,
    line_lipschitz,
    line_scan,
    vertical_translate,
)
from tests.strategies import brute_force_line_max, polynomials, random_polynomial


def test_evaluate_constant():
    assert evaluate(GDPolynomial(((0, 5),)), 3 + 7j) == 5


def test_evaluate_on_boundary():
    assert evaluate(GDPolynomial(((1, 1),)), 1j * math.pi) == pytest.approx(-1, abs=1e-15)


def test_evaluate_two_terms():
    P = GDPolynomial(((1, 2), (2, 1)))
    assert evaluate(P, math.log(2)) == pytest.approx(1.25, abs=1e-15)


def test_evaluate_vectorised_matches_scalar():
    P = GDPolynomial(((0.5, 1 - 2j), (3.0, 0.25j)))
    s = np.array([0.1 + 1j, 2 - 3j, 0j])
    values = evaluate(P, s)
    assert values.shape == (3,)
    for sk, vk in zip(s, values):
        assert evaluate(P, sk) == pytest.approx(vk)


@pytest.mark.parametrize("s", [complex(math.nan, 0), complex(0, math.inf), -0.5 + 1j])
def test_evaluate_rejects_bad_points(s):
    with pytest.raises(NumericPrecondition):
        evaluate(GDPolynomial(((1, 1),)), s)


def test_canonical_form_merges_and_drops():
    P = GDPolynomial(((2, 1), (1, 3), (2, -1), (0.5, 0)))
    assert P.terms == ((1.0, 3 + 0j),)
    assert GDPolynomial(((1, 1), (1, 2))).terms == ((1.0, 3 + 0j),)
    assert GDPolynomial().is_zero


def test_negative_frequency_rejected():
    with pytest.raises(NegativeFrequency):
        GDPolynomial(((-1, 1),))


def test_arithmetic():
    P = GDPolynomial(((0, 1), (1, 2)))
    Q = GDPolynomial(((1, -2), (2, 1j)))
    assert (P + Q).terms == ((0.0, 1 + 0j), (2.0, 1j))
    assert (P - P).is_zero
    assert (P - 1).terms == ((1.0, 2 + 0j),)


def test_vertical_translate_full_period():
    Q = vertical_translate(GDPolynomial(((1, 1),)), 2 * math.pi)
    assert Q.lambdas.tolist() == [1.0]
    assert Q.coeffs[0] == pytest.approx(1, abs=1e-15)


def test_vertical_translate_half_period():
    Q = vertical_translate(GDPolynomial(((1, 1),)), math.pi)
    assert Q.coeffs[0] == pytest.approx(-1, abs=1e-15)


def test_vertical_translate_keeps_constants():
    P = GDPolynomial(((0, 2 - 3j),))
    assert vertical_translate(P, 17.3) == P


@given(
    polynomials(),
    st.floats(-100, 100),
    st.floats(0, 5),
    st.floats(-100, 100),
)
@settings(max_examples=300, deadline=None)
def test_translation_exactness(P, tau, sigma, t):
    s = complex(sigma, t)
    lhs = evaluate(vertical_translate(P, tau), s)
    rhs = evaluate(P, s + 1j * tau)
    assert abs(lhs - rhs) <= 1e-12 * (1 + P.coefficient_sum)


@given(polynomials(), st.floats(-100, 100), st.floats(-100, 100))
@settings(max_examples=300, deadline=None)
def test_translation_group_law(P, tau1, tau2):
    twice = vertical_translate(vertical_translate(P, tau1), tau2)
    once = vertical_translate(P, tau1 + tau2)
    assert twice.lambdas.tolist() == once.lambdas.tolist()
    assert np.all(np.abs(twice.coeffs - once.coeffs) <= 1e-12 * (1 + P.coefficient_sum))


def test_sup_norm_single_term():
    enc = certified_sup_norm(GDPolynomial(((1, 1),)), 1.0)
    assert enc.lower <= math.exp(-1) + 1e-15
    assert enc.upper >= math.exp(-1) - 1e-15
    assert enc.width <= 1e-6


def test_sup_norm_positive_coefficients_attained_at_zero():
    enc = certified_sup_norm(GDPolynomial(((1, 1), (2, 1))), 1.0)
    expected = math.exp(-1) + math.exp(-2)
    assert enc.lower == pytest.approx(expected, abs=1e-12)
    assert enc.upper == pytest.approx(expected, abs=1e-12)
    assert enc.bound == pytest.approx(expected, abs=1e-15)


def test_sup_norm_brackets_brute_force_scan():
    P = GDPolynomial(((1, 1), (math.sqrt(2), 1)))
    enc = certified_sup_norm(P, 0.5, t_window=500)
    brute = brute_force_line_max(P, 0.5, 500, 1e-4)
    assert brute <= enc.upper + 1e-12
    assert enc.lower <= brute + line_lipschitz(P, 0.5) * 1e-4 / 2


def test_sup_norm_plain_grid_rule():
    P = GDPolynomial(((1, 1), (math.sqrt(3), 0.5j)))
    enc = certified_sup_norm(P, 0.2, t_window=50, step=0.05)
    assert enc.step == 0.05
    assert enc.upper == pytest.approx(
        min(enc.lower + line_lipschitz(P, 0.2) * 0.05 / 2, analytic_bound(P, 0.2))
    )


def test_sup_norm_random_polynomials_bracket_brute_force():
    rng = np.random.default_rng(20240601)
    for _ in range(20):
        P = random_polynomial(rng)
        kappa = float(rng.uniform(0, 1))
        enc = certified_sup_norm(P, kappa, t_window=100)
        brute = brute_force_line_max(P, kappa, 100, 1e-3)
        assert 0 <= enc.lower <= enc.upper
        assert brute <= enc.upper + 1e-9
        assert enc.lower <= brute + line_lipschitz(P, kappa) * 1e-3 / 2 + 1e-12
        assert enc.upper <= enc.bound + 1e-12


def test_sup_norm_positive_coefficients_random():
    rng = np.random.default_rng(7)
    for _ in range(20):
        n = int(rng.integers(1, 6))
        lambdas = rng.uniform(0, 4, size=n)
        coeffs = rng.uniform(0.1, 3, size=n)
        P = GDPolynomial(tuple(zip(lambdas, coeffs)))
        kappa = float(rng.uniform(0, 2))
        enc = certified_sup_norm(P, kappa)
        expected = float(np.sum(coeffs * np.exp(-lambdas * kappa)))
        assert enc.lower == pytest.approx(expected, abs=1e-9)
        assert enc.upper == pytest.approx(expected, abs=1e-9)


def test_sup_norm_zero_polynomial():
    enc = certified_sup_norm(GDPolynomial(), 0.0)
    assert (enc.lower, enc.upper, enc.bound) == (0.0, 0.0, 0.0)


@pytest.mark.parametrize("step", [0.0, -0.1])
def test_sup_norm_rejects_bad_step(step):
    with pytest.raises(NumericPrecondition):
        certified_sup_norm(GDPolynomial(((1, 1),)), 0.0, step=step)


@given(polynomials(), st.floats(0, 3), st.floats(0, 3))
@settings(max_examples=200, deadline=None)
def test_analytic_bound_non_increasing_in_kappa(P, kappa, extra):
    assert analytic_bound(P, kappa + extra) <= analytic_bound(P, kappa) + 1e-12


def test_sup_norm_monotone_in_kappa():
    P = GDPolynomial(((0, 1), (1, -0.5j), (2.5, 2)))
    previous = None
    for kappa in (0.0, 0.25, 0.5, 1.0, 2.0):
        enc = certified_sup_norm(P, kappa, t_window=50)
        assert enc.lower <= enc.upper
        if previous is not None:
            assert enc.lower <= previous.upper + 1e-12
        previous = enc


def test_difference_norm_is_translation_invariant():
    P = GDPolynomial(((0.3, 1), (1.7, 2j)))
    Q = GDPolynomial(((0.3, 0.5), (2.2, -1)))
    tau = 3.7
    a = certified_sup_norm(P - Q, 0.4, t_window=30, step=0.01, t_center=tau)
    b = certified_sup_norm(vertical_translate(P, tau) - vertical_translate(Q, tau), 0.4, t_window=30, step=0.01)
    assert a.lower == pytest.approx(b.lower, abs=1e-12)
    assert a.upper == pytest.approx(b.upper, abs=1e-12)


def test_line_scan_contains_center():
    t, values = line_scan(GDPolynomial(((1, 1),)), 0.0, 1.0, 0.3, t_center=2.0)
    assert 2.0 in t.tolist()
    assert t.min() <= 1.0 and t.max() >= 3.0
    assert values[t.tolist().index(2.0)] == pytest.approx(cmath.exp(-2j))


def test_half_plane_grid_corners():
    grid = HalfPlaneGrid(kappa=0.5, sigma_max=2.0, t_min=-1.0, t_max=3.0, n_sigma=4, n_t=5)
    points = grid.points()
    assert points.shape == (4, 5)
    corners = {points[0, 0], points[0, -1], points[-1, 0], points[-1, -1]}
    assert corners == {0.5 - 1j, 0.5 + 3j, 2.0 - 1j, 2.0 + 3j}
    assert grid.spacing == pytest.approx((0.5, 1.0))


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(kappa=-1, sigma_max=1, t_min=0, t_max=1, n_sigma=2, n_t=2),
        dict(kappa=1, sigma_max=1, t_min=0, t_max=1, n_sigma=2, n_t=2),
        dict(kappa=0, sigma_max=1, t_min=1, t_max=1, n_sigma=2, n_t=2),
        dict(kappa=0, sigma_max=1, t_min=0, t_max=1, n_sigma=1, n_t=2),
    ],
)
def test_half_plane_grid_validation(kwargs):
    with pytest.raises(NumericPrecondition):
        HalfPlaneGrid(**kwargs)


def test_sup_norm_brackets_brute_force_on_200_periodic_polynomials():
    rng = np.random.default_rng(99)
    for _ in range(200):
        # quarter-lattice frequencies make the line 8 pi periodic, so one period
        # at step 1e-4 samples every phase met on |t| <= 500
        P = random_polynomial(rng, lattice=0.25)
        kappa = float(rng.uniform(0, 1))
        enc = certified_sup_norm(P, kappa, t_window=500)
        brute = brute_force_line_max(P, kappa, 4 * math.pi, 1e-4)
        assert brute <= enc.upper + 1e-9
        assert enc.lower <= brute + line_lipschitz(P, kappa) * 1e-4 / 2 + 1e-12
