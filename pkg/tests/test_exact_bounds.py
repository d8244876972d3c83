import math
from fractions import Fraction as F

import pytest

from polyqei import exact_bounds as eb
from polyqei.rational_core import TPolynomial


def test_n1_alphas():
    assert eb.alpha_via_linear_system(1).alphas == (F(1, 3), F(1, 12))
    assert eb.alpha_closed_form(1, 0) == F(1, 3)
    assert eb.alpha_closed_form(1, 1) == F(1, 12)


def test_n2_alpha0_half_integer_gamma():
    # G(5/2) / (2 G(3) G(9/2)) with G(9/2) = (7/2)(5/2) G(5/2)
    oracle = 1 / (2 * 2 * F(7, 2) * F(5, 2))
    assert oracle == F(1, 35)
    assert eb.alpha_via_linear_system(2).alphas[0] == oracle


@pytest.mark.parametrize("n", range(1, 31))
def test_closed_form_equals_linear_system(n):
    sol = eb.alpha_via_linear_system(n)
    assert sol.alphas == tuple(eb.alpha_closed_form(n, j) for j in range(n + 1))
    assert all(a > 0 for a in sol.alphas)
    assert eb.residual_check(sol).is_zero()


def test_system_matrices_consistent():
    n = 4
    A, B, beta = eb.system_matrices(n)
    alphas = eb.alpha_via_linear_system(n).alphas
    AB_alpha = [A[j][j] * sum(B[j][k] * alphas[k] for k in range(n + 1)) for j in range(n + 1)]
    assert AB_alpha == beta


def test_residual_detects_corruption():
    sol = eb.alpha_via_linear_system(2)
    bad = eb.AlphaSolution(2, (sol.alphas[0] + 1,) + sol.alphas[1:])
    assert not eb.residual_check(bad).is_zero()
    assert isinstance(eb.residual_check(sol), TPolynomial)


def test_closed_form_argument_errors():
    with pytest.raises(ValueError):
        eb.alpha_closed_form(3, 4)
    with pytest.raises(ValueError):
        eb.alpha_closed_form(3, -1)
    with pytest.raises(ValueError):
        eb.alpha_via_linear_system(0)


def test_cap_on_exact_n():
    with pytest.raises(ValueError, match="cap"):
        eb.spectral_bounds(eb.MAX_EXACT_N + 1)


def test_n1_bounds_contain_harmonic_eigenvalue():
    b = eb.spectral_bounds(1)
    assert (b.lambda_lower, b.lambda_upper) == (F(12, 5), F(3))
    assert b.lambda_lower < math.pi ** 2 / 4 < b.lambda_upper
    assert b.ratio_Rn == F(5, 4)


@pytest.mark.parametrize("n", range(1, 31))
def test_bound_ordering_and_inverse_alpha0(n):
    b = eb.spectral_bounds(n)
    assert 0 < b.lower < b.upper
    assert 1 < b.ratio_Rn < 2
    assert b.lambda_lower <= b.lambda_upper
    assert 1 / b.lower == eb.inverse_alpha0(n)
    # float path via log-gamma agrees to >= 12 significant figures
    assert eb.inverse_alpha0_float(n) == pytest.approx(float(eb.inverse_alpha0(n)), rel=1e-12)


def test_ratio_series_n1():
    value, terms = eb.ratio_Rn_series(1)
    assert terms == [F(1), F(1, 4)]
    assert value == F(5, 4)


@pytest.mark.parametrize("n", range(1, 41))
def test_tannery_envelope(n):
    value, terms = eb.ratio_Rn_series(n)
    assert terms[0] == 1
    assert all(0 <= c <= F(1, 2 ** k) for k, c in enumerate(terms))
    assert value <= 2 - F(1, 2 ** n)
    assert value == eb.spectral_bounds(n).ratio_Rn


def test_ratio_decreases_toward_one():
    r10, _ = eb.ratio_Rn_series(10)
    r40, _ = eb.ratio_Rn_series(40)
    assert r40 < r10
    assert r40 - 1 < F(1, 100)


def test_stirling_asymptote_values():
    assert eb.stirling_asymptote(5) == pytest.approx(1 / (math.sqrt(2) * math.factorial(10)), rel=1e-13)
    assert eb.stirling_asymptote(5) == pytest.approx(1.94860e-7, rel=1e-5)
    # table: sqrt(2)(2n)! lambda1 = 1.03652 at n=5
    assert 2.01975e-7 / eb.stirling_asymptote(5) == pytest.approx(1.03652, rel=1e-5)
    assert 8.74731e-49 / eb.stirling_asymptote(20) == pytest.approx(1.00933, rel=1e-5)
    assert eb.stirling_asymptote(1) == pytest.approx(1 / (2 * math.sqrt(2)), rel=1e-14)
    # the asymptote is not a lower bound at n=1: r(T_1) = 4/pi^2 is larger
    assert eb.stirling_asymptote(1) < 4 / math.pi ** 2
