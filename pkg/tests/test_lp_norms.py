import math
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from polyqei import lp_norms as lp
from polyqei.exact_bounds import alphas_closed_form
from polyqei.rational_core import TPolynomial
from polyqei.spectral_numeric import apply_T


def test_norm_inf_exact():
    assert lp.norm_inf(1) == F(1, 2)
    assert lp.norm_inf(2) == F(1, 24)
    assert lp.norm_inf(5) == F(1, 3628800)
    assert lp.norm_one(3) == lp.norm_inf(3)
    with pytest.raises(ValueError):
        lp.norm_inf(0)


@pytest.mark.parametrize("n", range(1, 6))
def test_sampled_sup_norm(n):
    # G >= 0, so the sup norm is attained at f = 1 and equals sup_t (T_n 1)(t)
    ts = np.linspace(-1.0, 1.0, 41)
    sampled = np.max(np.abs(apply_T(n, TPolynomial([1]), ts)))
    assert abs(sampled - float(lp.norm_inf(n))) <= 1e-8 * float(lp.norm_inf(n))
    assert sampled == pytest.approx(1 / math.factorial(2 * n), rel=1e-13)


def test_signed_input_stays_below_norm():
    f = TPolynomial([F(-1, 2), 0, 3, F(-7, 5)])
    ts = np.linspace(-1.0, 1.0, 81)
    sup_f = F(39, 10)  # |f(-1)|, the maximum on [-1, 1]
    assert all(abs(f(F(t))) <= sup_f for t in np.linspace(-1.0, 1.0, 401))
    got = np.abs(apply_T(1, f, ts))
    assert np.all(got <= float(sup_f) / 2 * (1 + 1e-12))


def test_inverse_r():
    assert lp.inverse_r(1) == 0.0
    assert lp.inverse_r(math.inf) == 0.0
    assert lp.inverse_r(2) == 0.5
    assert lp.inverse_r(4) == pytest.approx(0.25)
    assert lp.inverse_r(4 / 3) == pytest.approx(0.25)
    with pytest.raises(ValueError):
        lp.inverse_r(0.5)


@pytest.mark.parametrize("n", [1, 2, 5, 12])
def test_p2_reduces_to_spectral_bounds(n):
    sol = alphas_closed_form(n)
    b = lp.norm_p_bounds(n, 2)
    assert b.lower == pytest.approx(float(sol.alphas[0]), rel=1e-14)
    assert b.upper == pytest.approx(float(sum(sol.alphas)), rel=1e-14)
    assert b.r == 2


@pytest.mark.parametrize("n", [1, 3, 8])
@pytest.mark.parametrize("p", [1, math.inf])
def test_endpoints_are_exact_norm(n, p):
    b = lp.norm_p_bounds(n, p)
    assert b.upper == float(lp.norm_inf(n))
    assert b.r == math.inf


@given(st.integers(1, 15), st.floats(1.0, 50.0))
def test_symmetric_in_conjugate_exponent(n, p):
    q = math.inf if p == 1.0 else p / (p - 1)
    a, b = lp.norm_p_bounds(n, p), lp.norm_p_bounds(n, q)
    assert a.upper == pytest.approx(b.upper, rel=1e-12)
    assert a.lower == b.lower


@given(st.integers(1, 20), st.floats(1.0, 1e6))
def test_bounds_ordered(n, p):
    b = lp.norm_p_bounds(n, p)
    top = float(lp.norm_inf(n))
    assert 0 < b.lower <= b.upper * (1 + 1e-12)
    assert b.upper <= top * (1 + 1e-12)
    assert b.upper >= lp.norm_p_bounds(n, 2).upper * (1 - 1e-12)


def test_a_n_b_n_tend_to_one():
    a, b = lp.norm_p_bounds(40, 2).a_n, lp.norm_p_bounds(40, 2).b_n
    assert a < 1 < b
    assert b - a < 0.03


def test_ddfl_values():
    assert lp.ddfl_comparison(1) == (2, 4, 2)
    assert lp.ddfl_comparison(2) == (24, 192, 8)


@pytest.mark.parametrize("n", range(1, 11))
def test_ddfl_ratio(n):
    ours, theirs, ratio = lp.ddfl_comparison(n)
    assert ratio == 2 ** (2 * n - 1)
    assert theirs == ratio * ours


@pytest.mark.slow
@pytest.mark.parametrize("n", [1, 3, 7, 12, 20])
def test_numeric_eigenvalue_within_l2_bounds(n, eigs):
    b = lp.norm_p_bounds(n, 2)
    assert b.lower <= eigs(n).lambda1 <= b.upper
