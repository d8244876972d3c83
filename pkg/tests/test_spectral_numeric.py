import math
from fractions import Fraction as F

import numpy as np
import pytest

from polyqei import spectral_numeric as sn
from polyqei.errors import ConvergenceError
from polyqei.exact_bounds import alphas_closed_form, spectral_bounds
from polyqei.rational_core import TPolynomial, one_minus_t2_power

GRID = [F(k, 5) - 1 + F(1, 10) for k in range(10)]  # 10 rational points in (-1, 1)

# eigenvalue table: n -> (lambda1, lambda2, sqrt(2)(2n)! lambda1, n lambda2/lambda1)
TABLE = {
    5: (2.01975e-7, 1.04991e-8, 1.03652, 0.259911),
    10: (2.96037e-19, 7.56909e-21, 1.01856, 0.255681),
    15: (2.69890e-33, 4.56884e-35, 1.01242, 0.253928),
    19: (1.36524e-45, 1.81896e-47, 1.00982, 0.253144),
    20: (8.74731e-49, 1.10651e-50, 1.00933, 0.252995),
}


def sig5(a, b):
    return abs(a - b) <= 5e-6 * abs(b)


def test_n1_textbook_kernel():
    G = sn.build_green_kernel(1)
    for t in GRID:
        for s in GRID:
            assert G(t, s) == (1 - max(t, s)) * (1 + min(t, s)) / 2
    assert G(0, 0) == F(1, 2)


@pytest.mark.parametrize("n", range(1, 11))
def test_kernel_symmetry_and_positivity(n):
    G = sn.build_green_kernel(n)
    assert G(F(3, 10), F(-7, 10)) == G(F(-7, 10), F(3, 10))
    for t in GRID:
        for s in GRID:
            v = G(t, s)
            assert v == G(s, t)
            assert v >= 0


@pytest.mark.parametrize("n", [1, 2, 3, 6, 9])
@pytest.mark.parametrize("s", [F(0), F(1, 3), F(-5, 7)])
def test_kernel_conditions_exact(n, s):
    assert all(r == 0 for r in sn.build_green_kernel(n).condition_residuals(s))


@pytest.mark.parametrize("n", [1, 2, 4, 7])
def test_kernel_row_integral(n):
    G = sn.build_green_kernel(n)
    for t in (F(0), F(1, 2), F(-3, 4)):
        below, above = G.s_pieces_at(t)
        from polyqei.rational_core import integrate

        total = integrate(below, -1, t) + integrate(above, t, 1)
        assert total == (1 - t * t) ** n / math.factorial(2 * n)


def test_kernel_range():
    with pytest.raises(ValueError):
        sn.build_green_kernel(0)
    with pytest.raises(ValueError):
        sn.build_green_kernel(sn.MAX_KERNEL_N + 1)


def test_n1_eigenvalues(eigs):
    est = eigs(1)
    assert est.lambda1 == pytest.approx(4 / math.pi ** 2, rel=1e-7)
    assert est.lambda2 == pytest.approx(1 / math.pi ** 2, rel=1e-7)


@pytest.mark.parametrize("n", [5, 20])
def test_table_rows(eigs, n):
    est = eigs(n)
    l1, l2, col4, col5 = TABLE[n]
    assert sig5(est.lambda1, l1)
    assert sig5(est.lambda2, l2)
    assert sig5(est.sqrt2_factorial_lambda1, col4)
    assert sig5(est.rank1_ratio, col5)


@pytest.mark.parametrize("n", [5, 15, 19])
def test_rank1_ratio(n):
    assert sig5(sn.rank1_ratio(n), TABLE[n][3])


@pytest.mark.parametrize("n", [1, 2, 3, 7, 12, 20])
def test_bracket_and_positive_eigenvector(eigs, n):
    est = eigs(n)
    lo, hi = sn.spectral_bracket(n)
    assert lo <= 1 / est.lambda1 <= hi
    assert est.lambda1 > est.lambda2 > 0
    u = est.eigenvector
    assert u.min() >= -1e-10 * u.max()


def test_quad_order_precondition():
    with pytest.raises(ValueError):
        sn.nystrom_eigs(5, quad_order=39)
    with pytest.raises(ValueError):
        sn.nystrom_eigs(2, precision_bits=32)


def test_convergence_error_carries_best():
    with pytest.raises(ConvergenceError) as info:
        sn.nystrom_eigs(1, quad_order=16, rtol=1e-15, max_order=32)
    assert info.value.best.lambda1 == pytest.approx(4 / math.pi ** 2, rel=1e-5)


def test_power_iteration_matches_dense():
    nodes, weights = sn.gauss_legendre(96)
    A = sn.assemble_nystrom(3, nodes, weights, 128)
    vals, _ = sn.power_iteration_top2(A)
    dense = np.linalg.eigvalsh(A)[::-1][:2]
    assert vals == pytest.approx(dense, rel=1e-10)


def test_large_order_uses_power_iteration():
    est = sn.nystrom_eigs(1, quad_order=512, max_order=1024, rtol=1e-6)
    assert est.quad_order == 1024
    assert est.lambda1 == pytest.approx(4 / math.pi ** 2, rel=1e-9)


def test_apply_T_examples():
    t = [0.0, 0.25, -0.6]
    got = sn.apply_T(1, one_minus_t2_power(1), t)
    expected = [(1 - x * x) * (F(1, 3) + (1 - x * x) / 12) for x in map(F, t)]
    assert got == pytest.approx([float(v) for v in expected], rel=1e-14)
    assert got[0] == pytest.approx(5 / 12, rel=1e-15)
    assert sn.apply_T(1, TPolynomial([1]), [0.0])[0] == pytest.approx(0.5, rel=1e-15)


@pytest.mark.parametrize("n", [2, 5, 9])
def test_apply_T_sandwich(n):
    sol = alphas_closed_form(n)
    b = spectral_bounds(n)
    ts = np.linspace(-0.95, 0.95, 15)
    got = sn.apply_T(n, one_minus_t2_power(n), ts)
    f = (1 - ts ** 2) ** n
    exact = f * np.array([float(sol.P(F(1) - F(x) ** 2)) for x in ts])
    assert got == pytest.approx(exact, rel=1e-12)
    assert np.all(float(b.lower) * f <= got * (1 + 1e-12))
    assert np.all(got <= float(b.upper) * f * (1 + 1e-12))


def test_empirical_H_small_x_limit():
    # x -> 0 with d=2, n=1: int (h')^2 / int h^2 = (8/3)/(16/15) = 5/2
    assert sn.empirical_H(2, 1, 1e-6) == pytest.approx(2.5, rel=1e-4)


@pytest.mark.parametrize("d,n,x", [(2, 1, 0.5), (2, 2, 3.0), (4, 2, 2.0), (4, 3, 4.0)])
def test_empirical_H_bound_and_methods(d, n, x):
    H = sn.empirical_H(d, n, x)
    assert H == pytest.approx(sn.empirical_H(d, n, x, method="bessel"), rel=1e-9)
    assert H <= x ** (d - 2 * n) / float(spectral_bounds(n).lower) * (1 + 1e-9)


def test_empirical_H_decreasing():
    xs = [0.5, 1.0, 2.0, 4.0, 8.0]
    vals = [sn.empirical_H(2, 1, x) for x in xs]
    assert all(a > b for a, b in zip(vals, vals[1:]))


def test_fourier_h_methods_agree():
    for n, y in [(1, 0.3), (3, 7.0), (6, 40.0), (10, 120.0)]:
        assert sn.fourier_h(n, y) == pytest.approx(sn.fourier_h(n, y, method="bessel"), rel=1e-10)


def test_empirical_H_argument_errors():
    with pytest.raises(ValueError):
        sn.empirical_H(4, 1, 1.0)
    with pytest.raises(ValueError):
        sn.empirical_H(2, 1, 0.0)
