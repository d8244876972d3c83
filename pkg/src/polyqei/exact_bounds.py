"""Exact spectral-radius bounds for the clamped polyharmonic solution operator.

Applying the solution operator ``T_n`` of ``(-1)^n psi^(2n) = lambda psi`` with
clamped ends to ``f_n(t) = (1 - t^2)^n`` gives ``(1 - t^2)^n P(1 - t^2)`` with
``P(z) = sum_j alpha_j z^j``.  All ``alpha_j`` are positive, so
``alpha_0 <= r(T_n) <= sum_j alpha_j`` and the minimal eigenvalue ``lambda_n``
lies in ``[1/sum_j alpha_j, 1/alpha_0]``.

Everything here is exact rational arithmetic; the half-integer gamma ratios
are reduced to Pochhammer products so no floating gamma is ever involved.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial

from .rational_core import (
    TPolynomial,
    ZPolynomial,
    differentiate,
    expand_z_to_t,
    one_minus_t2_power,
    rising,
    solve_linear_exact,
)

#: Largest n accepted by the exact routines; beyond it only float asymptotics.
MAX_EXACT_N = 64


def _check_n(n: int, max_n: int | None = None) -> None:
    limit = MAX_EXACT_N if max_n is None else max_n
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"n must be a positive integer, got {n!r}")
    if n > limit:
        raise ValueError(f"n={n} exceeds the exact-arithmetic cap {limit}; use stirling_asymptote")


@dataclass(frozen=True)
class AlphaSolution:
    n: int
    alphas: tuple[Fraction, ...]

    @property
    def P(self) -> ZPolynomial:
        return ZPolynomial(self.alphas)


@dataclass(frozen=True)
class SpectralRadiusBounds:
    n: int
    lower: Fraction
    upper: Fraction

    @property
    def ratio_Rn(self) -> Fraction:
        return self.upper / self.lower

    @property
    def lambda_lower(self) -> Fraction:
        return 1 / self.upper

    @property
    def lambda_upper(self) -> Fraction:
        return 1 / self.lower


def system_matrices(n: int):
    """The matrices ``A``, ``B`` and vector ``beta`` with ``A B alpha = beta``."""
    _check_n(n)
    size = n + 1
    A = [[Fraction(0)] * size for _ in range(size)]
    for j in range(size):
        A[j][j] = Fraction((-1) ** j * factorial(2 * (n + j)), factorial(2 * j))
    B = [[Fraction(comb(n + k, n + j)) if k >= j else Fraction(0) for k in range(size)] for j in range(size)]
    beta = [Fraction((-1) ** j * comb(n, j)) for j in range(size)]
    return A, B, beta


def binomial_inverse(n: int) -> list[list[Fraction]]:
    """Closed-form inverse of ``B``: entries ``(-1)^(j+k) C(n+k, n+j)``."""
    size = n + 1
    return [[Fraction((-1) ** (j + k) * comb(n + k, n + j)) if k >= j else Fraction(0) for k in range(size)]
            for j in range(size)]


def alpha_via_linear_system(n: int) -> AlphaSolution:
    """Solve ``A B alpha = beta`` by exact elimination."""
    A, B, beta = system_matrices(n)
    # A is diagonal, so AB is just a row scaling of B
    AB = [[A[j][j] * b for b in row] for j, row in enumerate(B)]
    alphas = solve_linear_exact(AB, beta)
    return AlphaSolution(n, tuple(alphas))


def alpha_closed_form(n: int, j: int) -> Fraction:
    """Gauss-summation closed form for ``alpha_j``.

    ``n G(1/2+n+j) G(2n-j) G(1+2j) / [G(1/2+2n) G(2n+1+2j) G(1+j) G(n+1-j)]``,
    with the half-integer ratio ``G(1/2+n+j)/G(1/2+2n) = 1/(1/2+n+j)_(n-j)``.
    """
    _check_n(n)
    if not isinstance(j, int) or not 0 <= j <= n:
        raise ValueError(f"j must be an integer in [0, {n}], got {j!r}")
    half_ratio = 1 / rising(Fraction(1, 2) + n + j, n - j)
    integer_part = Fraction(
        n * factorial(2 * n - j - 1) * factorial(2 * j),
        factorial(2 * n + 2 * j) * factorial(j) * factorial(n - j),
    )
    return half_ratio * integer_part


def alphas_closed_form(n: int) -> AlphaSolution:
    return AlphaSolution(n, tuple(alpha_closed_form(n, j) for j in range(n + 1)))


def residual_check(sol: AlphaSolution) -> TPolynomial:
    """``(-1)^n D^(2n)[sum_k alpha_k (1-t^2)^(n+k)] - (1-t^2)^n``; zero iff ``sol`` is right."""
    n = sol.n
    image = expand_z_to_t(ZPolynomial(sol.alphas), n)
    lhs = differentiate(image, 2 * n).scale((-1) ** n)
    return lhs - one_minus_t2_power(n)


def inverse_alpha0(n: int) -> Fraction:
    """``2 G(n+1) G(2n+1/2) / G(n+1/2) = 2 n! (n+1/2)_n``, exactly."""
    _check_n(n)
    return 2 * factorial(n) * rising(Fraction(1, 2) + n, n)


def spectral_bounds(n: int) -> SpectralRadiusBounds:
    sol = alphas_closed_form(n)
    return SpectralRadiusBounds(n, sol.alphas[0], sum(sol.alphas, Fraction(0)))


def ratio_terms(n: int) -> list[Fraction]:
    """Terms ``c_{n,k} = (1/2)_k (-n)_k / [(1-2n)_k (n+1)_k]`` of the terminating 3F2 sum."""
    _check_n(n)
    terms = [Fraction(1)]
    c = Fraction(1)
    for k in range(n):
        # ratio c_{n,k+1}/c_{n,k}
        c *= Fraction((2 * k + 1) * (k - n), 2 * (k + 1 - 2 * n) * (n + k + 1))
        terms.append(c)
    return terms


def ratio_Rn_series(n: int) -> tuple[Fraction, list[Fraction]]:
    """``R_n`` as the terminating sum of ``c_{n,k}``; returns ``(value, terms)``."""
    terms = ratio_terms(n)
    return sum(terms, Fraction(0)), terms


def stirling_asymptote(n: int) -> float:
    """``1/(sqrt(2) (2n)!)``, the large-n form of ``r(T_n)``.  Not a bound."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return math.exp(-math.lgamma(2 * n + 1) - 0.5 * math.log(2.0))


def inverse_alpha0_float(n: int) -> float:
    """Float-path ``2 G(n+1) G(2n+1/2) / G(n+1/2)`` via log-gamma."""
    return math.exp(math.log(2.0) + math.lgamma(n + 1) + math.lgamma(2 * n + 0.5) - math.lgamma(n + 0.5))
