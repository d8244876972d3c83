"""L^p operator-norm bounds for the solution operator ``T_n``.

``||T_n||_{inf,inf} = ||T_n||_{1,1} = 1/(2n)!`` exactly; Riesz-Thorin
interpolation against the ``L^2`` bound gives
``||T_n||_{p,p} <= b_n^(2/r) 2^(-1/r) / (2n)!`` with ``r = max(p, p')``,
and ``a_n / (sqrt(2) (2n)!)`` is a lower bound for every ``p``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .exact_bounds import spectral_bounds


def norm_inf(n: int) -> Fraction:
    """``||T_n||_{inf,inf} = 1/(2n)!`` (also ``||T_n||_{1,1}`` by duality)."""
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"n must be a positive integer, got {n!r}")
    return Fraction(1, factorial(2 * n))


norm_one = norm_inf


def inverse_r(p: float) -> float:
    """``1/r`` with ``r = max(p, q)``, ``1/p + 1/q = 1``; 0 at ``p = 1`` and ``p = inf``."""
    if not p >= 1:
        raise ValueError(f"p must lie in [1, inf], got {p!r}")
    if p == 1 or math.isinf(p):
        return 0.0
    inv_p = 1.0 / p
    return min(inv_p, 1.0 - inv_p)


@dataclass(frozen=True)
class LpNormBounds:
    n: int
    p: float
    lower: float
    upper: float
    a_n: float
    b_n: float

    @property
    def r(self) -> float:
        inv = inverse_r(self.p)
        return math.inf if inv == 0 else 1.0 / inv


def an_bn(n: int) -> tuple[Fraction, Fraction]:
    """Exact ``((2n)! alpha_0, (2n)! sum alpha)``, i.e. ``a_n`` and ``b_n`` without their sqrt(2)."""
    b = spectral_bounds(n)
    f = factorial(2 * n)
    return f * b.lower, f * b.upper


def norm_p_bounds(n: int, p: float) -> LpNormBounds:
    inv_r = inverse_r(p)
    lo, hi = an_bn(n)
    a_n = math.sqrt(2.0) * float(lo)
    b_n = math.sqrt(2.0) * float(hi)
    inv_fact = float(norm_inf(n))
    # b_n^(2/r) 2^(-1/r) = (b_n^2/2)^(1/r) = ((2n)! sum alpha)^(2/r)
    upper = float(hi) ** (2.0 * inv_r) * inv_fact if inv_r else inv_fact
    lower = float(lo) * inv_fact
    return LpNormBounds(n, float(p), lower, upper, a_n, b_n)


def ddfl_comparison(n: int) -> tuple[int, int, int]:
    """``((2n)!, 2^(2n-1) (2n)!, 2^(2n-1))``: our L^1 bound, the r = 2n identity value, their ratio."""
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"n must be a positive integer, got {n!r}")
    ours = factorial(2 * n)
    theirs = 2 ** (2 * n - 1) * factorial(2 * n)
    return ours, theirs, theirs // ours
