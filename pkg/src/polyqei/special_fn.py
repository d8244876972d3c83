"""Floating-point special functions: log-gamma, digamma, trigamma, K_0/K_1/K_2, Q_d.

The gamma-family functions shift the argument upward by recurrence until it is
at least ``_SHIFT`` and then use the Stirling/Bernoulli asymptotic series.
Modified Bessel functions use the power series below ``_BESSEL_SWITCH`` and
Steed's continued fraction (Temme's CF2) above it.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from scipy import integrate

EULER_GAMMA = 0.57721566490153286061
_SHIFT = 10.0
_BESSEL_SWITCH = 2.0

# B_2k for k = 1..8
_BERNOULLI = (1 / 6, -1 / 30, 1 / 42, -1 / 30, 5 / 66, -691 / 2730, 7 / 6, -3617 / 510)


def _check_positive(x: float, name: str) -> None:
    if not x > 0 or math.isinf(x):
        raise ValueError(f"{name} requires a finite positive argument, got {x!r}")


def ln_gamma(x: float) -> float:
    """``log Gamma(x)`` for ``x > 0``."""
    _check_positive(x, "ln_gamma")
    shift = 0.0
    # log of the product x (x+1) ... accumulated as a sum to keep precision
    while x < _SHIFT:
        shift += math.log(x)
        x += 1.0
    inv = 1.0 / x
    inv2 = inv * inv
    series = 0.0
    power = inv
    for k, b in enumerate(_BERNOULLI, start=1):
        series += b / (2 * k * (2 * k - 1)) * power
        power *= inv2
    return (x - 0.5) * math.log(x) - x + 0.5 * math.log(2 * math.pi) + series - shift


def digamma(x: float) -> float:
    """``Psi(x) = d/dx log Gamma(x)`` for ``x > 0``."""
    _check_positive(x, "digamma")
    acc = 0.0
    while x < _SHIFT:
        acc -= 1.0 / x
        x += 1.0
    inv2 = 1.0 / (x * x)
    series = 0.0
    power = inv2
    for k, b in enumerate(_BERNOULLI, start=1):
        series += b / (2 * k) * power
        power *= inv2
    return acc + math.log(x) - 0.5 / x - series


def trigamma(x: float) -> float:
    """``psi_1(x) = d^2/dx^2 log Gamma(x)`` for ``x > 0``."""
    _check_positive(x, "trigamma")
    acc = 0.0
    while x < _SHIFT:
        acc += 1.0 / (x * x)
        x += 1.0
    inv = 1.0 / x
    inv2 = inv * inv
    series = 0.0
    power = inv2 * inv
    for b in _BERNOULLI:
        series += b * power
        power *= inv2
    return acc + inv + 0.5 * inv2 + series


def _k01_series(x: float) -> tuple[float, float]:
    # K0 = -(ln(x/2)+gamma) I0 + sum_k (x^2/4)^k/(k!)^2 H_k
    # K1 = 1/x + ln(x/2) I1 - (x/4) sum_k [psi(k+1)+psi(k+2)] (x^2/4)^k/(k!(k+1)!)
    y = 0.25 * x * x
    log_half = math.log(0.5 * x)
    term0 = 1.0  # (x^2/4)^k/(k!)^2
    term1 = 1.0  # (x^2/4)^k/(k!(k+1)!)
    harmonic = 0.0
    i0 = s0 = i1 = s1 = 0.0
    for k in range(60):
        psi_k1 = harmonic - EULER_GAMMA
        psi_k2 = psi_k1 + 1.0 / (k + 1)
        i0 += term0
        s0 += term0 * harmonic
        i1 += term1
        s1 += term1 * (psi_k1 + psi_k2)
        if term0 < 1e-18 * i0:
            break
        harmonic += 1.0 / (k + 1)
        term0 *= y / ((k + 1) * (k + 1))
        term1 *= y / ((k + 1) * (k + 2))
    k0 = -(log_half + EULER_GAMMA) * i0 + s0
    k1 = 1.0 / x + log_half * 0.5 * x * i1 - 0.25 * x * s1
    return k0, k1


def _k01_scaled_cf2(x: float) -> tuple[float, float]:
    """``exp(x) K_0(x)`` and ``exp(x) K_1(x)`` by Steed's algorithm for CF2 (order 0)."""
    b = 2.0 * (1.0 + x)
    d = 1.0 / b
    h = delh = d
    q1, q2 = 0.0, 1.0
    a1 = 0.25
    q = c = a1
    a = -a1
    s = 1.0 + q * delh
    for i in range(1, 10000):
        a -= 2 * i
        c = -a * c / (i + 1.0)
        qnew = (q1 - b * q2) / a
        q1, q2 = q2, qnew
        q += c * qnew
        b += 2.0
        d = 1.0 / (b + a * d)
        delh = (b * d - 1.0) * delh
        h += delh
        dels = q * delh
        s += dels
        if abs(dels / s) < 1e-17:
            break
    else:  # pragma: no cover - CF2 converges for every x >= 2
        raise ArithmeticError(f"Bessel K continued fraction failed at x={x}")
    h *= a1
    k0 = math.sqrt(math.pi / (2.0 * x)) / s
    k1 = k0 * (x + 0.5 - h) / x
    return k0, k1


def bessel_k_scaled(order: int, x: float) -> float:
    """``exp(x) K_order(x)`` for ``order`` in {0, 1, 2}; safe for large ``x``."""
    if order not in (0, 1, 2):
        raise ValueError(f"only orders 0, 1, 2 are supported, got {order!r}")
    _check_positive(x, "bessel_k")
    if x < _BESSEL_SWITCH:
        k0, k1 = _k01_series(x)
        scale = math.exp(x)
        k0, k1 = k0 * scale, k1 * scale
    else:
        k0, k1 = _k01_scaled_cf2(x)
    if order == 0:
        return k0
    if order == 1:
        return k1
    return k0 + 2.0 * k1 / x


def bessel_k(order: int, x: float) -> float:
    """Modified Bessel function of the second kind ``K_order(x)``, ``order`` in {0, 1, 2}."""
    if order not in (0, 1, 2):
        raise ValueError(f"only orders 0, 1, 2 are supported, got {order!r}")
    _check_positive(x, "bessel_k")
    if x < _BESSEL_SWITCH:
        k0, k1 = _k01_series(x)
        return (k0, k1, k0 + 2.0 * k1 / x)[order]
    return bessel_k_scaled(order, x) * math.exp(-x)


def log_bessel_k(order: int, x: float) -> float:
    return math.log(bessel_k_scaled(order, x)) - x


@dataclass(frozen=True)
class QdValue:
    d: int
    x: float
    value: float


def q_d(d: int, x: float) -> QdValue:
    """``Q_d(x) = d x^-d int_1^x y^2 (y^2-1)^((d-3)/2) dy``.

    With ``y = cosh(u)`` the integrand becomes ``cosh(u)^2 sinh(u)^(d-2)``, which
    is smooth at ``u = 0`` for every ``d >= 2``.
    """
    if not isinstance(d, int) or d < 2:
        raise ValueError(f"Q_d needs an integer d >= 2, got {d!r}")
    if not x >= 1 or math.isinf(x):
        raise ValueError(f"Q_d needs a finite x >= 1, got {x!r}")
    if x == 1:
        return QdValue(d, float(x), 0.0)
    top = math.acosh(x)
    # rescale by x^-d inside the integrand so the result is O(1)
    log_x = math.log(x)

    def integrand(u: float) -> float:
        s = math.sinh(u)
        if s == 0.0:
            return 0.0 if d > 2 else math.exp(2 * math.log(math.cosh(u)) - d * log_x)
        return math.exp(2 * math.log(math.cosh(u)) + (d - 2) * math.log(s) - d * log_x)

    value, _err = integrate.quad(integrand, 0.0, top, epsabs=1e-13, epsrel=1e-13, limit=200)
    return QdValue(d, float(x), d * value)
