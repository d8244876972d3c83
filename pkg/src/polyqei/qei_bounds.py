"""QEI lower bounds on the energy density of a massive scalar field.

The bound at fixed integer ``n >= d/2`` is ``C_{d,n} m^d / (m tau0)^(2n)``
with ``C_{d,n} = K'_d 2^(2n+1) G(n+1) G(2n+1/2) / G(n+1/2)``; optimizing over
``n`` gives the bound ``Q(m, tau0)``.  Everything is evaluated in log space,
since at ``m tau0 = 400`` the bound is far below the double-precision range
of its factors.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from .errors import ConvergenceError
from .special_fn import digamma, ln_gamma, trigamma


def _check_d(d: int) -> None:
    if not isinstance(d, int) or d < 2:
        raise ValueError(f"spacetime dimension must be an integer >= 2, got {d!r}")


def sphere_area(k: int) -> float:
    """Area of the unit k-sphere, ``2 pi^((k+1)/2) / G((k+1)/2)``."""
    return 2.0 * math.pi ** ((k + 1) / 2) / math.gamma((k + 1) / 2)


def k_d(d: int) -> float:
    """``K_d = A_(d-2) / (2d (2 pi)^(d-1))``."""
    _check_d(d)
    return sphere_area(d - 2) / (2 * d * (2 * math.pi) ** (d - 1))


def k_d_prime(d: int) -> float:
    """``K'_d``: equal to ``K_d`` except ``K'_2 = 6 K_2 / 5``."""
    return 1.2 * k_d(2) if d == 2 else k_d(d)


def min_n(d: int) -> int:
    return -(-d // 2)


def _check_n(d: int, n: int) -> None:
    _check_d(d)
    if not isinstance(n, int) or 2 * n < d:
        raise ValueError(f"need an integer n >= d/2, got d={d}, n={n!r}")


def log_inverse_alpha0(n: float) -> float:
    """``log[2 G(n+1) G(2n+1/2) / G(n+1/2)]`` (n may be real)."""
    return math.log(2.0) + ln_gamma(n + 1) + ln_gamma(2 * n + 0.5) - ln_gamma(n + 0.5)


def log_c_dn(d: int, n: int) -> float:
    _check_n(d, n)
    return math.log(k_d_prime(d)) + 2 * n * math.log(2.0) + log_inverse_alpha0(n)


def c_dn(d: int, n: int) -> float:
    """``C_{d,n} = K'_d 2^(2n+1) G(n+1) G(2n+1/2) / G(n+1/2)``."""
    return math.exp(log_c_dn(d, n))


def _check_m_tau0(m: float, tau0: float) -> None:
    if not (m > 0 and tau0 > 0) or math.isinf(m) or math.isinf(tau0):
        raise ValueError(f"m and tau0 must be finite and positive, got m={m!r}, tau0={tau0!r}")


def log_bound_at_n(d: int, m: float, tau0: float, n: int) -> float:
    _check_m_tau0(m, tau0)
    return log_c_dn(d, n) + d * math.log(m) - 2 * n * math.log(m * tau0)


def bound_at_n(d: int, m: float, tau0: float, n: int) -> float:
    """``C_{d,n} m^d / (m tau0)^(2n)``."""
    return math.exp(log_bound_at_n(d, m, tau0, n))


def log_bound_composed(d: int, m: float, tau0: float, n: int) -> float:
    """Same bound in the form ``(2^d K'_d / tau0^d) x^(d-2n) / alpha_0(n)``, ``x = m tau0/2``."""
    _check_n(d, n)
    _check_m_tau0(m, tau0)
    x = 0.5 * m * tau0
    return (d * math.log(2.0) + math.log(k_d_prime(d)) - d * math.log(tau0)
            + (d - 2 * n) * math.log(x) + log_inverse_alpha0(n))


def log_F(n: float, x: float, d: int) -> float:
    """``F(n) = (d - 2n) log x + log[2 G(n+1) G(2n+1/2)/G(n+1/2)]``."""
    return (d - 2 * n) * math.log(x) + log_inverse_alpha0(n)


def dF(n: float, x: float) -> float:
    return -2 * math.log(x) + digamma(n + 1) + 2 * digamma(2 * n + 0.5) - digamma(n + 0.5)


def d2F(n: float) -> float:
    return trigamma(n + 1) + 4 * trigamma(2 * n + 0.5) - trigamma(n + 0.5)


def critical_n(x: float, rtol: float = 1e-10, max_iter: int = 100) -> float:
    """Real critical point of ``F`` by Newton's method, started at ``x/2``."""
    if not x > 1:
        raise ValueError(f"critical_n needs x > 1, got {x!r}")
    n = 0.5 * x
    for _ in range(max_iter):
        step = dF(n, x) / d2F(n)
        new = n - step
        if new <= 0:
            # keep iterates in the domain; F is convex so halving toward 0 recovers
            new = 0.5 * n
        if abs(new - n) <= rtol * abs(new):
            return new
        n = new
    raise ConvergenceError(f"Newton iteration for the critical n did not converge at x={x}", best=n)


@dataclass(frozen=True)
class QeiBound:
    d: int
    m: float
    tau0: float
    x: float
    n_star: int
    log_bound: float
    log_asymptotic: float

    @property
    def bound(self) -> float:
        return math.exp(self.log_bound)

    @property
    def asymptotic(self) -> float:
        return math.exp(self.log_asymptotic)


def log_asymptotic_bound(d: int, m: float, tau0: float, warn: bool = True) -> float:
    """``log[sqrt(2 pi) K'_d m^d (m tau0)^(1/2) exp(-m tau0 / 2)]``."""
    _check_d(d)
    _check_m_tau0(m, tau0)
    x = 0.5 * m * tau0
    if warn and x < 5:
        warnings.warn(f"x = m tau0/2 = {x:g} < 5: the asymptotic regime is not reached", stacklevel=2)
    return (0.5 * math.log(2 * math.pi) + math.log(k_d_prime(d)) + d * math.log(m)
            + 0.5 * math.log(m * tau0) - x)


def asymptotic_bound(d: int, m: float, tau0: float) -> float:
    """``(2^d K'_d / tau0^d) 2 sqrt(pi) x^(d+1/2) e^-x``, i.e. ``sqrt(2 pi) K'_d m^d (m tau0)^(1/2) e^(-m tau0/2)``."""
    return math.exp(log_asymptotic_bound(d, m, tau0))


def asymptote_variants(d: int, m: float, tau0: float) -> dict[str, float]:
    """Logs of three large-``m tau0`` prefactor conventions for the optimized bound.

    ``composed`` is the one this package reports; ``intro`` carries
    ``K'_d 2^(d+1) sqrt(pi)`` and ``cylinder`` (``d = 4`` only) carries ``1/(16 pi^2)``.
    """
    x = 0.5 * m * tau0
    tail = d * math.log(m) + 0.5 * math.log(m * tau0) - x
    out = {
        "composed": math.log(math.sqrt(2 * math.pi) * k_d_prime(d)) + tail,
        "intro": math.log(k_d_prime(d) * 2 ** (d + 1) * math.sqrt(math.pi)) + tail,
    }
    if d == 4:
        out["cylinder"] = math.log(1 / (16 * math.pi ** 2)) + tail
    return out


def optimize_n(d: int, m: float, tau0: float) -> QeiBound:
    """Minimize the fixed-n bound over integers ``n >= ceil(d/2)``."""
    _check_d(d)
    _check_m_tau0(m, tau0)
    x = 0.5 * m * tau0
    lo = min_n(d)
    candidates = {lo}
    if x > d / 2:
        n0 = critical_n(x)
        candidates.update(range(max(lo, math.floor(n0) - 2), math.ceil(n0) + 3))
    best = min(sorted(candidates), key=lambda n: log_bound_at_n(d, m, tau0, n))
    return QeiBound(d, m, tau0, x, best, log_bound_at_n(d, m, tau0, best),
                    log_asymptotic_bound(d, m, tau0, warn=False))


def brute_force_n(d: int, m: float, tau0: float, upper: int) -> int:
    """Exhaustive minimizer over ``n`` in ``[ceil(d/2), upper]``."""
    return min(range(min_n(d), max(upper, min_n(d)) + 1), key=lambda n: log_bound_at_n(d, m, tau0, n))
