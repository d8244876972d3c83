"""Ground-state energy density on the 4d cylinder spacetime versus the QEI bound.

``<T_tt> = -sum_{k>=1} m^2 K_2(m k L) / (2 pi^2 (k L)^2)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ConsistencyError
from .qei_bounds import optimize_n
from .special_fn import bessel_k_scaled

_LOG_TINY = math.log(5e-324)


@dataclass(frozen=True)
class CylinderResult:
    m: float
    L: float
    log_abs_energy: float
    terms_used: int
    log_abs_asymptotic: float
    underflow: bool = False
    log_qei_bound: float | None = None
    n_star: int | None = None
    tau0: float | None = None

    @property
    def energy_density(self) -> float:
        return -math.exp(self.log_abs_energy)

    @property
    def asymptotic(self) -> float:
        return -math.exp(self.log_abs_asymptotic)

    @property
    def qei_bound(self) -> float | None:
        return None if self.log_qei_bound is None else math.exp(self.log_qei_bound)

    @property
    def ratio(self) -> float | None:
        if self.log_qei_bound is None:
            return None
        return math.exp(self.log_abs_energy - self.log_qei_bound)


def _log_term(m: float, L: float, k: int) -> float:
    z = m * k * L
    return (2 * math.log(m) - math.log(2 * math.pi ** 2) - 2 * math.log(k * L)
            + math.log(bessel_k_scaled(2, z)) - z)


def log_first_term_asymptotic(m: float, L: float) -> float:
    """``log[m^4 e^-mL / ((2 pi)^(3/2) (mL)^(5/2))]``."""
    mL = m * L
    return 4 * math.log(m) - mL - 1.5 * math.log(2 * math.pi) - 2.5 * math.log(mL)


def energy_density(m: float, L: float, rel_tol: float = 1e-12, max_terms: int = 100000) -> CylinderResult:
    """Sum the K_2 series until the next term drops below ``rel_tol`` of the running total."""
    if not (m > 0 and L > 0):
        raise ValueError(f"m and L must be positive, got m={m!r}, L={L!r}")
    if not 0 < rel_tol <= 1e-3:
        raise ValueError(f"rel_tol must lie in (0, 1e-3], got {rel_tol!r}")
    asym = log_first_term_asymptotic(m, L)
    first = _log_term(m, L, 1)
    if first < _LOG_TINY:
        return CylinderResult(m, L, asym, 0, asym, underflow=True)
    # terms relative to the first, accumulated with compensated summation
    rel = [1.0]
    k = 1
    while k < max_terms:
        k += 1
        r = math.exp(_log_term(m, L, k) - first)
        if r < rel_tol * math.fsum(rel):
            break
        rel.append(r)
    return CylinderResult(m, L, first + math.log(math.fsum(rel)), len(rel), asym)


def compare_to_qei(m: float, L: float, tau0: float | None = None, rel_tol: float = 1e-12) -> CylinderResult:
    """Attach the optimized d=4 QEI bound with averaging time ``tau0`` (default ``L``).

    ``tau0 > L`` is rejected: the averaging segment must fit in a causal
    diamond that does not wrap around the cylinder.
    """
    if tau0 is None:
        tau0 = L
    if not 0 < tau0 <= L:
        raise ValueError(f"tau0 must lie in (0, L]; got tau0={tau0!r}, L={L!r}")
    base = energy_density(m, L, rel_tol)
    q = optimize_n(4, m, tau0)
    result = CylinderResult(base.m, base.L, base.log_abs_energy, base.terms_used, base.log_abs_asymptotic,
                            base.underflow, q.log_bound, q.n_star, tau0)
    if result.log_abs_energy > result.log_qei_bound:
        raise ConsistencyError(
            f"|<T_tt>| exceeds the QEI bound at m={m}, L={L}: "
            f"log ratio {result.log_abs_energy - result.log_qei_bound:.6g}")
    return result
