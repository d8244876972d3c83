"""Green's function of the clamped polyharmonic problem and Nystrom eigenvalues.

For fixed ``s`` the Green's function of ``(-1)^n D^(2n)`` on ``(-1, 1)`` with
``psi^(j)(+-1) = 0`` (``j < n``) is

    G(t, s) = sum_{k,l} C[k][l] t^k s^l + (-1)^n (t - s)_+^(2n-1) / (2n-1)!

where the polynomial part is fixed by the 2n boundary conditions.  The table
``C`` is computed once, exactly, so both pieces are exact rational
polynomials in ``(t, s)``.

The piecewise polynomials suffer heavy cancellation in floating point for
large n (G is of size 1/(2n)! while the monomial terms are many orders larger),
so kernel matrices are assembled with ``gmpy2`` at ``precision_bits`` and only
rounded to double once assembled.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Callable, Sequence

import gmpy2
import mpmath
import numpy as np
from scipy import linalg

from .errors import ConvergenceError
from .exact_bounds import spectral_bounds
from .rational_core import TPolynomial, as_rational, differentiate, solve_linear_exact_many

log = logging.getLogger(__name__)

MAX_KERNEL_N = 24
DEFAULT_PRECISION_BITS = 256
DENSE_EIGH_LIMIT = 512


@dataclass(frozen=True)
class GreenKernel:
    """Exact piecewise-polynomial Green's function.

    ``left[k][l]`` is the coefficient of ``t^k s^l`` for ``t <= s`` and
    ``right[k][l]`` the same for ``t >= s``.
    """

    n: int
    left: tuple[tuple[Fraction, ...], ...]
    right: tuple[tuple[Fraction, ...], ...]

    def __call__(self, t, s):
        t = as_rational(t) if isinstance(t, (int, Fraction)) else t
        s = as_rational(s) if isinstance(s, (int, Fraction)) else s
        table = self.left if t <= s else self.right
        return _eval_table(table, t, s)

    def pieces_at(self, s) -> tuple[TPolynomial, TPolynomial]:
        """The two t-polynomials (``t <= s``, ``t >= s``) for a fixed source point."""
        s = as_rational(s)
        powers = [s ** l for l in range(2 * self.n)]
        left = TPolynomial(sum((c * p for c, p in zip(row, powers)), Fraction(0)) for row in self.left)
        right = TPolynomial(sum((c * p for c, p in zip(row, powers)), Fraction(0)) for row in self.right)
        return left, right

    def s_pieces_at(self, t) -> tuple[TPolynomial, TPolynomial]:
        """The two s-polynomials (``s <= t``, ``s >= t``) for a fixed field point."""
        t = as_rational(t)
        powers = [t ** k for k in range(2 * self.n)]
        below = TPolynomial(sum((row[l] * p for row, p in zip(self.right, powers)), Fraction(0))
                            for l in range(2 * self.n))
        above = TPolynomial(sum((row[l] * p for row, p in zip(self.left, powers)), Fraction(0))
                            for l in range(2 * self.n))
        return below, above

    def condition_residuals(self, s) -> list[Fraction]:
        """All 4n defining conditions at source point ``s``; every entry is 0 for a correct kernel.

        Order: n clamped conditions at -1, n at +1, 2n-1 smoothness conditions
        at ``t = s``, and the unit jump ``D^(2n-1)(right - left)(s) - (-1)^n``.
        """
        n = self.n
        s = as_rational(s)
        left, right = self.pieces_at(s)
        out = [differentiate(left, j)(Fraction(-1)) for j in range(n)]
        out += [differentiate(right, j)(Fraction(1)) for j in range(n)]
        gap = right - left
        out += [differentiate(gap, j)(s) for j in range(2 * n - 1)]
        out.append(differentiate(gap, 2 * n - 1)(s) - (-1) ** n)
        return out


def _precision(bits: int):
    return gmpy2.context(gmpy2.get_context(), precision=bits)


def _eval_table(table, t, s):
    acc = 0
    for row in reversed(table):
        inner = 0
        for c in reversed(row):
            inner = inner * s + c
        acc = acc * t + inner
    return acc


@lru_cache(maxsize=None)
def build_green_kernel(n: int, max_n: int = MAX_KERNEL_N) -> GreenKernel:
    """Construct the exact Green's function for ``1 <= n <= max_n``."""
    if not isinstance(n, int) or not 1 <= n <= max_n:
        raise ValueError(f"Green's kernel needs an integer 1 <= n <= {max_n}, got {n!r}")
    order = 2 * n
    # rows: D^j p(-1) = 0 and D^j p(1) = -D^j[trunc](1), j < n; unknowns: t^k coefficients
    matrix = []
    for sign in (-1, 1):
        for j in range(n):
            matrix.append([Fraction(factorial(k) // factorial(k - j) * sign ** (k - j)) if k >= j else Fraction(0)
                           for k in range(order)])
    # right-hand sides, one column per power of s
    rhs = [[Fraction(0)] * order for _ in range(order)]
    for j in range(n):
        e = order - 1 - j
        for l in range(e + 1):
            # -(-1)^n (1-s)^e / e!
            rhs[l][n + j] = Fraction(-((-1) ** n) * comb(e, l) * (-1) ** l, factorial(e))
    columns = solve_linear_exact_many(matrix, rhs)
    left = [[columns[l][k] for l in range(order)] for k in range(order)]
    right = [row[:] for row in left]
    # (-1)^n (t-s)^(2n-1)/(2n-1)! expanded in t^k s^l
    top = order - 1
    for k in range(order):
        right[k][top - k] += Fraction((-1) ** n * comb(top, k) * (-1) ** (top - k), factorial(top))
    return GreenKernel(n, tuple(map(tuple, left)), tuple(map(tuple, right)))


# ---------------------------------------------------------------------------
# quadrature and assembly

def gauss_legendre(order: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights on [-1, 1]."""
    return np.polynomial.legendre.leggauss(order)


def _mpfr_table(table, scale: int):
    return np.array([[gmpy2.mpfr(c.numerator * scale) / c.denominator for c in row] for row in table], dtype=object)


def assemble_nystrom(n: int, nodes: np.ndarray, weights: np.ndarray,
                     precision_bits: int = DEFAULT_PRECISION_BITS) -> np.ndarray:
    """Symmetric Nystrom matrix ``W^1/2 K W^1/2 + diag(correction)``, scaled by ``(2n)!``.

    The diagonal correction replaces each quadrature row sum of the kernel by
    the exact row integral ``int G(t_i, s) ds = (1 - t_i^2)^n / (2n)!``
    (singularity subtraction).  It keeps the matrix symmetric and lifts the
    convergence rate for the low-smoothness kernels at small n.
    """
    kernel = build_green_kernel(n)
    scale = factorial(2 * n)
    with _precision(precision_bits):
        x = np.array([gmpy2.mpfr(float(v)) for v in nodes], dtype=object)
        w = np.array([gmpy2.mpfr(float(v)) for v in weights], dtype=object)
        vander = np.array([[xi ** k for k in range(2 * n)] for xi in x], dtype=object)
        K = vander @ _mpfr_table(kernel.left, scale) @ vander.T
        lower = np.tril_indices(len(x), -1)
        diff = x[lower[0]] - x[lower[1]]
        jump = gmpy2.mpfr((-1) ** n * scale) / factorial(2 * n - 1)
        K[lower] = K[lower] + jump * diff ** (2 * n - 1)
        K[lower[1], lower[0]] = K[lower]
        rows = K @ w
        exact_rows = np.array([(1 - xi * xi) ** n for xi in x], dtype=object)
        correction = np.array(exact_rows - rows, dtype=float)
        Kf = np.array(K, dtype=float)
    sw = np.sqrt(np.asarray(weights, dtype=float))
    return sw[:, None] * Kf * sw[None, :] + np.diag(correction)


def power_iteration_top2(matrix: np.ndarray, tol: float = 1e-14, max_iter: int = 100000):
    """Two largest eigenpairs of a symmetric matrix by power iteration with Hotelling deflation."""
    size = matrix.shape[0]
    values, vectors = [], []
    work = matrix.copy()
    start = np.ones(size) / math.sqrt(size)
    for which in range(2):
        v = start.copy()
        if which:
            # break symmetry so the deflated start is not orthogonal to the target
            v = v * np.linspace(-1.0, 1.5, size)
            v -= vectors[0] * (vectors[0] @ v)
            v /= np.linalg.norm(v)
        lam = 0.0
        for _ in range(max_iter):
            y = work @ v
            new = float(v @ y)
            norm = np.linalg.norm(y)
            if norm == 0.0:
                break
            v = y / norm
            if abs(new - lam) <= tol * abs(new):
                lam = new
                break
            lam = new
        else:
            raise ConvergenceError("power iteration did not converge", best=lam)
        values.append(lam)
        vectors.append(v)
        work = work - lam * np.outer(v, v)
    return np.array(values), np.array(vectors).T


@dataclass(frozen=True)
class SpectralEstimate:
    n: int
    lambda1: float
    lambda2: float
    quad_order: int
    residual_estimate: float
    nodes: np.ndarray = field(default=None, repr=False, compare=False)
    eigenvector: np.ndarray = field(default=None, repr=False, compare=False)

    @property
    def sqrt2_factorial_lambda1(self) -> float:
        return math.sqrt(2.0) * factorial(2 * self.n) * self.lambda1

    @property
    def rank1_ratio(self) -> float:
        return self.n * self.lambda2 / self.lambda1


def _eigs_at_order(n: int, order: int, precision_bits: int):
    nodes, weights = gauss_legendre(order)
    matrix = assemble_nystrom(n, nodes, weights, precision_bits)
    if order <= DENSE_EIGH_LIMIT:
        vals, vecs = linalg.eigh(matrix, subset_by_index=[order - 2, order - 1])
        vals, vecs = vals[::-1], vecs[:, ::-1]
    else:
        vals, vecs = power_iteration_top2(matrix)
    scale = factorial(2 * n)
    # undo the W^1/2 similarity to get eigenfunction samples
    u = vecs[:, 0] / np.sqrt(weights)
    if u.sum() < 0:
        u = -u
    return float(vals[0]) / scale, float(vals[1]) / scale, nodes, u


def nystrom_eigs(n: int, quad_order: int | None = None, rtol: float = 1e-8, max_order: int = 2048,
                 precision_bits: int = DEFAULT_PRECISION_BITS) -> SpectralEstimate:
    """Top two eigenvalues of ``T_n`` by Gauss-Legendre Nystrom discretization.

    Starts at ``quad_order`` (default ``max(64, 8n)``) and doubles until two
    successive leading eigenvalues agree to ``rtol``.
    """
    if quad_order is None:
        quad_order = max(64, 8 * n)
    if quad_order < 8 * n:
        raise ValueError(f"quad_order must be at least 8n = {8 * n}, got {quad_order}")
    if precision_bits < 64:
        raise ValueError(f"precision_bits must be >= 64, got {precision_bits}")
    prev = None
    order = quad_order
    best = None
    while True:
        l1, l2, nodes, u = _eigs_at_order(n, order, precision_bits)
        change = math.inf if prev is None else abs(l1 - prev) / abs(l1)
        best = SpectralEstimate(n, l1, l2, order, change, nodes, u)
        log.debug("n=%d order=%d lambda1=%.12e lambda2=%.12e change=%.2e", n, order, l1, l2, change)
        if change <= rtol:
            return best
        if 2 * order > max_order:
            raise ConvergenceError(
                f"lambda1 for n={n} not stable to {rtol:g} by quad_order {order}",
                best=best, diagnostics={"last_change": change, "max_order": max_order})
        prev = l1
        order *= 2


def rank1_ratio(n: int, **kwargs) -> float:
    """``n * lambda2 / lambda1``."""
    return nystrom_eigs(n, **kwargs).rank1_ratio


def apply_T(n: int, f: TPolynomial | Callable, t_samples: Sequence, order: int | None = None,
            precision_bits: int = DEFAULT_PRECISION_BITS) -> np.ndarray:
    """Sample ``(T_n f)(t)`` by Gauss-Legendre quadrature split at ``s = t``.

    ``f`` is a :class:`TPolynomial` (or any callable accepting ``gmpy2.mpfr``).
    Each half-interval integrand is a polynomial, so ``order`` defaults to a
    rule exact for it.
    """
    kernel = build_green_kernel(n)
    if order is None:
        deg_f = max(f.degree, 0) if isinstance(f, TPolynomial) else 64
        order = (2 * n + deg_f) // 2 + 2
    nodes, weights = gauss_legendre(order)
    out = []
    with _precision(precision_bits):
        xs = [gmpy2.mpfr(float(v)) for v in nodes]
        ws = [gmpy2.mpfr(float(v)) for v in weights]
        for t in t_samples:
            t_exact = as_rational(float(t))
            below, above = kernel.s_pieces_at(t_exact)
            tm = gmpy2.mpfr(t_exact.numerator) / t_exact.denominator
            total = gmpy2.mpfr(0)
            for piece, a, b in ((below, gmpy2.mpfr(-1), tm), (above, tm, gmpy2.mpfr(1))):
                if a == b:
                    continue
                half, mid = (b - a) / 2, (b + a) / 2
                coeffs = [gmpy2.mpfr(c.numerator) / c.denominator for c in piece.coeffs]
                for xi, wi in zip(xs, ws):
                    s = mid + half * xi
                    g = gmpy2.mpfr(0)
                    for c in reversed(coeffs):
                        g = g * s + c
                    total += half * wi * g * _call_poly(f, s)
            out.append(float(total))
    return np.array(out)


def _call_poly(f, s):
    if isinstance(f, TPolynomial):
        acc = gmpy2.mpfr(0)
        for c in reversed(f.coeffs):
            acc = acc * s + gmpy2.mpfr(c.numerator) / c.denominator
        return acc
    return f(s)


# ---------------------------------------------------------------------------
# empirical H_{d,h}(x) for h = (1 - t^2)^n

@lru_cache(maxsize=16)
def _hp_gauss_legendre(degree: int, prec: int):
    """High-precision Gauss-Legendre rule (3*2^(degree-1) nodes) as gmpy2 values."""
    with mpmath.workprec(prec):
        rule = mpmath.calculus.quadrature.GaussLegendre(mpmath.mp)
        nodes = rule.calc_nodes(degree, prec)
    with _precision(prec):
        return tuple((_to_mpfr(t), _to_mpfr(w)) for t, w in nodes)


def _to_mpfr(value) -> "gmpy2.mpfr":
    man, exp = value.man_exp
    return gmpy2.mul_2exp(gmpy2.mpfr(int(man)), int(exp))


def fourier_h(n: int, y: float, method: str = "quadrature", precision_bits: int | None = None) -> float:
    """``hat h(y) = int_{-1}^1 exp(-i y t) (1 - t^2)^n dt`` (real, since h is even).

    ``method="bessel"`` uses ``sqrt(pi) n! (2/y)^(n+1/2) J_(n+1/2)(y)`` instead
    of quadrature.  ``precision_bits`` defaults to enough bits to resolve
    ``hat h`` against the O(1) cancellation in its quadrature sum.
    """
    y = float(y)
    envelope = _h_envelope(n, y)
    if precision_bits is None:
        # rounded up so cached high-precision rules are shared across nearby y
        precision_bits = 64 * (2 + max(0, math.ceil(-math.log2(envelope))) // 64)
    if method == "bessel":
        with mpmath.workprec(precision_bits):
            if y == 0:
                return float(mpmath.sqrt(mpmath.pi) * mpmath.gamma(n + 1) / mpmath.gamma(n + 1.5))
            yy = mpmath.mpf(y)
            val = mpmath.sqrt(mpmath.pi) * mpmath.factorial(n) * (2 / yy) ** (n + 0.5) * mpmath.besselj(n + 0.5, yy)
            return float(val)
    if method != "quadrature":
        raise ValueError(f"unknown method {method!r}")
    needed = abs(y) + 2 * n + 48
    if envelope > 1e-6:
        # double precision suffices: absolute error ~1e-16 against a value >~1e-6
        t, w = _gl_cached(1 << math.ceil(math.log2(needed)))
        return float(np.dot(w, np.cos(y * t) * (1 - t * t) ** n))
    # rule with 3*2^(degree-1) nodes; converged once nodes >> |y| + 2n
    degree = max(3, math.ceil(math.log2(needed / 3)) + 1)
    rule = _hp_gauss_legendre(degree, precision_bits)
    with _precision(precision_bits):
        ym = gmpy2.mpfr(y)
        total = gmpy2.mpfr(0)
        for t, w in rule:
            total += w * gmpy2.cos(ym * t) * (1 - t * t) ** n
        return float(total)


def _h_tail(d: int, n: int, y: float) -> float:
    # averaged large-y envelope: |hat h|^2 ~ 2 (2^n n!)^2 / y^(2n+2)
    power = 2 * n + 1 - d
    return 2.0 * (2.0 ** n * factorial(n)) ** 2 / (power * y ** power)


def _h_envelope(n: int, y: float) -> float:
    return 2.0 * 2.0 ** n * factorial(n) / max(y, 1.0) ** (n + 1)


@lru_cache(maxsize=32)
def _gl_cached(order: int):
    return gauss_legendre(order)


def empirical_H(d: int, n: int, x: float, quad_order: int = 16, panels: int = 64,
                method: str = "quadrature", precision_bits: int | None = None) -> float:
    """``H_{d,h}(x) = int_x^inf y^d |hat h(y)|^2 dy/pi / int h^2`` for ``h = (1 - t^2)^n``.

    The y-integral runs over ``panels`` Gauss-Legendre panels of width pi
    (``quad_order`` nodes each); the remainder uses the averaged large-y
    envelope of ``|hat h|^2``.
    """
    if not isinstance(d, int) or d < 2:
        raise ValueError(f"d must be an integer >= 2, got {d!r}")
    if 2 * n < d:
        raise ValueError(f"need n >= d/2, got d={d}, n={n}")
    if not x > 0:
        raise ValueError(f"x must be positive, got {x!r}")
    nodes, weights = gauss_legendre(quad_order)
    parts = []
    a = float(x)
    for _ in range(panels):
        b = a + math.pi
        ys = 0.5 * (b - a) * nodes + 0.5 * (b + a)
        vals = [y ** d * fourier_h(n, y, method, precision_bits) ** 2 for y in ys]
        parts.append(0.5 * (b - a) * float(np.dot(weights, vals)))
        a = b
    tail = _h_tail(d, n, a)
    numerator = (math.fsum(parts) + tail) / math.pi
    norm2 = float(sum(Fraction((-1) ** r * comb(2 * n, r) * 2, 2 * r + 1) for r in range(2 * n + 1)))
    value = numerator / norm2
    if not math.isfinite(value) or value < 0:
        raise ConvergenceError(f"H_(d={d},n={n})({x}) is not finite", best=value,
                               diagnostics={"tail": tail, "panels": panels})
    return value


def spectral_bracket(n: int) -> tuple[float, float]:
    """Float ``(lambda_lower, lambda_upper)`` for the ODE eigenvalue from the exact bounds."""
    b = spectral_bounds(n)
    return float(b.lambda_lower), float(b.lambda_upper)
