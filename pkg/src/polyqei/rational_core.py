"""Exact rational arithmetic, dense polynomials and exact linear solves.

Rationals are :class:`fractions.Fraction` (arbitrary-precision, always in
lowest terms).  Two polynomial flavours are used:

* :class:`ZPolynomial` -- coefficients in the variable ``z = 1 - t**2``.
* :class:`TPolynomial` -- coefficients in the monomial basis of ``t``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Iterable, Sequence

from .errors import SingularSystemError

BigRational = Fraction


def as_rational(value) -> Fraction:
    """Convert ints, Fractions, decimal strings and floats (exactly) to Fraction."""
    if isinstance(value, Fraction):
        return value
    return Fraction(value)


def _trim(coeffs: Iterable) -> tuple[Fraction, ...]:
    out = [as_rational(c) for c in coeffs]
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


@dataclass(frozen=True)
class _Poly:
    coeffs: tuple[Fraction, ...] = ()

    def __init__(self, coeffs: Iterable = ()):
        object.__setattr__(self, "coeffs", _trim(coeffs))

    @property
    def degree(self) -> int:
        """Degree of the polynomial; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __call__(self, x):
        # Horner; exact when x is a Fraction/int, otherwise follows x's arithmetic
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def _binary(self, other, sign):
        if type(other) is not type(self):
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        size = max(len(a), len(b))
        a = a + (Fraction(0),) * (size - len(a))
        b = b + (Fraction(0),) * (size - len(b))
        return type(self)(x + sign * y for x, y in zip(a, b))

    def __add__(self, other):
        return self._binary(other, 1)

    def __sub__(self, other):
        return self._binary(other, -1)

    def __neg__(self):
        return type(self)(-c for c in self.coeffs)

    def scale(self, factor) -> "_Poly":
        factor = as_rational(factor)
        return type(self)(factor * c for c in self.coeffs)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if type(other) is not type(self):
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return type(self)()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return type(self)(out)

    __rmul__ = __mul__


class ZPolynomial(_Poly):
    """Polynomial in ``z = 1 - t**2``; ``coeffs[k]`` multiplies ``z**k``."""

    def __repr__(self):
        return f"ZPolynomial({[str(c) for c in self.coeffs]})"


class TPolynomial(_Poly):
    """Polynomial in ``t``; ``coeffs[k]`` multiplies ``t**k``."""

    def __repr__(self):
        return f"TPolynomial({[str(c) for c in self.coeffs]})"


def one_minus_t2_power(power: int) -> TPolynomial:
    """``(1 - t**2)**power`` expanded in the monomial basis."""
    coeffs = [Fraction(0)] * (2 * power + 1)
    for r in range(power + 1):
        coeffs[2 * r] = Fraction((-1) ** r * comb(power, r))
    return TPolynomial(coeffs)


def expand_z_to_t(p: ZPolynomial, n: int) -> TPolynomial:
    """Return ``sum_k p.coeffs[k] * (1 - t**2)**(n + k)`` in the t-basis."""
    if n < 0:
        raise ValueError(f"power offset must be non-negative, got {n}")
    if p.is_zero():
        return TPolynomial()
    top = n + p.degree
    coeffs = [Fraction(0)] * (2 * top + 1)
    for k, a in enumerate(p.coeffs):
        if not a:
            continue
        e = n + k
        for r in range(e + 1):
            coeffs[2 * r] += a * ((-1) ** r * comb(e, r))
    return TPolynomial(coeffs)


def differentiate(p: TPolynomial, order: int = 1) -> TPolynomial:
    """Exact ``order``-fold derivative."""
    if order < 0:
        raise ValueError(f"derivative order must be non-negative, got {order}")
    coeffs = list(p.coeffs)
    for _ in range(order):
        if not coeffs:
            break
        coeffs = [k * c for k, c in enumerate(coeffs)][1:]
    return TPolynomial(coeffs)


def integrate(p: TPolynomial, lower, upper) -> Fraction:
    """Exact definite integral of ``p`` over ``[lower, upper]``."""
    anti = TPolynomial([0] + [c / (k + 1) for k, c in enumerate(p.coeffs)])
    return anti(as_rational(upper)) - anti(as_rational(lower))


def _gauss_jordan(matrix: Sequence[Sequence], rhs_columns: list[list[Fraction]]):
    size = len(matrix)
    if any(len(row) != size for row in matrix):
        raise ValueError("matrix must be square")
    for col in rhs_columns:
        if len(col) != size:
            raise ValueError("right-hand side has the wrong length")
    a = [[as_rational(v) for v in row] for row in matrix]
    b = [[col[i] for col in rhs_columns] for i in range(size)]
    for c in range(size):
        pivot = next((r for r in range(c, size) if a[r][c] != 0), None)
        if pivot is None:
            raise SingularSystemError(f"singular system: no pivot in column {c}")
        if pivot != c:
            a[c], a[pivot] = a[pivot], a[c]
            b[c], b[pivot] = b[pivot], b[c]
        inv = 1 / a[c][c]
        a[c] = [v * inv for v in a[c]]
        b[c] = [v * inv for v in b[c]]
        for r in range(size):
            f = a[r][c]
            if r != c and f != 0:
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
                b[r] = [x - f * y for x, y in zip(b[r], b[c])]
    return [[b[i][j] for i in range(size)] for j in range(len(rhs_columns))]


def solve_linear_exact(matrix: Sequence[Sequence], rhs: Sequence) -> list[Fraction]:
    """Solve ``matrix @ x = rhs`` exactly by Gauss-Jordan elimination over Q.

    Raises :class:`SingularSystemError` if the matrix is singular.
    """
    return _gauss_jordan(matrix, [[as_rational(v) for v in rhs]])[0]


def solve_linear_exact_many(matrix: Sequence[Sequence], rhs_columns: Sequence[Sequence]) -> list[list[Fraction]]:
    """Like :func:`solve_linear_exact` for several right-hand sides at once."""
    return _gauss_jordan(matrix, [[as_rational(v) for v in col] for col in rhs_columns])


def mat_vec(matrix: Sequence[Sequence], vec: Sequence) -> list[Fraction]:
    return [sum((as_rational(a) * as_rational(x) for a, x in zip(row, vec)), Fraction(0)) for row in matrix]


def mat_mul(left: Sequence[Sequence], right: Sequence[Sequence]) -> list[list[Fraction]]:
    cols = list(zip(*right))
    return [[sum((as_rational(a) * as_rational(b) for a, b in zip(row, col)), Fraction(0)) for col in cols] for row in left]


def rising(a, k: int) -> Fraction:
    """Pochhammer symbol ``(a)_k = a (a+1) ... (a+k-1)``, exactly."""
    a = as_rational(a)
    out = Fraction(1)
    for i in range(k):
        out *= a + i
    return out


def format_rational(x: Fraction) -> str:
    """``p/q`` (or ``p`` when the denominator is 1)."""
    x = as_rational(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
