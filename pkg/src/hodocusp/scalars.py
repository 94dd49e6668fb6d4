"""Exact scalar arithmetic.

Three scalar families are used by the series layer:

* plain rationals (fractions.Fraction),
* elements of Q(c) where c is the real cube root of a fixed rational
  radicand (CubicRadical) -- the only irrationalities the exact pipeline
  ever needs are +-(12/(5*b11))**(1/3), and both live in one such field,
* complex numbers with rational components (QComplex), used by the
  analytic-continuation diagnostics so that squared distances stay rational.
"""

from __future__ import annotations

import math
from decimal import Decimal, InvalidOperation
from fractions import Fraction

from .errors import UsageError


def parse_exact(value, field: str = "value") -> Fraction:
    """Parse an exact rational from int, Fraction, 'p/q' or decimal string.

    Floats are accepted and read as exact decimals (1e-3 -> 1/1000), which is
    what a config author writing ``0.001`` means.
    """
    if isinstance(value, bool):
        raise UsageError(f"{field}: booleans are not numbers")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, float):
        value = repr(value)
    if isinstance(value, str):
        s = value.strip()
        try:
            if "/" in s:
                return Fraction(s)
            return Fraction(Decimal(s))
        except (ValueError, ZeroDivisionError, InvalidOperation) as exc:
            raise UsageError(f"{field}: cannot parse rational from {value!r}") from exc
    raise UsageError(f"{field}: cannot parse rational from {type(value).__name__}")


def real_cbrt(x: float) -> float:
    """Real cube root with the sign of x."""
    return math.copysign(abs(x) ** (1.0 / 3.0), x)


def _icbrt(n: int) -> int:
    """Floor integer cube root of n >= 0."""
    if n < 0:
        raise ValueError("negative")
    if n < 2:
        return n
    x = 1 << ((n.bit_length() + 2) // 3)
    while True:
        y = (2 * x + n // (x * x)) // 3
        if y >= x:
            return x
        x = y


def rational_cbrt(q: Fraction) -> Fraction | None:
    """Exact cube root of q, or None when q is not a perfect rational cube."""
    sign = -1 if q < 0 else 1
    num, den = abs(q.numerator), q.denominator
    rn, rd = _icbrt(num), _icbrt(den)
    if rn * rn * rn == num and rd * rd * rd == den:
        return Fraction(sign * rn, rd)
    return None


def rational_sqrt(q) -> Fraction | None:
    """Exact square root of a nonnegative rational, or None."""
    q = Fraction(q)
    if q < 0:
        return None
    num, den = q.numerator, q.denominator
    rn, rd = math.isqrt(num), math.isqrt(den)
    if rn * rn == num and rd * rd == den:
        return Fraction(rn, rd)
    return None


class CubicRadical:
    """a0 + a1*c + a2*c**2 with c = real cube root of ``rad`` (a non-cube rational).

    Q(c) is a field (x**3 - rad is irreducible when rad is not a perfect
    cube), so division is exact. Construct through :func:`make_radical` or
    :func:`cbrt_exact`, which collapse perfect cubes to plain Fractions.
    """

    __slots__ = ("a0", "a1", "a2", "rad")

    def __init__(self, a0, a1, a2, rad):
        self.a0 = Fraction(a0)
        self.a1 = Fraction(a1)
        self.a2 = Fraction(a2)
        self.rad = Fraction(rad)

    # -- coercion ---------------------------------------------------------

    def _parts(self, other):
        if isinstance(other, CubicRadical):
            if other.rad != self.rad:
                raise UsageError(
                    f"cannot mix cube roots of {self.rad} and {other.rad}"
                )
            return other.a0, other.a1, other.a2
        if isinstance(other, (int, Fraction)):
            return Fraction(other), Fraction(0), Fraction(0)
        return None

    # -- ring operations --------------------------------------------------

    def __add__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        return make_radical(self.a0 + p[0], self.a1 + p[1], self.a2 + p[2], self.rad)

    __radd__ = __add__

    def __sub__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        return make_radical(self.a0 - p[0], self.a1 - p[1], self.a2 - p[2], self.rad)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return CubicRadical(-self.a0, -self.a1, -self.a2, self.rad)

    def __mul__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        a0, a1, a2, r = self.a0, self.a1, self.a2, self.rad
        b0, b1, b2 = p
        return make_radical(
            a0 * b0 + r * (a1 * b2 + a2 * b1),
            a0 * b1 + a1 * b0 + r * a2 * b2,
            a0 * b2 + a1 * b1 + a2 * b0,
            r,
        )

    __rmul__ = __mul__

    def inverse(self):
        a, b, d, q = self.a0, self.a1, self.a2, self.rad
        norm = a * a * a + b * b * b * q + d * d * d * q * q - 3 * a * b * d * q
        if norm == 0:
            raise ZeroDivisionError("inverse of zero radical element")
        return make_radical(
            (a * a - b * d * q) / norm,
            (d * d * q - a * b) / norm,
            (b * b - a * d) / norm,
            q,
        )

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError
            return make_radical(self.a0 / other, self.a1 / other, self.a2 / other, self.rad)
        if isinstance(other, CubicRadical):
            return self * other.inverse()
        return NotImplemented

    def __rtruediv__(self, other):
        inv = self.inverse()
        if isinstance(inv, CubicRadical):
            return inv * other
        return inv * other  # collapsed to Fraction

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        out = Fraction(1)
        base = self
        while n:
            if n & 1:
                out = base * out
            base = base * base
            n >>= 1
        return out

    # -- comparisons and conversions --------------------------------------

    def __eq__(self, other):
        if isinstance(other, CubicRadical):
            return (
                self.rad == other.rad
                and self.a0 == other.a0
                and self.a1 == other.a1
                and self.a2 == other.a2
            )
        if isinstance(other, (int, Fraction)):
            # factory collapses rational-valued elements, so a live radical
            # is never equal to a rational
            return False
        return NotImplemented

    def __hash__(self):
        return hash((self.a0, self.a1, self.a2, self.rad))

    def __bool__(self):
        return bool(self.a0 or self.a1 or self.a2)

    def __float__(self):
        c = real_cbrt(float(self.rad))
        return float(self.a0) + float(self.a1) * c + float(self.a2) * c * c

    def __repr__(self):
        return f"CubicRadical({self.a0}, {self.a1}, {self.a2}; cbrt {self.rad})"


def make_radical(a0, a1, a2, rad) -> Fraction | CubicRadical:
    """Canonical element of Q(cbrt(rad)); collapses to Fraction when rational."""
    a0, a1, a2, rad = Fraction(a0), Fraction(a1), Fraction(a2), Fraction(rad)
    if a1 == 0 and a2 == 0:
        return a0
    root = rational_cbrt(rad)
    if root is not None:
        return a0 + a1 * root + a2 * root * root
    return CubicRadical(a0, a1, a2, rad)


def cbrt_exact(q: Fraction) -> Fraction | CubicRadical:
    """Exact real cube root of a rational, kept symbolic when irrational."""
    return make_radical(0, 1, 0, q)


def scalar_float(v) -> float:
    """float() that also understands CubicRadical."""
    if isinstance(v, CubicRadical):
        return float(v)
    return float(v)


class QComplex:
    """Complex number with exact rational components."""

    __slots__ = ("re", "im")

    def __init__(self, re, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    def __add__(self, other):
        other = _as_qcomplex(other)
        if other is None:
            return NotImplemented
        return QComplex(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = _as_qcomplex(other)
        if other is None:
            return NotImplemented
        return QComplex(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return QComplex(-self.re, -self.im)

    def __mul__(self, other):
        other = _as_qcomplex(other)
        if other is None:
            return NotImplemented
        return QComplex(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _as_qcomplex(other)
        if other is None:
            return NotImplemented
        d = other.abs2()
        if d == 0:
            raise ZeroDivisionError
        return QComplex(
            (self.re * other.re + self.im * other.im) / d,
            (self.im * other.re - self.re * other.im) / d,
        )

    def __rtruediv__(self, other):
        other = _as_qcomplex(other)
        return other.__truediv__(self)

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        out = QComplex(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def abs2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def conj(self):
        return QComplex(self.re, -self.im)

    def is_real(self) -> bool:
        return self.im == 0

    def to_complex(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __eq__(self, other):
        other = _as_qcomplex(other)
        if other is None:
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __repr__(self):
        return f"QComplex({self.re}, {self.im})"


def _as_qcomplex(v):
    if isinstance(v, QComplex):
        return v
    if isinstance(v, (int, Fraction)):
        return QComplex(v)
    return None


def parse_point(value, field: str = "value"):
    """Parse a scalar-or-pair config value into QComplex (exact) or complex.

    Accepts int / Fraction / 'p/q' / decimal strings / floats (read as exact
    decimals), or a two-element list ``[re, im]``.
    """
    if isinstance(value, QComplex):
        return value
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise UsageError(f"{field}: a complex pair needs exactly 2 entries")
        return QComplex(parse_exact(value[0], field), parse_exact(value[1], field))
    if isinstance(value, complex):
        return value
    return QComplex(parse_exact(value, field))


def lt_sum_of_roots(A: Fraction, B: Fraction, bound: Fraction) -> bool:
    """Exact test of sqrt(A) + 2*sqrt(B) < bound for rationals A, B >= 0."""
    if A < 0 or B < 0:
        raise UsageError("lt_sum_of_roots needs nonnegative radicands")
    if bound <= 0:
        return False
    t = bound * bound - A - 4 * B
    if t <= 0:
        return False
    return 16 * A * B < t * t


def lt_dist_vs_radius(D2: Fraction, R: Fraction, R1: Fraction) -> bool:
    """Exact test of sqrt(D2) < R + 2*sqrt(R1) for rationals, R >= 0, R1 >= 0."""
    if D2 < 0 or R < 0 or R1 < 0:
        raise UsageError("lt_dist_vs_radius needs nonnegative inputs")
    t = D2 - R * R - 4 * R1
    if t < 0:
        return True
    return t * t < 16 * R * R * R1
