"""Exact rational and Gaussian-rational scalars.

Rationals are gmpy2.mpq values: arbitrary precision, always in lowest terms
with positive denominator, zero stored as 0/1.  They serialize as "num/den"
("num" alone when den == 1).

GaussianRational is a complex number with exact parts.  Its parts are
duck-typed: plain rationals in scalar contexts, jets inside the complexified
homological solve.  Parts only need +, -, *, unary -, and truthiness.
"""

from __future__ import annotations

from gmpy2 import isqrt, mpq, mpz

from .errors import DomainError

Rational = mpq

ZERO = mpq(0)
ONE = mpq(1)


def rat(num, den=1):
    """Canonical rational num/den; rejects a zero denominator."""
    if den == 0:
        raise DomainError("zero denominator", code="zero-denominator")
    return mpq(num, den)


def rat_normalize(num, den):
    """Reduced rational with positive denominator (gcd/sign normalization)."""
    return rat(num, den)


def parse_rational(text):
    """Parse "num/den" or "num" (den defaults to 1)."""
    s = str(text).strip()
    num, sep, den = s.partition("/")
    try:
        n = mpz(num)
        d = mpz(den) if sep else mpz(1)
    except ValueError:
        raise DomainError(f"malformed rational {text!r}", code="malformed-rational") from None
    return rat(n, d)


def format_rational(q):
    """Lowest-terms "num/den", or just "num" for integers."""
    q = mpq(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def rational_sqrt(q):
    """Exact square root of a nonnegative rational, or None if irrational."""
    q = mpq(q)
    if q < 0:
        return None
    num, den = mpz(q.numerator), mpz(q.denominator)
    rn = isqrt(num)
    rd = isqrt(den)
    if rn * rn != num or rd * rd != den:
        return None
    return mpq(rn, rd)


class GaussianRational:
    """Exact complex scalar re + im*i over any exact coefficient part."""

    __slots__ = ("re", "im")

    def __init__(self, re, im=ZERO):
        self.re = re
        self.im = im

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        if not isinstance(other, GaussianRational):
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __add__(self, other):
        if not isinstance(other, GaussianRational):
            return NotImplemented
        return GaussianRational(self.re + other.re, self.im + other.im)

    def __sub__(self, other):
        if not isinstance(other, GaussianRational):
            return NotImplemented
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __mul__(self, other):
        # Skip the cross terms when a part is zero: most values in the
        # homological solve are purely real or purely imaginary.
        if not isinstance(other, GaussianRational):
            return self.scale(other)
        a, b, c, d = self.re, self.im, other.re, other.im
        if not b:
            return GaussianRational(a * c, a * d)
        if not d:
            return GaussianRational(a * c, b * c)
        return GaussianRational(a * c - b * d, a * d + b * c)

    def __rmul__(self, other):
        return self.scale(other)

    def __truediv__(self, other):
        """Division by a GaussianRational with rational (invertible) parts."""
        if not isinstance(other, GaussianRational):
            return NotImplemented
        c, d = other.re, other.im
        n = c * c + d * d
        if not n:
            raise DomainError("division by zero GaussianRational", code="zero-divisor")
        inv = 1 / mpq(n)
        a, b = self.re, self.im
        if not d:
            return GaussianRational(a * (c * inv), b * (c * inv))
        return GaussianRational((a * c + b * d) * inv, (b * c - a * d) * inv)

    def conjugate(self):
        return GaussianRational(self.re, -self.im)

    def scale(self, q):
        """Multiply both parts by a plain rational/int."""
        return GaussianRational(self.re * q, self.im * q)

    def __repr__(self):
        return f"GaussianRational({self.re!r}, {self.im!r})"

    def __str__(self):
        if not self.im:
            return format_rational(self.re) if isinstance(self.re, type(ZERO)) else str(self.re)
        return f"({self.re}) + ({self.im})*i"


GAUSS_ZERO = GaussianRational(ZERO, ZERO)
GAUSS_ONE = GaussianRational(ONE, ZERO)
GAUSS_I = GaussianRational(ZERO, ONE)
